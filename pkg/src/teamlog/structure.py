"""Syntax-structure graphs, tree decompositions and instance parameters.

The Gaifman graph has one vertex per subformula occurrence, one vertex
per variable (leaf occurrences of a variable are identified with its
single vertex), and one vertex per team row when a team is part of the
instance.  Edges carry provenance tags: ``child`` for the immediate
subformula relation, ``DEP`` for atom/variable co-occurrence, and
``isTrue``/``isFalse`` for row-to-variable incidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
from networkx.algorithms.approximation.treewidth import (
    treewidth_min_degree,
    treewidth_min_fill_in,
)

from .errors import ResourceBoundError, UnknownVariableError
from .formulas import (
    And,
    Dep,
    Formula,
    Inc,
    Indep,
    Not,
    Or,
    VarRef,
    atom_variables,
    atoms,
    formula_depth,
    formula_size,
    render_formula,
    split_count,
    variables,
)
from .teams import Team

__all__ = [
    "GaifmanGraph",
    "TreeDecomposition",
    "DecompositionCheck",
    "ParameterReport",
    "build_gaifman",
    "validate_decomposition",
    "treewidth_upper",
    "treewidth_exact",
    "parameters",
    "to_dot",
    "decomposition_to_object",
]

_DEP_ATOMS = (Dep, Inc, Indep)


class GaifmanGraph:
    """Simple undirected graph with tagged vertices and edge provenance."""

    def __init__(self):
        self.g = nx.Graph()

    def add_vertex(self, vid: str, kind: str, label: str) -> None:
        if vid not in self.g:
            self.g.add_node(vid, kind=kind, label=label)

    def add_edge(self, u: str, v: str, tag: str) -> None:
        if u == v:
            return
        if self.g.has_edge(u, v):
            self.g.edges[u, v]["tags"].add(tag)
        else:
            self.g.add_edge(u, v, tags={tag})

    def vertices(self) -> list[str]:
        return list(self.g.nodes)

    def edges(self) -> list[tuple[str, str]]:
        return [tuple(sorted(e)) for e in self.g.edges]

    def label(self, vid: str) -> str:
        return self.g.nodes[vid]["label"]

    def provenance(self, u: str, v: str) -> frozenset[str]:
        return frozenset(self.g.edges[u, v]["tags"])

    def __len__(self) -> int:
        return len(self.g)


def build_gaifman(f: Formula, team: Optional[Team] = None) -> GaifmanGraph:
    """Gaifman graph of the syntax structure of ``f`` (and optionally a team)."""
    if team is not None:
        missing = [v for v in variables(f) if v not in team.domain]
        if missing:
            raise UnknownVariableError(
                f"variables {missing} not in team domain {team.domain}"
            )
    gg = GaifmanGraph()
    counter = [0]

    def var_vertex(name: str) -> str:
        vid = f"var:{name}"
        gg.add_vertex(vid, "variable", name)
        return vid

    def walk(node: Formula) -> str:
        if isinstance(node, VarRef):
            return var_vertex(node.name)
        idx = counter[0]
        counter[0] += 1
        vid = f"sub:{idx}"
        if isinstance(node, And):
            gg.add_vertex(vid, "subformula", "&")
            for child in (node.left, node.right):
                gg.add_edge(vid, walk(child), "child")
        elif isinstance(node, Or):
            gg.add_vertex(vid, "subformula", "|")
            for child in (node.left, node.right):
                gg.add_edge(vid, walk(child), "child")
        elif isinstance(node, Not):
            gg.add_vertex(vid, "subformula", "!")
            gg.add_edge(vid, var_vertex(node.child.name), "child")
        else:
            gg.add_vertex(vid, "subformula", render_formula(node))
            if isinstance(node, _DEP_ATOMS):
                used = atom_variables(node)
                for v in used:
                    gg.add_edge(vid, var_vertex(v), "DEP")
                # All of an atom's variables must share a decomposition
                # bag, so they form a clique.
                for i, a in enumerate(used):
                    for b in used[i + 1:]:
                        gg.add_edge(var_vertex(a), var_vertex(b), "DEP")
        return vid

    walk(f)
    if team is not None:
        fvars = variables(f)
        for i, row in enumerate(team.rows):
            cid = f"team:{i}"
            gg.add_vertex(cid, "team", f"c{i + 1}")
            for v in fvars:
                value = row[team.index(v)]
                gg.add_edge(cid, var_vertex(v), "isTrue" if value else "isFalse")
    return gg


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[str], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class DecompositionCheck:
    valid: bool
    width: Optional[int] = None
    violation: Optional[str] = None


def validate_decomposition(g: GaifmanGraph, d: TreeDecomposition) -> DecompositionCheck:
    """Check the three tree-decomposition conditions; report the first breach."""
    bags = d.bags
    n = len(bags)
    for i, j in d.edges:
        if not (0 <= i < n and 0 <= j < n):
            return DecompositionCheck(False, violation=f"edge ({i},{j}) out of range")
    if n > 1:
        tree = nx.Graph()
        tree.add_nodes_from(range(n))
        tree.add_edges_from(d.edges)
        if not nx.is_tree(tree):
            return DecompositionCheck(False, violation="bag graph is not a tree")
    covered = set().union(*bags) if bags else set()
    vertices = set(g.vertices())
    if covered != vertices:
        missing = sorted(vertices - covered)
        return DecompositionCheck(
            False, violation=f"vertices not covered by any bag: {missing}"
        )
    for u, v in g.edges():
        if not any(u in b and v in b for b in bags):
            return DecompositionCheck(
                False, violation=f"edge ({u},{v}) not inside any bag"
            )
    adjacency = {i: set() for i in range(n)}
    for i, j in d.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    for v in vertices:
        holding = {i for i, b in enumerate(bags) if v in b}
        start = next(iter(holding))
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in adjacency[i]:
                if j in holding and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != holding:
            return DecompositionCheck(
                False, violation=f"bags containing {v!r} are not connected"
            )
    return DecompositionCheck(True, width=d.width)


def _convert_nx_decomposition(tree: nx.Graph) -> TreeDecomposition:
    bags = list(tree.nodes)
    index = {b: i for i, b in enumerate(bags)}
    edges = tuple(tuple(sorted((index[a], index[b]))) for a, b in tree.edges)
    return TreeDecomposition(tuple(frozenset(b) for b in bags), edges)


def treewidth_upper(g: GaifmanGraph, method: str = "min_fill"
                    ) -> tuple[int, TreeDecomposition]:
    """Heuristic elimination-ordering upper bound with a valid decomposition."""
    if len(g) == 0:
        return -1, TreeDecomposition((), ())
    if method == "min_fill":
        width, tree = treewidth_min_fill_in(g.g)
    elif method == "min_degree":
        width, tree = treewidth_min_degree(g.g)
    else:
        raise ValueError(f"unknown treewidth heuristic {method!r}")
    return width, _convert_nx_decomposition(tree)


def _decomposition_from_order(graph: nx.Graph, order: list[str]) -> TreeDecomposition:
    work = graph.copy()
    bags = []
    bag_of = {}
    successor = {}
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        nbrs = set(work[v])
        bag_of[v] = len(bags)
        bags.append(frozenset({v} | nbrs))
        later = [u for u in nbrs]
        successor[v] = min(later, key=lambda u: pos[u]) if later else None
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    work.add_edge(a, b)
        work.remove_node(v)
    edges = []
    for v in order:
        nxt = successor[v]
        if nxt is not None:
            edges.append(tuple(sorted((bag_of[v], bag_of[nxt]))))
        elif bag_of[v] != len(bags) - 1:
            # isolated component: attach to the final bag to keep one tree
            edges.append(tuple(sorted((bag_of[v], len(bags) - 1))))
    return TreeDecomposition(tuple(bags), tuple(dict.fromkeys(edges)))


def _min_fill_order(adj: dict[str, set[str]]) -> tuple[int, list[str]]:
    adj = {v: set(ns) for v, ns in adj.items()}
    order = []
    width = 0

    def fill(v):
        ns = list(adj[v])
        return sum(
            1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in adj[a]
        )

    while adj:
        v = min(adj, key=lambda u: (fill(u), len(adj[u]), u))
        width = max(width, len(adj[v]))
        ns = adj.pop(v)
        for a in ns:
            adj[a].discard(v)
            adj[a].update(ns - {a})
        order.append(v)
    return width, order


def treewidth_exact(g: GaifmanGraph, max_vertices: int = 16
                    ) -> tuple[int, TreeDecomposition]:
    """Exact treewidth by branch-and-bound over elimination orders."""
    n = len(g)
    if n > max_vertices:
        raise ResourceBoundError(
            f"graph has {n} vertices; exact treewidth capped at {max_vertices}"
        )
    if n == 0:
        return -1, TreeDecomposition((), ())
    base_adj = {v: set(g.g[v]) for v in g.g}
    ub_width, ub_order = _min_fill_order(base_adj)
    best = {"width": ub_width, "order": ub_order}
    visited: dict[frozenset[str], int] = {}

    def search(adj: dict[str, set[str]], current_max: int, order: list[str]):
        if current_max >= best["width"]:
            return
        if not adj:
            best["width"] = current_max
            best["order"] = list(order)
            return
        if len(adj) - 1 <= current_max:
            best["width"] = current_max
            best["order"] = order + sorted(adj)
            return
        # min degree is a treewidth lower bound for the remaining graph
        if max(current_max, min(len(ns) for ns in adj.values())) >= best["width"]:
            return
        key = frozenset(adj)
        prev = visited.get(key)
        if prev is not None and prev <= current_max:
            return
        visited[key] = current_max

        def eliminate(v):
            ns = adj.pop(v)
            added = []
            for a in ns:
                adj[a].discard(v)
                for b in ns:
                    if b != a and b not in adj[a]:
                        adj[a].add(b)
                        added.append((a, b))
            return ns, added

        def restore(v, ns, added):
            for a, b in added:
                adj[a].discard(b)
            for a in ns:
                adj[a].add(v)
            adj[v] = ns

        # a simplicial vertex is always safe to eliminate first
        for v in list(adj):
            ns = adj[v]
            if all(b in adj[a] for a in ns for b in ns if a != b):
                sub_ns, added = eliminate(v)
                order.append(v)
                search(adj, max(current_max, len(sub_ns)), order)
                order.pop()
                restore(v, sub_ns, added)
                return
        for v in sorted(adj, key=lambda u: (len(adj[u]), u)):
            deg = len(adj[v])
            if max(current_max, deg) >= best["width"]:
                continue
            sub_ns, added = eliminate(v)
            order.append(v)
            search(adj, max(current_max, deg), order)
            order.pop()
            restore(v, sub_ns, added)

    search({v: set(ns) for v, ns in base_adj.items()}, 0, [])
    decomp = _decomposition_from_order(g.g, best["order"])
    return best["width"], decomp


@dataclass(frozen=True)
class ParameterReport:
    """The eight instance parameterisations."""

    formula_size: int
    formula_depth: int
    num_variables: int
    num_splits: int
    arity: int
    formula_tw: int
    formula_tw_exact: bool
    formula_tw_method: str
    teamsize: Optional[int] = None
    formula_team_tw: Optional[int] = None
    formula_team_tw_exact: Optional[bool] = None

    def to_dict(self) -> dict:
        out = {
            "formula_size": self.formula_size,
            "formula_depth": self.formula_depth,
            "num_variables": self.num_variables,
            "num_splits": self.num_splits,
            "arity": self.arity,
            "formula_tw": self.formula_tw,
            "formula_tw_exact": self.formula_tw_exact,
            "formula_tw_method": self.formula_tw_method,
        }
        if self.teamsize is not None:
            out["teamsize"] = self.teamsize
            out["formula_team_tw"] = self.formula_team_tw
            out["formula_team_tw_exact"] = self.formula_team_tw_exact
        return out


def _atom_arity(atom: Formula) -> int:
    if isinstance(atom, (Dep, Inc)):
        return len(atom.xs)
    return len(atom_variables(atom))


def parameters(f: Formula, team: Optional[Team] = None, exact_tw: bool = False,
               method: str = "min_fill", exact_cap: int = 16) -> ParameterReport:
    """Extract all parameterisations of an instance.

    Treewidths come from the elimination heuristic unless ``exact_tw``
    is set; when the exact computation would exceed ``exact_cap``
    vertices it silently falls back to the heuristic bound, with the
    ``*_exact`` flags recording which one was used.
    """
    arity = max((_atom_arity(a) for a in atoms(f)), default=0)

    def tw(graph: GaifmanGraph) -> tuple[int, bool]:
        if exact_tw:
            try:
                width, _ = treewidth_exact(graph, max_vertices=exact_cap)
                return width, True
            except ResourceBoundError:
                pass
        width, _ = treewidth_upper(graph, method=method)
        return width, False

    ftw, ftw_exact = tw(build_gaifman(f))
    report = {
        "formula_size": formula_size(f),
        "formula_depth": formula_depth(f),
        "num_variables": len(variables(f)),
        "num_splits": split_count(f),
        "arity": arity,
        "formula_tw": ftw,
        "formula_tw_exact": ftw_exact,
        "formula_tw_method": "exact" if ftw_exact else method,
    }
    if team is not None:
        ttw, ttw_exact = tw(build_gaifman(f, team))
        report.update(
            teamsize=len(team),
            formula_team_tw=ttw,
            formula_team_tw_exact=ttw_exact,
        )
    return ParameterReport(**report)


def to_dot(g: GaifmanGraph) -> str:
    """Graphviz DOT text with vertex labels and edge provenance."""
    lines = ["graph gaifman {"]
    for vid in g.vertices():
        label = g.label(vid).replace('"', '\\"')
        lines.append(f'  "{vid}" [label="{label}", kind="{g.g.nodes[vid]["kind"]}"];')
    for u, v in g.edges():
        tags = ",".join(sorted(g.provenance(u, v)))
        lines.append(f'  "{u}" -- "{v}" [provenance="{tags}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_object(d: TreeDecomposition) -> dict:
    return {
        "bags": [sorted(b) for b in d.bags],
        "edges": [list(e) for e in d.edges],
        "width": d.width,
    }
