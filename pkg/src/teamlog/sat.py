"""Satisfiability engines.

Four routes with very different scaling behaviour:

* :func:`sat_brute` enumerates every nonempty team over the formula's
  variables.  It is the reference oracle for the other engines.
* :func:`sat_singleton` searches single assignments; complete for PL,
  PDL and PIND, whose formulas are satisfiable iff some singleton team
  satisfies them.
* :func:`sat_fixpoint` is a determinized backtracking search over the
  choice points of a nondeterministic fixpoint construction for PINC:
  guess small initial subteams per atom, then alternate bottom-up
  repair/union rounds with top-down copy/distribution rounds until the
  per-node teams stop growing.
* :func:`sat_split_free` decides disjunction-free PINC in polynomial
  time by propagating literal labels through inclusion atoms.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import EngineNotApplicableError, RepairError, ResourceBoundError
from .formulas import (
    And,
    Bot,
    Formula,
    Inc,
    LogicKind,
    Not,
    Or,
    Top,
    VarRef,
    logic_kind,
    variables,
)
from .semantics import SemanticsMode, TeamEvaluator, eval_atom, eval_inc, evaluate
from .teams import Team

__all__ = [
    "SatStatus",
    "SatResult",
    "sat_brute",
    "sat_singleton",
    "repair_inclusion",
    "sat_fixpoint",
    "sat_split_free",
    "DEFAULT_FIXPOINT_BUDGET",
]

DEFAULT_BRUTE_MAX_VARS = 4
DEFAULT_FIXPOINT_BUDGET = 2_000_000


class SatStatus(enum.Enum):
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"
    RESOURCE_EXHAUSTED = "resource_exhausted"


@dataclass(frozen=True)
class SatResult:
    status: SatStatus
    witness: Optional[Team] = None

    def __post_init__(self):
        if self.witness is not None:
            assert self.status is SatStatus.SATISFIABLE
            assert len(self.witness) > 0


def _all_rows(n: int) -> list[tuple[int, ...]]:
    """All assignments over ``n`` variables, ordered as binary numbers."""
    return [
        tuple(i >> (n - 1 - j) & 1 for j in range(n)) for i in range(1 << n)
    ]


def sat_brute(f: Formula, mode: SemanticsMode,
              max_vars: int = DEFAULT_BRUTE_MAX_VARS) -> SatResult:
    """Enumerate all nonempty teams over VAR(f) in canonical order.

    Teams are subsets of the assignment list encoded as bitmasks and
    scanned in increasing mask order, so singletons come first and the
    returned witness is the canonically least satisfying team.
    """
    vs = variables(f)
    if len(vs) > max_vars:
        return SatResult(SatStatus.RESOURCE_EXHAUSTED)
    rows = _all_rows(len(vs))
    ev = TeamEvaluator(vs, rows, f, mode)
    for mask in range(1, 1 << len(rows)):
        if ev.check(f, mask):
            picked = [rows[i] for i in range(len(rows)) if mask >> i & 1]
            return SatResult(SatStatus.SATISFIABLE, Team(vs, tuple(picked)))
    return SatResult(SatStatus.UNSATISFIABLE)


def sat_singleton(f: Formula) -> SatResult:
    """Search satisfying singleton teams; complete for PL, PDL and PIND.

    Over a singleton team every dependence and independence atom holds,
    so the search degenerates to classical assignment search.
    """
    kind = logic_kind(f)
    if kind not in (LogicKind.PL, LogicKind.PDL, LogicKind.PIND):
        raise EngineNotApplicableError(
            f"singleton search is incomplete for {kind.value}; "
            "inclusion logic is not downward closed"
        )
    vs = variables(f)
    for row in _all_rows(len(vs)):
        team = Team(vs, (row,))
        if evaluate(team, f, SemanticsMode.STRICT):
            return SatResult(SatStatus.SATISFIABLE, team)
    return SatResult(SatStatus.UNSATISFIABLE)


def repair_inclusion(team: Team, atom: Inc) -> Team:
    """Extend ``team`` to satisfy ``atom`` by mirroring each row's
    x-value into the y-positions; at most one row is added per input
    row, so the result never exceeds twice the input size.

    Raises :class:`RepairError` when the one-pass rule fails, which can
    only happen if the atom's tuples share variables.
    """
    if eval_inc(team, atom.xs, atom.ys):
        return team
    xi = [team.index(v) for v in atom.xs]
    yi = [team.index(v) for v in atom.ys]
    rows = set(team.rows)
    for row in team.rows:
        t = list(row)
        for src, dst in zip(xi, yi):
            t[dst] = row[src]
        rows.add(tuple(t))
    repaired = Team(team.domain, tuple(rows))
    if not eval_inc(repaired, atom.xs, atom.ys):
        raise RepairError(
            f"one-pass repair failed for inc atom with overlapping tuples "
            f"{atom.xs} / {atom.ys}"
        )
    return repaired


# ---------------------------------------------------------------------------
# Determinized fixpoint search for PINC

class _Reject(Exception):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise ResourceBoundError("fixpoint search budget exhausted")


class _Node:
    __slots__ = ("kind", "formula", "left", "right")

    def __init__(self, kind, formula, left=None, right=None):
        self.kind = kind  # "and" | "or" | "atom"
        self.formula = formula
        self.left = left
        self.right = right


def _build_nodes(f: Formula) -> list[_Node]:
    """Pre-order node list; negated literals are single atom nodes."""
    nodes: list[_Node] = []

    def walk(g: Formula) -> int:
        idx = len(nodes)
        if isinstance(g, (And, Or)):
            node = _Node("and" if isinstance(g, And) else "or", g)
            nodes.append(node)
            node.left = walk(g.left)
            node.right = walk(g.right)
        else:
            nodes.append(_Node("atom", g))
        return idx

    walk(f)
    return nodes


class _FixpointSearch:
    def __init__(self, f: Formula, mode: SemanticsMode, budget: _Budget,
                 repair_log: Optional[list]):
        self.mode = mode
        self.budget = budget
        self.repair_log = repair_log
        self.formula = f
        self.vars = variables(f)
        self.rows = _all_rows(len(self.vars))
        self.nodes = _build_nodes(f)
        self.var_index = {v: i for i, v in enumerate(self.vars)}

    # -- initial guesses ----------------------------------------------------

    def _atom_candidates(self, atom: Formula) -> list[frozenset[int]]:
        empty = frozenset()
        if isinstance(atom, Bot):
            return [empty]
        if isinstance(atom, Top):
            return [empty] + [frozenset([i]) for i in range(len(self.rows))]
        if isinstance(atom, (VarRef, Not)):
            name = atom.name if isinstance(atom, VarRef) else atom.child.name
            want = 1 if isinstance(atom, VarRef) else 0
            col = self.var_index[name]
            return [empty] + [
                frozenset([i]) for i, row in enumerate(self.rows)
                if row[col] == want
            ]
        assert isinstance(atom, Inc)
        # One row per y-value class: the bounded guesses the correctness
        # argument needs (at most 2^arity rows).
        yi = [self.var_index[v] for v in atom.ys]
        classes: dict[tuple, list[int]] = {}
        for i, row in enumerate(self.rows):
            classes.setdefault(tuple(row[j] for j in yi), []).append(i)
        picks = [[None] + members for members in classes.values()]
        cands = []
        for combo in itertools.product(*picks):
            cands.append(frozenset(i for i in combo if i is not None))
        cands.sort(key=lambda s: (len(s), sorted(s)))
        return cands

    # -- rounds -------------------------------------------------------------

    def _repair_atom(self, atom: Formula, rows: frozenset[int]) -> frozenset[int]:
        team = Team(self.vars, tuple(self.rows[i] for i in sorted(rows)))
        if isinstance(atom, Inc):
            try:
                repaired = repair_inclusion(team, atom)
            except RepairError:
                raise _Reject
            if self.repair_log is not None:
                self.repair_log.append((len(team), len(repaired)))
            if repaired is team:
                return rows
            row_pos = {row: i for i, row in enumerate(self.rows)}
            return frozenset(row_pos[r] for r in repaired.rows)
        if not eval_atom(team, atom):
            raise _Reject
        return rows

    def _bottom_up(self, state: tuple) -> tuple:
        self.budget.spend()
        new = list(state)
        for idx in range(len(self.nodes) - 1, -1, -1):
            node = self.nodes[idx]
            if node.kind == "atom":
                new[idx] = self._repair_atom(node.formula, new[idx])
            else:
                new[idx] = new[node.left] | new[node.right]
        return tuple(new)

    def _top_down(self, cur: tuple):
        """Yield all successor states for the distribution choices."""
        strict = self.mode is SemanticsMode.STRICT

        def walk(idx: int, new: list):
            node = self.nodes[idx]
            if node.kind == "atom":
                yield None
                return
            left, right = node.left, node.right
            if node.kind == "and":
                new[left] = new[idx]
                new[right] = new[idx]
                for _ in walk(left, new):
                    yield from walk(right, new)
                return
            # split-junction: route rows not yet on either side
            base_l, base_r = new[left], new[right]
            fresh = sorted(new[idx] - (base_l | base_r))
            options = ("l", "r") if strict else ("l", "r", "b")
            for combo in itertools.product(options, repeat=len(fresh)):
                self.budget.spend()
                add_l = {row for row, o in zip(fresh, combo) if o in ("l", "b")}
                add_r = {row for row, o in zip(fresh, combo) if o in ("r", "b")}
                new[left] = base_l | add_l
                new[right] = base_r | add_r
                if strict and new[left] & new[right]:
                    continue
                for _ in walk(left, new):
                    yield from walk(right, new)
            new[left], new[right] = base_l, base_r

        new = list(cur)
        for _ in walk(0, new):
            yield tuple(new)

    def run(self) -> Optional[Team]:
        atom_idxs = [i for i, n in enumerate(self.nodes) if n.kind == "atom"]
        candidate_lists = [
            self._atom_candidates(self.nodes[i].formula) for i in atom_idxs
        ]
        empty = frozenset()
        for combo in itertools.product(*candidate_lists):
            state = [empty] * len(self.nodes)
            for i, guess in zip(atom_idxs, combo):
                state[i] = guess
            witness = self._search(tuple(state), set())
            if witness is not None:
                return witness
        return None

    def _search(self, state: tuple, seen: set) -> Optional[Team]:
        try:
            cur = self._bottom_up(state)
        except _Reject:
            return None
        for new in self._top_down(cur):
            if new == cur:
                if cur[0]:
                    team = Team(
                        self.vars, tuple(self.rows[i] for i in sorted(cur[0]))
                    )
                    if evaluate(team, self.formula, self.mode,
                                cap=max(16, len(self.rows))):
                        return team
                continue
            if new in seen:
                continue
            seen.add(new)
            witness = self._search(new, seen)
            if witness is not None:
                return witness
        return None


def sat_fixpoint(f: Formula, mode: SemanticsMode,
                 budget: int = DEFAULT_FIXPOINT_BUDGET,
                 repair_log: Optional[list] = None) -> SatResult:
    """Determinized fixpoint search for PINC satisfiability.

    Exhausts the initial-guess and split-distribution choices in
    canonical order (smaller guesses first), so the first accepted
    fixpoint is deterministic.  ``repair_log`` collects
    (before, after) team sizes for every inclusion repair.
    """
    kind = logic_kind(f)
    if kind not in (LogicKind.PL, LogicKind.PINC):
        raise EngineNotApplicableError(
            f"fixpoint search handles PINC (and plain PL), not {kind.value}"
        )
    search = _FixpointSearch(f, mode, _Budget(budget), repair_log)
    try:
        witness = search.run()
    except ResourceBoundError:
        return SatResult(SatStatus.RESOURCE_EXHAUSTED)
    if witness is None:
        return SatResult(SatStatus.UNSATISFIABLE)
    return SatResult(SatStatus.SATISFIABLE, witness)


# ---------------------------------------------------------------------------
# Labelling procedure for split-free PINC

def _conjuncts(f: Formula) -> list[Formula]:
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def sat_split_free(f: Formula, max_free_vars: int = 20) -> SatResult:
    """SAT for split-free PINC via label propagation plus pruning.

    Literals pin their variables; inclusion atoms propagate a label on
    a right-hand variable to the left-hand variable at the same
    position.  A variable labelled with both values means unsat.

    Otherwise every satisfying team lies inside the label-consistent
    full team, and split-free inclusion formulas are union closed, so
    the union of all satisfying teams is the greatest fixpoint of
    deleting rows whose x-value lacks a y-witness.  The formula is
    satisfiable iff that fixpoint is nonempty; the fixpoint is the
    witness.  (The extra pruning matters only for inclusion atoms
    whose tuples repeat or share variables; for disjoint single
    occurrences the label-consistent team is already satisfying.)
    """
    kind = logic_kind(f)
    if kind not in (LogicKind.PL, LogicKind.PINC):
        raise EngineNotApplicableError(
            f"the labelling procedure handles PINC (and plain PL), "
            f"not {kind.value}"
        )
    conjuncts = _conjuncts(f)
    if any(isinstance(g, Or) for g in conjuncts):
        raise EngineNotApplicableError(
            "the labelling procedure requires a split-free formula"
        )
    inc_atoms: list[Inc] = []
    labels: dict[str, int] = {}

    def label(v: str, c: int) -> bool:
        if labels.setdefault(v, c) != c:
            return False
        return True

    for g in conjuncts:
        if isinstance(g, Top):
            continue
        if isinstance(g, Bot):
            return SatResult(SatStatus.UNSATISFIABLE)
        if isinstance(g, VarRef):
            if not label(g.name, 1):
                return SatResult(SatStatus.UNSATISFIABLE)
        elif isinstance(g, Not):
            if not label(g.child.name, 0):
                return SatResult(SatStatus.UNSATISFIABLE)
        else:
            inc_atoms.append(g)

    # FIFO worklist over labelled variables; each propagation step
    # copies a label from a y-position to the matching x-position.
    queue = list(labels)
    while queue:
        v = queue.pop(0)
        c = labels[v]
        for atom in inc_atoms:
            for p, q in zip(atom.xs, atom.ys):
                if q == v:
                    if p not in labels:
                        labels[p] = c
                        queue.append(p)
                    elif labels[p] != c:
                        return SatResult(SatStatus.UNSATISFIABLE)

    vs = variables(f)
    free = [v for v in vs if v not in labels]
    if len(free) > max_free_vars:
        raise ResourceBoundError(
            f"witness would need 2^{len(free)} rows; cap is 2^{max_free_vars}"
        )
    rows = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        free_vals = dict(zip(free, bits))
        rows.append(tuple(labels.get(v, free_vals.get(v)) for v in vs))

    # Greatest-fixpoint pruning: drop rows whose x-value has no
    # y-witness among the remaining rows, until stable.
    index = {v: i for i, v in enumerate(vs)}
    coords = [
        ([index[v] for v in atom.xs], [index[v] for v in atom.ys])
        for atom in inc_atoms
    ]
    while rows:
        kept = []
        for row in rows:
            ok = True
            for xi, yi in coords:
                xcode = tuple(row[i] for i in xi)
                if not any(
                    xcode == tuple(other[i] for i in yi) for other in rows
                ):
                    ok = False
                    break
            if ok:
                kept.append(row)
        if len(kept) == len(rows):
            break
        rows = kept
    if not rows:
        return SatResult(SatStatus.UNSATISFIABLE)
    return SatResult(SatStatus.SATISFIABLE, Team(vs, tuple(rows)))
