"""Bottom-up model checking over satisfying-subteam tables.

Subteams of the input team are bitmasks over its canonical row order,
so disjointness and union of subteams are single word operations.  For
a fixed team size the table has boundedly many entries per node and the
overall work is linear in the formula, which is what makes this route
scale where the recursive split enumeration does not.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EnumerationCapError, UnknownVariableError
from .formulas import And, Bot, Formula, Not, Or, Top, subformulas, variables
from .semantics import DEFAULT_ENUMERATION_CAP, SemanticsMode, eval_atom, evaluate
from .teams import Team

__all__ = ["SatSetTable", "build_sat_table", "mc_bottom_up", "mc"]


@dataclass(frozen=True)
class SatSetTable:
    """Per-node sets of satisfying subteams, as row bitmasks."""

    team: Team
    entries: tuple[tuple[Formula, frozenset[int]], ...]

    def masks_for(self, node: Formula) -> frozenset[int]:
        for n, masks in self.entries:
            if n is node:
                return masks
        raise KeyError(f"node not in table: {node!r}")


def build_sat_table(team: Team, f: Formula, mode: SemanticsMode,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> SatSetTable:
    """Leaf-to-root satisfying-subteam sets for every node of ``f``."""
    if len(team) > cap:
        raise EnumerationCapError(
            f"team of size {len(team)} exceeds the enumeration cap {cap}"
        )
    missing = [v for v in variables(f) if v not in team.domain]
    if missing:
        raise UnknownVariableError(
            f"variables {missing} not in team domain {team.domain}"
        )
    nodes = subformulas(f)
    all_masks = range(1 << len(team))
    sets: dict[int, frozenset[int]] = {}
    for node in reversed(nodes):
        if isinstance(node, Top):
            masks = frozenset(all_masks)
        elif isinstance(node, Bot):
            masks = frozenset([0])
        elif isinstance(node, And):
            masks = sets[id(node.left)] & sets[id(node.right)]
        elif isinstance(node, Or):
            left, right = sets[id(node.left)], sets[id(node.right)]
            if mode is SemanticsMode.STRICT:
                masks = frozenset(
                    m1 | m2 for m1 in left for m2 in right if m1 & m2 == 0
                )
            else:
                masks = frozenset(m1 | m2 for m1 in left for m2 in right)
        else:
            masks = frozenset(
                m for m in all_masks if eval_atom(team.subteam_mask(m), node)
            )
        sets[id(node)] = masks
    return SatSetTable(team, tuple((n, sets[id(n)]) for n in nodes))


def mc_bottom_up(team: Team, f: Formula, mode: SemanticsMode,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Model check by table construction; agrees with :func:`evaluate`."""
    table = build_sat_table(team, f, mode, cap)
    full = (1 << len(team)) - 1
    return full in table.entries[0][1]


def mc(team: Team, f: Formula, mode: SemanticsMode, algo: str = "recursive",
       cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Dispatch between the recursive evaluator and the bottom-up table."""
    if algo == "recursive":
        return evaluate(team, f, mode, cap)
    if algo == "bottomup":
        return mc_bottom_up(team, f, mode, cap)
    raise ValueError(f"unknown model-checking algorithm {algo!r}")
