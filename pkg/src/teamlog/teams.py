"""Teams of Boolean assignments and their text formats.

A team is stored as an ordered variable domain plus a canonically
sorted tuple of rows, each row a tuple of bits aligned with the domain.
Sorting the rows once at construction makes iteration order stable
across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import TeamFormatError, UnknownVariableError

__all__ = ["Team", "parse_team", "render_team", "team_from_object", "team_to_object"]

Row = tuple[int, ...]


@dataclass(frozen=True)
class Team:
    """A set of Boolean assignments over a shared variable domain."""

    domain: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        seen = set()
        for row in self.rows:
            if len(row) != len(self.domain):
                raise TeamFormatError(
                    f"row {row} has arity {len(row)}, domain has {len(self.domain)}"
                )
            if any(b not in (0, 1) for b in row):
                raise TeamFormatError(f"row {row} contains a non-bit value")
            if row in seen:
                raise TeamFormatError(f"duplicate row {row}; a team is a set")
            seen.add(row)
        object.__setattr__(self, "rows", tuple(sorted(self.rows)))

    @classmethod
    def from_assignments(
        cls, domain: Iterable[str], assignments: Iterable[Mapping[str, int]]
    ) -> "Team":
        domain = tuple(domain)
        rows = []
        for s in assignments:
            rows.append(tuple(s[v] for v in domain))
        return cls(domain, tuple(rows))

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, row: Row) -> bool:
        return row in set(self.rows)

    def index(self, var: str) -> int:
        try:
            return self.domain.index(var)
        except ValueError:
            raise UnknownVariableError(
                f"variable {var!r} not in team domain {self.domain}"
            ) from None

    def assignments(self) -> Iterator[dict[str, int]]:
        for row in self.rows:
            yield dict(zip(self.domain, row))

    def subteam(self, rows: Iterable[Row]) -> "Team":
        return Team(self.domain, tuple(rows))

    def subteam_mask(self, mask: int) -> "Team":
        picked = [r for i, r in enumerate(self.rows) if mask >> i & 1]
        return Team(self.domain, tuple(picked))

    def union(self, other: "Team") -> "Team":
        if other.domain != self.domain:
            raise TeamFormatError("cannot union teams with different domains")
        return Team(self.domain, tuple(set(self.rows) | set(other.rows)))


def parse_team(text: str) -> Team:
    """Parse the line-oriented team format.

    Line 1 holds whitespace-separated variable names; every further
    nonempty line is a bitstring of matching length.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TeamFormatError("team text is empty; expected a header line")
    domain = tuple(lines[0].split())
    if len(set(domain)) != len(domain):
        raise TeamFormatError("duplicate variable name in team header")
    rows = []
    for ln in lines[1:]:
        if len(ln) != len(domain):
            raise TeamFormatError(
                f"row {ln!r} has length {len(ln)}, expected {len(domain)}"
            )
        if not set(ln) <= {"0", "1"}:
            raise TeamFormatError(f"row {ln!r} contains a non-bit value")
        rows.append(tuple(int(c) for c in ln))
    return Team(domain, tuple(rows))


def render_team(team: Team) -> str:
    """Inverse of :func:`parse_team` up to row order."""
    lines = [" ".join(team.domain)]
    for row in team.rows:
        lines.append("".join(str(b) for b in row))
    return "\n".join(lines) + "\n"


def team_from_object(obj: Mapping) -> Team:
    """Build a team from the structured ``{"vars": ..., "rows": ...}`` form."""
    try:
        domain = tuple(obj["vars"])
        rows = tuple(tuple(int(b) for b in row) for row in obj["rows"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TeamFormatError(f"bad structured team object: {exc}") from exc
    return Team(domain, rows)


def team_to_object(team: Team) -> dict:
    return {"vars": list(team.domain), "rows": [list(r) for r in team.rows]}
