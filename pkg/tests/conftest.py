"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import itertools
import random

import pytest

from teamlog import Team, parse_formula, parse_team

# A nested-split PDL formula with a known shape: 10 AST nodes, depth 3,
# 2 splits, 4 variables, and Gaifman-graph treewidth exactly 2.
EXAMPLE_FORMULA_TEXT = "(x3 | !x1) & (=(x3; x4) | (x1 & x2))"
EXAMPLE_TEAM_TEXT = "x1 x2 x3 x4\n0011\n1110\n"


@pytest.fixture
def example_formula():
    return parse_formula(EXAMPLE_FORMULA_TEXT)


@pytest.fixture
def example_team():
    return parse_team(EXAMPLE_TEAM_TEXT)


def bits_row(value: int, width: int) -> tuple[int, ...]:
    """Row ``value`` rendered as a big-endian bit tuple of ``width``."""
    return tuple(value >> (width - 1 - j) & 1 for j in range(width))


def team_from_mask(domain: tuple[str, ...], mask: int) -> Team:
    """The subteam of all assignments over ``domain`` selected by ``mask``."""
    n = len(domain)
    rows = tuple(bits_row(i, n) for i in range(1 << n) if mask >> i & 1)
    return Team(domain, rows)


def all_teams(domain: tuple[str, ...]):
    """Every team over ``domain``, the empty team included."""
    n = len(domain)
    for mask in range(1 << (1 << n)):
        yield team_from_mask(domain, mask)


def random_team(rng: random.Random, domain: tuple[str, ...],
                max_rows: int = 4, min_rows: int = 0) -> Team:
    n = len(domain)
    k = rng.randint(min_rows, min(max_rows, 1 << n))
    picks = rng.sample(range(1 << n), k)
    return Team(domain, tuple(bits_row(v, n) for v in picks))


def subteams(team: Team):
    """All subteams of ``team``, the empty team included."""
    for r in range(len(team.rows) + 1):
        for combo in itertools.combinations(team.rows, r):
            yield Team(team.domain, combo)
