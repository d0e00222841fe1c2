"""Independent brute-force oracles shared by the test modules.

None of these reuse the library's bitmask machinery: spaces are rebuilt
from explicit open-set families, partitions come from a plain recursive
enumeration, and ranks come from sympy's exact rational row reduction.
"""

from __future__ import annotations

import functools
import itertools

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.matrices import DomainMatrix

from protoshape.generators import four_point_circle, sierpinski
from protoshape.space import FiniteSpace


@functools.lru_cache(maxsize=None)
def open_family(space: FiniteSpace) -> frozenset[frozenset]:
    """All unions of minimal open sets, by brute force over subsets of points."""
    basis = [space.min_open(p) for p in space.points]
    out = set()
    for r in range(len(basis) + 1):
        for combo in itertools.combinations(basis, r):
            out.add(frozenset().union(*combo))
    return frozenset(out)


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] | {first}] + part[k + 1:]
        yield [{first}] + part


def open_partitions_brute(space: FiniteSpace) -> set[frozenset]:
    opens = open_family(space)
    return {
        frozenset(frozenset(b) for b in part)
        for part in set_partitions(space.points)
        if all(frozenset(b) in opens for b in part)
    }


def continuous_brute(source: FiniteSpace, target: FiniteSpace, assignment: dict) -> bool:
    """Preimage of every open set is open."""
    src_opens = open_family(source)
    for u in open_family(target):
        pre = frozenset(x for x in source.points if assignment[x] in u)
        if pre not in src_opens:
            return False
    return True


def rational_rank(rows: list[list[int]]) -> int:
    """Rank over Q, by sympy's sparse row reduction."""
    if not rows or not rows[0]:
        return 0
    return DomainMatrix.from_list(rows, sympy.ZZ).to_sparse().convert_to(sympy.QQ).rank()


def sympy_invariants(rows: list[list[int]]) -> list[int]:
    """Nonzero Smith diagonal according to sympy, made positive."""
    if not rows or not rows[0]:
        return []
    d = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0)


def betti_oracle(ranks, boundary_rows) -> list[int]:
    """Betti numbers from ranks of the boundary matrices over Q.

    ``boundary_rows[n]`` is ∂_n as nested lists, for n = 0..top.
    """
    rk = [rational_rank(b) if b and b[0] else 0 for b in boundary_rows]
    return [ranks[n] - rk[n] - rk[n + 1] for n in range(len(ranks) - 1)]


@pytest.fixture
def circle4():
    return four_point_circle()


@pytest.fixture
def sierp():
    return sierpinski()


def sparse_product(a: dict, b: dict) -> dict:
    """Product of matrices stored as {(row, col): value}, zeros dropped."""
    by_row = {}
    for (k, c), v in b.items():
        by_row.setdefault(k, []).append((c, v))
    out = {}
    for (r, k), v in a.items():
        for c, w in by_row.get(k, ()):
            out[(r, c)] = out.get((r, c), 0) + v * w
    return {key: v for key, v in out.items() if v}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
