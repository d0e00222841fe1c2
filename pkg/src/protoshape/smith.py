"""Exact integer matrices and Smith normal form.

Everything here is plain Python ``int`` arithmetic, so entries never
overflow.  Two entry points:

* :func:`smith_normal_form` -- returns unimodular transforms with their
  inverses and re-verifies ``left @ m @ right == diag`` on every call.
* :func:`invariant_factors` -- diagonal only; what homology uses.

Both run the same sparse elimination, pivoting on an entry of smallest
absolute value in a fixed scan order, so results are deterministic.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import InvalidInput


@dataclass(frozen=True, eq=False)
class IntegerMatrix:
    """Sparse integer matrix; ``data`` maps ``(row, col)`` to a nonzero entry."""

    rows: int
    cols: int
    data: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInput("negative matrix dimension")
        clean = {}
        for (r, c), v in self.data.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise InvalidInput(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if v:
                clean[(r, c)] = int(v)
        object.__setattr__(self, "data", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None):
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged matrix rows")
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, {})

    def tolist(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self.data

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.data.items()})

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise InvalidInput(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        by_row = defaultdict(list)
        for (r, c), v in other.data.items():
            by_row[r].append((c, v))
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (r, k), v in self.data.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] += v * w
        return IntegerMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.data.items())))

    def column(self, c: int) -> list[int]:
        col = [0] * self.rows
        for (r, cc), v in self.data.items():
            if cc == c:
                col[r] = v
        return col

    def apply(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for (r, c), v in self.data.items():
            out[r] += v * vec[c]
        return out


@dataclass(frozen=True, eq=False)
class SmithForm:
    """``left @ m @ right == diag(diagonal)``; inverses are exact integer inverses."""

    matrix: IntegerMatrix
    diagonal: tuple[int, ...]
    left: IntegerMatrix
    right: IntegerMatrix
    left_inverse: IntegerMatrix
    right_inverse: IntegerMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def diagonal_matrix(self) -> IntegerMatrix:
        m = self.matrix
        return IntegerMatrix(m.rows, m.cols, {(i, i): d for i, d in enumerate(self.diagonal)})


def smith_normal_form(m: IntegerMatrix | Sequence[Sequence[int]], verify: bool = True) -> SmithForm:
    if not isinstance(m, IntegerMatrix):
        m = IntegerMatrix.from_rows(m)
    nr, nc = m.rows, m.cols
    # transforms kept as sparse rows: left, columns of left_inverse,
    # columns of right, rows of right_inverse
    left = {i: {i: 1} for i in range(nr)}
    left_inv_t = {i: {i: 1} for i in range(nr)}
    right_t = {j: {j: 1} for j in range(nc)}
    right_inv = {j: {j: 1} for j in range(nc)}

    def on_rows(i, j, k):
        # row_i += k * row_j, so left_inverse gets col_j -= k * col_i
        _axpy(left[i], k, left[j])
        _axpy(left_inv_t[j], -k, left_inv_t[i])

    def on_cols(i, j, k):
        # col_i += k * col_j, so right_inverse gets row_j -= k * row_i
        _axpy(right_t[i], k, right_t[j])
        _axpy(right_inv[j], -k, right_inv[i])

    pivots = _eliminate(m, on_rows, on_cols)

    # move pivot t to position (t, t)
    row_order = [r for r, _, _ in pivots] + sorted(set(range(nr)) - {r for r, _, _ in pivots})
    col_order = [c for _, c, _ in pivots] + sorted(set(range(nc)) - {c for _, c, _ in pivots})
    left = [left[r] for r in row_order]
    left_inv_t = [left_inv_t[r] for r in row_order]
    right_t = [right_t[c] for c in col_order]
    right_inv = [right_inv[c] for c in col_order]
    diag = [v for _, _, v in pivots]
    for t, v in enumerate(diag):
        if v < 0:
            diag[t] = -v
            left[t] = {c: -x for c, x in left[t].items()}
            left_inv_t[t] = {c: -x for c, x in left_inv_t[t].items()}

    # (a, b) -> (gcd, lcm) on pairs that break the divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if b % a == 0:
                continue
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            _mix(left, i, j, x, y, -bg, ag)
            _mix(left_inv_t, i, j, ag, bg, -y, x)
            _mix(right_t, i, j, 1, 1, -y * bg, x * ag)
            _mix(right_inv, i, j, x * ag, y * bg, -1, 1)
            diag[i], diag[j] = g, ag * b

    out = SmithForm(
        m,
        tuple(diag) + (0,) * (min(nr, nc) - len(diag)),
        _from_sparse_rows(left, nr, nr),
        _from_sparse_rows(right_t, nc, nc).transpose(),
        _from_sparse_rows(left_inv_t, nr, nr).transpose(),
        _from_sparse_rows(right_inv, nc, nc),
    )
    if verify:
        verify_smith_form(out)
    return out


def _axpy(target: dict, k: int, source: dict) -> None:
    """``target += k * source`` on sparse rows, dropping zeros."""
    for c, v in source.items():
        w = target.get(c, 0) + k * v
        if w:
            target[c] = w
        else:
            target.pop(c, None)


def _mix(rows: list, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """Replace rows i, j by ``a*r_i + b*r_j`` and ``c*r_i + d*r_j``."""
    ri, rj = rows[i], rows[j]
    new_i, new_j = {}, {}
    _axpy(new_i, a, ri)
    _axpy(new_i, b, rj)
    _axpy(new_j, c, ri)
    _axpy(new_j, d, rj)
    rows[i], rows[j] = new_i, new_j


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b)`` for positive a, b."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _from_sparse_rows(rows, nrows: int, ncols: int) -> IntegerMatrix:
    return IntegerMatrix(nrows, ncols, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})


def verify_smith_form(s: SmithForm) -> None:
    """Raise AssertionError unless ``s`` is a valid Smith decomposition."""
    m = s.matrix
    if s.left @ m @ s.right != s.diagonal_matrix():
        raise AssertionError("left @ m @ right is not the claimed diagonal")
    if s.left @ s.left_inverse != IntegerMatrix.identity(m.rows):
        raise AssertionError("left transform is not unimodular")
    if s.right @ s.right_inverse != IntegerMatrix.identity(m.cols):
        raise AssertionError("right transform is not unimodular")
    nonzero = [d for d in s.diagonal if d]
    if any(d < 0 for d in s.diagonal):
        raise AssertionError("negative diagonal entry")
    if len(nonzero) != len(s.diagonal) and any(s.diagonal[len(nonzero):]):
        raise AssertionError("zeros are not trailing on the diagonal")
    for x, y in zip(nonzero, nonzero[1:]):
        if y % x:
            raise AssertionError(f"divisibility chain broken: {x} does not divide {y}")


def invariant_factors(m: IntegerMatrix) -> tuple[int, ...]:
    """Nonzero Smith diagonal of ``m`` (so ``len`` is the rank), in divisibility order."""
    return _normalize_diagonal([abs(v) for _, _, v in _eliminate(m)])


def _eliminate(m: IntegerMatrix, on_rows=None, on_cols=None) -> list[tuple[int, int, int]]:
    """Reduce ``m`` in place of a copy until each row and column holds at most one entry.

    Returns the surviving ``(row, col, value)`` entries in the order they
    were isolated.  ``on_rows(i, j, k)`` and ``on_cols(i, j, k)`` are told
    about every ``row_i += k * row_j`` and ``col_i += k * col_j``.
    """
    rows: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = defaultdict(set)
    for (r, c), v in sorted(m.data.items()):
        rows.setdefault(r, {})[c] = v
        col_rows[c].add(r)

    def put(r, c, v):
        if v:
            rows[r][c] = v
            col_rows[c].add(r)
        else:
            rows[r].pop(c, None)
            col_rows[c].discard(r)

    pivots = []
    while rows:
        r, c = _sparse_pivot(rows)
        while True:
            p = rows[r][c]
            for r2 in sorted(col_rows[c] - {r}):
                q = rows[r2][c] // p
                for cc, v in list(rows[r].items()):
                    put(r2, cc, rows[r2].get(cc, 0) - q * v)
                if on_rows:
                    on_rows(r2, r, -q)
            for c2 in sorted(set(rows[r]) - {c}):
                q = rows[r][c2] // p
                for r3 in list(col_rows[c]):
                    put(r3, c2, rows[r3].get(c2, 0) - q * rows[r3][c])
                if on_cols:
                    on_cols(c2, c, -q)
            leftovers = [(abs(rows[x][c]), x, c) for x in col_rows[c] if x != r]
            leftovers += [(abs(v), r, y) for y, v in rows[r].items() if y != c]
            if not leftovers:
                break
            _, r, c = min(leftovers)
        pivots.append((r, c, rows[r][c]))
        del rows[r]
        col_rows.pop(c, None)
        for x in [x for x, row in rows.items() if not row]:
            del rows[x]
    return pivots


def _sparse_pivot(rows):
    best = None
    for r, row in rows.items():
        for c, v in row.items():
            if best is None or abs(v) < best[0]:
                best = (abs(v), r, c)
                if best[0] == 1:
                    return r, c
    return best[1], best[2]


def _normalize_diagonal(entries: Iterable[int]) -> tuple[int, ...]:
    """Smith diagonal of a diagonal matrix: (a, b) -> (gcd, lcm) until a chain."""
    units = [d for d in entries if d == 1]
    rest = sorted(d for d in entries if d != 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = math.gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    return tuple(units + sorted(rest))
