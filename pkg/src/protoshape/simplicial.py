"""Truncated simplicial sets, nerves, order complexes, coskeleta and chains.

Cells of degree ``n`` are the integers ``0 .. sizes[n]-1``.  Structure maps
are stored as integer arrays: ``faces[n][i, k]`` is the index of ``d_i`` of
cell ``k`` in degree ``n-1``, and ``degeneracies[n][i, k]`` the index of
``s_i`` of cell ``k`` in degree ``n+1``.  ``faces[0]`` is an empty
``(0, sizes[0])`` array.  Labels are kept per degree, either as a list of
hashables or as a 2-d array of vertex indices into ``alphabet``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DepthTooShallow, InvalidInput, NotAComplex, NotARefinement, NotSimplicial
from .smith import IntegerMatrix
from .space import OpenCover, Preorder, refines, space_from_preorder, specialization_preorder, t0_quotient

INDEX = np.int64
# row codes spanning at most this many slots per row are looked up in a flat
# array instead of by binary search
DENSE_FACTOR = 8


@dataclass(frozen=True, eq=False)
class TruncSimplicialSet:
    sizes: tuple[int, ...]
    faces: tuple[np.ndarray, ...]
    degeneracies: tuple[np.ndarray, ...]
    labels: tuple | None = None
    alphabet: tuple | None = None

    def __post_init__(self):
        n_top = len(self.sizes) - 1
        if n_top < 0:
            raise InvalidInput("a simplicial set needs at least degree 0")
        if len(self.faces) != n_top + 1 or len(self.degeneracies) != n_top:
            raise InvalidInput("structure maps do not match the truncation depth")
        for n in range(n_top + 1):
            f = self.faces[n]
            if f.shape != ((n + 1 if n else 0), self.sizes[n]):
                raise InvalidInput(f"faces at degree {n} have shape {f.shape}")
            if n and f.size and (f.min() < 0 or f.max() >= self.sizes[n - 1]):
                raise InvalidInput(f"face index out of range at degree {n}")
        for n in range(n_top):
            s = self.degeneracies[n]
            if s.shape != (n + 1, self.sizes[n]):
                raise InvalidInput(f"degeneracies at degree {n} have shape {s.shape}")
            if s.size and (s.min() < 0 or s.max() >= self.sizes[n + 1]):
                raise InvalidInput(f"degeneracy index out of range at degree {n}")

    @property
    def depth(self) -> int:
        return len(self.sizes) - 1

    def face(self, n: int, i: int) -> np.ndarray:
        """``d_i`` on degree ``n`` as an index array."""
        return self.faces[n][i]

    def degeneracy(self, n: int, i: int) -> np.ndarray:
        return self.degeneracies[n][i]

    def label(self, n: int, k: int):
        if self.labels is None:
            return k
        lab = self.labels[n]
        if isinstance(lab, np.ndarray):
            return tuple(self.alphabet[v] for v in lab[k])
        return lab[k]

    def cells(self, n: int) -> list:
        if self.labels is not None and isinstance(self.labels[n], np.ndarray):
            names = self.alphabet
            return [tuple(names[v] for v in row) for row in self.labels[n].tolist()]
        return [self.label(n, k) for k in range(self.sizes[n])]

    def index_of(self, n: int, label) -> int:
        return self._label_index[n][label]

    @cached_property
    def _label_index(self):
        return [{lab: k for k, lab in enumerate(self.cells(n))} for n in range(self.depth + 1)]

    @cached_property
    def _degenerate(self) -> tuple[np.ndarray, ...]:
        out = [np.zeros(self.sizes[0], dtype=bool)]
        for n in range(1, self.depth + 1):
            mask = np.zeros(self.sizes[n], dtype=bool)
            mask[self.degeneracies[n - 1].ravel()] = True
            out.append(mask)
        return tuple(out)

    def degenerate(self, n: int) -> np.ndarray:
        """Boolean mask of cells in the image of some degeneracy."""
        return self._degenerate[n]

    def nondegenerate(self, n: int) -> np.ndarray:
        return np.flatnonzero(~self._degenerate[n])

    def identity_violations(self) -> list[str]:
        """Every simplicial identity that fails, as readable strings (empty when valid)."""
        checks = []  # (description, lhs, rhs), compared in one pass
        d, s = self.faces, self.degeneracies
        for n in range(2, self.depth + 1):
            for j in range(n + 1):
                for i in range(j):
                    checks.append((f"d{i} d{j} = d{j - 1} d{i} fails in degree {n}",
                                   d[n - 1][i][d[n][j]], d[n - 1][j - 1][d[n][i]]))
        for n in range(self.depth):
            ident = np.arange(self.sizes[n], dtype=INDEX)
            for j in range(n + 1):
                up = s[n][j]
                for i in range(n + 2):
                    if i == j or i == j + 1:
                        rhs = ident
                    elif i < j:
                        rhs = s[n - 1][j - 1][d[n][i]]
                    else:
                        rhs = s[n - 1][j][d[n][i - 1]]
                    checks.append((f"d{i} s{j} identity fails in degree {n}", d[n + 1][i][up], rhs))
                if n + 1 < self.depth:
                    for i in range(j + 1):
                        checks.append((f"s{i} s{j} = s{j + 1} s{i} fails in degree {n}",
                                       s[n + 1][i][s[n][j]], s[n + 1][j + 1][s[n][i]]))
        if not checks:
            return []
        lhs = np.concatenate([c[1] for c in checks])
        rhs = np.concatenate([c[2] for c in checks])
        if np.array_equal(lhs, rhs):
            return []
        return [what for what, a, b in checks if not np.array_equal(a, b)]

    def check(self) -> TruncSimplicialSet:
        bad = self.identity_violations()
        if bad:
            raise NotSimplicial(bad[0], witness=bad)
        return self

    def truncate(self, depth: int) -> TruncSimplicialSet:
        if depth > self.depth:
            raise DepthTooShallow(f"cannot extend depth {self.depth} to {depth} by truncation")
        return TruncSimplicialSet(
            self.sizes[: depth + 1],
            self.faces[: depth + 1],
            self.degeneracies[:depth],
            None if self.labels is None else self.labels[: depth + 1],
            self.alphabet,
        )


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: TruncSimplicialSet
    target: TruncSimplicialSet
    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.source.depth != self.target.depth or len(self.maps) != self.source.depth + 1:
            raise InvalidInput("simplicial map between sets of different depth")
        for n, m in enumerate(self.maps):
            if m.shape != (self.source.sizes[n],):
                raise InvalidInput(f"level map {n} has shape {m.shape}")
            if m.size and (m.min() < 0 or m.max() >= self.target.sizes[n]):
                raise InvalidInput(f"level map {n} leaves the target")

    def violations(self) -> list[str]:
        bad = []
        src, tgt, f = self.source, self.target, self.maps
        for n in range(1, src.depth + 1):
            for i in range(n + 1):
                if not np.array_equal(f[n - 1][src.faces[n][i]], tgt.faces[n][i][f[n]]):
                    bad.append(f"map does not commute with d{i} in degree {n}")
        for n in range(src.depth):
            for i in range(n + 1):
                if not np.array_equal(f[n + 1][src.degeneracies[n][i]], tgt.degeneracies[n][i][f[n]]):
                    bad.append(f"map does not commute with s{i} in degree {n}")
        return bad

    def check(self) -> SimplicialMap:
        bad = self.violations()
        if bad:
            raise NotSimplicial(bad[0], witness=bad)
        return self

    def then(self, g: SimplicialMap) -> SimplicialMap:
        """``g ∘ self``."""
        if g.source.sizes != self.target.sizes:
            raise InvalidInput("simplicial maps are not composable")
        return SimplicialMap(self.source, g.target, tuple(b[a] for a, b in zip(self.maps, g.maps)))


def identity_simplicial_map(s: TruncSimplicialSet) -> SimplicialMap:
    return SimplicialMap(s, s, tuple(np.arange(k, dtype=INDEX) for k in s.sizes))


# -- row lookup ---------------------------------------------------------------


def _row_codes(*arrays: np.ndarray, top: int | None = None) -> list[np.ndarray]:
    """Order-preserving 1-d keys for the rows of arrays with equal width.

    Mixed-radix int64 codes when they fit, raw bytes otherwise.  ``top``
    bounds the entries from above when the caller knows it.
    """
    width = arrays[0].shape[1]
    if width == 0:
        return [np.zeros(len(a), dtype=INDEX) for a in arrays]
    if top is None:
        top = max((int(a.max()) for a in arrays if a.size), default=0) + 1
    top = max(top, 1)
    if top ** width < 2**62:
        out = []
        for a in arrays:
            code = a[:, 0].astype(INDEX)
            for c in range(1, width):
                code *= top
                code += a[:, c]
            out.append(code)
        return out
    out = []
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=INDEX)
        out.append(a.view(np.dtype((np.void, a.dtype.itemsize * width))).ravel())
    return out


def lookup_rows(table: np.ndarray, queries: np.ndarray, top: int | None = None) -> np.ndarray:
    """Index in ``table`` of each row of ``queries``; -1 where absent.

    Entries must be nonnegative and, when ``top`` is given, below it.
    """
    if len(table) == 0 or len(queries) == 0:
        return np.full(len(queries), -1, dtype=INDEX)
    keys, q = _row_codes(table, queries, top=top)
    if keys.dtype == INDEX:
        if top is None:
            span = int(max(keys.max(), q.max())) + 1
        else:
            span = max(top, 1) ** table.shape[1]
        if span <= DENSE_FACTOR * (len(keys) + len(q)):
            # direct addressing; reversed so the first of equal rows wins
            dense = np.full(span, -1, dtype=INDEX)
            dense[keys[::-1]] = np.arange(len(table) - 1, -1, -1, dtype=INDEX)
            return dense[q]
    if keys.dtype == INDEX and (keys[1:] > keys[:-1]).all():
        pos = np.minimum(np.searchsorted(keys, q), len(table) - 1)
        return np.where(keys[pos] == q, pos, -1).astype(INDEX)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    pos = np.minimum(np.searchsorted(sorted_keys, q), len(table) - 1)
    found = sorted_keys[pos] == q
    return np.where(found, order[pos], -1).astype(INDEX)


def _require_rows(table, queries, what, top=None):
    idx = lookup_rows(table, queries, top)
    if (idx < 0).any():
        raise NotSimplicial(f"{what} leaves the set of cells")
    return idx


def tuple_structure(levels: Sequence[np.ndarray]):
    """Faces (delete an entry) and degeneracies (repeat an entry) of tuple cells.

    ``levels[n]`` is an ``(m, n+1)`` array of vertex tuples; the family must
    be closed under both operations.
    """
    top = int(levels[0].max()) + 1 if levels[0].size else 0
    faces = [np.zeros((0, len(levels[0])), dtype=INDEX)]
    degens = []
    for n in range(len(levels)):
        # queries into degree n: faces of degree n+1 and degeneracies of degree n-1
        parts = []
        if n + 1 < len(levels):
            t = levels[n + 1]
            # column picks that drop entry i, for each i in turn
            cols = [c for i in range(n + 2) for c in range(n + 2) if c != i]
            parts.append(t[:, cols].reshape(len(t), n + 2, n + 1).transpose(1, 0, 2).reshape(-1, n + 1))
        if n:
            t = levels[n - 1]
            cols = [c for i in range(n) for c in sorted([*range(n), i])]
            parts.append(t[:, cols].reshape(len(t), n, n + 1).transpose(1, 0, 2).reshape(-1, n + 1))
        if not parts:
            continue
        found = lookup_rows(levels[n], np.concatenate(parts) if len(parts) > 1 else parts[0], top)
        split = len(parts[0]) if n + 1 < len(levels) else 0
        if (found[:split] < 0).any():
            raise NotSimplicial("a face leaves the set of cells")
        if (found[split:] < 0).any():
            raise NotSimplicial("a degeneracy leaves the set of cells")
        if n + 1 < len(levels):
            faces.append(found[:split].reshape(n + 2, len(levels[n + 1])))
        if n:
            degens.append(found[split:].reshape(n, len(levels[n - 1])))
    return tuple(faces), tuple(degens)


def _tuple_set(levels, alphabet) -> TruncSimplicialSet:
    faces, degens = tuple_structure(levels)
    return TruncSimplicialSet(tuple(len(t) for t in levels), faces, degens, tuple(levels), tuple(alphabet))


# -- order complexes and nerves -----------------------------------------------


def chain_levels(up: Sequence[int], depth: int) -> list[np.ndarray]:
    """Weakly increasing chains ``x_0 <= ... <= x_n`` for n = 0..depth, in lexicographic order.

    ``up[i]`` is the up-set mask of point ``i``.
    """
    n_pts = len(up)
    leq = np.array([[bool(up[i] >> j & 1) for j in range(n_pts)] for i in range(n_pts)], dtype=bool)
    leq = leq.reshape(n_pts, n_pts)
    levels = [np.arange(n_pts, dtype=INDEX).reshape(n_pts, 1)]
    for _ in range(depth):
        prev = levels[-1]
        rows, ys = np.nonzero(leq[prev[:, -1]])
        levels.append(np.hstack([prev[rows], ys.reshape(-1, 1).astype(INDEX)]))
    return levels


def order_complex(p: Preorder, depth: int, quotient: bool = True) -> TruncSimplicialSet:
    """Simplicial set of weakly increasing chains of a preorder.

    With ``quotient`` (the default) the preorder is first replaced by the
    partial order on its T0 quotient; homology is unchanged and the
    nondegenerate part stays small.
    """
    if quotient:
        space, _ = t0_quotient(space_from_preorder(p))
        p = specialization_preorder(space)
    return _tuple_set(chain_levels(p.up, depth), p.points)


def intersection_levels(members: Sequence[int], depth: int):
    """Tuples of member indices with nonempty common intersection, with those intersections."""
    mem = np.asarray(members, dtype=INDEX)
    if len(mem) and int(max(members)).bit_length() > 62:
        raise InvalidInput("at most 62 points are supported by the nerve engine")
    k = len(mem)
    levels = [np.arange(k, dtype=INDEX).reshape(k, 1)]
    masks = [mem.copy()]
    for _ in range(depth):
        both = masks[-1][:, None] & mem[None, :]
        rows, ys = np.nonzero(both)
        levels.append(np.hstack([levels[-1][rows], ys.reshape(-1, 1).astype(INDEX)]))
        masks.append(both[rows, ys])
    return levels, masks


def cech_nerve(cover: OpenCover, depth: int) -> TruncSimplicialSet:
    """Ordered tuples of cover members (repeats allowed) with nonempty intersection."""
    levels, _ = intersection_levels(cover.members, depth)
    return _tuple_set(levels, [cover.label(k) for k in range(len(cover))])


def nerve_refinement_map(fine: OpenCover, coarse: OpenCover, depth: int, choice: Sequence[int] | None = None) -> SimplicialMap:
    """Map of nerves induced by sending each fine member into a coarse member containing it.

    The default sends each fine member to an equal coarse member when
    there is one and otherwise to the containing member with the smallest
    index, so a cover maps to itself by the identity.  Any other valid
    ``choice`` gives a contiguous (hence homotopic) map.
    """
    if not refines(fine, coarse):
        raise NotARefinement("the first cover does not refine the second")
    if choice is None:
        choice = []
        for m in fine.members:
            containing = [c for c, cm in enumerate(coarse.members) if m & ~cm == 0]
            choice.append(next((c for c in containing if coarse.members[c] == m), containing[0]))
    choice = np.asarray(choice, dtype=INDEX)
    for k, c in enumerate(choice):
        if fine.members[k] & ~coarse.members[int(c)]:
            raise NotARefinement(f"member {fine.label(k)} is not inside {coarse.label(int(c))}")
    src, tgt = cech_nerve(fine, depth), cech_nerve(coarse, depth)
    maps = tuple(_require_rows(tgt.labels[n], choice[src.labels[n]], "refinement image")
                 for n in range(depth + 1))
    return SimplicialMap(src, tgt, maps)


# -- coskeleta -----------------------------------------------------------------


def _join(partial: np.ndarray, pkeys: np.ndarray, cell_keys: np.ndarray, top: int) -> np.ndarray:
    """Extend each partial row by every cell whose key row equals the partial's key row.

    Key entries lie in ``range(top)``.
    """
    width = partial.shape[1]
    if len(partial) == 0 or len(cell_keys) == 0:
        return np.zeros((0, width + 1), dtype=INDEX)
    pid, cid = _row_codes(pkeys, cell_keys, top=top)
    order = np.argsort(cid, kind="stable")
    span = max(top, 1) ** pkeys.shape[1] if pid.dtype == INDEX else -1
    if 0 < span <= DENSE_FACTOR * (len(pid) + len(cid)):
        starts = np.zeros(span + 1, dtype=INDEX)
        np.cumsum(np.bincount(cid, minlength=span), out=starts[1:])
        lo = starts[pid]
        counts = starts[pid + 1] - lo
    else:
        sorted_ids = cid[order]
        lo = np.searchsorted(sorted_ids, pid, side="left")
        counts = np.searchsorted(sorted_ids, pid, side="right") - lo
    ends = np.cumsum(counts)
    total = int(ends[-1])
    reps = np.repeat(np.arange(len(partial)), counts)
    # the r-th output row takes the (r - first row of its group)-th match
    picks = order[np.arange(total) + np.repeat(lo - ends + counts, counts)]
    out = np.empty((total, width + 1), dtype=INDEX)
    out[:, :width] = partial[reps]
    out[:, width] = picks
    return out


def matching_tuples(s: TruncSimplicialSet, m: int) -> np.ndarray:
    """Tuples ``(y_0, ..., y_m)`` of degree-(m-1) cells with ``d_i y_j = d_{j-1} y_i`` for ``i < j``.

    These are the degree-m cells of the (m-1)-coskeleton.  Rows come out in
    lexicographic order.
    """
    if m < 1 or m - 1 > s.depth:
        raise DepthTooShallow(f"matching object in degree {m} needs degree {m - 1}")
    size = s.sizes[m - 1]
    if m == 1:
        a, b = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1).astype(INDEX)
    f = s.faces[m - 1]
    partial = np.arange(size, dtype=INDEX).reshape(size, 1)
    for j in range(1, m + 1):
        pkeys = f[j - 1][partial]
        ckeys = f[:j].T
        partial = _join(partial, pkeys, ckeys, s.sizes[m - 2])
    return partial


def coskeleton(s: TruncSimplicialSet, n: int, depth: int) -> TruncSimplicialSet:
    """n-coskeleton of ``s`` truncated at ``depth``.

    Degrees up to ``n`` are copied; higher degrees are matching tuples
    with projections as faces.
    """
    if n > s.depth:
        raise DepthTooShallow(f"coskeleton at {n} needs depth {n}, have {s.depth}")
    sizes = list(s.sizes[: n + 1])
    faces = list(s.faces[: n + 1])
    degens = list(s.degeneracies[:n])
    labels = [s.cells(k) for k in range(n + 1)]
    for m in range(n + 1, depth + 1):
        partial = TruncSimplicialSet(tuple(sizes), tuple(faces), tuple(degens))
        tuples = matching_tuples(partial, m)
        sizes.append(len(tuples))
        faces.append(np.ascontiguousarray(tuples.T))
        degens.append(_coskeletal_degeneracies(partial, m, tuples))
        labels.append([tuple(row) for row in tuples.tolist()])
    return TruncSimplicialSet(tuple(sizes), tuple(faces), tuple(degens), tuple(labels))


def _coskeletal_degeneracies(partial: TruncSimplicialSet, m: int, tuples: np.ndarray) -> np.ndarray:
    """Degeneracies from degree m-1 of ``partial`` into the matching tuples of degree m."""
    k = m - 1
    size = partial.sizes[k]
    x = np.arange(size, dtype=INDEX)
    out = []
    for j in range(k + 1):
        cols = []
        for i in range(m + 1):
            if i == j or i == j + 1:
                cols.append(x)
            elif i < j:
                cols.append(partial.degeneracies[k - 1][j - 1][partial.faces[k][i]])
            else:
                cols.append(partial.degeneracies[k - 1][j][partial.faces[k][i - 1]])
        out.append(_require_rows(tuples, np.stack(cols, axis=1), "a coskeletal degeneracy"))
    return np.stack(out).reshape(k + 1, size)


def coskeleton_unit(s: TruncSimplicialSet, n: int) -> SimplicialMap:
    """Canonical map ``s -> coskeleton(s, n, s.depth)``."""
    c = coskeleton(s, n, s.depth)
    maps = [np.arange(s.sizes[k], dtype=INDEX) for k in range(min(n, s.depth) + 1)]
    for m in range(n + 1, s.depth + 1):
        bound = np.stack([maps[m - 1][s.faces[m][i]] for i in range(m + 1)], axis=1)
        maps.append(_require_rows(np.ascontiguousarray(c.faces[m].T), bound, "a boundary tuple"))
    return SimplicialMap(s, c, tuple(maps))


# -- chains ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``boundaries[n]`` is ∂_n : C_n -> C_{n-1}; ``boundaries[0]`` is the zero map out of C_0."""

    ranks: tuple[int, ...]
    boundaries: tuple[IntegerMatrix, ...]
    basis: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if len(self.boundaries) != len(self.ranks):
            raise InvalidInput("one boundary matrix per degree is required")
        for n, b in enumerate(self.boundaries):
            expect = (self.ranks[n - 1] if n else 0, self.ranks[n])
            if (b.rows, b.cols) != expect:
                raise InvalidInput(f"∂_{n} has shape {(b.rows, b.cols)}, expected {expect}")
        for n in range(2, len(self.ranks)):
            if not (self.boundaries[n - 1] @ self.boundaries[n]).is_zero():
                raise NotAComplex(f"∂_{n - 1} ∂_{n} ≠ 0", witness={"degree": n})

    @property
    def top(self) -> int:
        return len(self.ranks) - 1


def normalized_chains(s: TruncSimplicialSet, max_degree: int) -> ChainComplex:
    """Normalized chains through degree ``max_degree + 1``.

    Generators are the nondegenerate cells; ∂ = Σ (-1)^i d_i with
    degenerate faces dropped.  The extra degree is what makes homology in
    degree ``max_degree`` correct, so ``s`` must reach that deep.
    """
    top = max_degree + 1
    if top > s.depth:
        raise DepthTooShallow(f"homology through degree {max_degree} needs depth {top}, have {s.depth}")
    basis = [s.nondegenerate(n) for n in range(top + 1)]
    position = []
    for n in range(top + 1):
        pos = np.full(s.sizes[n], -1, dtype=INDEX)
        pos[basis[n]] = np.arange(len(basis[n]))
        position.append(pos)
    mats = [IntegerMatrix(0, len(basis[0]))]
    for n in range(1, top + 1):
        data: dict[tuple[int, int], int] = {}
        for i in range(n + 1):
            rows = position[n - 1][s.faces[n][i][basis[n]]]
            sign = -1 if i % 2 else 1
            for col, row in enumerate(rows.tolist()):
                if row >= 0:
                    data[(row, col)] = data.get((row, col), 0) + sign
        mats.append(IntegerMatrix(len(basis[n - 1]), len(basis[n]), data))
    return ChainComplex(tuple(len(b) for b in basis), tuple(mats), tuple(basis))


def chain_map_matrices(f: SimplicialMap, cs: ChainComplex, ct: ChainComplex) -> list[IntegerMatrix]:
    """Matrices of the induced map on normalized chains (degenerate images go to zero)."""
    out = []
    for n in range(min(cs.top, ct.top) + 1):
        pos = np.full(f.target.sizes[n], -1, dtype=INDEX)
        pos[ct.basis[n]] = np.arange(len(ct.basis[n]))
        rows = pos[f.maps[n][cs.basis[n]]]
        out.append(IntegerMatrix(ct.ranks[n], cs.ranks[n],
                                 {(int(r), c): 1 for c, r in enumerate(rows.tolist()) if r >= 0}))
    return out


def nerve_complex_chains(cover: OpenCover, max_degree: int) -> ChainComplex:
    """Alternative chain model: oriented chains of the unordered nerve.

    Simplices are sets of distinct member indices with nonempty common
    intersection.  Homology agrees with the ordered nerve.
    """
    top = max_degree + 1
    k = len(cover)
    simplices = []
    for n in range(top + 1):
        level = []
        for combo in itertools.combinations(range(k), n + 1):
            inter = -1
            for c in combo:
                inter &= cover.members[c]
            if inter:
                level.append(combo)
        simplices.append(level)
    mats = [IntegerMatrix(0, len(simplices[0]))]
    for n in range(1, top + 1):
        where = {sx: r for r, sx in enumerate(simplices[n - 1])}
        data = {}
        for col, sx in enumerate(simplices[n]):
            for i in range(n + 1):
                data[(where[sx[:i] + sx[i + 1:]], col)] = -1 if i % 2 else 1
        mats.append(IntegerMatrix(len(simplices[n - 1]), len(simplices[n]), data))
    return ChainComplex(tuple(len(s) for s in simplices), tuple(mats))
