"""Hypercoverings of finite spaces built from open subsets.

A :class:`Hypercovering` is a truncated simplicial set of *pieces* whose
every piece carries a nonempty open subset of the base space; structure
maps are inclusions over the base.  Degree ``n`` of the underlying
simplicial space is the disjoint union of the pieces' subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidInput, NoMorphismFound
from .simplicial import (
    INDEX,
    SimplicialMap,
    TruncSimplicialSet,
    chain_levels,
    intersection_levels,
    lookup_rows,
    matching_tuples,
    tuple_structure,
)
from .space import FiniteSpace, OpenCover, bits


@dataclass(frozen=True, eq=False)
class Hypercovering:
    base: FiniteSpace
    pieces: TruncSimplicialSet
    subsets: tuple[np.ndarray, ...]
    kind: str = "custom"

    def __post_init__(self):
        if len(self.subsets) != self.pieces.depth + 1:
            raise InvalidInput("one subset array per degree is required")
        for n, sub in enumerate(self.subsets):
            if sub.shape != (self.pieces.sizes[n],):
                raise InvalidInput(f"subset array at degree {n} has shape {sub.shape}")
        every = np.concatenate(self.subsets)
        if (every == 0).any() or (every & ~np.int64(self.base.full)).any():
            for n, sub in enumerate(self.subsets):
                if (sub == 0).any():
                    raise InvalidInput(f"empty piece at degree {n}")
                if (sub & ~np.int64(self.base.full)).any():
                    raise InvalidInput(f"piece at degree {n} leaves the base space")
        closed = [m for m in set(every.tolist()) if not self.base.is_open(m)]
        if closed:
            n = next(n for n, sub in enumerate(self.subsets) if np.isin(sub, closed).any())
            raise InvalidInput(f"piece at degree {n} is not open")

    @property
    def depth(self) -> int:
        return self.pieces.depth

    def inclusion_violations(self) -> list[str]:
        """Structure maps must send each piece into a piece containing its subset."""
        checks = []  # (name, degree, piece subsets, subsets of their images)
        sub = self.subsets
        for n in range(1, self.depth + 1):
            for i in range(n + 1):
                checks.append((f"d{i}", n, sub[n], sub[n - 1][self.pieces.faces[n][i]]))
        for n in range(self.depth):
            for i in range(n + 1):
                checks.append((f"s{i}", n, sub[n], sub[n + 1][self.pieces.degeneracies[n][i]]))
        if not checks:
            return []
        inner = np.concatenate([c[2] for c in checks])
        outer = np.concatenate([c[3] for c in checks])
        if not (inner & ~outer).any():
            return []
        bad = []
        for name, n, a, b in checks:
            k = np.flatnonzero(a & ~b)
            if len(k):
                bad.append(f"{name} does not include piece {self.pieces.label(n, int(k[0]))}")
        return bad

    def piece(self, n: int, k: int) -> tuple:
        return self.pieces.label(n, k), self.base.subset(int(self.subsets[n][k]))


def cech_hypercover(cover: OpenCover, depth: int) -> Hypercovering:
    """Pieces in degree n: ordered (n+1)-tuples of members with nonempty intersection.

    Each piece carries that intersection; faces drop a member, degeneracies
    repeat one.  Empty intersections contribute no piece.
    """
    levels, masks = intersection_levels(cover.members, depth)
    faces, degens = tuple_structure(levels)
    pieces = TruncSimplicialSet(
        tuple(len(t) for t in levels), faces, degens, tuple(levels),
        tuple(cover.label(k) for k in range(len(cover))),
    )
    return Hypercovering(cover.space, pieces, tuple(masks), "cech")


def mccord_hypercover(space: FiniteSpace, depth: int) -> Hypercovering:
    """Pieces in degree n: chains ``x_0 <= ... <= x_n`` carrying ``min_open(x_n)``.

    The last point of a chain has the smallest minimal open set, so every
    face lands in a piece containing the original one.
    """
    levels = chain_levels(space.masks, depth)
    faces, degens = tuple_structure(levels)
    pieces = TruncSimplicialSet(tuple(len(t) for t in levels), faces, degens, tuple(levels), space.points)
    masks = np.asarray(space.masks, dtype=INDEX)
    return Hypercovering(space, pieces, tuple(masks[t[:, -1]] for t in levels), "mccord")


# -- verification ------------------------------------------------------------


@dataclass
class LevelCheck:
    """Comparison of degree ``degree`` pieces with the matching object below them."""

    degree: int
    matching_tuples: int
    matching_points: int
    piece_points: int
    covering: bool
    bijective: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "matching_tuples": self.matching_tuples,
            "matching_points": self.matching_points,
            "piece_points": self.piece_points,
            "covering": self.covering,
            "bijective": self.bijective,
            "witness": self.witness,
        }


@dataclass
class HyperReport:
    kind: str
    depth: int
    simplicial_identities: list[str]
    inclusions: list[str]
    covers_base: bool
    base_witness: dict | None
    levels: list[LevelCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.simplicial_identities
            and not self.inclusions
            and self.covers_base
            and all(lv.covering for lv in self.levels)
        )

    @property
    def bijective(self) -> bool:
        return all(lv.bijective for lv in self.levels)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "depth": self.depth,
            "ok": self.ok,
            "bijective": self.bijective,
            "simplicial_identities": self.simplicial_identities,
            "inclusions": self.inclusions,
            "covers_base": self.covers_base,
            "base_witness": self.base_witness,
            "levels": [lv.as_dict() for lv in self.levels],
        }


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(INDEX)


def verify_hyper(h: Hypercovering) -> HyperReport:
    """Check the hypercovering conditions level by level; never raises on failure.

    Degree 0 must cover the base.  For each degree ``m >= 1`` within the
    truncation, the points of the matching object over the base (compatible
    tuples of degree-(m-1) pieces together with a base point in the
    intersection of their subsets) must each lie in some degree-m piece
    with those faces; the level is *bijective* when each is hit exactly
    once.
    """
    base = h.base
    union = int(np.bitwise_or.reduce(h.subsets[0])) if len(h.subsets[0]) else 0
    missing = base.full & ~union
    report = HyperReport(
        h.kind,
        h.depth,
        h.pieces.identity_violations(),
        h.inclusion_violations(),
        missing == 0,
        None if missing == 0 else {"uncovered_points": list(base.subset(missing))},
    )
    for m in range(1, h.depth + 1):
        report.levels.append(_check_level(h, m))
    return report


def _check_level(h: Hypercovering, m: int) -> LevelCheck:
    tuples = matching_tuples(h.pieces, m)
    sub_prev = h.subsets[m - 1]
    inter = np.bitwise_and.reduce(sub_prev[tuples], axis=1) if len(tuples) else np.zeros(0, dtype=INDEX)
    live = np.flatnonzero(inter)
    tuples, inter = tuples[live], inter[live]

    boundary = np.ascontiguousarray(h.pieces.faces[m].T)
    where = lookup_rows(tuples, boundary, h.pieces.sizes[m - 1])
    sub = h.subsets[m]
    stray = np.flatnonzero((where < 0) | ((sub & ~inter[np.maximum(where, 0)]) != 0))
    hit = np.zeros(len(tuples), dtype=INDEX)
    np.bitwise_or.at(hit, where[where >= 0], sub[where >= 0])

    matching_points = int(_popcount(inter).sum())
    piece_points = int(_popcount(sub).sum())
    uncovered = np.flatnonzero(hit != inter)
    witness = None
    if len(stray):
        k = int(stray[0])
        witness = {"piece": _jsonable(h.pieces.label(m, k)), "problem": "piece is not over its faces"}
    elif len(uncovered):
        t = int(uncovered[0])
        point = next(bits(int(inter[t] & ~hit[t])))
        witness = {
            "faces": [_jsonable(h.pieces.label(m - 1, int(y))) for y in tuples[t]],
            "point": h.base.points[point],
        }
    covering = not len(stray) and not len(uncovered)
    bijective = covering and piece_points == matching_points
    return LevelCheck(m, len(tuples), matching_points, piece_points, covering, bijective, witness)


def _jsonable(label):
    if isinstance(label, tuple):
        return [_jsonable(x) for x in label]
    if isinstance(label, (np.integer,)):
        return int(label)
    return label


# -- connected components levelwise -------------------------------------------


@dataclass(frozen=True, eq=False)
class Gamma:
    """Levelwise connected components of a hypercovering.

    ``cells[n][k] = (piece, component_mask)``; ``simplicial`` is the
    resulting truncated simplicial set.
    """

    hypercover: Hypercovering
    cells: tuple[list[tuple[int, int]], ...]
    simplicial: TruncSimplicialSet

    def locate(self, n: int, piece: int, mask: int) -> int:
        """Cell of the component of ``piece`` that meets ``mask``."""
        return self._where[n][(piece, self._component(n, piece, mask))]

    def _component(self, n, piece, mask):
        for c in self.hypercover.base.components_of(int(self.hypercover.subsets[n][piece])):
            if c & mask:
                return c
        raise KeyError((n, piece))

    @cached_property
    def _where(self):
        return [{cell: k for k, cell in enumerate(level)} for level in self.cells]


def gamma_of(h: Hypercovering) -> Gamma:
    base = h.base
    cells = []
    for n in range(h.depth + 1):
        level = []
        for piece, mask in enumerate(h.subsets[n].tolist()):
            level.extend((piece, c) for c in base.components_of(mask))
        cells.append(level)
    where = [{cell: k for k, cell in enumerate(level)} for level in cells]

    def induced(src_level, tgt_n, piece_map):
        out = np.empty(len(src_level), dtype=INDEX)
        for k, (piece, comp) in enumerate(src_level):
            tgt_piece = int(piece_map[piece])
            for c in base.components_of(int(h.subsets[tgt_n][tgt_piece])):
                if c & comp:
                    out[k] = where[tgt_n][(tgt_piece, c)]
                    break
        return out

    faces = [np.zeros((0, len(cells[0])), dtype=INDEX)]
    for n in range(1, h.depth + 1):
        faces.append(np.stack([induced(cells[n], n - 1, h.pieces.faces[n][i]) for i in range(n + 1)])
                     .reshape(n + 1, len(cells[n])))
    degens = []
    for n in range(h.depth):
        degens.append(np.stack([induced(cells[n], n + 1, h.pieces.degeneracies[n][i]) for i in range(n + 1)])
                      .reshape(n + 1, len(cells[n])))
    labels = tuple(
        [(h.pieces.label(n, p), base.subset(c)) for p, c in cells[n]] for n in range(h.depth + 1)
    )
    simp = TruncSimplicialSet(tuple(len(c) for c in cells), tuple(faces), tuple(degens), labels)
    return Gamma(h, tuple(cells), simp)


def gamma(h: Hypercovering) -> TruncSimplicialSet:
    """Simplicial set of connected components of the pieces, degree by degree.

    Finite spaces are locally connected, so components of each level form
    a plain set; cells are pairs (piece, component of its subset).
    """
    return gamma_of(h).simplicial


# -- morphisms ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HypercoverMorphism:
    source: Hypercovering
    target: Hypercovering
    maps: tuple[np.ndarray, ...]
    induced: SimplicialMap

    def violations(self) -> list[str]:
        bad = SimplicialMap(self.source.pieces, self.target.pieces, self.maps).violations()
        for n, f in enumerate(self.maps):
            k = np.flatnonzero(self.source.subsets[n] & ~self.target.subsets[n][f])
            if len(k):
                bad.append(f"piece {self.source.pieces.label(n, int(k[0]))} is not inside its image")
        return bad


def hypercover_morphism(src: Hypercovering, dst: Hypercovering, policy: str = "smallest-label",
                        budget: int = 200_000) -> HypercoverMorphism:
    """Search for a map of hypercoverings ``src -> dst`` over the base.

    Pieces are assigned degree by degree.  A degenerate piece goes where
    the matching degeneracy of its image goes; any other piece goes to the
    first target piece (in label order) with the required faces whose
    subset contains it.  Choices are revisited by backtracking, within
    ``budget`` steps.  Raises NoMorphismFound naming the first piece for
    which no candidate existed.
    """
    if policy != "smallest-label":
        raise InvalidInput(f"unknown tie-break policy {policy!r}")
    if src.base != dst.base:
        raise InvalidInput("hypercoverings live over different spaces")
    if src.depth != dst.depth:
        raise InvalidInput("hypercoverings have different depths")
    sp, dp = src.pieces, dst.pieces
    depth = src.depth
    maps = [np.full(sp.sizes[n], -1, dtype=INDEX) for n in range(depth + 1)]
    free = [(n, int(k)) for n in range(depth + 1) for k in sp.nondegenerate(n)]
    forced = []
    for n in range(1, depth + 1):
        deg = sp.degeneracies[n - 1]
        for k in np.flatnonzero(sp.degenerate(n)):
            i, j = np.argwhere(deg == k)[0]
            forced.append((n, int(k), int(i), int(j)))
    dst_bounds = [None] + [np.ascontiguousarray(dp.faces[n].T) for n in range(1, depth + 1)]
    dsub = [s.tolist() for s in dst.subsets]

    def candidates(n, k):
        need = int(src.subsets[n][k])
        if n == 0:
            pool = range(dp.sizes[0])
        else:
            want = np.array([[maps[n - 1][sp.faces[n][i][k]] for i in range(n + 1)]], dtype=INDEX)
            if (want < 0).any():
                return []
            pool = np.flatnonzero((dst_bounds[n] == want).all(axis=1)).tolist()
        return [c for c in pool if need & ~dsub[n][c] == 0]

    def fill_forced(n):
        for fn, k, i, j in forced:
            if fn == n:
                maps[n][k] = dp.degeneracies[n - 1][i][maps[n - 1][j]]

    first_obstruction = None
    steps = 0
    stack = []  # remaining candidates per position in ``free``
    pos = 0
    while pos < len(free):
        n, k = free[pos]
        if len(stack) == pos:
            lower = free[pos - 1][0] if pos else 0
            for m in range(lower + 1, n + 1):
                fill_forced(m)
            stack.append(candidates(n, k))
        options = stack[pos]
        steps += 1
        if options:
            maps[n][k] = options.pop(0)
            pos += 1
            continue
        if first_obstruction is None:
            first_obstruction = (n, k)
        stack.pop()
        maps[n][k] = -1
        if pos == 0 or steps > budget:
            on, ok = first_obstruction
            raise NoMorphismFound(
                f"no target piece can receive {sp.label(on, ok)} in degree {on}",
                witness={"degree": on, "piece": _jsonable(sp.label(on, ok))},
            )
        pos -= 1
    for n in range(1, depth + 1):
        fill_forced(n)
    g_src, g_dst = gamma_of(src), gamma_of(dst)
    gmaps = []
    for n in range(depth + 1):
        gmaps.append(np.array([g_dst.locate(n, int(maps[n][p]), c) for p, c in g_src.cells[n]],
                              dtype=INDEX))
    morphism = HypercoverMorphism(src, dst, tuple(maps),
                                  SimplicialMap(g_src.simplicial, g_dst.simplicial, tuple(gmaps)))
    bad = morphism.violations() + morphism.induced.violations()
    if bad:
        raise NoMorphismFound(bad[0], witness={"violations": bad})
    return morphism


def identity_hypercover_morphism(h: Hypercovering) -> HypercoverMorphism:
    # the search would send a piece to a larger one with a smaller label
    maps = tuple(np.arange(s, dtype=INDEX) for s in h.pieces.sizes)
    g = gamma_of(h).simplicial
    ident = tuple(np.arange(s, dtype=INDEX) for s in g.sizes)
    return HypercoverMorphism(h, h, maps, SimplicialMap(g, g, ident))
