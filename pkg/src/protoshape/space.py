"""Finite topological spaces.

A topology on a finite set is determined by the minimal open set of each
point, so a space is stored as the map ``x -> min_open(x)``.  Subsets are
Python ints used as bitmasks over the ordered point list: bit ``i`` stands
for ``points[i]``.

The specialization preorder uses the convention ``x <= y  iff
min_open(y) ⊆ min_open(x)``, so ``min_open(x)`` is exactly the up-set of
``x`` and open sets are up-closed.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    InvalidInput,
    MissingEmptyOrFull,
    NotATopology,
    NotContinuous,
    SpaceMismatch,
    TooLarge,
)

DEFAULT_PARTITION_BOUND = 10


def bits(mask: int) -> Iterable[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_points(points: Sequence[str]) -> tuple[str, ...]:
    points = tuple(str(p) for p in points)
    if len(set(points)) != len(points):
        raise InvalidInput(f"duplicate point ids in {list(points)}")
    return points


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    masks: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.masks):
            raise InvalidInput("points and min_open masks differ in length")
        full = (1 << len(self.points)) - 1
        for i, m in enumerate(self.masks):
            if m & ~full:
                raise InvalidInput(f"min_open({self.points[i]}) mentions unknown points")
            if not m >> i & 1:
                raise NotATopology(
                    f"{self.points[i]} is not in its own minimal open set",
                    witness={"point": self.points[i]},
                )
            for j in bits(m):
                if self.masks[j] & ~m:
                    raise NotATopology(
                        f"{self.points[j]} ∈ min_open({self.points[i]}) but "
                        f"min_open({self.points[j]}) ⊄ min_open({self.points[i]})",
                        witness={"point": self.points[i], "member": self.points[j]},
                    )

    @classmethod
    def from_min_open(cls, points: Sequence[str], min_open: Mapping[str, Iterable[str]]):
        points = _check_points(points)
        index = {p: i for i, p in enumerate(points)}
        missing = [p for p in points if p not in min_open]
        if missing:
            raise InvalidInput(f"min_open missing for points {missing}")
        masks = []
        for p in points:
            try:
                masks.append(sum(1 << index[q] for q in set(min_open[p])))
            except KeyError as exc:
                raise InvalidInput(f"unknown point {exc.args[0]!r} in min_open({p})") from None
        return cls(points, tuple(masks))

    # -- basic accessors ---------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def mask(self, subset: Iterable[str]) -> int:
        try:
            return sum(1 << self.index[p] for p in set(subset))
        except KeyError as exc:
            raise InvalidInput(f"unknown point {exc.args[0]!r}") from None

    def subset(self, mask: int) -> tuple[str, ...]:
        """Point ids of ``mask`` in the space's point order."""
        return tuple(self.points[i] for i in bits(mask))

    def min_open(self, x: str) -> frozenset[str]:
        return frozenset(self.subset(self.masks[self.index[x]]))

    def closure_of_open_basis(self, mask: int) -> int:
        """Smallest open set containing ``mask``."""
        out = 0
        for i in bits(mask):
            out |= self.masks[i]
        return out

    def is_open(self, mask: int) -> bool:
        return self.closure_of_open_basis(mask) == mask

    def open_sets(self) -> list[int]:
        """All open sets as masks, sorted.  Exponential in the worst case."""
        opens = {0}
        for m in self.masks:
            opens |= {o | m for o in opens}
        return sorted(opens)

    def leq(self, x: str, y: str) -> bool:
        return bool(self.masks[self.index[x]] >> self.index[y] & 1)

    # -- subspaces ---------------------------------------------------------

    def components_of(self, mask: int) -> tuple[int, ...]:
        """Connected components of the subspace on ``mask``, ordered by lowest point.

        In a finite space two points of a subspace lie in one component iff
        they are joined by a zigzag of comparable points inside the subspace.
        """
        return _components(self.masks, mask)


_component_cache: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}


def _components(masks: tuple[int, ...], mask: int) -> tuple[int, ...]:
    key = (masks, mask)
    hit = _component_cache.get(key)
    if hit is not None:
        return hit
    # comparability inside the subspace: i ~ j iff j in up(i) or i in up(j)
    remaining = mask
    comps = []
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for i in bits(frontier):
                grow |= masks[i] & mask
                for j in bits(remaining & ~comp):
                    if masks[j] >> i & 1:
                        grow |= 1 << j
            frontier = grow & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    out = tuple(comps)
    if len(_component_cache) > 200_000:
        _component_cache.clear()
    _component_cache[key] = out
    return out


@dataclass(frozen=True)
class Preorder:
    """Reflexive transitive relation; ``up[i]`` is the mask of ``{j : i <= j}``."""

    points: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self):
        for i, m in enumerate(self.up):
            if not m >> i & 1:
                raise InvalidInput(f"relation is not reflexive at {self.points[i]}")
            for j in bits(m):
                if self.up[j] & ~m:
                    raise InvalidInput(
                        f"relation is not transitive: {self.points[i]} <= {self.points[j]}"
                    )

    @classmethod
    def from_pairs(cls, points: Sequence[str], pairs: Iterable[tuple[str, str]]):
        """Reflexive-transitive closure of the given ``(x, y)`` pairs meaning ``x <= y``."""
        points = _check_points(points)
        index = {p: i for i, p in enumerate(points)}
        up = [1 << i for i in range(len(points))]
        for x, y in pairs:
            if x not in index or y not in index:
                raise InvalidInput(f"pair ({x!r}, {y!r}) mentions an unknown point")
            up[index[x]] |= 1 << index[y]
        return cls(points, _transitive_closure(up))

    def leq(self, x: str, y: str) -> bool:
        index = {p: i for i, p in enumerate(self.points)}
        return bool(self.up[index[x]] >> index[y] & 1)

    def strict_pairs(self) -> list[tuple[str, str]]:
        return [
            (self.points[i], self.points[j])
            for i, m in enumerate(self.up)
            for j in bits(m)
            if j != i
        ]

    def is_partial_order(self) -> bool:
        return all(not (self.up[j] >> i & 1) for i, m in enumerate(self.up) for j in bits(m) if j != i)


def _transitive_closure(up: list[int]) -> tuple[int, ...]:
    up = list(up)
    for k in range(len(up)):
        bit = 1 << k
        for i in range(len(up)):
            if up[i] & bit:
                up[i] |= up[k]
    return tuple(up)


# -- covers, partitions, maps ----------------------------------------------


@dataclass(frozen=True)
class OpenCover:
    """Indexed family of nonempty open sets whose union is the whole space.

    Members are masks; duplicates under different labels are allowed.
    """

    space: FiniteSpace
    members: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.members):
            raise InvalidInput("cover labels and members differ in length")
        union = 0
        for k, m in enumerate(self.members):
            if m == 0:
                raise InvalidInput(f"cover member {self.label(k)} is empty")
            if m & ~self.space.full:
                raise InvalidInput(f"cover member {self.label(k)} mentions unknown points")
            if not self.space.is_open(m):
                raise InvalidInput(
                    f"cover member {self.label(k)} = {list(self.space.subset(m))} is not open"
                )
            union |= m
        if union != self.space.full:
            missing = self.space.subset(self.space.full & ~union)
            raise InvalidInput(f"members do not cover points {list(missing)}")

    @classmethod
    def from_sets(cls, space: FiniteSpace, sets: Iterable[Iterable[str]], labels=None):
        return cls(space, tuple(space.mask(s) for s in sets), None if labels is None else tuple(labels))

    def __hash__(self):
        # covers are dictionary keys in hot loops; equal covers share members
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.members, self.labels))
            object.__setattr__(self, "_hash", h)
        return h

    def label(self, k: int) -> str:
        return self.labels[k] if self.labels is not None else f"U{k}"

    def sets(self) -> list[tuple[str, ...]]:
        return [self.space.subset(m) for m in self.members]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OpenPartition(OpenCover):
    __hash__ = OpenCover.__hash__

    def __post_init__(self):
        super().__post_init__()
        seen = 0
        for k, m in enumerate(self.members):
            if seen & m:
                raise InvalidInput(f"partition block {self.label(k)} overlaps an earlier block")
            seen |= m

    def block_of(self, i: int) -> int:
        """Block (mask) containing point index ``i``."""
        for m in self.members:
            if m >> i & 1:
                return m
        raise KeyError(i)

    def blocks(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(self.space.subset(m)) for m in self.members)


def partition(space: FiniteSpace, blocks: Iterable[int]) -> OpenPartition:
    """Canonical OpenPartition: blocks ordered by their lowest point."""
    return OpenPartition(space, tuple(sorted(blocks, key=lambda m: m & -m)))


@dataclass(frozen=True)
class ContinuousMap:
    source: FiniteSpace
    target: FiniteSpace
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.source.size:
            raise InvalidInput("assignment is not total on source points")
        if any(not 0 <= a < self.target.size for a in self.assignment):
            raise InvalidInput("assignment hits unknown target points")

    @classmethod
    def from_dict(cls, source: FiniteSpace, target: FiniteSpace, mapping: Mapping[str, str]):
        try:
            return cls(source, target, tuple(target.index[mapping[p]] for p in source.points))
        except KeyError as exc:
            raise InvalidInput(f"map undefined or invalid at {exc.args[0]!r}") from None

    def __call__(self, x: str) -> str:
        return self.target.points[self.assignment[self.source.index[x]]]

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.assignment[i]
        return out

    def preimage(self, mask: int) -> int:
        return sum(1 << i for i, a in enumerate(self.assignment) if mask >> a & 1)

    def then(self, g: ContinuousMap) -> ContinuousMap:
        """``g ∘ self``."""
        if g.source != self.target:
            raise SpaceMismatch("maps are not composable")
        return ContinuousMap(self.source, g.target, tuple(g.assignment[a] for a in self.assignment))


def identity_map(space: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(space, space, tuple(range(space.size)))


# -- operations ----------------------------------------------------------------


def validate_topology(points: Sequence[str], open_sets: Iterable[Iterable[str]]) -> FiniteSpace:
    """Check the topology axioms for an explicit open-set family and build the space.

    Raises MissingEmptyOrFull if ∅ or the whole set is absent and NotATopology
    (with the offending pair as witness) if the family is not closed under
    pairwise union and intersection.
    """
    points = _check_points(points)
    index = {p: i for i, p in enumerate(points)}
    family = set()
    for s in open_sets:
        s = list(s)
        unknown = [p for p in s if p not in index]
        if unknown:
            raise InvalidInput(f"open set {s} mentions unknown points {unknown}")
        family.add(sum(1 << index[p] for p in set(s)))
    full = (1 << len(points)) - 1

    def names(m):
        return [points[i] for i in bits(m)]

    missing = [name for name, m in (("empty", 0), ("full", full)) if m not in family]
    if missing:
        raise MissingEmptyOrFull(
            f"open-set family lacks the {' and '.join(missing)} set", witness={"missing": missing}
        )
    ordered = sorted(family)
    for a, b in itertools.combinations(ordered, 2):
        for op, value in (("union", a | b), ("intersection", a & b)):
            if value not in family:
                raise NotATopology(
                    f"{op} of {names(a)} and {names(b)} is not in the family",
                    witness={"operation": op, "pair": [names(a), names(b)]},
                )
    masks = []
    for i in range(len(points)):
        m = full
        for o in ordered:
            if o >> i & 1:
                m &= o
        masks.append(m)
    space = FiniteSpace(points, tuple(masks))
    rebuilt = set(space.open_sets())
    if rebuilt != family:
        extra = sorted(family ^ rebuilt)[0]
        raise NotATopology(
            "family is not the union-closure of its minimal open sets",
            witness={"set": names(extra)},
        )
    return space


def specialization_preorder(space: FiniteSpace) -> Preorder:
    # {y : min_open(y) ⊆ min_open(x)} is exactly min_open(x)
    return Preorder(space.points, space.masks)


def space_from_preorder(p: Preorder) -> FiniteSpace:
    """Open sets are the up-closed sets; ``min_open(x) = {y : x <= y}``."""
    return FiniteSpace(p.points, p.up)


def connected_components(space: FiniteSpace) -> OpenPartition:
    return partition(space, space.components_of(space.full))


def _restricted_growth(n: int):
    """Set partitions of range(n) as block-label lists, in lexicographic order."""
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield labels[:]
            return
        for b in range(top + 1):
            labels[i] = b
            yield from rec(i + 1, max(top, b + 1))

    if n == 0:
        yield []
        return
    yield from rec(1, 1)


def enumerate_open_partitions(space: FiniteSpace, bound: int = DEFAULT_PARTITION_BOUND) -> list[OpenPartition]:
    """All open partitions of the space.

    A block of an open partition is open and closed, hence a union of
    connected components, so the partitions are exactly the set partitions
    of the component set.
    """
    if space.size > bound:
        raise TooLarge(f"{space.size} points exceeds the enumeration bound {bound}")
    comps = space.components_of(space.full)
    out = []
    for labels in _restricted_growth(len(comps)):
        blocks = [0] * (max(labels) + 1 if labels else 0)
        for comp, b in zip(comps, labels):
            blocks[b] |= comp
        out.append(partition(space, blocks))
    return out


def refines(fine: OpenCover, coarse: OpenCover) -> bool:
    if fine.space != coarse.space:
        raise SpaceMismatch("covers live on different spaces")
    return all(any(m & ~c == 0 for c in coarse.members) for m in fine.members)


def minimal_cover(space: FiniteSpace) -> OpenCover:
    """The cover by minimal open sets, labelled by point; it refines every open cover."""
    return OpenCover(space, space.masks, space.points)


def check_continuity(f: ContinuousMap) -> bool:
    """Whether ``f`` is continuous.

    For finite spaces continuity is equivalent to preserving the
    specialization preorder: if ``f`` is continuous then ``f⁻¹(min_open(f x))``
    is an open set containing ``x``, so it contains ``min_open(x)``; and
    conversely an order-preserving map pulls up-closed sets back to
    up-closed sets.
    """
    src, tgt = f.source, f.target
    for i, m in enumerate(src.masks):
        if f.image(m) & ~tgt.masks[f.assignment[i]]:
            return False
    return True


def require_continuous(f: ContinuousMap) -> ContinuousMap:
    if not check_continuity(f):
        raise NotContinuous("map does not preserve the specialization preorder")
    return f


def t0_quotient(space: FiniteSpace) -> tuple[FiniteSpace, ContinuousMap]:
    """Identify points ``x`` and ``y`` with ``x <= y <= x``.

    Each class is named after its first point.  The quotient map is
    continuous and surjective and the quotient preorder is antisymmetric.
    """
    classes: list[int] = []
    cls_of = [0] * space.size
    for i, m in enumerate(space.masks):
        for k, c in enumerate(classes):
            j = (c & -c).bit_length() - 1
            if space.masks[j] == m:
                classes[k] |= 1 << i
                cls_of[i] = k
                break
        else:
            cls_of[i] = len(classes)
            classes.append(1 << i)
    reps = [(c & -c).bit_length() - 1 for c in classes]
    points = tuple(space.points[r] for r in reps)
    masks = []
    for r in reps:
        m = 0
        for j in bits(space.masks[r]):
            m |= 1 << cls_of[j]
        masks.append(m)
    quotient = FiniteSpace(points, tuple(masks))
    return quotient, ContinuousMap(space, quotient, tuple(cls_of))


def subspace(space: FiniteSpace, mask: int) -> FiniteSpace:
    """Subspace topology on ``mask``: minimal open sets intersect with the subset."""
    idx = list(bits(mask))
    pos = {i: k for k, i in enumerate(idx)}
    masks = []
    for i in idx:
        m = 0
        for j in bits(space.masks[i] & mask):
            m |= 1 << pos[j]
        masks.append(m)
    return FiniteSpace(tuple(space.points[i] for i in idx), tuple(masks))
