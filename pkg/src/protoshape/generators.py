"""Builtin spaces and exhaustive enumerators used by the CLI and the test suites."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

import numpy as np

from .errors import InvalidInput
from .space import FiniteSpace, OpenCover, Preorder, bits, space_from_preorder

RANDOM_EDGE_PROBABILITY = 0.5


def four_point_circle() -> FiniteSpace:
    """Points a, b, c, d; open sets generated by {a}, {c}, {a,b,c}, {a,c,d}."""
    return FiniteSpace.from_min_open(
        "abcd", {"a": "a", "b": "abc", "c": "c", "d": "acd"}
    )


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace(tuple(f"p{i}" for i in range(n)), tuple(1 << i for i in range(n)))


def sierpinski() -> FiniteSpace:
    """Points 0 and 1 with {1} open."""
    return FiniteSpace.from_min_open("01", {"0": "01", "1": "1"})


def suspension(space: FiniteSpace, north: str, south: str) -> FiniteSpace:
    """Non-Hausdorff suspension: two new points lying below every old point."""
    n = space.size
    old = space.full
    points = space.points + (north, south)
    masks = space.masks + (old | 1 << n, old | 1 << (n + 1))
    return FiniteSpace(points, masks)


def sphere(n: int) -> FiniteSpace:
    """``n``-fold non-Hausdorff suspension of the two-point discrete space (a model of S^n)."""
    if n < 0:
        raise InvalidInput("sphere dimension must be non-negative")
    space = FiniteSpace(("n0", "s0"), (1, 2))
    for k in range(1, n + 1):
        space = suspension(space, f"n{k}", f"s{k}")
    return space


def random_space(seed: int, n: int, edge_probability: float = RANDOM_EDGE_PROBABILITY) -> FiniteSpace:
    """Random T0 space on points p0..p{n-1}.

    A ``random.Random(seed)`` draws, for each pair ``i < j`` in
    lexicographic order, whether ``p_i <= p_j``; the result is closed
    reflexively and transitively.  Same seed and size, same space.
    """
    if n < 1:
        raise InvalidInput("random spaces need at least one point")
    rng = random.Random(seed)
    points = [f"p{i}" for i in range(n)]
    pairs = [(points[i], points[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < edge_probability]
    return space_from_preorder(Preorder.from_pairs(points, pairs))


def by_name(name: str) -> FiniteSpace:
    """Parse ``4circle | sierpinski | discrete:n | sphere:n | random:seed,n``."""
    kind, _, arg = name.partition(":")
    try:
        if kind == "4circle" and not arg:
            return four_point_circle()
        if kind == "sierpinski" and not arg:
            return sierpinski()
        if kind == "discrete":
            return discrete(int(arg))
        if kind == "sphere":
            return sphere(int(arg))
        if kind == "random":
            seed, size = arg.split(",")
            return random_space(int(seed), int(size))
    except ValueError:
        pass
    raise InvalidInput(f"unknown generator {name!r}")


def suite_names() -> list[str]:
    """The comparison suite: named spaces plus 20 seeded random spaces of 2..6 points."""
    names = ["4circle", "sierpinski"] + [f"discrete:{n}" for n in range(1, 5)]
    names += ["sphere:1", "sphere:2"]
    names += [f"random:{seed},{2 + seed % 5}" for seed in range(20)]
    return names


# -- exhaustive enumeration ----------------------------------------------------


def all_preorders(n: int) -> Iterator[tuple[int, ...]]:
    """Up-set masks of every preorder on n labelled points."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for choice in range(1 << len(off)):
        up = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(off):
            if choice >> k & 1:
                up[i] |= 1 << j
        if all(up[j] & ~up[i] == 0 for i in range(n) for j in bits(up[i])):
            yield tuple(up)


def all_spaces(n: int) -> list[FiniteSpace]:
    """Every topology on the points x0..x{n-1}."""
    points = tuple(f"x{i}" for i in range(n))
    return [FiniteSpace(points, up) for up in all_preorders(n)]


def all_open_covers(space: FiniteSpace) -> Iterator[OpenCover]:
    """Every open cover, as a set of distinct nonempty open sets in increasing mask order."""
    opens = [o for o in space.open_sets() if o]
    full = space.full
    chosen: list[int] = []

    def rec(start, union):
        if union == full:
            yield OpenCover(space, tuple(chosen))
        for k in range(start, len(opens)):
            chosen.append(opens[k])
            yield from rec(k + 1, union | opens[k])
            chosen.pop()

    yield from rec(0, 0)


def automorphisms(space: FiniteSpace) -> list[tuple[int, ...]]:
    """Permutations of the points that preserve the topology (brute force)."""
    n = space.size
    out = []
    for perm in itertools.permutations(range(n)):
        if all(_permute(space.masks[i], perm) == space.masks[perm[i]] for i in range(n)):
            out.append(perm)
    return out


def _permute(mask: int, perm) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def cover_orbit_representatives(space: FiniteSpace) -> tuple[list[OpenCover], int]:
    """One cover per orbit of all open covers under the homeomorphisms of the space.

    Covers are encoded as bitsets over the list of nonempty open sets; a
    homeomorphism permutes that list, and the orbit key is the smallest
    permuted bitset.  Returns the representatives and the total number of
    covers enumerated.
    """
    opens = [o for o in space.open_sets() if o]
    slot = {o: k for k, o in enumerate(opens)}
    covers = list(all_open_covers(space))
    codes = np.array([sum(1 << slot[m] for m in c.members) for c in covers], dtype=np.int64)
    keys = codes.copy()
    for g in automorphisms(space):
        moved = np.zeros_like(codes)
        for k, o in enumerate(opens):
            moved |= ((codes >> k) & 1) << slot[_permute(o, g)]
        keys = np.minimum(keys, moved)
    _, first = np.unique(keys, return_index=True)
    return [covers[k] for k in sorted(first.tolist())], len(covers)
