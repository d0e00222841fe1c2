"""Finite inverse systems of finite sets and the open-partition functor.

A ProSet is indexed by a finite directed poset.  ``bond[(i, j)]`` for
``i <= j`` maps ``level[j]`` to ``level[i]``.  Morphisms follow the usual
pro-category shape: a function on indices going *backwards* (target index
to source index) and one component per target index.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import InitVar, dataclass
from functools import cached_property

from .errors import InvalidInput, Mismatch, NotConstant
from .space import (
    DEFAULT_PARTITION_BOUND,
    ContinuousMap,
    FiniteSpace,
    OpenPartition,
    enumerate_open_partitions,
    partition,
    require_continuous,
)


class DirectedPoset:
    """Finite poset given by its elements and the pairs ``(a, b)`` with ``a <= b``.

    A finite directed poset always has a greatest element; passing
    ``require_directed=False`` admits hand-built counterexamples.
    """

    def __init__(self, elements: Sequence[Hashable], pairs: Iterable[tuple[Hashable, Hashable]],
                 require_directed: bool = True):
        elements = tuple(elements)
        pos = {e: k for k, e in enumerate(elements)}
        if len(pos) != len(elements):
            raise InvalidInput("duplicate index elements")
        given = [1 << k for k in range(len(elements))]
        for a, b in pairs:
            if a not in pos or b not in pos:
                raise InvalidInput(f"relation mentions unknown index {a!r} or {b!r}")
            given[pos[a]] |= 1 << pos[b]
        self._setup(elements, pos, given, require_directed)
        if list(self._up) != given:
            raise InvalidInput("index relation is not transitive")

    @classmethod
    def from_generators(cls, elements: Sequence[Hashable], above: Sequence[int],
                        require_directed: bool = True) -> DirectedPoset:
        """Poset generated by bitmasks: bit ``j`` of ``above[k]`` says element k <= element j.

        The reflexive-transitive closure is taken, so ``above`` need only
        hold the covering relations.
        """
        self = cls.__new__(cls)
        elements = tuple(elements)
        self._setup(elements, {e: k for k, e in enumerate(elements)}, list(above), require_directed)
        return self

    def _setup(self, elements, pos, above, require_directed):
        n = len(elements)
        up = [0] * n
        state = [0] * n  # 0 new, 1 on the stack, 2 done
        for root in range(n):
            if state[root]:
                continue
            stack = [(root, _bits(above[root] & ~(1 << root)))]
            state[root] = 1
            while stack:
                k, todo = stack[-1]
                j = next(todo, None)
                if j is None:
                    acc = 1 << k
                    for i in _bits(above[k] & ~(1 << k)):
                        acc |= up[i]
                    up[k] = acc
                    state[k] = 2
                    stack.pop()
                elif state[j] == 1:
                    raise InvalidInput(
                        f"index relation is not antisymmetric: {elements[j]!r} and "
                        f"{elements[k]!r} lie on a cycle"
                    )
                elif state[j] == 0:
                    state[j] = 1
                    stack.append((j, _bits(above[j] & ~(1 << j))))
        if require_directed and n:
            # finite: directed iff there is exactly one maximal element
            tops = [k for k in range(n) if up[k] == 1 << k]
            if len(tops) > 1:
                a, b = tops[:2]
                raise InvalidInput(
                    f"index is not directed: {elements[a]!r} and {elements[b]!r} have no upper bound"
                )
        self.elements = elements
        self.require_directed = require_directed
        self._pos = pos
        self._up = tuple(up)

    @cached_property
    def _down(self) -> tuple[int, ...]:
        down = [0] * len(self.elements)
        for k, u in enumerate(self._up):
            for j in _bits(u):
                down[j] |= 1 << k
        return tuple(down)

    @cached_property
    def pairs(self) -> frozenset:
        el = self.elements
        return frozenset((el[k], el[j]) for k, u in enumerate(self._up) for j in _bits(u))

    def __repr__(self) -> str:
        return f"DirectedPoset({len(self.elements)} elements)"

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return bool(self._up[self._pos[a]] >> self._pos[b] & 1)

    def upper_bounds(self, *xs) -> list:
        m = -1
        for x in xs:
            m &= self._up[self._pos[x]]
        return [self.elements[k] for k in _bits(m)] if m != -1 else list(self.elements)

    def below(self, x) -> list:
        return [self.elements[k] for k in _bits(self._down[self._pos[x]])]

    def maximum(self):
        """The greatest element, or None."""
        common = (1 << len(self.elements)) - 1
        for u in self._up:
            common &= u
        return self.elements[common.bit_length() - 1] if common else None

    def maximal_elements(self) -> list:
        return [e for k, e in enumerate(self.elements) if self._up[k] == 1 << k]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class ProSet:
    index: DirectedPoset
    level: Mapping[Hashable, tuple]
    bond: Mapping[tuple[Hashable, Hashable], Mapping]
    verify: InitVar[bool] = True

    def __post_init__(self, verify):
        if verify:
            self.check_coherence()

    def check_coherence(self) -> None:
        """Identity and composition laws for the bonding maps, over every comparable triple."""
        idx = self.index
        for i in idx.elements:
            if set(self.level[i]) != set(self.bond[(i, i)]):
                raise InvalidInput(f"bond({i!r} <= {i!r}) is not defined on the whole level")
            if any(self.bond[(i, i)][y] != y for y in self.level[i]):
                raise InvalidInput(f"bond({i!r} <= {i!r}) is not the identity")
        for k in idx.elements:
            for j in idx.below(k):
                bjk = self.bond[(j, k)]
                if any(bjk[y] not in self.level[j] for y in self.level[k]):
                    raise InvalidInput(f"bond({j!r} <= {k!r}) leaves level {j!r}")
                for i in idx.below(j):
                    bij, bik = self.bond[(i, j)], self.bond[(i, k)]
                    for y in self.level[k]:
                        if bij[bjk[y]] != bik[y]:
                            raise InvalidInput(
                                f"bonds do not compose over {i!r} <= {j!r} <= {k!r}",
                                witness={"element": y},
                            )


@dataclass(frozen=True, eq=False)
class ProSetMorphism:
    """``index_map`` sends target indices to source indices;
    ``components[u]`` maps ``source.level[index_map[u]]`` to ``target.level[u]``."""

    source: ProSet
    target: ProSet
    index_map: Mapping[Hashable, Hashable]
    components: Mapping[Hashable, Mapping]
    verify: InitVar[bool] = True

    def __post_init__(self, verify):
        if verify:
            self.check_coherence()

    def check_coherence(self) -> None:
        src, tgt = self.source, self.target
        for u in tgt.index.elements:
            comp = self.components[u]
            if any(comp.get(y) not in tgt.level[u] for y in src.level[self.index_map[u]]):
                raise InvalidInput(f"component at {u!r} is not a function into the target level")
        for u2 in tgt.index.elements:
            for u in tgt.index.below(u2):
                if not self._square_commutes(u, u2):
                    raise InvalidInput(f"coherence fails for target indices {u!r} <= {u2!r}")

    def _square_commutes(self, u, u2) -> bool:
        src, tgt = self.source, self.target
        a, b = self.index_map[u], self.index_map[u2]
        down = tgt.bond[(u, u2)]
        for w in src.index.upper_bounds(a, b):
            to_a, to_b = src.bond[(a, w)], src.bond[(b, w)]
            if all(
                self.components[u][to_a[y]] == down[self.components[u2][to_b[y]]]
                for y in src.level[w]
            ):
                return True
        return False

    def key(self) -> tuple:
        """Hashable summary for exact comparison of morphisms with the same ends."""
        return tuple(
            (u, self.index_map[u], tuple(sorted(self.components[u].items(), key=repr)))
            for u in self.target.index.elements
        )


# -- the open-partition pro-set ----------------------------------------------

_pi_cache: dict[FiniteSpace, ProSet] = {}


def pi_proset(space: FiniteSpace, bound: int = DEFAULT_PARTITION_BOUND) -> ProSet:
    """Inverse system of open partitions ordered by refinement.

    Level at a partition is its set of blocks (frozensets of point ids);
    the bond for ``U <= V`` (V refines U) sends a block of V to the unique
    block of U containing it.
    """
    hit = _pi_cache.get(space)
    if hit is not None:
        return hit
    parts = enumerate_open_partitions(space, bound)
    names = {}

    def block(m):
        b = names.get(m)
        if b is None:
            b = names[m] = frozenset(space.subset(m))
        return b

    level = {p: tuple(block(m) for m in p.members) for p in parts}
    slot = {p.members: k for k, p in enumerate(parts)}
    above = [0] * len(parts)
    for f, fine in enumerate(parts):
        # refinement is generated by splitting one block in two, i.e. by
        # merging two blocks of the finer partition
        ms = fine.members
        bit = 1 << f
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                merged = ms[:i] + (ms[i] | ms[j],) + ms[i + 1:j] + ms[j + 1:]
                above[slot[merged]] |= bit
    # containment bonds compose by construction; the triple check is left to
    # callers (it is cubic in the number of partitions)
    index = DirectedPoset.from_generators(parts, above)
    out = ProSet(index, level, _ContainmentBonds(index, block), verify=False)
    if len(_pi_cache) > 4096:
        _pi_cache.clear()
    _pi_cache[space] = out
    return out


class _ContainmentBonds(Mapping):
    """Bonds of the partition system, built on first use.

    Part(X) of a space with many components has Bell-many elements and far
    more comparable pairs, most of which no caller ever looks at.
    """

    def __init__(self, index: DirectedPoset, block):
        self._index = index
        self._block = block
        self._made = {}

    def __getitem__(self, key):
        hit = self._made.get(key)
        if hit is not None:
            return hit
        coarse, fine = key
        if not self._index.leq(coarse, fine):
            raise KeyError(key)
        block = self._block
        out = {}
        for m in fine.members:
            c = next(c for c in coarse.members if m & ~c == 0)
            out[block(m)] = block(c)
        self._made[key] = out
        return out

    def __iter__(self):
        return iter(self._index.pairs)

    def __len__(self) -> int:
        return len(self._index.pairs)


def pullback_partition(f: ContinuousMap, u: OpenPartition) -> OpenPartition:
    """Preimages of the blocks of ``u``, empty ones dropped."""
    return partition(f.source, (b for b in (f.preimage(m) for m in u.members) if b))


def pi_map(f: ContinuousMap, bound: int = DEFAULT_PARTITION_BOUND) -> ProSetMorphism:
    """Morphism of pro-sets induced by a continuous map.

    Each open partition of the target is sent to its pullback, and a
    nonempty preimage block is sent back to the block it came from.
    """
    require_continuous(f)
    src, tgt = pi_proset(f.source, bound), pi_proset(f.target, bound)
    index_map = {}
    components = {}
    for u in tgt.index.elements:
        v = pullback_partition(f, u)
        index_map[u] = v
        comp = {}
        for m in u.members:
            pre = f.preimage(m)
            if pre:
                comp[frozenset(f.source.subset(pre))] = frozenset(f.target.subset(m))
        components[u] = comp
    return ProSetMorphism(src, tgt, index_map, components)


def identity_morphism(p: ProSet) -> ProSetMorphism:
    return ProSetMorphism(
        p,
        p,
        {u: u for u in p.index.elements},
        {u: {y: y for y in p.level[u]} for u in p.index.elements},
    )


def compose(g: ProSetMorphism, f: ProSetMorphism) -> ProSetMorphism:
    """``g ∘ f`` for ``f: A -> B`` and ``g: B -> C``."""
    if f.target is not g.source and (
        f.target.index.elements != g.source.index.elements or f.target.level != g.source.level
    ):
        raise Mismatch("f.target is not g.source")
    index_map = {}
    components = {}
    for u in g.target.index.elements:
        mid = g.index_map[u]
        index_map[u] = f.index_map[mid]
        fc, gc = f.components[mid], g.components[u]
        components[u] = {y: gc[fc[y]] for y in f.source.level[index_map[u]]}
    # a composite of coherent morphisms is coherent
    return ProSetMorphism(f.source, g.target, index_map, components, verify=False)


@dataclass(frozen=True)
class ConstantValue:
    """Value of a pro-set isomorphic to a constant system, with its cofinality certificate."""

    value: tuple
    maximum: Hashable
    dominated: int
    index_size: int

    @property
    def cofinal(self) -> bool:
        return self.dominated == self.index_size


def constant_value(p: ProSet) -> ConstantValue:
    """Level at the greatest index, if one exists.

    A greatest index is cofinal on its own, so the system is isomorphic to
    the constant system on that level.  Raises NotConstant, with the
    maximal elements as witness, otherwise.
    """
    m = p.index.maximum()
    if m is None:
        raise NotConstant(
            "index poset has no greatest element",
            witness={"maximal_antichain": list(p.index.maximal_elements())},
        )
    dominated = sum(1 for e in p.index.elements if p.index.leq(e, m))
    return ConstantValue(tuple(p.level[m]), m, dominated, len(p.index))


def constant_proset(elements: Sequence[Hashable]) -> ProSet:
    """One-index system on a plain set."""
    idx = DirectedPoset(("*",), frozenset({("*", "*")}))
    return ProSet(idx, {"*": tuple(elements)}, {("*", "*"): {e: e for e in elements}})
