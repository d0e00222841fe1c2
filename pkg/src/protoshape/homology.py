"""Integer homology of chain complexes and of simplicial maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidInput, NotAChainMap, NotAComplex
from .simplicial import ChainComplex, SimplicialMap, chain_map_matrices, normalized_chains
from .smith import IntegerMatrix, invariant_factors, smith_normal_form


@dataclass(frozen=True)
class HomologyGroups:
    """H_n ≅ Z^betti[n] ⊕ Z/t_1 ⊕ ... with ``torsion[n] = (t_1, t_2, ...)``, t_i | t_{i+1}."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise InvalidInput("betti and torsion lists differ in length")
        for ts in self.torsion:
            if any(t < 2 for t in ts) or any(b % a for a, b in zip(ts, ts[1:])):
                raise InvalidInput(f"torsion {ts} is not a divisibility chain of integers >= 2")

    @property
    def max_degree(self) -> int:
        return len(self.betti) - 1

    def as_table(self) -> list[dict]:
        return [{"degree": n, "betti": b, "torsion": list(t)}
                for n, (b, t) in enumerate(zip(self.betti, self.torsion))]

    def __str__(self) -> str:
        parts = []
        for n, (b, ts) in enumerate(zip(self.betti, self.torsion)):
            terms = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z/{t}" for t in ts]
            parts.append(f"H{n}={' + '.join(terms) or '0'}")
        return ", ".join(parts)


def homology(c: ChainComplex, max_degree: int) -> HomologyGroups:
    """Homology in degrees ``0..max_degree``; needs ∂ through degree ``max_degree + 1``."""
    if max_degree + 1 > c.top:
        raise InvalidInput(f"complex stops at degree {c.top}, need {max_degree + 1}")
    for n in range(2, c.top + 1):
        if not (c.boundaries[n - 1] @ c.boundaries[n]).is_zero():
            raise NotAComplex(f"∂_{n - 1} ∂_{n} ≠ 0", witness={"degree": n})
    factors = [invariant_factors(b) for b in c.boundaries[: max_degree + 2]]
    ranks = [len(f) for f in factors]
    betti = tuple(c.ranks[n] - ranks[n] - ranks[n + 1] for n in range(max_degree + 1))
    torsion = tuple(tuple(d for d in factors[n + 1] if d > 1) for n in range(max_degree + 1))
    return HomologyGroups(betti, torsion)


def simplicial_homology(s, max_degree: int) -> HomologyGroups:
    return homology(normalized_chains(s, max_degree), max_degree)


# -- induced maps ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Presentation:
    """SNF-adapted description of H_n of one complex.

    ``coordinates`` sends a cycle to its class: torsion coordinates first
    (reduced mod their order), then free ones.
    """

    groups_torsion: tuple[int, ...]
    free_rank: int
    generators: list[list[int]]
    kernel_rank: int
    rank_in: int
    right_inverse_in: IntegerMatrix
    p_left: IntegerMatrix
    diag: tuple[int, ...]

    def coordinates(self, cycle: list[int]) -> list[int]:
        full = self.right_inverse_in.apply(cycle)
        if any(full[: self.rank_in]):
            raise NotAChainMap("image of a cycle is not a cycle")
        kern = full[self.rank_in:]
        c = self.p_left.apply(kern) if kern else []
        out = []
        for i, d in enumerate(self.diag):
            if d > 1:
                out.append(c[i] % d)
        out.extend(c[len(self.diag):])
        return out


def _present(c: ChainComplex, n: int) -> _Presentation:
    dn = c.boundaries[n]
    up = c.boundaries[n + 1]
    snf_n = smith_normal_form(dn)
    r = snf_n.rank
    k = c.ranks[n] - r
    # boundaries expressed in the kernel basis (last k columns of the right transform)
    full = snf_n.right_inverse @ up
    a = IntegerMatrix(k, up.cols, {(i - r, j): v for (i, j), v in full.data.items() if i >= r})
    snf_a = smith_normal_form(a)
    s = snf_a.rank
    diag = snf_a.diagonal[:s]
    right = snf_n.right.tolist()
    kernel_basis = [row[r:] for row in right]
    kb = IntegerMatrix.from_rows(kernel_basis, k) if kernel_basis else IntegerMatrix(0, k)
    gens_matrix = kb @ snf_a.left_inverse
    gens = []
    for i in range(k):
        if i < s and diag[i] == 1:
            continue
        gens.append(gens_matrix.column(i))
    torsion = tuple(d for d in diag if d > 1)
    return _Presentation(torsion, k - s, gens, k, r, snf_n.right_inverse, snf_a.left, diag)


@dataclass(frozen=True)
class DegreeMap:
    degree: int
    source: tuple[tuple[int, ...], int]
    target: tuple[tuple[int, ...], int]
    matrix: tuple[tuple[int, ...], ...]
    isomorphism: bool


def homology_map(f: SimplicialMap, max_degree: int) -> list[DegreeMap]:
    """Induced maps on H_0..H_max_degree in SNF-adapted generators.

    Each matrix has one column per source generator (torsion generators
    first, then free ones) and one row per target generator; torsion rows
    are reduced modulo their order.
    """
    cs = normalized_chains(f.source, max_degree)
    ct = normalized_chains(f.target, max_degree)
    mats = chain_map_matrices(f, cs, ct)
    for n in range(1, len(mats)):
        if ct.boundaries[n] @ mats[n] != mats[n - 1] @ cs.boundaries[n]:
            raise NotAChainMap(f"induced chain map does not commute with ∂ in degree {n}")
    out = []
    for n in range(max_degree + 1):
        ps, pt = _present(cs, n), _present(ct, n)
        columns = [pt.coordinates(mats[n].apply(g)) for g in ps.generators]
        rows = len(pt.groups_torsion) + pt.free_rank
        matrix = tuple(tuple(col[i] for col in columns) for i in range(rows))
        out.append(DegreeMap(
            n,
            (ps.groups_torsion, ps.free_rank),
            (pt.groups_torsion, pt.free_rank),
            matrix,
            _is_isomorphism(matrix, ps, pt),
        ))
    return out


def _is_isomorphism(matrix, ps: _Presentation, pt: _Presentation) -> bool:
    if ps.groups_torsion != pt.groups_torsion or ps.free_rank != pt.free_rank:
        return False
    nt = len(ps.groups_torsion)
    free = [list(row[nt:]) for row in matrix[nt:]]
    if free and abs(_det(free)) != 1:
        return False
    if not nt:
        return True
    # torsion maps into torsion; injective on a finite group of equal order means bijective
    orders = ps.groups_torsion
    for element in itertools.product(*(range(d) for d in orders)):
        if not any(element):
            continue
        image = [sum(matrix[i][j] * element[j] for j in range(nt)) % pt.groups_torsion[i]
                 for i in range(nt)]
        if not any(image):
            return False
    return True


def _det(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1
