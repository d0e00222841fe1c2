"""Acceptance criteria, each timed against its limit.

Run under pytest for one test per criterion (the summary lists a PASS or
FAIL line for each), or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import betti_oracle, sparse_product, sympy_invariants  # noqa: E402
from protoshape import proset  # noqa: E402
from protoshape.cli import mccord_signature, nerve_signature, qsh_signature  # noqa: E402
from protoshape.generators import (  # noqa: E402
    all_spaces,
    by_name,
    cover_orbit_representatives,
    discrete,
    four_point_circle,
    suite_names,
)
from protoshape.homology import simplicial_homology  # noqa: E402
from protoshape.hypercover import cech_hypercover, gamma, gamma_of, mccord_hypercover, verify_hyper  # noqa: E402
from protoshape.proset import compose, constant_value, identity_morphism, pi_map, pi_proset  # noqa: E402
from protoshape.simplicial import cech_nerve, normalized_chains, order_complex  # noqa: E402
from protoshape.smith import smith_normal_form  # noqa: E402
from protoshape.space import (  # noqa: E402
    ContinuousMap,
    check_continuity,
    connected_components,
    enumerate_open_partitions,
    minimal_cover,
    refines,
    specialization_preorder,
)

D = 2


def betti(space_or_cover, signature):
    return signature(space_or_cover, D)[1].betti


# -- criteria ---------------------------------------------------------------------------------------


def circle_triple():
    space = four_point_circle()
    k, hm = mccord_signature(space, D)
    _, hs = nerve_signature(minimal_cover(space), D)
    _, hq = qsh_signature(space, D)
    assert hm.betti == (1, 1, 0) and hm.torsion == ((), (), ()), hm
    assert hs.betti == (1, 0, 0), hs
    assert hq.betti == (1, 1, 0) and hq.torsion == ((), (), ()), hq
    return f"mccord {hm}; shape {hs}; qsh {hq}"


def gamma_of_mccord_is_the_order_complex():
    for name in suite_names():
        space = by_name(name)
        g = gamma_of(mccord_hypercover(space, D + 1))
        k = order_complex(specialization_preorder(space), D + 1)
        pieces = g.hypercover.pieces
        # cells of gamma are (chain, component); send each to its chain in K(X)
        phi = []
        for n in range(D + 2):
            image = [k.index_of(n, pieces.label(n, p)) for p, _ in g.cells[n]]
            assert sorted(image) == list(range(k.sizes[n])), (name, n)
            phi.append(image)
        s = g.simplicial
        for n in range(1, D + 2):
            for i in range(n + 1):
                for c in range(s.sizes[n]):
                    assert phi[n - 1][s.faces[n][i][c]] == k.faces[n][i][phi[n][c]], (name, n, i)
        for n in range(D + 1):
            for i in range(n + 1):
                for c in range(s.sizes[n]):
                    assert phi[n + 1][s.degeneracies[n][i][c]] == k.degeneracies[n][i][phi[n][c]]
        hq, hm = simplicial_homology(s, D), simplicial_homology(k, D)
        assert (hq.betti, hq.torsion) == (hm.betti, hm.torsion), name
    return f"{len(suite_names())} spaces"


def proposition_one_spaces():
    names = suite_names() + [f"discrete:{n}" for n in range(5, 9)]
    names += [f"random:{seed},{7 + seed % 2}" for seed in range(100, 110)]
    return names


def proposition_one(name):
    space = by_name(name)
    comps = connected_components(space)
    parts = enumerate_open_partitions(space)
    finest = [p for p in parts if p.members == comps.members]
    assert len(finest) == 1, name
    assert all(refines(comps, p) for p in parts), name
    value = constant_value(pi_proset(space))
    assert value.cofinal
    assert sorted(map(sorted, value.value)) == sorted(map(sorted, comps.blocks())), name
    return len(parts)


def cech_covers_are_hypercoverings():
    checked = total = 0
    for name in suite_names():
        space = by_name(name)
        if space.size > 5:
            continue
        reps, count = cover_orbit_representatives(space)
        total += count
        for cover in reps:
            rep = verify_hyper(cech_hypercover(cover, 3))
            assert rep.covers_base and rep.ok, (name, cover.members)
            assert [lv.degree for lv in rep.levels] == [1, 2, 3]
            assert all(lv.covering and lv.bijective for lv in rep.levels), (name, cover.members)
            checked += 1
    return f"{total} covers, {checked} up to homeomorphism"


def pi_is_a_functor():
    spaces = [s for n in (1, 2, 3) for s in all_spaces(n)]
    for s in spaces:
        assert pi_map(ContinuousMap(s, s, tuple(range(s.size)))).key() == identity_morphism(pi_proset(s)).key()
    maps = {}
    for a, b in itertools.product(range(len(spaces)), repeat=2):
        src, tgt = spaces[a], spaces[b]
        maps[(a, b)] = [v for v in itertools.product(range(tgt.size), repeat=src.size)
                        if check_continuity(ContinuousMap(src, tgt, v))]

    # pi_map is computed once per map; morphisms with equal keys are equal, so
    # compose runs once per pair of distinct morphisms
    morphisms = {}  # (a, b) -> list of morphisms
    key_class = {}  # (a, b) -> {key: class}
    map_class = {}  # (a, b, assignment) -> class

    def classify(a, b, values):
        c = map_class.get((a, b, values))
        if c is None:
            m = pi_map(ContinuousMap(spaces[a], spaces[b], values))
            known = key_class.setdefault((a, b), {})
            c = known.get(m.key())
            if c is None:
                c = known[m.key()] = len(known)
                morphisms.setdefault((a, b), []).append(m)
            map_class[(a, b, values)] = c
        return c

    composed = {}
    pairs = 0
    for a, b in itertools.product(range(len(spaces)), repeat=2):
        fs = maps[(a, b)]
        f_classes = [classify(a, b, f) for f in fs]
        for c in range(len(spaces)):
            for g in maps[(b, c)]:
                gc = classify(b, c, g)
                for f, fc in zip(fs, f_classes):
                    key = (a, b, c, gc, fc)
                    expect = composed.get(key)
                    if expect is None:
                        m = compose(morphisms[(b, c)][gc], morphisms[(a, b)][fc])
                        expect = composed[key] = key_class.get((a, c), {}).get(m.key(), -1)
                    assert classify(a, c, tuple(g[x] for x in f)) == expect, (a, b, c, f, g)
                    pairs += 1
    return f"{len(spaces)} topologies, {sum(map(len, maps.values()))} maps, {pairs} composable pairs"


def oracle_betti(s, top):
    c = normalized_chains(s, top)
    rk = [len(sympy_invariants(b.tolist())) if b.rows and b.cols else 0 for b in c.boundaries]
    return tuple(c.ranks[n] - rk[n] - rk[n + 1] for n in range(top + 1))


def sphere_homology():
    out = []
    for n, expect in ((1, (1, 1)), (2, (1, 0, 1))):
        k = order_complex(specialization_preorder(by_name(f"sphere:{n}")), n + 1)
        h = simplicial_homology(k, n)
        assert h.betti == expect and not any(h.torsion), (n, h)
        assert oracle_betti(k, n) == expect
        out.append(f"sphere:{n} {h}")
    return "; ".join(out)


def discrete_coincidence():
    for n in range(1, 6):
        space = discrete(n)
        expect = (n, 0, 0)
        assert betti(space, mccord_signature) == expect
        assert betti(minimal_cover(space), nerve_signature) == expect
        assert betti(space, qsh_signature) == expect
    return "n = 1..5"


def plain(m):
    return {key: v for key, v in m.data.items() if v}


def identity(n):
    return {(i, i): 1 for i in range(n)}


def engine_properties():
    complexes = 0
    for seed in range(50):
        space = by_name(f"random:{1000 + seed},{3 + seed % 5}")
        built = [
            order_complex(specialization_preorder(space), D + 1),
            cech_nerve(minimal_cover(space), D + 1),
            gamma(mccord_hypercover(space, D + 1)),
        ]
        for s in built:
            c = normalized_chains(s, D)
            for n in range(2, c.top + 1):
                assert not sparse_product(plain(c.boundaries[n - 1]), plain(c.boundaries[n]))
            for b in c.boundaries[1:]:
                f = smith_normal_form(b)
                assert sparse_product(plain(f.left), plain(f.left_inverse)) == identity(b.rows)
                assert sparse_product(plain(f.right), plain(f.right_inverse)) == identity(b.cols)
                lmr = sparse_product(sparse_product(plain(f.left), plain(b)), plain(f.right))
                assert lmr == {(i, i): d for i, d in enumerate(f.diagonal) if d}
            h = simplicial_homology(s, D)
            assert list(h.betti) == betti_oracle(c.ranks, [m.tolist() for m in c.boundaries])
            complexes += 1
    return f"{complexes} complexes from 50 seeded spaces"


# -- harness ------------------------------------------------------------------------------------------


CRITERIA = {
    1: ("4-point circle triple signature", 1.0, circle_triple),
    2: ("gamma of McCord equals the order complex on the suite", 5.0, gamma_of_mccord_is_the_order_complex),
    4: ("Cech covers satisfy the hypercovering conditions bijectively", 10.0, cech_covers_are_hypercoverings),
    5: ("pi is a functor on topologies with at most 3 points", 30.0, pi_is_a_functor),
    6: ("sphere:1 and sphere:2 homology", 1.0, sphere_homology),
    7: ("discrete spaces: shape = qsh = mccord", 1.0, discrete_coincidence),
    8: ("engine properties on 50 seeded random spaces", 30.0, engine_properties),
}
PER_SPACE = (3, "open partitions and the pi pro-set on spaces with at most 8 points", 1.0)


def _clear_caches():
    proset._pi_cache.clear()


def run_timed(number, title, limit, fn, *args):
    _clear_caches()
    start = time.perf_counter()
    try:
        detail, ok = fn(*args), True
    except AssertionError as exc:
        detail, ok = f"assertion failed: {exc}", False
    elapsed = time.perf_counter() - start
    if elapsed >= limit:
        ok = False
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s, limit {limit:g}s) {detail}"
    return ok, line


def run_proposition_one():
    number, title, limit = PER_SPACE
    worst, fails = 0.0, []
    for name in proposition_one_spaces():
        _clear_caches()
        start = time.perf_counter()
        try:
            proposition_one(name)
        except AssertionError:
            fails.append(name)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        if elapsed >= limit:
            fails.append(f"{name} took {elapsed:.2f}s")
    ok = not fails
    detail = f"{len(proposition_one_spaces())} spaces, slowest {worst:.2f}s"
    if fails:
        detail += f"; failing: {', '.join(fails)}"
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} (limit {limit:g}s per space) {detail}"


@pytest.fixture
def record(pytestconfig):
    if not hasattr(pytestconfig, "acceptance_lines"):
        pytestconfig.acceptance_lines = []

    def add(ok, line):
        pytestconfig.acceptance_lines.append(line)
        print(line)
        assert ok, line

    return add


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record):
    title, limit, fn = CRITERIA[number]
    record(*run_timed(number, title, limit, fn))


def test_criterion_3(record):
    record(*run_proposition_one())


def main():
    results = [run_timed(n, *CRITERIA[n]) for n in sorted(CRITERIA)]
    results.insert(2, run_proposition_one())
    for _, line in results:
        print(line)
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
