import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cubepart.canon import (
    FULL_CUBE,
    PERM_FIX_FIRST,
    PERM_ONLY,
    CubeCanon,
    aut_group_order,
    are_equivalent,
    automorphism_generators,
    canonical_form,
    canonical_key,
    class_size,
    group_spec,
    lexicographic_min_cell,
    orbit_count,
    perm_canon,
    translational_periods,
)
from cubepart.cube import CubeAutomorphism, apply_automorphism, cube_group_order


def _random_image(C, n, rng, fix_first=False, perm_only=False):
    g = rng.choice(oracles.group(n, fix_first=fix_first, perm_only=perm_only))
    return frozenset(g(x) for x in C)


def test_group_specs():
    assert FULL_CUBE.order(4) == 384
    assert PERM_ONLY.order(4) == 24
    assert PERM_FIX_FIRST.order(4) == 6
    assert group_spec("perm_only") is not None and str(group_spec("full_cube")) == "full_cube"
    with pytest.raises(ValueError):
        group_spec("affine")


@pytest.mark.parametrize("group,kw", [(FULL_CUBE, {}), (PERM_ONLY, {"perm_only": True}),
                                      (PERM_FIX_FIRST, {"perm_only": True, "fix_first": True})])
def test_key_completeness_against_brute_force(group, kw):
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 4)
        size = rng.randint(0, 1 << n)
        A = frozenset(rng.sample(range(1 << n), size))
        if rng.random() < 0.5:
            B = _random_image(A, n, rng, **kw)
        else:
            B = frozenset(rng.sample(range(1 << n), size))
        same = oracles.orbit_min(A, n, **kw) == oracles.orbit_min(B, n, **kw)
        assert (canonical_key(A, n, group) == canonical_key(B, n, group)) == same


@pytest.mark.parametrize("group,kw", [(FULL_CUBE, {}), (PERM_ONLY, {"perm_only": True}),
                                      (PERM_FIX_FIRST, {"perm_only": True, "fix_first": True})])
def test_stabilizer_orders_against_brute_force(group, kw):
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 4)
        C = frozenset(rng.sample(range(1 << n), rng.randint(0, 1 << n)))
        assert aut_group_order(C, n, group) == oracles.stabilizer_order(C, n, **kw)


def test_marked_set_restricts_the_group():
    rng = random.Random(9)
    for _ in range(60):
        n = 4
        A = frozenset(rng.sample(range(16), 5))
        M = frozenset(rng.sample(range(16), 3))
        g = rng.choice(oracles.group(n, perm_only=True, fix_first=True))
        A2, M2 = frozenset(map(g, A)), frozenset(map(g, M))
        key = lambda a, m: canonical_key(a, n, PERM_FIX_FIRST, marked=m)  # noqa: E731
        assert key(A, M) == key(A2, M2)
        brute = sum(1 for h in oracles.group(n, perm_only=True, fix_first=True)
                    if frozenset(map(h, A)) == A and frozenset(map(h, M)) == M)
        assert aut_group_order(A, n, PERM_FIX_FIRST, marked=M) == brute
    with pytest.raises(ValueError):
        canonical_key({0}, 3, FULL_CUBE, marked={1})


sets = st.integers(2, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, (1 << n) - 1), max_size=40),
    st.permutations(range(1, n + 1)), st.integers(0, (1 << n) - 1)))


@settings(max_examples=80, deadline=None)
@given(sets)
def test_key_invariance(args):
    n, C, perm, t = args
    g = CubeAutomorphism(n, t, tuple(perm))
    D = apply_automorphism(g, C)
    assert canonical_key(C, n) == canonical_key(D, n)
    assert canonical_form(C, n) == canonical_form(D, n)
    assert aut_group_order(C, n) == aut_group_order(D, n)
    assert are_equivalent(C, D, n)
    if not t:
        assert canonical_key(C, n, PERM_ONLY) == canonical_key(D, n, PERM_ONLY)


@settings(max_examples=40, deadline=None)
@given(sets)
def test_canonical_form_is_in_orbit(args):
    n, C, _, _ = args
    F = canonical_form(C, n)
    assert len(F) == len(C)
    assert are_equivalent(C, F, n)
    P = canonical_form(C, n, PERM_ONLY)
    assert canonical_key(C, n, PERM_ONLY) == canonical_key(P, n, PERM_ONLY)


@settings(max_examples=40, deadline=None)
@given(sets)
def test_generators_preserve_the_set(args):
    n, C, _, _ = args
    C = frozenset(C)
    for g in automorphism_generators(C, n):
        assert apply_automorphism(g, C) == C
    assert cube_group_order(n) % aut_group_order(C, n) == 0
    assert class_size(C, n) * aut_group_order(C, n) == cube_group_order(n)


def test_lexicographic_min_against_brute_force():
    rng = random.Random(21)
    for _ in range(80):
        n = rng.randint(1, 4)
        C = frozenset(rng.sample(range(1 << n), rng.randint(1, 1 << n)))
        assert tuple(sorted(lexicographic_min_cell(C, n))) == oracles.orbit_min(C, n)


def test_periods_and_orbits_against_brute_force():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 4)
        C = frozenset(rng.sample(range(1 << n), rng.randint(1, 1 << n)))
        brute = {t for t in range(1 << n) if frozenset(x ^ t for x in C) == C}
        assert translational_periods(C, n) == brute
        stab = [g for g in oracles.group(n) if frozenset(map(g, C)) == C]
        seen, orbits = set(), 0
        for x in sorted(C):
            if x not in seen:
                orbits += 1
                seen |= {g(x) for g in stab}
        assert orbit_count(C, n) == orbits


def test_small_examples():
    # {00, 11} in Q2: stabilizer of order 4, two sets in the class
    assert aut_group_order({0, 3}, 2) == 4
    assert class_size({0, 3}, 2) == 2
    assert canonical_key({0, 3}, 2) == canonical_key({1, 2}, 2)
    assert canonical_key({0, 3}, 2) != canonical_key({0, 1}, 2)
    assert aut_group_order(set(), 3) == cube_group_order(3)
    assert lexicographic_min_cell({1, 2}, 2) == frozenset({0, 3})


def test_perm_canon_labeling_is_canonical():
    rng = random.Random(2)
    C = rng.sample(range(1 << 9), 60)
    pc = perm_canon(C, 9)
    perm = list(range(9))
    rng.shuffle(perm)
    D = [sum(((x >> (8 - j)) & 1) << (8 - perm[j]) for j in range(9)) for x in C]
    assert perm_canon(D, 9).best == pc.best
    assert sorted(pc.canonical_words().tolist()) == sorted(perm_canon(D, 9).canonical_words().tolist())


def test_cube_canon_order_matches_orbit_stabilizer():
    rng = random.Random(8)
    C = rng.sample(range(1 << 5), 12)
    cc = CubeCanon(C, 5)
    orbit_sizes = sum(len(o) for o in cc.orbits())
    assert orbit_sizes == 12
    assert cc.order == oracles.stabilizer_order(C, 5)
