import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubepart.cube import (
    CubeAutomorphism,
    Subcube,
    apply_automorphism,
    bit_matrix,
    complement,
    cube_group_order,
    distance,
    enumerate_subcubes,
    neighbors,
    orthogonal,
    permute_words,
    popcount_table,
    subcube_counts,
    unit,
    word_from_str,
    word_to_str,
    words_of_weight,
)

import oracles


def test_unit_and_strings():
    assert word_to_str(unit(1, 4), 4) == "1000"
    assert word_to_str(unit(4, 4), 4) == "0001"
    assert word_from_str("0110") == 6
    with pytest.raises(ValueError):
        word_from_str("01x")
    with pytest.raises(ValueError):
        word_from_str("")


def test_numeric_order_is_lexicographic():
    words = list(range(1 << 5))
    assert sorted(words, key=lambda x: word_to_str(x, 5)) == words


@pytest.mark.parametrize("n", [1, 4, 7, 12])
def test_words_of_weight(n):
    for w in range(n + 1):
        ws = words_of_weight(n, w)
        assert len(ws) == math.comb(n, w)
        assert ws == sorted(ws)
        assert all(x.bit_count() == w for x in ws)


def test_popcount_table():
    tab = popcount_table(10)
    assert all(int(tab[x]) == bin(x).count("1") for x in range(1 << 10))


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                                                      st.integers(0, (1 << n) - 1))))
def test_metric_helpers(args):
    n, x, y = args
    assert distance(x, y) == sum(a != b for a, b in zip(oracles.bits(x, n), oracles.bits(y, n)))
    assert sorted(neighbors(x, n)) == sorted(oracles.nbrs(x, n))
    assert complement(complement(x, n), n) == x
    assert orthogonal(x, y) == all(not (a and b) for a, b in zip(oracles.bits(x, n), oracles.bits(y, n)))


def test_bit_matrix_columns():
    M = bit_matrix(np.array([unit(1, 5), unit(5, 5)]), 5)
    assert M.tolist() == [[1, 0, 0, 0, 0], [0, 0, 0, 0, 1]]


@pytest.mark.parametrize("n,k", [(3, 0), (3, 2), (5, 3), (6, 6)])
def test_subcube_enumeration(n, k):
    cubes = list(enumerate_subcubes(n, k))
    assert len(cubes) == math.comb(n, k) * 2 ** (n - k)
    sets = {frozenset(c.members()) for c in cubes}
    assert len(sets) == len(cubes)
    assert sets == {frozenset(s) for s in oracles.subcubes(n, k)}
    assert all(c.dimension == k and len(c.members()) == 2 ** k for c in cubes)


def test_subcube_counts_total():
    rng = random.Random(3)
    C = rng.sample(range(1 << 7), 40)
    for _, counts in subcube_counts(C, 7, 3):
        assert counts.sum() == 40


def test_subcube_validation():
    with pytest.raises(ValueError):
        Subcube(3, (1, 1), (0, 1))
    with pytest.raises(ValueError):
        list(enumerate_subcubes(3, 4))


def test_group_order():
    assert cube_group_order(12) == 4096 * math.factorial(12)
    assert cube_group_order(3) == len(oracles.group(3))


automorphisms = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.permutations(range(1, n + 1)), st.integers(0, (1 << n) - 1)))

automorphism_pairs = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n),
                        st.permutations(range(1, n + 1)), st.integers(0, (1 << n) - 1),
                        st.permutations(range(1, n + 1)), st.integers(0, (1 << n) - 1)))


@given(automorphism_pairs)
def test_automorphism_group_laws(a):
    n, p, t, q, u = a
    g = CubeAutomorphism(n, t, tuple(p))
    h = CubeAutomorphism(n, u, tuple(q))
    for x in range(min(1 << n, 64)):
        assert g.compose(h)(x) == g(h(x))
        assert g.inverse()(g(x)) == x
        assert distance(g(x), g(x ^ 1)) == 1


@given(automorphisms)
def test_apply_array_matches_scalar(a):
    n, perm, t = a
    g = CubeAutomorphism(n, t, tuple(perm))
    words = np.arange(1 << n)
    assert g.apply_array(words).tolist() == [g(int(x)) for x in words]
    assert apply_automorphism(g, range(1 << n)) == frozenset(range(1 << n))


def test_permute_words_moves_coordinates():
    # coordinate 1 -> coordinate 3
    out = permute_words(np.array([unit(1, 4)]), [2, 0, 1, 3], 4)
    assert int(out[0]) == unit(3, 4)


def test_automorphism_validation():
    with pytest.raises(ValueError):
        CubeAutomorphism(3, 0, (1, 1, 2))
    with pytest.raises(ValueError):
        CubeAutomorphism(3, 8, (1, 2, 3))
