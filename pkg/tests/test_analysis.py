import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cubepart.analysis import (
    CycleFormula,
    IdentityViolation,
    check_vanishing,
    cycle_formula,
    cycle_statistics,
    fourier,
    fourier_dense,
    full_report,
    group_table,
    induced_cycles,
    subcube_distribution,
    walsh_hadamard,
)
from cubepart.partition import Partition, QuotientMatrix

SMALL = [(3, (2, 1, 3, 0)), (3, (0, 3, 1, 2)), (4, (2, 2, 2, 2)), (4, (1, 3, 1, 3)), (4, (3, 1, 3, 1)),
         (3, (1, 2, 2, 1))]


def _small_partitions():
    for n, S in SMALL:
        for C in oracles.all_equitable(n, S)[:12]:
            yield n, QuotientMatrix(*S), Partition(n, frozenset(C))


def test_cycle_formula_text():
    f = CycleFormula.parse("4^64 40^8 120^8")
    assert f.as_dict() == {4: 64, 40: 8, 120: 8}
    assert f.total == 4 * 64 + 40 * 8 + 120 * 8
    assert str(f) == "4^64 40^8 120^8"
    assert CycleFormula.parse(str(CycleFormula.from_lengths([8, 4, 8]))) == CycleFormula(((4, 1), (8, 2)))
    with pytest.raises(ValueError):
        CycleFormula.parse("x^2")


def test_q2_square():
    assert cycle_formula(range(4), 2).as_dict() == {4: 1}
    (c,) = induced_cycles(range(4), 2)
    assert c.directions() == {1, 2}


def test_degree_must_be_two():
    with pytest.raises(ValueError):
        induced_cycles({0, 1}, 2)


def test_cycles_match_components():
    for n, S, P in _small_partitions():
        if S.s_pp != 2:
            continue
        cyc = induced_cycles(P.cell_plus, n)
        assert sorted(c.length for c in cyc) == oracles.component_sizes(P.cell_plus, n)
        for c in cyc:
            for a, b in zip(c.words, c.words[1:] + c.words[:1]):
                assert (a ^ b).bit_count() == 1


def test_cycle_statistics():
    st_ = cycle_statistics(range(4), 2)
    assert st_.formula.as_dict() == {4: 1}
    assert st_.translation_classes == 1
    # two squares of Q3 that are translates of each other
    st_ = cycle_statistics({0, 1, 2, 3, 12, 13, 14, 15}, 4)
    assert st_.translation_classes == 1 and st_.direction_sizes == ((2, 2),)


def test_fourier_against_oracle():
    for n, S, P in _small_partitions():
        want = oracles.fourier(P.cell_plus, n, (S.s_pp, S.s_pm, S.s_mp, S.s_mm))
        assert fourier_dense(P, S) == want
        spec = fourier(P, S)
        assert all(spec[y] == want[y] for y in range(1 << n))
        assert check_vanishing(P, S)
        assert spec.sum_of_squares() == S.s_pm * S.s_mp
        assert list(spec.inverse()) == [S.s_pm if x in P.cell_plus else -S.s_mp for x in range(1 << n)]


def test_divisibility_form():
    # the n=3 example has a coefficient 1 while 2^(w-n)(s_pm+s_mp) = 2:
    # only coefficient + s_mp is a multiple
    S = QuotientMatrix(0, 3, 1, 2)
    spec = fourier(Partition(3, frozenset({0, 7})), S)
    assert Fraction(1) in spec.values()
    assert all((v + S.s_mp) % 2 == 0 for v in spec.values())


def test_identity_violation_on_non_equitable():
    with pytest.raises(IdentityViolation):
        fourier(Partition(3, frozenset({0, 1})), QuotientMatrix(0, 3, 1, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=16, max_size=16))
def test_walsh_hadamard_is_an_involution_up_to_scale(v):
    a = np.array(v)
    assert (walsh_hadamard(walsh_hadamard(a)) == 16 * a).all()
    x = np.arange(16)
    F = [sum(v[i] * (-1) ** bin(i & y).count("1") for i in x) for y in range(16)]
    assert walsh_hadamard(a).tolist() == F


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 63), max_size=40), st.integers(0, 6))
def test_subcube_distribution_against_brute_force(C, k):
    assert subcube_distribution(C, 6, k) == oracles.subcube_histogram(C, 6, k)


def test_full_cube_distribution():
    h = subcube_distribution(range(1 << 12), 12, 4)
    assert h == {16: 126720}


def test_report_first_class(reports):
    r = reports[1]
    assert (r.aut_order, r.periods, r.orbits, r.cycle_formula) == (983040, 128, 1, "4^384")
    assert r.strength == 7 and r.square and not r.heavy and not r.strength_plus
    assert r.fourier_histogram == {"-2": 5, "0": 480, "2": 10}
    assert r.subcube_histogram == {4: 1920, 6: 122880, 8: 1920}
    assert r.as_text().startswith("class=1 size=1536 strength=7 plus=no square=yes")
    doc = json.loads(r.as_json())
    assert doc["aut_order"] == 983040 and doc["cycle_formula"] == "4^384"


def test_report_examples(reports):
    assert (reports[95].orbits, reports[95].cycle_formula, reports[95].aut_order) == (2, "24^64", 768)
    assert (reports[69].aut_order, reports[69].cycle_formula) == (160, "4^64 40^8 120^8")


def test_report_rejects_non_equitable(target):
    with pytest.raises(ValueError):
        full_report(Partition(12, frozenset(range(1536))), target)


def test_extended_statistics(appendix, target):
    r = full_report(appendix[1], target, "1", extended=True)
    assert r.extra["translation_classes"] >= 1
    assert "directions=" in r.as_text()


def test_group_table(reports):
    table = group_table(list(reports.values()))
    lines = table.splitlines()
    assert lines[0] == "# by cycle formula"
    assert "4^384: 1" in lines
    assert "983040: 1" in lines
    i = lines.index("# by automorphism group order")
    orders = [int(ln.split(":")[0]) for ln in lines[i + 1:]]
    assert orders == sorted(orders, reverse=True)
    ids = [x for ln in lines[1:i] for x in ln.split(": ")[1].split()]
    assert sorted(map(int, ids)) == list(range(1, 104))


def test_reports_are_invariant(appendix, target):
    from cubepart.cube import CubeAutomorphism, apply_automorphism

    rng = random.Random(3)
    P = appendix[60]
    perm = list(range(1, 13))
    rng.shuffle(perm)
    Q = Partition(12, frozenset(apply_automorphism(CubeAutomorphism(12, rng.randrange(4096), tuple(perm)),
                                                    P.cell_plus)))
    a, b = full_report(P, target, "x"), full_report(Q, target, "x")
    assert a.as_text().split(" fourier=")[0] == b.as_text().split(" fourier=")[0]
    assert a.subcube_histogram == b.subcube_histogram
    # translations flip signs of coefficients; magnitudes are invariant
    assert _magnitudes(a) == _magnitudes(b)


def _magnitudes(r):
    out = {}
    for k, v in r.fourier_histogram.items():
        out[abs(Fraction(k))] = out.get(abs(Fraction(k)), 0) + v
    return out


@pytest.mark.parametrize("k", [82, 64, 95])
def test_aut_order_against_independent_search(reports, appendix, k):
    assert reports[k].aut_order == oracles.aut_order_by_translations(appendix[k].cell_plus, 12)


@pytest.mark.slow
def test_all_aut_orders_against_independent_search(reports, appendix):
    for k, P in appendix.items():
        assert reports[k].aut_order == oracles.aut_order_by_translations(P.cell_plus, 12), k
