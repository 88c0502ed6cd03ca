import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cubepart.canon import translational_periods
from cubepart.constructions import (
    GRAY_TO_Z4,
    Q3_QUOTIENT,
    Q6_QUOTIENT,
    AdditionScheme,
    adapted_base,
    base_partition_q3,
    base_partition_q6,
    chain_q6,
    construct,
    double,
    doubled_quotient,
    scheme_periods,
)
from cubepart.partition import Partition, QuotientMatrix, strength, verify_equitable


def test_parse():
    assert AdditionScheme.parse("z4z2z2z2z2").blocks == ("z4", "z2", "z2", "z2", "z2")
    assert AdditionScheme.parse("Z4, Z4, Z4").width == 6
    for bad in ("", "z3", "z4z", "zz4", "z2 x"):
        with pytest.raises(ValueError):
            AdditionScheme.parse(bad)


def test_gray_map():
    assert [GRAY_TO_Z4[v] for v in (0b00, 0b01, 0b11, 0b10)] == [0, 1, 2, 3]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_blockwise_addition_is_a_group(a, b, c):
    for name in ("z2z2z2z2z2z2", "z4z4z4", "z4z2z2z2z2", "z4z4z2z2"):
        sc = AdditionScheme.parse(name)
        add = lambda x, y: int(sc.add(np.array([x]), np.array([y]), 6)[0])
        assert add(a, b) == add(b, a)
        assert add(add(a, b), c) == add(a, add(b, c))
        assert add(a, 0) == a
    assert int(AdditionScheme.parse("z4").add(np.array([1]), np.array([1]), 2)[0]) == 0b11
    assert int(AdditionScheme.parse("z4").add(np.array([0b10]), np.array([0b01]), 2)[0]) == 0


def test_base_partitions():
    P = base_partition_q6()
    assert len(P) == 24
    assert verify_equitable(P, Q6_QUOTIENT)
    assert strength(P.cell_plus, 6) == 3
    A = base_partition_q3()
    assert verify_equitable(A, Q3_QUOTIENT)


@pytest.mark.parametrize("n,S", [(3, (2, 1, 3, 0)), (3, (0, 3, 1, 2)), (4, (1, 3, 1, 3))])
def test_z2_doubling_is_equitable(n, S):
    S = QuotientMatrix(*S)
    for C in oracles.all_equitable(n, (S.s_pp, S.s_pm, S.s_mp, S.s_mm))[:6]:
        D = double(Partition(n, frozenset(C)))
        assert verify_equitable(D, doubled_quotient(S))
        assert oracles.is_equitable(D.cell_plus, 2 * n, (2 * S.s_pp, 2 * S.s_pm, 2 * S.s_mp, 2 * S.s_mm))


def test_z2_doubling_periods():
    # (x, y) -> (x + t, y) and (x + t, y + t) style shifts: every (t, t) is a period
    P = base_partition_q3()
    D = double(P)
    periods = set(translational_periods(D.cell_plus, 6))
    assert all((t << 3 | t) in periods for t in range(8))


def test_chain():
    P = chain_q6()
    assert len(P) == 48
    assert verify_equitable(P, QuotientMatrix(4, 2, 6, 0))


def test_scheme_width_checked():
    with pytest.raises(ValueError):
        double(base_partition_q6(), "z4z4")
    with pytest.raises(ValueError):
        AdditionScheme.parse("z2").add(np.array([0]), np.array([0]), 2)


def test_adapted_base_is_equivalent():
    P = base_partition_q6()
    Q = adapted_base(P, "z4z4z4")
    assert verify_equitable(Q, Q6_QUOTIENT)
    assert oracles.stabilizer_order(P.cell_plus, 6) == oracles.stabilizer_order(Q.cell_plus, 6)
    z4 = AdditionScheme.parse("z4z4z4")
    assert scheme_periods(Q, z4) >= scheme_periods(P, z4)
    assert adapted_base(P, "z2z2z2z2z2z2") is P


@pytest.mark.parametrize("scheme", ["z2z2z2z2z2z2", "z4z4z4", "z4z2z2z2z2", "z4z4z2z2"])
def test_constructions_are_equitable(scheme, target):
    P = construct(scheme)
    assert len(P) == 1536
    assert verify_equitable(P, target)
    assert strength(P.cell_plus, 12) == 7
