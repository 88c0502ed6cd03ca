import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cubepart import kernels
from cubepart.cover import CoverInstance, count_solutions, solve


def random_instance(rng, k_max=20, m_max=8):
    k = rng.randint(0, k_max)
    m = rng.randint(1, m_max)
    p = rng.choice([0.2, 0.35, 0.5])
    dense = [[int(rng.random() < p) for _ in range(m)] for _ in range(k)]
    # targets reachable by some random subset most of the time
    pick = [i for i in range(k) if rng.random() < 0.4]
    targets = [sum(dense[i][c] for i in pick) for c in range(m)]
    if rng.random() < 0.2:
        targets[rng.randrange(m)] += 1
    return dense, targets


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_matches_brute_force(backend):
    rng = random.Random(20240101)
    for _ in range(250):
        dense, targets = random_instance(rng)
        inst = CoverInstance.from_dense(dense, targets)
        got = sorted(tuple(sorted(s.chosen_rows)) for s in solve(inst, backend))
        assert got == oracles.cover_solutions(dense, targets)
        assert count_solutions(inst, backend) == len(got)


def test_backends_agree_in_order():
    if "cython" not in kernels.BACKENDS:
        pytest.skip("compiled kernels not built")
    rng = random.Random(7)
    for _ in range(100):
        dense, targets = random_instance(rng, 16, 6)
        inst = CoverInstance.from_dense(dense, targets)
        assert list(solve(inst, "python")) == list(solve(inst, "cython"))


def test_no_duplicates_with_repeated_rows():
    inst = CoverInstance.from_dense([[1, 0], [1, 0], [0, 1], [0, 1]], [1, 1])
    sols = [s.chosen_rows for s in solve(inst)]
    assert len(sols) == len(set(sols)) == 4


def test_trivial_instances():
    assert count_solutions(CoverInstance(0, (), ())) == 1
    assert count_solutions(CoverInstance.infeasible()) == 0
    assert count_solutions(CoverInstance(2, ((0,), (1,)), (0, 0))) == 1
    assert count_solutions(CoverInstance(1, ((0,),), (2,))) == 0


def test_text_round_trip():
    inst = CoverInstance.from_dense([[1, 0, 1], [0, 1, 1]], [1, 1, 2])
    text = inst.to_text()
    assert text.splitlines()[0] == "3 2"
    again = CoverInstance.from_text(text)
    assert again == inst
    assert [s.chosen_rows for s in solve(again)] == [(0, 1)]


def test_validation():
    with pytest.raises(ValueError):
        CoverInstance(2, ((0,),), (1,))
    with pytest.raises(ValueError):
        CoverInstance(1, ((1,),), (1,))
    with pytest.raises(ValueError):
        CoverInstance(1, ((0, 0),), (1,))
    with pytest.raises(ValueError):
        CoverInstance(1, ((0,),), (-1,))
    with pytest.raises(ValueError):
        CoverInstance.from_text("2 1\n1 1\n10x\n")
    with pytest.raises(ValueError):
        CoverInstance.from_dense([[1]], [1, 1])
    with pytest.raises(ValueError):
        solve(CoverInstance(1, (), (0,)), "fortran").__next__()


def test_labels():
    inst = CoverInstance.from_dense([[1], [1]], [1], row_labels=["a", "b"])
    assert sorted(s.labels(inst)[0] for s in solve(inst)) == ["a", "b"]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), max_size=12),
       st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_solutions_meet_targets(dense, targets):
    inst = CoverInstance.from_dense(dense, targets)
    for s in solve(inst):
        assert inst.column_sums(s.chosen_rows) == targets
