import os
import subprocess
import sys

import numpy as np
import pytest

from cubepart import kernels
from cubepart.codec import decode_all


def test_backend_is_listed():
    assert kernels.BACKEND in kernels.BACKENDS
    assert "python" in kernels.BACKENDS


def test_pure_switch():
    code = "from cubepart import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, CUBEPART_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_neighbor_counts(backend):
    mod = kernels.BACKENDS[backend]
    rng = np.random.default_rng(1)
    chi = rng.integers(0, 2, 1 << 7).astype(np.uint8)
    got = mod.neighbor_counts(chi, 7)
    want = [sum(int(chi[x ^ (1 << b)]) for b in range(7)) for x in range(1 << 7)]
    assert list(got) == want


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_complete_upward_rebuilds_fixture(backend):
    mod = kernels.BACKENDS[backend]
    P = decode_all()[50]
    chi = P.indicator().astype(np.uint8)
    low = chi.copy()
    low[np.array([x for x in range(1 << 12) if x.bit_count() > 4])] = 0
    ok, out = mod.complete_upward(low, 12, 5, 6, 16)
    assert ok
    assert np.array_equal(np.asarray(out, dtype=np.uint8), chi)


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_complete_upward_detects_failure(backend):
    mod = kernels.BACKENDS[backend]
    chi = np.zeros(1 << 4, dtype=np.uint8)
    chi[:] = 0
    chi[0] = 1
    chi[0b0001] = chi[0b0010] = chi[0b0100] = chi[0b1000] = 1
    # quota 3/4 of each downset: weight 2 words need 3 of 4, impossible with deficit 1
    ok, _ = mod.complete_upward(chi, 4, 2, 1, 4)
    assert not ok
