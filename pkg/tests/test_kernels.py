import os
import subprocess
import sys

import numpy as np
import pytest

from sqdiscord import _pykernels, kernels
from sqdiscord.discord import GRID_PHI, GRID_THETA, correlation_tensor
from sqdiscord.qstate import haar_amplitudes, partial_trace, random_pure_haar

ckernels = pytest.importorskip("sqdiscord._ckernels", reason="compiled extension not built")


def angle_grid():
    tt, pp = np.meshgrid(GRID_THETA, GRID_PHI, indexing="ij")
    return np.ascontiguousarray(tt.ravel()), np.ascontiguousarray(pp.ravel())


@pytest.mark.parametrize("seed", range(5))
def test_measured_entropy_parity(seed):
    rho = partial_trace(random_pure_haar(3, seed), [0, 1])
    T = correlation_tensor(rho.entries)
    theta, phi = angle_grid()
    a, b = np.empty(theta.size), np.empty(theta.size)
    _pykernels.measured_entropy_batch(T, theta, phi, a)
    ckernels.measured_entropy_batch(T, theta, phi, b)
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_measured_entropy_degenerate_branch():
    # |00><00| measured along z: one branch has zero probability
    T = correlation_tensor(np.diag([1.0, 0, 0, 0]).astype(complex))
    theta, phi = np.array([0.0, np.pi]), np.array([0.0, 0.0])
    a, b = np.empty(2), np.empty(2)
    _pykernels.measured_entropy_batch(T, theta, phi, a)
    ckernels.measured_entropy_batch(T, theta, phi, b)
    np.testing.assert_allclose(a, [0, 0], atol=1e-15)
    np.testing.assert_allclose(b, [0, 0], atol=1e-15)


def test_pure3_parity():
    amps = np.ascontiguousarray(haar_amplitudes(3, 500, seed=9))
    a, b = np.empty((500, 6)), np.empty((500, 6))
    _pykernels.pure3_constituents(amps, a)
    ckernels.pure3_constituents(amps, b)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_pure3_product_rows():
    amps = np.zeros((2, 8), dtype=complex)
    amps[0, 0] = 1
    amps[1, [0, 7]] = 1 / np.sqrt(2)
    out = np.empty((2, 6))
    ckernels.pure3_constituents(amps, out)
    np.testing.assert_allclose(out[0], 0, atol=1e-15)
    np.testing.assert_allclose(out[1], [1, 1, 1, 0, 0, 1], atol=1e-12)


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_pure_python_fallback_via_env():
    env = dict(os.environ, SQDISCORD_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import sqdiscord; print(sqdiscord.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
