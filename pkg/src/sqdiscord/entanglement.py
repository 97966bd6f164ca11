"""Concurrence, entanglement of formation and the CKW residual tangle."""
from __future__ import annotations

import numpy as np

from .qstate import (
    BlockLike,
    DensityMatrix,
    NumericalFailure,
    PureState,
    State,
    binary_entropy,
    compress_support,
    reduced_matrix,
    resolve_block,
)

WOOTTERS_CUTOFF = 1e-13
SIGMA_YY = np.array([[0, 0, 0, -1],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [-1, 0, 0, 0]], dtype=complex)


def _two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, PureState):
        rho = rho.density_matrix()
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"Wootters concurrence needs a two-qubit state, got shape {m.shape}")
    return m


def wootters_roots(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).

    With rho = W W^dagger these are the singular values of W^T (sy x sy) W.
    Eigenvalues of rho below the cutoff are treated as exact zeros so that
    rounding noise does not leak into the roots at the sqrt scale.
    """
    m = _two_qubit_matrix(rho)
    w, v = np.linalg.eigh(m)
    w = np.where(w > WOOTTERS_CUTOFF, w, 0.0)
    factor = v * np.sqrt(w)
    return np.linalg.svd(factor.T @ SIGMA_YY @ factor, compute_uv=False)


def wootters_lambdas(rho) -> np.ndarray:
    """Descending eigenvalues of rho (sy x sy) rho* (sy x sy)."""
    return wootters_roots(rho) ** 2


def concurrence_wootters(rho) -> float:
    """max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}, l descending."""
    r = wootters_roots(rho)
    return float(max(0.0, r[0] - r[1] - r[2] - r[3]))


def concurrence_pure(psi: PureState, cut) -> float:
    """sqrt(2 (1 - Tr rho_A^2)) across a bipartite cut of a pure state.

    ``cut`` may be a Partition or just the block A.
    """
    block = getattr(cut, "block_a", cut)
    idx = resolve_block(psi.labels, block)
    m = reduced_matrix(psi, idx)
    purity = float(np.sum(np.abs(m) ** 2))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def eof_from_csq(csq):
    """Two-qubit entanglement of formation as a function of C^2."""
    c = np.asarray(csq, dtype=float)
    if np.any(c < -1e-12) or np.any(c > 1 + 1e-12):
        raise ValueError(f"squared concurrence outside [0, 1]: {csq!r}")
    c = np.clip(c, 0.0, 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c)))


def pair_matrix(state: State, a: BlockLike, b: BlockLike) -> np.ndarray:
    """Two-(logic-)qubit matrix of blocks a then b, compressing multi-qubit blocks."""
    ia = resolve_block(state.labels, a)
    ib = resolve_block(state.labels, b)
    if set(ia) & set(ib):
        raise ValueError("blocks overlap")
    keep = list(ia) + list(ib)
    sub = DensityMatrix(_renorm(reduced_matrix(state, keep)), [state.labels[i] for i in keep])
    na = len(ia)
    if len(ib) > 1:
        sub, _ = compress_support(sub, list(range(na, len(keep))))
    if na > 1:
        sub, _ = compress_support(sub, list(range(na)))
    return sub.entries


def _renorm(m):
    return m / np.trace(m).real


def concurrence_between(state: State, a: BlockLike, b: BlockLike) -> float:
    return concurrence_wootters(pair_matrix(state, a, b))


def eof_between(state: State, a: BlockLike, b: BlockLike) -> float:
    return float(eof_from_csq(concurrence_between(state, a, b) ** 2))


def three_tangle(psi: PureState, pivot: BlockLike = 0) -> float:
    """CKW residual C^2_{p|jk} - C^2_{pj} - C^2_{pk} of a three-qubit pure state."""
    if psi.n != 3:
        raise ValueError("three_tangle needs a three-qubit pure state")
    (p,) = resolve_block(psi.labels, pivot)
    j, k = (i for i in range(3) if i != p)
    tau = (concurrence_pure(psi, [p]) ** 2
           - concurrence_between(psi, p, j) ** 2
           - concurrence_between(psi, p, k) ** 2)
    if tau < -1e-9:
        raise NumericalFailure(f"negative three-tangle {tau!r}")
    return max(tau, 0.0)
