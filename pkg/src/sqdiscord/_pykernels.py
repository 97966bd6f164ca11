"""Pure numpy implementations of the hot kernels.

Must stay numerically interchangeable with ``_ckernels.pyx``.
"""
import numpy as np

BRANCH_CUTOFF = 1e-12


def _h(x):
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    p = x[m]
    out[m] = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return out


def _branch(v):
    # v[..., 0] is twice the branch probability, v[..., 1:] the unnormalized Bloch vector
    p = 0.5 * v[..., 0]
    ok = p >= BRANCH_CUTOFF
    r = np.zeros_like(p)
    r[ok] = np.minimum(np.linalg.norm(v[ok, 1:], axis=-1) / v[ok, 0], 1.0)
    return np.where(ok, p * _h(0.5 * (1 + r)), 0.0)


def measured_entropy_batch(T, theta, phi, out):
    """Sum_j p_j S(A|j) for a projective qubit measurement at each angle pair.

    ``T[mu, nu] = Tr[rho sigma_mu x sigma_nu]`` with the measured qubit second.
    """
    T = np.asarray(T, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    n = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)
    w = n @ T[:, 1:].T
    base = T[:, 0]
    out[:] = _branch(base + w) + _branch(base - w)
    return out


def _pair_csq(psi, pair_axes):
    # psi has shape (N, 2, 2, 2); move the pair to the front and the traced qubit last
    t = np.moveaxis(psi, [1 + pair_axes[0], 1 + pair_axes[1]], [1, 2])
    k = (-np.einsum("ni,nj->nij", t[:, 0, 0], t[:, 1, 1])
         + np.einsum("ni,nj->nij", t[:, 0, 1], t[:, 1, 0])
         + np.einsum("ni,nj->nij", t[:, 1, 0], t[:, 0, 1])
         - np.einsum("ni,nj->nij", t[:, 1, 1], t[:, 0, 0]))
    fro = np.sum(np.abs(k) ** 2, axis=(1, 2))
    det = np.abs(k[:, 0, 0] * k[:, 1, 1] - k[:, 0, 1] * k[:, 1, 0])
    return np.maximum(fro - 2 * det, 0.0)


def _single(psi, axis):
    t = np.moveaxis(psi, 1 + axis, 1).reshape(len(psi), 2, 4)
    p0 = np.sum(np.abs(t[:, 0]) ** 2, axis=1)
    p1 = np.sum(np.abs(t[:, 1]) ** 2, axis=1)
    x = np.sum(t[:, 0] * t[:, 1].conj(), axis=1)
    disc = np.sqrt((p0 - p1) ** 2 + 4 * np.abs(x) ** 2)
    lam = np.clip(0.5 * (1 + disc), 0, 1)
    det = np.maximum(p0 * p1 - np.abs(x) ** 2, 0.0)
    return _h(lam), 4 * det


def pure3_constituents(amps, out):
    """Columns S_A, S_B, S_C, C2_AB, C2_AC, C2_A|BC for rows of 8 amplitudes."""
    psi = np.asarray(amps, dtype=complex).reshape(-1, 2, 2, 2)
    sa, c2a = _single(psi, 0)
    sb, _ = _single(psi, 1)
    sc, _ = _single(psi, 2)
    out[:, 0] = sa
    out[:, 1] = sb
    out[:, 2] = sc
    out[:, 3] = _pair_csq(psi, (0, 1))
    out[:, 4] = _pair_csq(psi, (0, 2))
    out[:, 5] = c2a
    return out
