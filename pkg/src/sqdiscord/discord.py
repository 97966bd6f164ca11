"""Quantum discord by numeric minimization, the X-state rule, or Koashi-Winter.

Measurements are rank-1 projective measurements on the measured block,
which must be a qubit or have a rank <= 2 marginal (a logic qubit).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .entanglement import eof_between
from .qstate import (
    BlockLike,
    DensityMatrix,
    NumericalFailure,
    PureState,
    RankError,
    State,
    SUPPORT_CUTOFF,
    compress_support,
    matrix_entropy,
    purify,
    reduced_matrix,
    resolve_block,
)

ROUTES = ("auto", "numeric", "xstate", "koashi_winter")
GRID_THETA = np.linspace(0.0, np.pi, 24)
GRID_PHI = np.linspace(0.0, 2 * np.pi, 48, endpoint=False)
N_STARTS = 3
CLIP_TOL = 1e-9
XFORM_TOL = 1e-10
PURE_TOL = 1e-12

_PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


@dataclass(frozen=True)
class MeasurementSetting:
    """Bloch angles of the projector |m0><m0| of a qubit measurement."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= math.pi + 1e-12) or not (-1e-12 <= self.phi < 2 * math.pi + 1e-12):
            raise ValueError(f"measurement angles out of range: {self}")

    @classmethod
    def from_bloch(cls, n) -> "MeasurementSetting":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = math.acos(min(1.0, max(-1.0, n[2])))
        phi = math.atan2(n[1], n[0]) % (2 * math.pi) if math.hypot(n[0], n[1]) > 1e-15 else 0.0
        return cls(theta, phi)

    @property
    def bloch(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def kets(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([c, e * s]), np.array([-s * e.conjugate(), c])


SIGMA_X = MeasurementSetting(math.pi / 2, 0.0)


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical: float
    mutual: float
    optimal_setting: MeasurementSetting | None
    route: str

    @property
    def squared(self) -> float:
        return self.discord ** 2


# ------------------------------------------------------------ entropic parts

def _blocks(state: State, a: BlockLike, b: BlockLike) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ia = resolve_block(state.labels, a)
    ib = resolve_block(state.labels, b)
    if set(ia) & set(ib):
        raise ValueError(f"blocks {ia} and {ib} overlap")
    return ia, ib


def conditional_entropy(rho: State, a: BlockLike, b: BlockLike) -> float:
    """S(A|B) = S(AB) - S(B); negative for entangled states."""
    ia, ib = _blocks(rho, a, b)
    return matrix_entropy(reduced_matrix(rho, ia + ib)) - matrix_entropy(reduced_matrix(rho, ib))


def mutual_information(rho: State, a: BlockLike, b: BlockLike) -> float:
    ia, ib = _blocks(rho, a, b)
    return (matrix_entropy(reduced_matrix(rho, ia)) + matrix_entropy(reduced_matrix(rho, ib))
            - matrix_entropy(reduced_matrix(rho, ia + ib)))


def _measured_pair(state: State, ia, ib) -> tuple[np.ndarray, int]:
    """Matrix over (a, measured logic qubit) and the dimension of a."""
    keep = list(ia) + list(ib)
    m = reduced_matrix(state, keep)
    m = m / np.trace(m).real
    if len(ib) > 1:
        sub = DensityMatrix(m, [str(i) for i in keep])
        sub, _ = compress_support(sub, list(range(len(ia), len(keep))))
        m = sub.entries
    return m, 2 ** len(ia)


def correlation_tensor(m: np.ndarray) -> np.ndarray:
    """T[mu, nu] = Tr[m (sigma_mu x sigma_nu)] for a two-qubit matrix."""
    ops = np.einsum("mab,ncd->mnacbd", _PAULI, _PAULI).reshape(4, 4, 4, 4)
    return np.ascontiguousarray(np.einsum("mnij,ji->mn", ops, m).real)


def _qubit_objective(m: np.ndarray):
    T = correlation_tensor(m)

    def f(theta, phi):
        theta = np.ascontiguousarray(theta, dtype=float)
        phi = np.ascontiguousarray(phi, dtype=float)
        out = np.empty(theta.shape[0])
        kernels.measured_entropy_batch(T, theta, phi, out)
        return out
    return f


def _general_objective(m: np.ndarray, da: int):
    r = m.reshape(da, 2, da, 2)

    def f(theta, phi):
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        e = np.exp(1j * phi)
        total = np.zeros(theta.shape[0])
        for ket in (np.stack([c, e * s], -1), np.stack([-s * e.conj(), c], -1)):
            sig = np.einsum("nb,ibkc,nc->nik", ket.conj(), r, ket)
            p = np.trace(sig, axis1=1, axis2=2).real
            ok = p >= 1e-12
            w = np.linalg.eigvalsh(sig[ok] / p[ok, None, None])
            w = np.where(w > 1e-12, w, 1.0)
            total[ok] += p[ok] * -np.sum(w * np.log2(w), axis=1)
        return total
    return f


def _objective(m: np.ndarray, da: int):
    return _qubit_objective(m) if da == 2 else _general_objective(m, da)


def _minimize_angles(objective) -> tuple[float, MeasurementSetting]:
    tt, pp = np.meshgrid(GRID_THETA, GRID_PHI, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    vals = objective(tt, pp)
    starts = np.lexsort((pp, tt, vals))[:N_STARTS]

    def scalar(x):
        return float(objective(np.array([x[0]]), np.array([x[1]]))[0])

    best = None
    for i in starts:
        res = minimize(scalar, [tt[i], pp[i]], method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 4000})
        setting = MeasurementSetting.from_bloch(_bloch(res.x))
        value = scalar([setting.theta, setting.phi])
        cand = (value, setting.theta, setting.phi)
        if best is None or cand < best:
            best = cand
    return best[0], MeasurementSetting(best[1], best[2])


def _bloch(x) -> np.ndarray:
    st = math.sin(x[0])
    return np.array([st * math.cos(x[1]), st * math.sin(x[1]), math.cos(x[0])])


def min_measured_conditional_entropy(rho: State, a: BlockLike, b: BlockLike
                                     ) -> tuple[float, MeasurementSetting]:
    """Minimum over projective measurements on b of sum_j p_j S(A|j).

    Coarse 24x48 angle grid, then Nelder-Mead from the three best grid
    points. Ties are broken by angle so the result is deterministic.
    """
    ia, ib = _blocks(rho, a, b)
    m, da = _measured_pair(rho, ia, ib)
    value, setting = _minimize_angles(_objective(m, da))
    return max(value, 0.0), setting


def measured_conditional_entropy(rho: State, a: BlockLike, b: BlockLike,
                                 setting: MeasurementSetting) -> float:
    ia, ib = _blocks(rho, a, b)
    m, da = _measured_pair(rho, ia, ib)
    return float(_objective(m, da)(np.array([setting.theta]), np.array([setting.phi]))[0])


# ----------------------------------------------------------------- X states

_OFF_X = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, PureState):
        rho = rho.density_matrix()
    return rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def is_x_form(rho, tol: float = XFORM_TOL) -> bool:
    m = _as_matrix(rho)
    return m.shape == (4, 4) and max(abs(m[i, j]) for i, j in _OFF_X) <= tol


def xstate_criterion(rho) -> bool:
    """Sufficient condition for sigma_x being the optimal measurement."""
    m = _as_matrix(rho)
    if not is_x_form(m):
        raise ValueError("xstate_criterion needs a two-qubit X-form matrix")
    a00, a11, a22, a33 = (max(m[i, i].real, 0.0) for i in range(4))
    a12, a03 = m[1, 2], m[0, 3]
    tol = 1e-12
    first = abs(a12 + a03) >= abs(a12 - a03) - tol
    second = abs(math.sqrt(a00 * a33) - math.sqrt(a11 * a22)) <= abs(a12) + abs(a03) + tol
    return bool(first and second)


# ------------------------------------------------------------------- routes

def _finish(discord: float, mutual: float, setting, route: str, context: str) -> DiscordResult:
    if discord < -CLIP_TOL:
        raise NumericalFailure(f"negative discord {discord!r} ({route}) for {context}")
    discord = max(discord, 0.0)
    return DiscordResult(discord, mutual - discord, mutual, setting, route)


def _entropies(m: np.ndarray, da: int) -> tuple[float, float, float]:
    db = m.shape[0] // da
    r = m.reshape(da, db, da, db)
    s_a = matrix_entropy(np.einsum("ajbj->ab", r))
    s_b = matrix_entropy(np.einsum("jajb->ab", r))
    return s_a, s_b, matrix_entropy(m)


def xstate_discord(rho) -> DiscordResult:
    """Discord with the sigma_x measurement on the second qubit."""
    m = _as_matrix(rho)
    if not xstate_criterion(m):
        raise ValueError("X-state criterion does not hold; sigma_x is not known optimal")
    s_a, s_b, s_ab = _entropies(m, 2)
    measured = float(_qubit_objective(m)(np.array([SIGMA_X.theta]), np.array([SIGMA_X.phi]))[0])
    return _finish(measured - (s_ab - s_b), s_a + s_b - s_ab, SIGMA_X, "xstate", "X state")


def discord_koashi_winter(global_state: PureState, a: BlockLike, bc: BlockLike,
                          partner: BlockLike) -> DiscordResult:
    """D_{a|bc} = E_f(a, partner) - S(a|bc) for a global pure state."""
    if not isinstance(global_state, PureState):
        raise TypeError("Koashi-Winter route needs a global pure state; purify first")
    ia, ib = _blocks(global_state, a, bc)
    ip = resolve_block(global_state.labels, partner)
    if set(ip) & set(ia + ib) or len(ia) + len(ib) + len(ip) != global_state.n:
        raise ValueError("a, bc and partner must split the register")
    ef = eof_between(global_state, ia, ip)
    m = reduced_matrix(global_state, list(ia) + list(ib))
    s_a, s_b, s_ab = _entropies(m, 2 ** len(ia))
    return _finish(ef - (s_ab - s_b), s_a + s_b - s_ab, None, "koashi_winter",
                   f"blocks {ia}|{ib}")


def _kw_from_pair(m: np.ndarray, la: int, lb: int) -> DiscordResult:
    labels = [f"a{i}" for i in range(la)] + [f"b{i}" for i in range(lb)]
    pure = purify(DensityMatrix(m, labels))
    env = list(range(la + lb, pure.n))
    return discord_koashi_winter(pure, list(range(la)), list(range(la, la + lb)), env)


def quantum_discord(state: State, a: BlockLike, b: BlockLike, route: str = "auto") -> DiscordResult:
    """Discord of the reduced state on a and b, measuring b.

    ``auto`` takes the first applicable of: the pure-cut identity D = S(a),
    the X-state rule, Koashi-Winter via purification of rho_ab (rank <= 2),
    and numeric minimization.
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")
    ia, ib = _blocks(state, a, b)
    full = list(ia) + list(ib)
    m = reduced_matrix(state, full)
    m = m / np.trace(m).real
    da = 2 ** len(ia)
    s_a, s_b, s_ab = _entropies(m, da)
    mutual = s_a + s_b - s_ab
    context = f"{[state.labels[i] for i in ia]}|{[state.labels[i] for i in ib]}"

    w = np.linalg.eigvalsh(m)
    rank = int(np.count_nonzero(w > SUPPORT_CUTOFF))
    if route == "auto" and 1.0 - w[-1] <= PURE_TOL:
        return _finish(s_a, mutual, None, "pure_cut", context)

    def compressed():
        return _measured_pair(state, ia, ib)[0]

    if route == "xstate" or (route == "auto" and len(ia) == 1):
        try:
            pair = compressed()
        except RankError:
            if route == "xstate":
                raise
        else:
            if route == "xstate":
                return xstate_discord(pair)
            if is_x_form(pair) and xstate_criterion(pair):
                return xstate_discord(pair)

    if route == "koashi_winter" or (route == "auto" and rank <= 2):
        try:
            return _kw_from_pair(m, len(ia), len(ib))
        except RankError:
            if route == "koashi_winter":
                raise

    value, setting = min_measured_conditional_entropy(state, ia, ib)
    return _finish(value - (s_ab - s_b), mutual, setting, "numeric", context)
