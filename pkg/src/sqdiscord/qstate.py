"""Dense state algebra over small ordered qubit registers.

Qubit 0 is the leftmost ket label and Kronecker products follow label
order, so ``|01>`` has amplitude index 1 in a two-qubit register.
"""
from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
ENTROPY_CUTOFF = 1e-12
SUPPORT_CUTOFF = 1e-9

BlockLike = Union[int, str, Iterable[Union[int, str]]]


class NumericalFailure(ArithmeticError):
    """A quantity that must be non-negative came out negative beyond tolerance."""


class RankError(ValueError):
    """A block expected to act as a logic qubit has support of rank > 2."""


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_uppercase[:n])
    return tuple(f"q{i}" for i in range(n))


def _qubit_count(dim: int) -> int:
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


def _check_labels(labels, n: int) -> tuple[str, ...]:
    if labels is None:
        return default_labels(n)
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    if len(set(labels)) != n:
        raise ValueError(f"duplicate labels in {labels}")
    return labels


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over an ordered qubit register."""

    amplitudes: np.ndarray
    labels: tuple[str, ...] = None

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = _qubit_count(amps.size)
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", _check_labels(self.labels, n))

    @classmethod
    def from_vector(cls, vector, labels=None) -> "PureState":
        """Build a state from an unnormalized nonzero vector."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("zero vector")
        return cls(v / norm, labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def density_matrix(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()), self.labels)

    def relabel(self, labels) -> "PureState":
        return PureState(self.amplitudes, labels)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator."""

    entries: np.ndarray
    labels: tuple[str, ...] = None

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        n = _qubit_count(m.shape[0])
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < -PSD_TOL:
            raise ValueError(f"density matrix has eigenvalue {w[0]!r} < 0")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "labels", _check_labels(self.labels, n))

    @property
    def n(self) -> int:
        return len(self.labels)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def rank(self, cutoff: float = SUPPORT_CUTOFF) -> int:
        return int(np.count_nonzero(self.eigenvalues() > cutoff))

    def relabel(self, labels) -> "DensityMatrix":
        return DensityMatrix(self.entries, labels)


State = Union[PureState, DensityMatrix]


def as_density(state: State) -> DensityMatrix:
    if isinstance(state, PureState):
        return state.density_matrix()
    return state


def _split_labels(text: str, labels: Sequence[str]) -> list[str] | None:
    """Split ``text`` into a run of labels, preferring longer labels first."""
    if not text:
        return None
    for lab in sorted(labels, key=len, reverse=True):
        if text.startswith(lab):
            if len(lab) == len(text):
                return [lab]
            rest = _split_labels(text[len(lab):], labels)
            if rest is not None:
                return [lab] + rest
    return None


def resolve_block(labels: Sequence[str], block: BlockLike) -> tuple[int, ...]:
    """Turn labels, indices, or a concatenated label string into indices.

    ``"BC"`` resolves to ``(1, 2)`` when B and C are labels, and
    ``"c2r2"`` to the indices of c2 and r2.
    """
    labels = list(labels)
    n = len(labels)

    def one(item) -> list[int]:
        if isinstance(item, (int, np.integer)):
            i = int(item)
            if not 0 <= i < n:
                raise ValueError(f"qubit index {i} outside register of {n}")
            return [i]
        item = str(item)
        if item in labels:
            return [labels.index(item)]
        if "," in item:
            return [j for part in item.split(",") for j in one(part.strip())]
        split = _split_labels(item, labels)
        if split is not None:
            return [labels.index(lab) for lab in split]
        raise ValueError(f"unknown subsystem {item!r}; register is {labels}")

    if isinstance(block, (int, np.integer, str)):
        idx = one(block)
    else:
        idx = [j for item in block for j in one(item)]
    if not idx:
        raise ValueError("empty block")
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated qubit in block {block!r}")
    return tuple(idx)


@dataclass(frozen=True)
class Partition:
    """Disjoint index blocks; ``block_c`` is optional."""

    block_a: tuple[int, ...]
    block_b: tuple[int, ...]
    block_c: tuple[int, ...] | None = None

    def __post_init__(self):
        blocks = [tuple(self.block_a), tuple(self.block_b)]
        if self.block_c is not None:
            blocks.append(tuple(self.block_c))
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValueError("empty partition block")
            if seen.intersection(b) or len(set(b)) != len(b):
                raise ValueError(f"partition blocks overlap: {blocks}")
            seen.update(b)
        object.__setattr__(self, "block_a", blocks[0])
        object.__setattr__(self, "block_b", blocks[1])
        if self.block_c is not None:
            object.__setattr__(self, "block_c", blocks[2])

    @classmethod
    def parse(cls, text: str, labels: Sequence[str]) -> "Partition":
        """Parse ``"A|BC"`` or ``"c1|r1,c2"`` against a register."""
        parts = [p.strip() for p in text.split("|")]
        if len(parts) not in (2, 3):
            raise ValueError(f"partition {text!r} needs 2 or 3 blocks")
        blocks = [resolve_block(labels, p) for p in parts]
        return cls(*blocks)

    def check(self, n: int) -> None:
        for b in (self.block_a, self.block_b, self.block_c or ()):
            if any(not 0 <= i < n for i in b):
                raise ValueError(f"partition {self} exceeds register of {n} qubits")


@dataclass(frozen=True, eq=False)
class LogicQubitMap:
    """Isometry embedding a 2-dim support into a block's full space.

    Columns are the logic ``|0>`` and ``|1>``; rows follow the block's
    qubits in register order.
    """

    isometry: np.ndarray
    block: tuple[int, ...]
    label: str

    def __post_init__(self):
        v = np.array(self.isometry, dtype=complex)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] != 2 ** len(self.block):
            raise ValueError(f"isometry shape {v.shape} does not fit block {self.block}")
        if np.max(np.abs(v.conj().T @ v - np.eye(2))) > 1e-10:
            raise ValueError("isometry columns are not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "isometry", v)

    def embed(self, logic_vector) -> np.ndarray:
        return self.isometry @ np.asarray(logic_vector, dtype=complex)


# ---------------------------------------------------------------- raw kernels

def _permute_matrix(m: np.ndarray, n: int, order: Sequence[int]) -> np.ndarray:
    order = list(order)
    if order == list(range(n)):
        return m
    t = m.reshape([2] * (2 * n))
    t = t.transpose(order + [n + i for i in order])
    return t.reshape(2 ** n, 2 ** n)


def _permute_vector(v: np.ndarray, n: int, order: Sequence[int]) -> np.ndarray:
    order = list(order)
    if order == list(range(n)):
        return v
    return v.reshape([2] * n).transpose(order).reshape(-1)


def reduced_matrix(state: State, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix as a bare array, qubits in ``keep`` order."""
    keep = list(keep)
    n = state.n
    rest = [i for i in range(n) if i not in keep]
    dk = 2 ** len(keep)
    if isinstance(state, PureState):
        psi = _permute_vector(state.amplitudes, n, keep + rest).reshape(dk, -1)
        return psi @ psi.conj().T
    m = _permute_matrix(state.entries, n, keep + rest)
    dr = 2 ** len(rest)
    return np.einsum("ajbj->ab", m.reshape(dk, dr, dk, dr))


def entropy_of_eigenvalues(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -PSD_TOL:
        raise ValueError(f"eigenvalue {w.min()!r} below -{PSD_TOL}")
    w = w[w > ENTROPY_CUTOFF]
    return float(-np.sum(w * np.log2(w)))


def matrix_entropy(m: np.ndarray) -> float:
    return entropy_of_eigenvalues(np.linalg.eigvalsh(m))


# ----------------------------------------------------------------- operations

def tensor_product(a: State, b: State) -> State:
    if set(a.labels) & set(b.labels):
        raise ValueError(f"label collision between {a.labels} and {b.labels}")
    labels = a.labels + b.labels
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), labels)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), labels)
    raise TypeError("tensor_product needs two states of the same kind")


def partial_trace(rho: State, keep: BlockLike) -> DensityMatrix:
    """Trace out everything outside ``keep``.

    Kept qubits appear in the order given, so ``keep=[1, 0]`` also swaps
    them. Pure inputs are reduced directly from their amplitudes.
    """
    idx = resolve_block(rho.labels, keep)
    m = reduced_matrix(rho, idx)
    return DensityMatrix(m / np.trace(m).real, [rho.labels[i] for i in idx])


def reorder(state: State, order: BlockLike) -> State:
    idx = resolve_block(state.labels, order)
    if sorted(idx) != list(range(state.n)):
        raise ValueError("reorder needs a permutation of the full register")
    labels = [state.labels[i] for i in idx]
    if isinstance(state, PureState):
        return PureState(_permute_vector(state.amplitudes, state.n, idx), labels)
    return DensityMatrix(_permute_matrix(state.entries, state.n, idx), labels)


def von_neumann_entropy(rho: State | np.ndarray) -> float:
    """Entropy in bits; eigenvalues below 1e-12 contribute nothing."""
    if isinstance(rho, PureState):
        return 0.0
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return matrix_entropy(m)


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2 (1-x); accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
        raise ValueError(f"binary entropy argument outside [0, 1]: {x!r}")
    arr = np.clip(arr, 0.0, 1.0)
    out = np.zeros_like(arr)
    inner = (arr > 0) & (arr < 1)
    p = arr[inner]
    out[inner] = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return float(out) if out.ndim == 0 else out


def _pick_column(residual: np.ndarray) -> int:
    norms = np.linalg.norm(residual, axis=0)
    return int(np.flatnonzero(norms >= norms.max() - 1e-12)[0])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (mags[k] / v[k])


def _basis_from_projector(proj: np.ndarray, count: int) -> list[tuple[int, np.ndarray]]:
    # Pivoted Gram-Schmidt on projected computational basis vectors keeps
    # natural basis states (e.g. |00>) as logic basis states when possible.
    residual = proj.copy()
    out = []
    for _ in range(count):
        i = _pick_column(residual)
        v = residual[:, i] / np.linalg.norm(residual[:, i])
        v = _fix_phase(v)
        out.append((i, v))
        residual = residual - np.outer(v, v.conj() @ residual)
    return out


def support_isometry(block_matrix: np.ndarray, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """Two orthonormal columns spanning the support of a rank <= 2 operator."""
    d = block_matrix.shape[0]
    if d == 2:
        return np.eye(2, dtype=complex)
    w, v = np.linalg.eigh(block_matrix)
    keep = w > cutoff
    rank = int(keep.sum())
    if rank > 2:
        raise RankError(f"block has numerical rank {rank} > 2; not a logic qubit")
    sup = v[:, keep]
    proj = sup @ sup.conj().T
    picked = sorted(_basis_from_projector(proj, rank), key=lambda t: t[0])
    cols = [vec for _, vec in picked]
    if rank < 2:
        comp = np.eye(d) - proj
        cols += [vec for _, vec in _basis_from_projector(comp, 2 - rank)]
    return np.column_stack(cols)


def compress_support(rho: State, block: BlockLike) -> tuple[DensityMatrix, LogicQubitMap]:
    """Replace a rank <= 2 block by an equivalent logic qubit.

    The logic qubit takes the position of the block's first qubit and a
    label made by joining the block's labels.
    """
    idx = tuple(sorted(resolve_block(rho.labels, block)))
    n = rho.n
    labels = rho.labels
    label = "".join(labels[i] for i in idx)
    if len(idx) == 1:
        iso = LogicQubitMap(np.eye(2), idx, label)
        return as_density(rho), iso
    iso = support_isometry(reduced_matrix(rho, idx))
    qmap = LogicQubitMap(iso, idx, label)
    rest = [i for i in range(n) if i not in idx]
    dr, db = 2 ** len(rest), 2 ** len(idx)
    m = _permute_matrix(as_density(rho).entries, n, rest + list(idx))
    m = np.einsum("ax,iajb,bz->ixjz", iso.conj(), m.reshape(dr, db, dr, db), iso)
    m = m.reshape(2 * dr, 2 * dr)
    m = m / np.trace(m).real
    new_labels = [labels[i] for i in rest] + [label]
    pos = idx[0]
    k = len(rest)
    order = list(range(pos)) + [k] + list(range(pos, k))
    m = _permute_matrix(m, k + 1, order)
    return DensityMatrix(m, [new_labels[i] for i in order]), qmap


def _env_labels(existing: Sequence[str], count: int) -> list[str]:
    base = "E"
    while any(lab.startswith(base) for lab in existing):
        base = "_" + base
    if count == 1:
        return [base]
    return [f"{base}{i}" for i in range(count)]


def purify(rho: State) -> PureState:
    """Append ceil(log2 rank) environment qubits (at least one) to purify."""
    m = as_density(rho).entries
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    keep = w > ENTROPY_CUTOFF
    w, v = w[keep], v[:, keep]
    k = len(w)
    n_env = max(1, math.ceil(math.log2(k))) if k > 1 else 1
    env = np.zeros((k, 2 ** n_env))
    env[np.arange(k), np.arange(k)] = 1.0
    psi = np.einsum("j,aj,je->ae", np.sqrt(w), v, env).reshape(-1)
    labels = list(rho.labels) + _env_labels(rho.labels, n_env)
    return PureState.from_vector(psi, labels)


def haar_amplitudes(n: int, count: int, seed) -> np.ndarray:
    """``count`` Haar-random n-qubit amplitude vectors as rows."""
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, 2 ** n)) + 1j * rng.standard_normal((count, 2 ** n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_pure_haar(n: int, seed, labels=None) -> PureState:
    return PureState(haar_amplitudes(n, 1, seed)[0], labels)


# ----------------------------------------------------------- named families

def _in_range(name, value, lo, hi, tol=1e-12):
    v = np.asarray(value, dtype=float)
    if np.any(v < lo - tol) or np.any(v > hi + tol) or not np.all(np.isfinite(v)):
        raise ValueError(f"parameter {name}={value!r} outside [{lo}, {hi}]")


def _ket_amps(shape, nq, entries):
    out = np.zeros(tuple(shape) + (2 ** nq,), dtype=complex)
    for bits, amp in entries:
        out[..., int(bits, 2)] = amp
    return out


def gen_w_amplitudes(theta, phi) -> np.ndarray:
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    _in_range("theta", theta, 0, np.pi)
    _in_range("phi", phi, 0, 2 * np.pi)
    s = np.sin(theta)
    return _ket_amps(theta.shape, 3, [
        ("011", s * np.cos(phi)), ("101", s * np.sin(phi)), ("110", np.cos(theta))])


def two_param_amplitudes(p, eps) -> np.ndarray:
    p, eps = np.broadcast_arrays(np.asarray(p, float), np.asarray(eps, float))
    _in_range("p", p, 0, 1)
    _in_range("eps", eps, 0, 1)
    p, eps = np.clip(p, 0, 1), np.clip(eps, 0, 1)
    side = np.sqrt((1 - p) / 2)
    return _ket_amps(p.shape, 3, [
        ("000", np.sqrt(p * eps)), ("111", np.sqrt(p * (1 - eps))),
        ("101", side), ("110", side)])


def acin_amplitudes(theta0, theta1, theta2, theta3, phi=0.0) -> np.ndarray:
    """Standard form with spherical lambdas; thetas in [0, pi/2], phi in [0, pi]."""
    t0, t1, t2, t3, ph = np.broadcast_arrays(*(np.asarray(x, float) for x in
                                                (theta0, theta1, theta2, theta3, phi)))
    for name, t in (("theta0", t0), ("theta1", t1), ("theta2", t2), ("theta3", t3)):
        _in_range(name, t, 0, np.pi / 2)
    _in_range("phi", ph, 0, np.pi)
    s0, s1, s2 = np.sin(t0), np.sin(t1), np.sin(t2)
    return _ket_amps(t0.shape, 3, [
        ("000", np.cos(t0)),
        ("100", s0 * np.cos(t1) * np.exp(1j * ph)),
        ("101", s0 * s1 * np.cos(t2)),
        ("110", s0 * s1 * s2 * np.cos(t3)),
        ("111", s0 * s1 * s2 * np.sin(t3))])


def _ghz(alpha, nq):
    _in_range("alpha", alpha, 0, 1)
    alpha = min(max(float(alpha), 0.0), 1.0)
    return _ket_amps((), nq, [("0" * nq, alpha), ("1" * nq, math.sqrt(1 - alpha ** 2))])


def _w3(a, b, c):
    v = np.array([a, b, c], dtype=float)
    norm2 = float(v @ v)
    if abs(norm2 - 1) > 1e-6:
        raise ValueError(f"w3 amplitudes need a^2+b^2+c^2 = 1, got {norm2!r}")
    v = v / math.sqrt(norm2)
    return _ket_amps((), 3, [("001", v[0]), ("010", v[1]), ("100", v[2])])


def rank2_w_matrix(theta1, theta2, theta3) -> np.ndarray:
    for name, t in (("theta1", theta1), ("theta2", theta2), ("theta3", theta3)):
        _in_range(name, t, 0, np.pi)
    s1, s2 = math.sin(theta1), math.sin(theta2)
    a = math.cos(theta1)
    b = s1 * s2 * math.cos(theta3)
    c = s1 * s2 * math.sin(theta3)
    d = s1 * math.cos(theta2)
    psi1 = _ket_amps((), 3, [("100", a), ("010", b), ("001", c)])
    psi2 = _ket_amps((), 3, [("000", d)])
    m = np.outer(psi1, psi1.conj()) + np.outer(psi2, psi2.conj())
    return m / np.trace(m).real


FAMILIES = {
    # name: (parameter names, builder)
    "gen_w": (("theta", "phi"), lambda t, p: PureState.from_vector(gen_w_amplitudes(t, p))),
    "two_param": (("p", "eps"), lambda p, e: PureState.from_vector(two_param_amplitudes(p, e))),
    "acin": (("theta0", "theta1", "theta2", "theta3", "phi"),
             lambda *a: PureState.from_vector(acin_amplitudes(*a))),
    "ghz3": (("alpha",), lambda a: PureState.from_vector(_ghz(a, 3))),
    "ghz4": (("alpha",), lambda a: PureState.from_vector(_ghz(a, 4))),
    "w3": (("a", "b", "c"), lambda a, b, c: PureState.from_vector(_w3(a, b, c))),
    "cluster4": ((), lambda: PureState(
        _ket_amps((), 4, [("0000", .5), ("0111", -.5), ("1010", -.5), ("1101", .5)]))),
    "rank2_w": (("theta1", "theta2", "theta3"), lambda *t: DensityMatrix(rank2_w_matrix(*t))),
}


def build_named_state(family: str, params: Sequence[float] = ()) -> State:
    """Construct one of the named state families.

    ``acin`` accepts four angles (phase defaults to 0) or five.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown state family {family!r}; known: {sorted(FAMILIES)}")
    names, builder = FAMILIES[family]
    params = [float(x) for x in params]
    if family == "acin" and len(params) == 4:
        params.append(0.0)
    if len(params) != len(names):
        raise ValueError(f"{family} takes parameters {names}, got {len(params)} values")
    return builder(*params)
