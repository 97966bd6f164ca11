"""Cavity-reservoir output states and rectangular indicator sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .monogamy import CAVITY_COMPONENTS, CorrelationCache, pure3_batch
from .qstate import PureState, acin_amplitudes, gen_w_amplitudes, two_param_amplitudes

CAVITY_LABELS = ("c1", "r1", "c2", "r2")
KT_INFINITY = 30.0
CHUNK = 1 << 16


@dataclass(frozen=True)
class DampingParams:
    kappa_t: float
    alpha: float

    def __post_init__(self):
        if not self.kappa_t >= 0:
            raise ValueError(f"kappa_t must be >= 0, got {self.kappa_t!r}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")

    @property
    def beta(self) -> float:
        return math.sqrt(1 - self.alpha ** 2)


def damping_amplitudes(kappa_t: float) -> tuple[float, float]:
    """Cavity survival amplitude xi and leaked amplitude chi at time kappa*t."""
    if kappa_t < 0:
        raise ValueError(f"kappa_t must be >= 0, got {kappa_t!r}")
    xi = math.exp(-kappa_t / 2)
    chi = math.sqrt(-math.expm1(-kappa_t))
    return xi, chi


def output_state(p: DampingParams | float, alpha: float | None = None) -> PureState:
    """alpha|0000> + beta|phi_t>|phi_t> on the register (c1, r1, c2, r2),
    with |phi_t> = xi|10> + chi|01> on each cavity-reservoir pair."""
    if not isinstance(p, DampingParams):
        p = DampingParams(float(p), float(alpha))
    xi, chi = damping_amplitudes(p.kappa_t)
    phi_t = np.array([0.0, chi, xi, 0.0])
    psi = p.beta * np.kron(phi_t, phi_t)
    psi[0] += p.alpha
    return PureState.from_vector(psi, CAVITY_LABELS)


# ------------------------------------------------------------------ tables

@dataclass
class SweepTable:
    """Values of named indicators on a rectangular parameter grid.

    ``values[name]`` has one axis per entry of ``axes``, in order.
    """

    axes: list[tuple[str, np.ndarray]]
    values: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.axes = [(str(n), np.asarray(g, dtype=float)) for n, g in self.axes]
        if not self.axes:
            raise ValueError("sweep needs at least one axis")
        for name, grid in self.axes:
            if grid.ndim != 1 or grid.size == 0:
                raise ValueError(f"axis {name!r} is empty")
        for name, v in self.values.items():
            if v.shape != self.shape:
                raise ValueError(f"indicator {name!r} has shape {v.shape}, grid is {self.shape}")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(g.size for _, g in self.axes)

    @property
    def axis_names(self) -> list[str]:
        return [n for n, _ in self.axes]

    def rows(self):
        """Yield (axis values, indicator values) in row-major axis order."""
        names = list(self.values)
        for idx in np.ndindex(*self.shape):
            point = tuple(g[i] for (_, g), i in zip(self.axes, idx))
            yield point, tuple(self.values[n][idx] for n in names)

    def column(self, name: str) -> np.ndarray:
        return self.values[name]


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid; the endpoint is kept when it lands on a step."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError(f"empty grid {start}:{stop}:{step}")
    return start + step * np.arange(count)


# ------------------------------------------------------------- indicators

PURE3_FAMILIES: dict[str, tuple[tuple[str, ...], Callable]] = {
    "gen_w": (("theta", "phi"), gen_w_amplitudes),
    "two_param": (("p", "eps"), two_param_amplitudes),
    "acin": (("theta0", "theta1", "theta2", "theta3", "phi"), acin_amplitudes),
}
PURE3_INDICATORS = ("sqd_dist", "qd_dist", "t1", "t2", "three_tangle", "q3_mean")
CAVITY_INDICATORS = tuple(CAVITY_COMPONENTS)
FAMILY_PARAMS = {**{k: v[0] for k, v in PURE3_FAMILIES.items()}, "cavity": ("kt", "alpha")}


def _pure3_values(amps: np.ndarray, names: Sequence[str]) -> dict[str, np.ndarray]:
    base = pure3_batch(amps)
    out = {}
    for name in names:
        if name == "q3_mean":
            out[name] = (base["sqd_dist"] + pure3_batch(amps, 1)["sqd_dist"]
                         + pure3_batch(amps, 2)["sqd_dist"]) / 3
        else:
            out[name] = base[name]
    return out


def _resolve(family: str, axes, fixed) -> tuple[tuple[str, ...], dict[str, float]]:
    if family not in FAMILY_PARAMS:
        raise ValueError(f"unknown sweep family {family!r}; known: {sorted(FAMILY_PARAMS)}")
    params = FAMILY_PARAMS[family]
    fixed = dict(fixed or {})
    if family == "acin":
        fixed.setdefault("phi", 0.0)
    names = [n for n, _ in axes]
    for n in list(names) + list(fixed):
        if n not in params:
            raise ValueError(f"{family} has parameters {params}, not {n!r}")
    missing = [p for p in params if p not in names and p not in fixed]
    if missing:
        raise ValueError(f"{family} needs values for {missing}")
    if set(names) & set(fixed):
        raise ValueError("a parameter cannot be both swept and fixed")
    return params, fixed


def indicator_sweep(family: str, axes: Sequence[tuple[str, Sequence[float]]],
                    indicators: Sequence[str], fixed: dict[str, float] | None = None,
                    progress: Callable[[int, int], None] | None = None) -> SweepTable:
    """Evaluate ``indicators`` on every point of the grid spanned by ``axes``.

    Three-qubit families (gen_w, two_param, acin) go through the batched
    kernel; the cavity family evaluates each point through discord routes.
    """
    params, fixed = _resolve(family, axes, fixed)
    table = SweepTable(list(axes))
    indicators = list(indicators)
    if not indicators:
        raise ValueError("no indicators requested")
    known = CAVITY_INDICATORS if family == "cavity" else PURE3_INDICATORS
    unknown = [i for i in indicators if i not in known]
    if unknown:
        raise ValueError(f"unknown indicator(s) {unknown} for {family}; known: {known}")

    shape = table.shape
    total = int(np.prod(shape))
    out = {name: np.empty(total) for name in indicators}
    names = table.axis_names

    if family == "cavity":
        for flat, point in enumerate(product(*(g for _, g in table.axes))):
            values = dict(fixed, **dict(zip(names, point)))
            cache = CorrelationCache(output_state(values["kt"], values["alpha"]))
            for name in indicators:
                out[name][flat] = CAVITY_COMPONENTS[name](cache)
            if progress:
                progress(flat + 1, total)
    else:
        builder = PURE3_FAMILIES[family][1]
        mesh = np.meshgrid(*(g for _, g in table.axes), indexing="ij")
        flat_axes = dict(zip(names, (m.reshape(-1) for m in mesh)))
        for lo in range(0, total, CHUNK):
            hi = min(lo + CHUNK, total)
            args = [flat_axes[p][lo:hi] if p in flat_axes else fixed[p] for p in params]
            amps = builder(*args).reshape(hi - lo, 8)
            amps = amps / np.linalg.norm(amps, axis=1, keepdims=True)
            for name, v in _pure3_values(amps, indicators).items():
                out[name][lo:hi] = v
            if progress:
                progress(hi, total)
    table.values = {n: v.reshape(shape) for n, v in out.items()}
    return table


# ---------------------------------------------------------------- figures

DEFAULT_KT = dict(start=0.0, stop=6.0, step=0.05)
DEFAULT_ALPHA = dict(start=0.05, stop=0.95, step=0.05)


def figure_sweep(number: int, panel: str = "left", kt_grid=None, alpha_grid=None,
                 acin_divisions: int = 40) -> SweepTable:
    """Canned sweeps with the figure parameters of the cavity and W-state studies."""
    kt = grid(**DEFAULT_KT) if kt_grid is None else np.asarray(kt_grid, float)
    if number == 1:
        if panel == "left":
            return indicator_sweep("gen_w", [("phi", grid(0, math.pi / 2, math.pi / 180))],
                                   ["qd_dist", "sqd_dist"], {"theta": math.pi / 4})
        if panel == "right":
            return indicator_sweep("two_param", [("p", grid(0, 1, 0.01))],
                                   ["qd_dist", "sqd_dist"], {"eps": 0.5})
        raise ValueError(f"figure 1 has panels left/right, not {panel!r}")
    if number == 2:
        g = math.pi / 2 / acin_divisions * np.arange(acin_divisions + 1)
        return indicator_sweep("acin", [(f"theta{i}", g) for i in range(4)], ["sqd_dist"],
                               {"phi": 0.0})
    if number == 4:
        alpha = grid(**DEFAULT_ALPHA) if alpha_grid is None else np.asarray(alpha_grid, float)
        return indicator_sweep("cavity", [("kt", kt), ("alpha", alpha)],
                               ["q4_13", "q4_22", "q3_c1", "q3_r1"])
    if number == 5:
        return indicator_sweep("cavity", [("kt", kt)], list(CAVITY_INDICATORS),
                               {"alpha": 1 / math.sqrt(10)})
    raise ValueError(f"no canned sweep for figure {number}")


def is_unimodal(values: Sequence[float], tol: float = 1e-7) -> bool:
    """True when the sequence never decreases before its maximum and never
    increases after it, up to ``tol``."""
    v = np.asarray(values, dtype=float)
    k = int(np.argmax(v))
    return bool(np.all(np.diff(v[:k + 1]) >= -tol) and np.all(np.diff(v[k:]) <= tol))


def peak_offsets(table: SweepTable, pairs=(("q4_13", "e4_13"), ("q4_22", "e4_22"),
                                           ("q3_c1", "e3_c1"), ("q3_r1", "e3_r1"))) -> dict:
    """Location of the correlation and entanglement peaks along the first axis."""
    (axis, g), = table.axes[:1]
    report = {}
    for q, e in pairs:
        iq, ie = int(np.argmax(table.values[q])), int(np.argmax(table.values[e]))
        report[f"{q}/{e}"] = {
            f"{axis}_peak_{q}": float(g[iq]), f"{axis}_peak_{e}": float(g[ie]),
            "bin_offset": ie - iq,
            f"max_{q}": float(table.values[q].max()), f"max_{e}": float(table.values[e].max()),
        }
    return report
