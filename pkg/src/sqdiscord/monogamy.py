"""Square-of-discord distributions, Q3/Q4 indicators and their entanglement twins."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .discord import conditional_entropy, quantum_discord
from .entanglement import concurrence_between, concurrence_pure, eof_between, eof_from_csq
from .qstate import (
    BlockLike,
    PureState,
    RankError,
    State,
    matrix_entropy,
    reduced_matrix,
    resolve_block,
)

MONOGAMY_TOL = 1e-9


@dataclass(frozen=True)
class MonogamyReport:
    """SQD distribution of one pivot in a three-qubit pure state."""

    pivot: str
    partners: tuple[str, str]
    d2_joint: float
    d2_pairs: tuple[float, float]
    t1: float
    t2: float
    total: float
    d_joint: float
    d_pairs: tuple[float, float]
    constituents: dict = field(default_factory=dict)

    @property
    def qd_total(self) -> float:
        """Distribution of the unsquared discord."""
        return self.d_joint - sum(self.d_pairs)


@dataclass
class IndicatorSet:
    """Indicator components keyed by partition strings such as ``"A|BCD"``."""

    q4_1x3: dict[str, float] = field(default_factory=dict)
    q4_2x2: dict[str, float] = field(default_factory=dict)
    q3: dict[str, float] = field(default_factory=dict)
    e4_1x3: dict[str, float] = field(default_factory=dict)
    e4_2x2: dict[str, float] = field(default_factory=dict)
    e3_1x2: dict[str, float] = field(default_factory=dict)

    def merged(self, other: "IndicatorSet") -> "IndicatorSet":
        out = IndicatorSet()
        for name in vars(out):
            getattr(out, name).update(getattr(self, name))
            getattr(out, name).update(getattr(other, name))
        return out

    def items(self):
        for name, comps in vars(self).items():
            for key, value in comps.items():
                yield name, key, value


def _key(labels, *blocks) -> str:
    return "|".join("".join(labels[i] for i in b) for b in blocks)


class CorrelationCache:
    """Memoized squared discords and concurrences between blocks of one state."""

    def __init__(self, state: State, route: str = "auto"):
        self.state = state
        self.route = route
        self._d = {}
        self._c = {}

    def _idx(self, block) -> tuple[int, ...]:
        return resolve_block(self.state.labels, block)

    def discord(self, a: BlockLike, b: BlockLike) -> float:
        key = (self._idx(a), self._idx(b))
        if key not in self._d:
            self._d[key] = quantum_discord(self.state, key[0], key[1], self.route).discord
        return self._d[key]

    def d2(self, a: BlockLike, b: BlockLike) -> float:
        return self.discord(a, b) ** 2

    def c2(self, a: BlockLike, b: BlockLike) -> float:
        ia, ib = self._idx(a), self._idx(b)
        key = tuple(sorted([ia, ib]))
        if key not in self._c:
            if isinstance(self.state, PureState) and len(ia) + len(ib) == self.state.n:
                c = concurrence_pure(self.state, ia)
            else:
                c = concurrence_between(self.state, ia, ib)
            self._c[key] = c
        return self._c[key] ** 2


# -------------------------------------------------------- three-qubit pure

def _pure3(psi: PureState, pivot: BlockLike) -> tuple[int, int, int]:
    if not isinstance(psi, PureState) or psi.n != 3:
        raise ValueError("expected a three-qubit pure state")
    (p,) = resolve_block(psi.labels, pivot)
    j, k = (i for i in range(3) if i != p)
    return p, j, k


def sqd_decomposition(psi: PureState, pivot: BlockLike = 0) -> MonogamyReport:
    """Split D^2_{p|jk} - D^2_{p|j} - D^2_{p|k} into the entanglement terms T1 and T2.

    Pairwise discords follow the Koashi-Winter identity
    D_{p|j} = E_f(pk) - S(p|j), so everything reduces to entropies and
    Wootters concurrences of two-qubit marginals.
    """
    p, j, k = _pure3(psi, pivot)
    s_p = matrix_entropy(reduced_matrix(psi, [p]))
    ef_pj = eof_between(psi, p, j)
    ef_pk = eof_between(psi, p, k)
    cond_pj = conditional_entropy(psi, p, j)
    cond_pk = conditional_entropy(psi, p, k)
    d_pj = max(ef_pk - cond_pj, 0.0)
    d_pk = max(ef_pj - cond_pk, 0.0)
    t1 = s_p ** 2 - ef_pj ** 2 - ef_pk ** 2
    t2 = 2 * cond_pj * (ef_pk - ef_pj - cond_pj)
    total = s_p ** 2 - d_pj ** 2 - d_pk ** 2
    labels = psi.labels
    return MonogamyReport(
        pivot=labels[p],
        partners=(labels[j], labels[k]),
        d2_joint=s_p ** 2,
        d2_pairs=(d_pj ** 2, d_pk ** 2),
        t1=t1,
        t2=t2,
        total=total,
        d_joint=s_p,
        d_pairs=(d_pj, d_pk),
        constituents={
            "S_pivot": s_p,
            f"Ef_{labels[p]}{labels[j]}": ef_pj,
            f"Ef_{labels[p]}{labels[k]}": ef_pk,
            f"S({labels[p]}|{labels[j]})": cond_pj,
            f"S({labels[p]}|{labels[k]})": cond_pk,
        },
    )


def monogamy_condition(report: MonogamyReport, tol: float = MONOGAMY_TOL) -> bool:
    return report.t1 + report.t2 >= -tol


def _clip_measure(q: float) -> float:
    # rounding noise only; genuine violations are returned as-is
    return 0.0 if -MONOGAMY_TOL <= q < 0 else q


def q3_pure(psi: PureState, pivot: BlockLike = 0, route: str = "analytic",
            discord_route: str = "numeric") -> float:
    """Genuine tripartite correlation Q3(p|jk) of a three-qubit pure state.

    ``analytic`` uses S(p)^2 - [E_f(pk) - S(p|j)]^2 - [E_f(pj) - S(p|k)]^2;
    ``distribution`` subtracts pairwise squared discords obtained through
    ``quantum_discord`` with ``discord_route``.
    """
    p, j, k = _pure3(psi, pivot)
    if route == "analytic":
        s_p = matrix_entropy(reduced_matrix(psi, [p]))
        q = (s_p ** 2
             - (eof_between(psi, p, k) - conditional_entropy(psi, p, j)) ** 2
             - (eof_between(psi, p, j) - conditional_entropy(psi, p, k)) ** 2)
    elif route == "distribution":
        q = (quantum_discord(psi, [p], [j, k], "auto").squared
             - quantum_discord(psi, [p], [j], discord_route).squared
             - quantum_discord(psi, [p], [k], discord_route).squared)
    else:
        raise ValueError(f"unknown q3 route {route!r}")
    return _clip_measure(q)


def monogamy_score(psi: PureState, pivot: BlockLike = 0) -> float:
    """D^2_{p|jk} - D^2_{p|j} - D^2_{p|k} evaluated through the discord routes."""
    return q3_pure(psi, pivot, route="distribution")


def score_difference(psi: PureState, reference: PureState, pivot: BlockLike = 0) -> float:
    """Monogamy score of ``psi`` minus that of ``reference``.

    With a bipartite-product reference the second term vanishes, so this
    reduces to Q3 of ``psi``.
    """
    return monogamy_score(psi, pivot) - monogamy_score(reference, pivot)


def q3_mean(psi: PureState) -> float:
    return sum(q3_pure(psi, p) for p in range(3)) / 3.0


def pure3_batch(amps, pivot: int = 0) -> dict[str, np.ndarray]:
    """Vectorized SQD distribution for rows of three-qubit amplitudes.

    Returns arrays keyed ``S_A S_B S_C C2_AB C2_AC C2_A|BC Ef_AB Ef_AC
    D_AB D_AC t1 t2 sqd_dist qd_dist three_tangle`` with A the pivot.
    """
    amps = np.asarray(amps, dtype=complex).reshape(-1, 2, 2, 2)
    if pivot:
        others = [i for i in range(3) if i != pivot]
        amps = amps.transpose([0, 1 + pivot] + [1 + i for i in others])
    amps = np.ascontiguousarray(amps.reshape(-1, 8))
    out = np.empty((amps.shape[0], 6))
    kernels.pure3_constituents(amps, out)
    s_a, s_b, s_c, c2ab, c2ac, c2a = out.T
    ef_ab = eof_from_csq(np.clip(c2ab, 0, 1))
    ef_ac = eof_from_csq(np.clip(c2ac, 0, 1))
    cond_ab = s_c - s_b
    d_ab = ef_ac - cond_ab
    d_ac = ef_ab + cond_ab
    return {
        "S_A": s_a, "S_B": s_b, "S_C": s_c,
        "C2_AB": c2ab, "C2_AC": c2ac, "C2_A|BC": c2a,
        "Ef_AB": ef_ab, "Ef_AC": ef_ac,
        "D_AB": d_ab, "D_AC": d_ac,
        "t1": s_a ** 2 - ef_ab ** 2 - ef_ac ** 2,
        "t2": 2 * cond_ab * (ef_ac - ef_ab - cond_ab),
        "sqd_dist": s_a ** 2 - d_ab ** 2 - d_ac ** 2,
        "qd_dist": s_a - d_ab - d_ac,
        "three_tangle": c2a - c2ab - c2ac,
    }


# ------------------------------------------------------------ mixed states

def _parties(rho: State, parties) -> list[tuple[int, ...]]:
    if parties is None:
        if rho.n != 3:
            raise ValueError("give three party blocks for registers other than 3 qubits")
        return [(0,), (1,), (2,)]
    blocks = [resolve_block(rho.labels, b) for b in parties]
    if len(blocks) != 3:
        raise ValueError("need exactly three parties")
    return blocks


def q3_mixed_indicator(rho: State, pivot: BlockLike = 0, parties=None,
                       cache: CorrelationCache | None = None) -> float:
    """D^2_{i|jk} - D^2_{i|j} - D^2_{i|k}; may be negative for mixed states.

    ``parties`` optionally lists the three blocks of the register. The
    pivot is given as one of them (or its first qubit/label).
    """
    blocks = _parties(rho, parties)
    want = resolve_block(rho.labels, pivot)
    try:
        i = next(n for n, b in enumerate(blocks) if b == want or b[0] == want[0])
    except StopIteration:
        raise ValueError(f"pivot {pivot!r} is not one of the parties") from None
    pb = blocks[i]
    j, k = (b for n, b in enumerate(blocks) if n != i)
    cache = cache or CorrelationCache(rho)
    return cache.d2(pb, j + k) - cache.d2(pb, j) - cache.d2(pb, k)


def q3_symmetric_mixed(rho: State, parties=None) -> float:
    blocks = _parties(rho, parties)
    cache = CorrelationCache(rho)
    return sum(q3_mixed_indicator(rho, b, blocks, cache) for b in blocks) / 3.0


# ----------------------------------------------------------- four qubits

def _pure4(psi: PureState):
    if not isinstance(psi, PureState) or psi.n != 4:
        raise ValueError("expected a four-qubit pure state")


def q4_1x3(cache: CorrelationCache, i: int) -> float:
    others = [j for j in range(4) if j != i]
    return cache.d2([i], others) - sum(cache.d2([i], [j]) for j in others)


def q4_2x2(cache: CorrelationCache, first: tuple[int, int]) -> float:
    second = [j for j in range(4) if j not in first]
    return cache.d2(list(first), second) - sum(cache.d2([a], [b]) for a in first for b in second)


def q3_component(cache: CorrelationCache, i: int, pair: tuple[int, int]) -> float:
    return cache.d2([i], list(pair)) - cache.d2([i], [pair[0]]) - cache.d2([i], [pair[1]])


def e4_1x3(cache: CorrelationCache, i: int) -> float:
    others = [j for j in range(4) if j != i]
    return cache.c2([i], others) - sum(cache.c2([i], [j]) for j in others)


def e4_2x2(cache: CorrelationCache, first: tuple[int, int]) -> float:
    second = [j for j in range(4) if j not in first]
    return cache.c2(list(first), second) - sum(cache.c2([a], [b]) for a in first for b in second)


def e3_component(cache: CorrelationCache, i: int, pair: tuple[int, int]) -> float:
    return cache.c2([i], list(pair)) - cache.c2([i], [pair[0]]) - cache.c2([i], [pair[1]])


def _triples():
    for i in range(4):
        for pair in combinations([j for j in range(4) if j != i], 2):
            yield i, pair


def q4_components(psi: PureState, cache: CorrelationCache | None = None) -> IndicatorSet:
    """All 1*3 and 2*2 SQD components, plus Q3 of each three-qubit marginal
    whose measured pair reduces to a logic qubit."""
    _pure4(psi)
    cache = cache or CorrelationCache(psi)
    lab = psi.labels
    out = IndicatorSet()
    for i in range(4):
        out.q4_1x3[_key(lab, [i], [j for j in range(4) if j != i])] = q4_1x3(cache, i)
    for first in combinations(range(4), 2):
        second = [j for j in range(4) if j not in first]
        out.q4_2x2[_key(lab, first, second)] = q4_2x2(cache, first)
    for i, pair in _triples():
        try:
            out.q3[_key(lab, [i], pair)] = q3_component(cache, i, pair)
        except RankError:
            continue
    return out


def entanglement_indicators(psi: PureState, e3_blocks=None,
                            cache: CorrelationCache | None = None) -> IndicatorSet:
    """Squared-concurrence residuals E4 (1*3, 2*2) and E3 (1*2).

    ``e3_blocks`` lists (pivot, (j, k)) pairs to evaluate; those raise if
    the pair is not a logic qubit. By default every compressible pair is
    reported.
    """
    _pure4(psi)
    cache = cache or CorrelationCache(psi)
    lab = psi.labels
    out = IndicatorSet()
    for i in range(4):
        out.e4_1x3[_key(lab, [i], [j for j in range(4) if j != i])] = e4_1x3(cache, i)
    for first in [(0, 1), (0, 2), (0, 3)]:
        second = [j for j in range(4) if j not in first]
        out.e4_2x2[_key(lab, first, second)] = e4_2x2(cache, first)
    if e3_blocks is None:
        for i, pair in _triples():
            try:
                out.e3_1x2[_key(lab, [i], pair)] = e3_component(cache, i, pair)
            except RankError:
                continue
    else:
        for i, pair in e3_blocks:
            (i,) = resolve_block(lab, i)
            pair = resolve_block(lab, pair)
            out.e3_1x2[_key(lab, [i], pair)] = e3_component(cache, i, pair)
    return out


# The four partitions followed for the cavity-reservoir register c1 r1 c2 r2.
CAVITY_COMPONENTS = {
    "q4_13": lambda c: q4_1x3(c, 0),
    "q4_22": lambda c: q4_2x2(c, (0, 1)),
    "q3_c1": lambda c: q3_component(c, 0, (2, 3)),
    "q3_r1": lambda c: q3_component(c, 1, (2, 3)),
    "e4_13": lambda c: e4_1x3(c, 0),
    "e4_22": lambda c: e4_2x2(c, (0, 1)),
    "e3_c1": lambda c: e3_component(c, 0, (2, 3)),
    "e3_r1": lambda c: e3_component(c, 1, (2, 3)),
}
