"""Command-line entry point: ``sqdiscord <subcommand> [flags]``.

Exit codes: 0 success, 1 violated check or numerical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import dynamics
from .discord import (
    ROUTES,
    conditional_entropy,
    is_x_form,
    mutual_information,
    quantum_discord,
    xstate_criterion,
    xstate_discord,
)
from .entanglement import concurrence_between, concurrence_pure, eof_between, three_tangle
from .monogamy import (
    MONOGAMY_TOL,
    CorrelationCache,
    entanglement_indicators,
    pure3_batch,
    q3_mixed_indicator,
    q3_pure,
    q4_components,
    sqd_decomposition,
)
from .qstate import (
    FAMILIES,
    NumericalFailure,
    Partition,
    PureState,
    build_named_state,
    haar_amplitudes,
    partial_trace,
    random_pure_haar,
    resolve_block,
    von_neumann_entropy,
)

ANGLE_PARAMS = {"theta", "phi", "theta0", "theta1", "theta2", "theta3"}
STATE_FAMILIES = sorted(FAMILIES) + ["cavity"]
MEASURES = ("discord", "sqd", "classical", "mutual", "conditional_entropy",
            "concurrence", "eof", "entropy", "three_tangle")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


# ------------------------------------------------------------------ output

def format_value(v: float) -> str:
    return f"{float(v):.9g}"


def emit_csv(table: dynamics.SweepTable, path) -> None:
    """Write ``table`` as CSV: axis columns, then indicator columns, row-major."""
    header = table.axis_names + list(table.values)
    lines = [",".join(header)]
    for point, values in table.rows():
        lines.append(",".join(format_value(x) for x in (*point, *values)))
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ------------------------------------------------------------------ states

def _angle(args, value: float) -> float:
    return value * math.pi if args.times_pi else value


def _state_params(args) -> dict[str, float]:
    if args.state == "cavity":
        names = ("kt", "alpha")
    else:
        names = FAMILIES[args.state][0]
    params = {}
    for name in names:
        value = getattr(args, name, None)
        if value is None and args.state == "acin" and name == "phi":
            value = 0.0
        if value is None:
            raise UsageError(f"--state {args.state} needs --{name}")
        params[name] = _angle(args, value) if name in ANGLE_PARAMS else value
    return params


def build_state(args):
    params = _state_params(args)
    if args.state == "cavity":
        return dynamics.output_state(dynamics.DampingParams(params["kt"], params["alpha"])), params
    return build_named_state(args.state, list(params.values())), params


def _describe(params: dict) -> str:
    return ", ".join(f"{k}={v:.12g}" for k, v in params.items()) or "no parameters"


# --------------------------------------------------------------- commands

def cmd_measure(args) -> int:
    state, _ = build_state(args)
    cut = Partition.parse(args.partition or _default_partition(state), state.labels)
    a, b = cut.block_a, cut.block_b
    m = args.measure
    if m in ("discord", "sqd", "classical"):
        res = quantum_discord(state, a, b, args.route)
        value = {"discord": res.discord, "sqd": res.squared, "classical": res.classical}[m]
        where = f"route {res.route}"
        if res.optimal_setting is not None:
            s = res.optimal_setting
            where += f", theta={s.theta:.6f}, phi={s.phi:.6f}"
        print(f"{m} {args.partition or ''} = {format_value(value)}  ({where})")
        return 0
    if m == "mutual":
        value = mutual_information(state, a, b)
    elif m == "conditional_entropy":
        value = conditional_entropy(state, a, b)
    elif m == "concurrence":
        if isinstance(state, PureState) and len(a) + len(b) == state.n:
            value = concurrence_pure(state, a)
        else:
            value = concurrence_between(state, a, b)
    elif m == "eof":
        value = eof_between(state, a, b)
    elif m == "entropy":
        value = von_neumann_entropy(partial_trace(state, a))
    else:
        if not isinstance(state, PureState) or state.n != 3:
            raise UsageError("three_tangle needs a three-qubit pure state")
        value = three_tangle(state, a)
    print(f"{m} = {format_value(value)}")
    return 0


def _default_partition(state) -> str:
    lab = state.labels
    return f"{lab[0]}|{''.join(lab[1:]) if state.n == 3 else lab[1]}"


def cmd_q3(args) -> int:
    state, _ = build_state(args)
    if state.n == 3 and isinstance(state, PureState):
        pivots = [args.pivot] if args.pivot else list(state.labels)
        for p in pivots:
            rep = sqd_decomposition(state, p)
            q = q3_pure(state, p)
            print(f"Q3({rep.pivot}|{''.join(rep.partners)}) = {format_value(q)}"
                  f"  T1={format_value(rep.t1)} T2={format_value(rep.t2)}")
        return 0
    if state.n == 3:
        pivot = args.pivot or state.labels[0]
        cache = CorrelationCache(state, args.route)
        (p,) = resolve_block(state.labels, pivot)
        j, k = (i for i in range(3) if i != p)
        lab = state.labels
        print(f"D2_{lab[p]}|{lab[j]}{lab[k]} = {format_value(cache.d2([p], [j, k]))}")
        print(f"D2_{lab[p]}|{lab[j]} = {format_value(cache.d2([p], [j]))}")
        print(f"D2_{lab[p]}|{lab[k]} = {format_value(cache.d2([p], [k]))}")
        print(f"distribution = {format_value(q3_mixed_indicator(state, p, cache=cache))}")
        return 0
    if not isinstance(state, PureState):
        raise UsageError("q3 on more than three qubits needs a pure state")
    for key, value in q4_components(state).q3.items():
        print(f"Q3({key}) = {format_value(value)}")
    return 0


def cmd_q4(args) -> int:
    state, _ = build_state(args)
    if not isinstance(state, PureState) or state.n != 4:
        raise UsageError("q4 needs a four-qubit pure state (ghz4, cluster4, cavity)")
    ind = q4_components(state)
    for key, value in {**ind.q4_1x3, **ind.q4_2x2}.items():
        print(f"Q4({key}) = {format_value(value)}")
    if args.entanglement:
        ent = entanglement_indicators(state)
        for key, value in {**ent.e4_1x3, **ent.e4_2x2, **ent.e3_1x2}.items():
            print(f"E({key}) = {format_value(value)}")
    return 0


def cmd_monogamy_check(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    amps = haar_amplitudes(3, args.samples, args.seed)
    worst = {"sqd_dist": math.inf, "t1": math.inf, "t2": math.inf, "qd_dist": math.inf}
    where = {}
    for pivot in range(3):
        batch = pure3_batch(amps, pivot)
        for name in worst:
            i = int(np.argmin(batch[name]))
            if batch[name][i] < worst[name]:
                worst[name], where[name] = float(batch[name][i]), (i, pivot)
    print(f"samples={args.samples} seed={args.seed} pivots=A,B,C")
    ok = True
    for name in ("sqd_dist", "t1", "t2"):
        passed = worst[name] >= -MONOGAMY_TOL
        ok &= passed
        i, pivot = where[name]
        print(f"min {name} = {format_value(worst[name])} (sample {i}, pivot {'ABC'[pivot]})"
              f" {'PASS' if passed else 'FAIL'}")
    print(f"min qd_dist = {format_value(worst['qd_dist'])} (unsquared, for contrast)")
    if not ok:
        raise CheckFailed("square-of-discord monogamy violated")
    return 0


def _parse_axis(text: str, times_pi: bool) -> tuple[str, np.ndarray]:
    try:
        name, spec = text.split("=", 1)
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"--axis expects name=start:stop:step, got {text!r}") from None
    if times_pi and name in ANGLE_PARAMS:
        start, stop, step = start * math.pi, stop * math.pi, step * math.pi
    if step <= 0 or stop < start:
        raise UsageError(f"--axis {text!r} describes an empty grid")
    return name, dynamics.grid(start, stop, step)


def _parse_fixed(items: Sequence[str], times_pi: bool) -> dict[str, float]:
    fixed = {}
    for text in items or ():
        try:
            name, value = text.split("=", 1)
            v = float(value)
        except ValueError:
            raise UsageError(f"--fixed expects name=value, got {text!r}") from None
        fixed[name] = v * math.pi if times_pi and name in ANGLE_PARAMS else v
    return fixed


def _summary(table: dynamics.SweepTable, stream) -> None:
    for name, v in table.values.items():
        print(f"# {name}: min={format_value(v.min())} max={format_value(v.max())}", file=stream)


def _write(table, args) -> None:
    emit_csv(table, args.out)
    _summary(table, sys.stdout if args.out not in (None, "-") else sys.stderr)


def cmd_sweep(args) -> int:
    if not args.axis:
        raise UsageError("sweep needs at least one --axis")
    axes = [_parse_axis(a, args.times_pi) for a in args.axis]
    indicators = [s for s in args.indicators.split(",") if s]
    table = dynamics.indicator_sweep(args.family, axes, indicators,
                                     _parse_fixed(args.fixed, args.times_pi))
    _write(table, args)
    return 0


def cmd_figure(args) -> int:
    kt = _parse_axis(f"kt={args.kt_grid}", False)[1] if args.kt_grid else None
    alpha = _parse_axis(f"alpha={args.alpha_grid}", False)[1] if args.alpha_grid else None
    table = dynamics.figure_sweep(args.number, args.panel, kt, alpha)
    _write(table, args)
    stream = sys.stdout if args.out not in (None, "-") else sys.stderr
    if args.number == 5:
        for pair, info in dynamics.peak_offsets(table).items():
            print(f"# peak {pair}: " + " ".join(f"{k}={format_value(v)}" for k, v in info.items()),
                  file=stream)
    return 0


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = []

    worst_kw = worst_dji = 0.0
    for i in range(args.samples):
        psi = random_pure_haar(3, rng)
        num = quantum_discord(psi, "A", "B", "numeric")
        kw = quantum_discord(psi, "A", "B", "koashi_winter")
        worst_kw = max(worst_kw, abs(num.discord - kw.discord))
        worst_dji = max(worst_dji, abs(num.discord + num.classical - num.mutual))
    print(f"numeric vs koashi_winter: max |diff| = {worst_kw:.3e} (tol 1e-4)")
    print(f"discord + classical - mutual: max |diff| = {worst_dji:.3e} (tol 1e-8)")
    if worst_kw > 1e-4:
        failures.append("numeric vs koashi_winter")
    if worst_dji > 1e-8:
        failures.append("discord + classical = mutual")

    worst_x = 0.0
    for _ in range(args.samples):
        kt, alpha = rng.uniform(0, 6), rng.uniform(0.05, 0.95)
        rho = partial_trace(dynamics.output_state(kt, alpha), [0, 2])
        if not (is_x_form(rho) and xstate_criterion(rho)):
            failures.append(f"x-state criterion at kt={kt:.6f} alpha={alpha:.6f}")
            continue
        diff = abs(quantum_discord(rho, 0, 1, "numeric").discord - xstate_discord(rho).discord)
        worst_x = max(worst_x, diff)
    print(f"numeric vs xstate on cavity c1c2: max |diff| = {worst_x:.3e} (tol 1e-6)")
    if worst_x > 1e-6:
        failures.append("numeric vs xstate")

    if failures:
        raise CheckFailed("; ".join(failures))
    print("selftest PASS")
    return 0


# ----------------------------------------------------------------- parser

def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True, choices=STATE_FAMILIES)
    for name in ("theta", "phi", "p", "eps", "a", "b", "c", "alpha", "kt",
                 "theta0", "theta1", "theta2", "theta3"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--times-pi", action="store_true",
                   help="angles are given in units of pi")
    p.add_argument("--route", choices=ROUTES, default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqdiscord",
                                     description="Square-of-discord monogamy toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="one correlation measure on one state")
    _add_state_flags(p)
    p.add_argument("--measure", choices=MEASURES, default="discord")
    p.add_argument("--partition", help='bipartition such as "A|BC" (measured side first)')
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("q3", help="tripartite indicators")
    _add_state_flags(p)
    p.add_argument("--pivot")
    p.set_defaults(func=cmd_q3)

    p = sub.add_parser("q4", help="four-qubit indicators")
    _add_state_flags(p)
    p.add_argument("--entanglement", action="store_true",
                   help="also print the entanglement-of-formation indicators")
    p.set_defaults(func=cmd_q4)

    p = sub.add_parser("monogamy-check", help="random three-qubit monogamy harness")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_monogamy_check)

    p = sub.add_parser("sweep", help="indicator values on a parameter grid, as CSV")
    p.add_argument("--family", required=True, choices=sorted(dynamics.FAMILY_PARAMS))
    p.add_argument("--axis", action="append", help="name=start:stop:step (repeatable)")
    p.add_argument("--fixed", action="append", help="name=value (repeatable)")
    p.add_argument("--indicators", required=True, help="comma-separated indicator names")
    p.add_argument("--times-pi", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="canned sweeps with the published figure parameters")
    p.add_argument("number", type=int, choices=(1, 2, 4, 5))
    p.add_argument("--panel", choices=("left", "right"), default="left")
    p.add_argument("--kt-grid", help="start:stop:step override for kt")
    p.add_argument("--alpha-grid", help="start:stop:step override for alpha (figure 4)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("selftest", help="cross-check discord routes")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except CheckFailed as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        try:
            where = _describe(_state_params(args)) if hasattr(args, "state") else vars(args)
        except UsageError:
            where = "unknown parameters"
        print(f"numerical failure ({where}): {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
