"""Command-line front end.

Subcommands: eval (one criterion evaluation), pnd (dump a distribution),
sweep (grid scan from a JSON config), figure (preset datasets fig1..fig10),
crosscheck (closed form vs oracle audit), mc (photon-counting simulation).
Outputs are deterministic: repeated invocations with the same flags produce
byte-identical files. Exit codes: 0 success, 1 usage error, 2 constraint
error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import closedform, montecarlo
from .criteria import classify, d_criterion, default_zero_tol, evaluate_criterion
from .errors import ConstraintError, HoalabError, NumericalError
from .states import (
    DEFAULT_TAIL_TOL,
    Binomial,
    GeneralizedBinomial,
    Geometric,
    Hypergeometric,
    NegativeBinomial,
    PhotonAddedCoherent,
    ReciprocalBinomial,
    StateSpec,
    build_pnd,
    min_allowed_L,
    pnd_to_csv,
    pnd_to_json_dict,
    spec_from_dict,
    spec_to_dict,
    state_name,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONSTRAINT = 2
EXIT_NUMERICAL = 3

# Parameters each state family takes on the command line, in flag order.
STATE_PARAMS = {
    "binomial": (("p", float), ("M", int)),
    "gbs": (("N", int), ("alpha", float), ("beta", float)),
    "rbs": (("N", int), ("theta", float)),
    "nbs": (("eta", float), ("M", int)),
    "geometric": (("eta", float),),
    "pacs": (("alpha", float), ("m", int)),
    "hs": (("L", float), ("M", int), ("eta", float)),
}

# rbs theta is optional on the command line (it never affects statistics).
_OPTIONAL_PARAMS = {("rbs", "theta"): 0.0}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 instead of argparse's default 2
        raise UsageError(message)


def _fmt(value) -> str:
    """Deterministic cell rendering: ints plain, floats at 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return ""
    return str(value)


def _csv_text(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(header: Sequence[str], rows) -> str:
    def cell(v):
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.floating,)):
            return float(v)
        if isinstance(v, (np.bool_,)):
            return bool(v)
        return v

    records = [{k: cell(v) for k, v in zip(header, row)} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _add_state_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--state", required=True, choices=sorted(STATE_PARAMS))
    sub.add_argument("--p", type=float)
    sub.add_argument("--M", type=int)
    sub.add_argument("--N", type=int)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--beta", type=float)
    sub.add_argument("--theta", type=float)
    sub.add_argument("--eta", type=float)
    sub.add_argument("--m", type=int)
    sub.add_argument("--L", type=float)


def _spec_from_args(args: argparse.Namespace) -> StateSpec:
    family = args.state
    params = {}
    for name, _ in STATE_PARAMS[family]:
        value = getattr(args, name)
        if value is None:
            if (family, name) in _OPTIONAL_PARAMS:
                value = _OPTIONAL_PARAMS[(family, name)]
            else:
                raise UsageError(f"state {family!r} requires --{name}")
        params[name] = value
    return spec_from_dict(family, params)


def _max_order(spec: StateSpec) -> Optional[int]:
    """Largest order the criterion is physically meaningful for, if bounded.

    The finite-photon states hold at most M (or N) photons, so an order-l
    measurement needs l+1 of them. The reciprocal binomial carries no such
    published bound and the unbounded-support states have none.
    """
    if isinstance(spec, Binomial):
        return spec.M - 1
    if isinstance(spec, GeneralizedBinomial):
        return spec.N - 1
    if isinstance(spec, Hypergeometric):
        return spec.M - 1
    return None


# ---------------------------------------------------------------------------
# eval / pnd


def _cmd_eval(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    cap = _max_order(spec)
    if cap is not None and args.l > cap:
        raise ConstraintError(
            f"order l={args.l} exceeds the largest meaningful order {cap} for this {state_name(spec)} state"
        )
    pnd = build_pnd(spec, args.tail_tol)
    result = evaluate_criterion(pnd, args.l, lee_m=args.lee_m, zero_tol=args.zero_tol)
    payload = {"state": state_name(spec), "params": spec_to_dict(spec)}
    payload.update(result.to_json_dict())
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _cmd_pnd(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    pnd = build_pnd(spec, args.tail_tol)
    if args.format == "json":
        text = json.dumps(pnd_to_json_dict(pnd), indent=2) + "\n"
    else:
        text = pnd_to_csv(pnd)
    _write_text(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def values(self):
        if self.count < 2:
            raise ConstraintError(f"axis {self.name!r} needs count >= 2, got {self.count}")
        if self.scale == "linear":
            return np.linspace(self.start, self.stop, self.count)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        raise ConstraintError(f"axis scale must be linear or log, got {self.scale!r}")


@dataclass(frozen=True)
class SweepConfig:
    """Grid scan description: a state template, up to two swept axes,
    the orders to evaluate and the evaluation method."""

    state: StateSpec
    axes: tuple
    l_values: tuple
    method: str = "closed"  # oracle | closed | both
    output_format: str = "csv"
    tail_tol: float = DEFAULT_TAIL_TOL
    zero_tol: Optional[float] = None  # None: relative default scaled by <N>^(l+1)
    lee_pairs: tuple = ()

    @staticmethod
    def from_dict(data: dict) -> "SweepConfig":
        try:
            spec = spec_from_dict(data["state"], data["params"])
            axes = tuple(
                SweepAxis(
                    ax["name"],
                    float(ax["start"]),
                    float(ax["stop"]),
                    int(ax["count"]),
                    ax.get("scale", "linear"),
                )
                for ax in data["axes"]
            )
            l_values = tuple(int(l) for l in data["l_values"])
        except KeyError as exc:
            raise ConstraintError(f"sweep config is missing {exc}") from exc
        if not 1 <= len(axes) <= 2:
            raise ConstraintError(f"sweep supports 1 or 2 axes, got {len(axes)}")
        template_fields = set(spec_to_dict(spec))
        for ax in axes:
            if ax.name not in template_fields:
                raise ConstraintError(
                    f"swept parameter {ax.name!r} does not exist on state {data['state']!r}"
                )
        return SweepConfig(
            state=spec,
            axes=axes,
            l_values=l_values,
            method=data.get("method", "closed"),
            output_format=data.get("output_format", "csv"),
            tail_tol=float(data.get("tail_tol", DEFAULT_TAIL_TOL)),
            zero_tol=data.get("zero_tol"),
            lee_pairs=tuple(tuple(p) for p in data.get("lee_pairs", ())),
        )


def _apply_axis_value(spec: StateSpec, name: str, value: float) -> StateSpec:
    current = getattr(spec, name)
    if isinstance(current, (int, np.integer)) and not isinstance(current, bool):
        value = int(round(value))
    return replace(spec, **{name: value})


def run_sweep(config: SweepConfig) -> tuple[list[str], list[tuple]]:
    """Evaluate the grid in outer-axis-major order; one row per point per l.

    Per-point constraint violations become rows with a status message
    instead of aborting the whole sweep.
    """
    if config.method not in ("oracle", "closed", "both"):
        raise ConstraintError(f"method must be oracle, closed or both, got {config.method!r}")
    axis_names = [ax.name for ax in config.axes]
    header = list(axis_names) + ["l"]
    if config.method in ("oracle", "both"):
        header.append("d_oracle")
    if config.method in ("closed", "both"):
        header.append("d_closed")
    if config.method == "both":
        header += ["abs_dev", "rel_dev", "agree"]
    header.append("classification")
    for pair in config.lee_pairs:
        header.append(f"R_{pair[0]}_{pair[1]}")
    header.append("status")

    grids = [ax.values() for ax in config.axes]
    if len(grids) == 1:
        points = [(v,) for v in grids[0]]
    else:
        points = [(a, b) for a in grids[0] for b in grids[1]]

    rows = []
    for point in points:
        spec = config.state
        for name, value in zip(axis_names, point):
            spec = _apply_axis_value(spec, name, value)
        axis_cells = [getattr(spec, name) for name in axis_names]
        pnd = None
        if config.method in ("oracle", "both") or config.lee_pairs:
            try:
                pnd = build_pnd(spec, config.tail_tol)
            except HoalabError as exc:
                for l in config.l_values:
                    rows.append(
                        tuple(axis_cells + [l] + [None] * (len(header) - len(axis_names) - 2) + [str(exc)])
                    )
                continue
        for l in config.l_values:
            cells = list(axis_cells) + [l]
            status = "ok"
            d_oracle = d_closed = None
            try:
                if config.method in ("oracle", "both"):
                    d_oracle = d_criterion(pnd, l)
                    cells.append(d_oracle)
                if config.method in ("closed", "both"):
                    d_closed = closedform.closed_form_d(spec, l)
                    cells.append(d_closed)
                if config.method == "both":
                    abs_dev = abs(d_oracle - d_closed)
                    spread = max(abs(d_oracle), abs(d_closed))
                    rel_dev = abs_dev / spread if spread > 0 else 0.0
                    cells += [abs_dev, rel_dev, rel_dev <= 1e-9]
                d_class = d_oracle if d_oracle is not None else d_closed
                if config.zero_tol is not None:
                    tol = float(config.zero_tol)
                elif pnd is not None:
                    tol = default_zero_tol(pnd, l)
                else:
                    tol = 1e-10
                cells.append(classify(d_class, tol))
                for pair in config.lee_pairs:
                    from .criteria import lee_R

                    cells.append(lee_R(pnd, int(pair[0]), int(pair[1])))
            except HoalabError as exc:
                status = str(exc)
                cells = list(axis_cells) + [l] + [None] * (len(header) - len(axis_names) - 2)
            cells.append(status)
            rows.append(tuple(cells))
    return header, rows


def _cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = SweepConfig.from_dict(json.load(fh))
    if args.format is not None:
        config = replace(config, output_format=args.format)
    if args.tail_tol is not None:
        config = replace(config, tail_tol=args.tail_tol)
    header, rows = run_sweep(config)
    text = (
        _csv_text(header, rows)
        if config.output_format == "csv"
        else _json_text(header, rows)
    )
    _write_text(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures

FIGURE_IDS = tuple(f"fig{i}" for i in range(1, 11))


def _d_for(spec: StateSpec, l: int, oracle: bool, tail_tol: float) -> float:
    if oracle:
        return d_criterion(build_pnd(spec, tail_tol), l)
    return closedform.closed_form_d(spec, l)


def figure_rows(
    figure_id: str, oracle: bool = False, tail_tol: float = DEFAULT_TAIL_TOL
) -> tuple[list[str], list[tuple]]:
    """Grid data behind one preset dataset.

    Axis ranges are package defaults chosen so each dataset exhibits the
    qualitative behavior it is meant to show; every range can be reproduced
    through the sweep subcommand with other bounds.
    """
    if figure_id not in FIGURE_IDS:
        raise ConstraintError(f"unknown figure id {figure_id!r}")
    rows: list[tuple] = []

    if figure_id == "fig1":  # generalized binomial, orders 8 and 9 vs N
        for l in (8, 9):
            for N in range(l + 2, 101):
                rows.append((N, l, _d_for(GeneralizedBinomial(N, 2.0, 1.0), l, oracle, tail_tol)))
        return ["N", "l", "d"], rows

    if figure_id == "fig2":  # generalized binomial, order 2 vs alpha and N
        for alpha in np.linspace(0.0, 20.0, 41):
            for N in range(3, 61):
                rows.append(
                    (alpha, N, 2, _d_for(GeneralizedBinomial(N, float(alpha), 1.0), 2, oracle, tail_tol))
                )
        return ["alpha", "N", "l", "d"], rows

    if figure_id == "fig3":  # generalized binomial, order 2 vs beta and N
        for beta in np.linspace(0.0, 20.0, 41):
            for N in range(3, 61):
                rows.append(
                    (beta, N, 2, _d_for(GeneralizedBinomial(N, 10.0, float(beta)), 2, oracle, tail_tol))
                )
        return ["beta", "N", "l", "d"], rows

    if figure_id == "fig4":  # reciprocal binomial, orders 8 and 9 vs N
        for l in (8, 9):
            for N in range(l + 2, 101):
                rows.append((N, l, _d_for(ReciprocalBinomial(N), l, oracle, tail_tol)))
        return ["N", "l", "d"], rows

    if figure_id == "fig5":  # negative binomial, order 8 vs eta and M
        for eta in np.linspace(0.05, 1.0, 20):
            for M in range(9, 31):
                rows.append(
                    (eta, M, 8, _d_for(NegativeBinomial(float(eta), M), 8, oracle, tail_tol))
                )
        return ["eta", "M", "l", "d"], rows

    if figure_id == "fig6":  # negative binomial, order 8 vs eta at M = 10
        for eta in np.linspace(0.05, 1.0, 96):
            rows.append((eta, 8, _d_for(NegativeBinomial(float(eta), 10), 8, oracle, tail_tol)))
        return ["eta", "l", "d"], rows

    if figure_id == "fig7":  # geometric, orders 8..10 vs eta
        for l in (8, 9, 10):
            for eta in np.linspace(0.05, 0.999, 96):
                rows.append((eta, l, _d_for(Geometric(float(eta)), l, oracle, tail_tol)))
        return ["eta", "l", "d"], rows

    if figure_id == "fig8":  # photon-added coherent, order 4 vs alpha and m
        for alpha in np.linspace(0.1, 3.0, 59):
            for m in range(1, 21):
                rows.append(
                    (alpha, m, 4, _d_for(PhotonAddedCoherent(float(alpha), m), 4, oracle, tail_tol))
                )
        return ["alpha", "m", "l", "d"], rows

    if figure_id == "fig9":  # photon-added coherent at m = 15, d(3) scaled by 10
        for alpha in np.linspace(0.1, 3.0, 59):
            spec = PhotonAddedCoherent(float(alpha), 15)
            d3 = _d_for(spec, 3, oracle, tail_tol)
            d4 = _d_for(spec, 4, oracle, tail_tol)
            rows.append((alpha, 10.0 * d3, d4))
        return ["alpha", "d3_x10", "d4"], rows

    # fig10: hypergeometric, order 8 vs eta and M at the smallest allowed L
    for eta in np.linspace(0.1, 0.9, 17):
        for M in range(9, 21):
            L = min_allowed_L(M, float(eta))
            rows.append(
                (eta, M, L, 8, _d_for(Hypergeometric(L, M, float(eta)), 8, oracle, tail_tol))
            )
    return ["eta", "M", "L", "l", "d"], rows


def _cmd_figure(args: argparse.Namespace) -> int:
    header, rows = figure_rows(args.figure_id, oracle=args.oracle, tail_tol=args.tail_tol)
    text = _csv_text(header, rows) if args.format == "csv" else _json_text(header, rows)
    out = args.out if args.out is not None else f"{args.figure_id}.{args.format}"
    _write_text(out, text)
    sys.stdout.write(f"wrote {out} ({len(rows)} rows)\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# crosscheck / mc


def _cmd_crosscheck(args: argparse.Namespace) -> int:
    families = closedform.CROSSCHECK_FAMILIES if args.all else (args.state,)
    if not args.all and args.state is None:
        raise UsageError("crosscheck needs --state <family> or --all")
    reports = [
        closedform.crosscheck_family(f, l_max=args.lmax, tol=args.tol) for f in families
    ]
    report = closedform.merge_reports(reports)
    if args.out is not None:
        text = (
            report.to_csv()
            if args.format == "csv"
            else json.dumps(report.to_json_dict(), indent=2) + "\n"
        )
        _write_text(args.out, text)
    sys.stdout.write(
        f"crosscheck: {report.n_agree} agree, {report.n_disagree} disagree, "
        f"{report.n_skipped} skipped (tol {report.tol:g})\n"
    )
    return EXIT_OK


def _cmd_mc(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    pnd = build_pnd(spec, args.tail_tol)
    hist = montecarlo.sample_pnd(pnd, args.n_samples, args.seed)
    estimate = montecarlo.estimate_d(hist, args.l, args.resamples, args.seed)
    exact = d_criterion(pnd, args.l)
    payload = {
        "state": state_name(spec),
        "params": spec_to_dict(spec),
        "estimate": estimate.to_json_dict(),
        "d_exact": exact,
    }
    text = json.dumps(payload, indent=2) + "\n"
    _write_text(args.out, text)
    if args.out is not None:
        sys.stdout.write(
            f"d_hat = {estimate.d_hat:.6g} +/- {estimate.stderr:.3g}, exact d = {exact:.6g}\n"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="hoalab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate the antibunching criteria for one state")
    _add_state_flags(p_eval)
    p_eval.add_argument("--l", type=int, required=True)
    p_eval.add_argument("--lee-m", type=int, default=None)
    p_eval.add_argument("--zero-tol", type=float, default=None)
    p_eval.add_argument("--tail-tol", dest="tail_tol", type=float, default=DEFAULT_TAIL_TOL)
    p_eval.set_defaults(func=_cmd_eval)

    p_pnd = subs.add_parser("pnd", help="dump a photon-number distribution")
    _add_state_flags(p_pnd)
    p_pnd.add_argument("--format", choices=("csv", "json"), default="csv")
    p_pnd.add_argument("--out", default=None)
    p_pnd.add_argument("--tail-tol", dest="tail_tol", type=float, default=DEFAULT_TAIL_TOL)
    p_pnd.set_defaults(func=_cmd_pnd)

    p_sweep = subs.add_parser("sweep", help="run a parameter sweep from a JSON config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=("csv", "json"), default=None)
    p_sweep.add_argument("--tail-tol", dest="tail_tol", type=float, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = subs.add_parser("figure", help="write one of the preset datasets fig1..fig10")
    p_fig.add_argument("figure_id", choices=FIGURE_IDS)
    p_fig.add_argument("--out", default=None)
    p_fig.add_argument("--format", choices=("csv", "json"), default="csv")
    p_fig.add_argument("--oracle", action="store_true", help="use the summation oracle instead of the closed forms")
    p_fig.add_argument("--tail-tol", dest="tail_tol", type=float, default=DEFAULT_TAIL_TOL)
    p_fig.set_defaults(func=_cmd_figure)

    p_cc = subs.add_parser("crosscheck", help="audit closed forms against the summation oracle")
    p_cc.add_argument("--state", choices=closedform.CROSSCHECK_FAMILIES, default=None)
    p_cc.add_argument("--all", action="store_true")
    p_cc.add_argument("--lmax", type=int, default=None)
    p_cc.add_argument("--tol", type=float, default=1e-9)
    p_cc.add_argument("--out", default=None)
    p_cc.add_argument("--format", choices=("csv", "json"), default="csv")
    p_cc.set_defaults(func=_cmd_crosscheck)

    p_mc = subs.add_parser("mc", help="simulate photon counting and estimate d(l)")
    _add_state_flags(p_mc)
    p_mc.add_argument("--l", type=int, required=True)
    p_mc.add_argument("--n-samples", dest="n_samples", type=int, default=1_000_000)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--resamples", type=int, default=200)
    p_mc.add_argument("--out", default=None)
    p_mc.add_argument("--tail-tol", dest="tail_tol", type=float, default=DEFAULT_TAIL_TOL)
    p_mc.set_defaults(func=_cmd_mc)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ConstraintError as exc:
        sys.stderr.write(f"constraint error: {exc}\n")
        return EXIT_CONSTRAINT
    except NumericalError as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
