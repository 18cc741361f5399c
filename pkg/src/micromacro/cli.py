"""Command-line front end.

Reproduces the standard figure data sets (wavepacket panels, distance and
discrimination-rate curves, rate contours, remote-preparation table),
computes single-point summaries and emits CSV or JSON.  Outputs are pure
functions of the run configuration: re-running a command yields
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical-convergence error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConfigError,
    ConvergenceError,
    ImpossibleOutcomeError,
    MicromacroError,
    ZeroStateError,
)
from .fock import TwoModeState, log_negativity, mean_photon, pure_state_fidelity
from .policy import DEFAULT_POLICY, NumericPolicy, load_policy
from .protocols import (
    balanced_macro_pair,
    cat_pointer_transmission,
    coherent_cat_scheme,
    entanglement_of,
    joint_subtract,
    macro_components,
    macro_pair,
    remote_heralded_photon,
    t_balanced,
)
from .quadrature import (
    density,
    discrimination_rate,
    displaced_photon_discrimination,
    phase_space_distance,
)
from .states import coherent, db_to_r, photon_subtracted_squeezed

POLICY_ENV_VAR = "MML_NUMERIC_POLICY"

FIG2_COLUMNS = ["x", "p_plus", "p_minus"]
FIG3_COLUMNS = ["r_db", "m", "t_policy", "D", "status"]
FIG4_COLUMNS = ["r_db", "m", "t_policy", "P", "status"]
FIG5_COLUMNS = ["r_db", "t", "P", "status"]
FIG5_TBAL_COLUMNS = ["r_db", "t_bal", "status"]
REMOTE_COLUMNS = ["lambda", "eta", "herald_prob", "fidelity", "log_negativity", "status"]

_DEFAULT_M = (0, 1, 2, 3)
_DEFAULT_FIG2_DB = (3.0, 5.0, 8.0, 10.0)
_DEFAULT_REMOTE_LAMBDAS = (0.0, 0.05, 0.1, 0.2, 0.3)
_DEFAULT_REMOTE_ETAS = (0.2, 0.4, 0.6, 0.8, 1.0)


@dataclass(frozen=True)
class RunConfig:
    """Validated, seedless description of one CLI invocation."""

    command: str
    db_values: tuple
    m_values: tuple
    t_policies: tuple          # tokens: "bal", "half" or a float
    alpha: float | None
    trunc: int | None
    grid_points: int
    t_points: int
    out: str
    fmt: str
    workers: int
    lambdas: tuple
    etas: tuple
    policy: NumericPolicy


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parse_db_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--db-range wants A:B:STEP, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--db-range values must be numbers: {text!r}") from exc
    if step <= 0 or hi < lo:
        raise ConfigError(f"--db-range needs B >= A and STEP > 0, got {text!r}")
    count = (hi - lo) / step
    if abs(count - round(count)) > 1e-9:
        raise ConfigError(f"--db-range step {step} does not divide [{lo}, {hi}]")
    return tuple(float(v) for v in np.linspace(lo, hi, int(round(count)) + 1))


def _parse_float_list(text: str, flag: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{flag} wants a comma-separated number list, got {text!r}") from exc


def _parse_m_list(text: str) -> tuple:
    try:
        values = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--m wants a comma-separated integer list, got {text!r}") from exc
    if any(m < 0 for m in values):
        raise ConfigError(f"subtraction orders must be >= 0, got {values}")
    return values


def _parse_transmission(token: str):
    if token in ("bal", "half"):
        return token
    try:
        value = float(token)
    except ValueError as exc:
        raise ConfigError(f"--transmission wants bal, half or a number, got {token!r}") from exc
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"explicit transmission must lie in [0, 1], got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="micromacro",
        description="Heralded micro-macro entangled state sweeps (CSV/JSON emitters).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, db_default=None):
        p.add_argument("--db-range", help="squeezing grid in dB as A:B:STEP")
        p.add_argument("--db-list", help="explicit comma-separated dB values")
        p.add_argument("--m", default=None, help="comma-separated photon-subtraction orders")
        p.add_argument("--transmission", default=None,
                       help="tap policy: bal, half or an explicit value in [0,1]")
        p.add_argument("--alpha", type=float, default=None,
                       help="coherent-cat amplitude (switches to the cat variant)")
        p.add_argument("--trunc", type=int, default=None,
                       help="starting Fock truncation (adaptive growth still applies)")
        p.add_argument("--grid", type=int, default=1001,
                       help="emitted x-grid points for wavepacket panels")
        p.add_argument("--out", default=None, help="output file (or directory for fig2/fig5)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
        p.add_argument("--workers", type=int, default=1, help="concurrent sweep workers")
        p.set_defaults(db_default=db_default)
        return p

    common(sub.add_parser("summary", help="single-point report"), db_default=(5.0,)) \
        .add_argument("--db", type=float, default=None, help="single squeezing value in dB")
    common(sub.add_parser("fig2", help="wavepacket quadrature densities"),
           db_default=_DEFAULT_FIG2_DB)
    common(sub.add_parser("fig3", help="phase-space distance vs squeezing"))
    common(sub.add_parser("fig4", help="discrimination rate vs squeezing"))
    fig5 = common(sub.add_parser("fig5", help="rate contour over squeezing and transmission"))
    fig5.add_argument("--t-points", type=int, default=61,
                      help="transmission grid size on [0.01, 0.99]")
    remote = common(sub.add_parser("remote", help="remote heralded preparation table"))
    remote.add_argument("--lambdas", default=None, help="comma-separated TMSV parameters")
    remote.add_argument("--etas", default=None, help="comma-separated channel transmissivities")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    policy = DEFAULT_POLICY
    policy_file = os.environ.get(POLICY_ENV_VAR)
    if policy_file:
        policy = load_policy(policy_file)
    if args.trunc is not None:
        if args.trunc < 8:
            raise ConfigError(f"--trunc must be >= 8, got {args.trunc}")
        policy = replace(policy, default_dim=int(args.trunc),
                         max_dim=max(policy.max_dim, int(args.trunc)))

    if args.db_range and args.db_list:
        raise ConfigError("give either --db-range or --db-list, not both")
    if args.db_range:
        db_values = _parse_db_range(args.db_range)
    elif args.db_list:
        db_values = _parse_float_list(args.db_list, "--db-list")
    elif getattr(args, "db", None) is not None:
        db_values = (float(args.db),)
    elif args.db_default is not None:
        db_values = tuple(args.db_default)
    else:
        step = 0.2 if args.command == "fig5" else 0.25
        db_values = _parse_db_range(f"0:12:{step}")
    if any(db < 0 for db in db_values):
        raise ConfigError(f"squeezing in dB must be >= 0, got {db_values}")

    m_values = _parse_m_list(args.m) if args.m is not None else _DEFAULT_M
    if args.transmission is not None:
        t_policies = (_parse_transmission(args.transmission),)
    elif args.command == "summary":
        t_policies = ("bal",)
    else:
        t_policies = ("half", "bal")

    if args.grid < 2:
        raise ConfigError(f"--grid must be >= 2, got {args.grid}")
    if args.workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {args.workers}")

    t_points = int(getattr(args, "t_points", 61))
    if t_points < 2:
        raise ConfigError(f"--t-points must be >= 2, got {t_points}")

    lambdas = (_parse_float_list(args.lambdas, "--lambdas")
               if getattr(args, "lambdas", None) else _DEFAULT_REMOTE_LAMBDAS)
    etas = (_parse_float_list(args.etas, "--etas")
            if getattr(args, "etas", None) else _DEFAULT_REMOTE_ETAS)

    defaults = {
        "summary": "summary",
        "fig2": "fig2_data",
        "fig3": "fig3",
        "fig4": "fig4",
        "fig5": "fig5_data",
        "remote": "remote",
    }
    out = args.out if args.out else defaults[args.command]

    return RunConfig(
        command=args.command,
        db_values=db_values,
        m_values=m_values,
        t_policies=t_policies,
        alpha=args.alpha,
        trunc=args.trunc,
        grid_points=int(args.grid),
        t_points=t_points,
        out=out,
        fmt=args.fmt,
        workers=int(args.workers),
        lambdas=lambdas,
        etas=etas,
        policy=policy,
    )


# ---------------------------------------------------------------------------
# serialization (12 significant digits, byte-stable)
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _with_extension(path: str, fmt: str) -> str:
    root, ext = os.path.splitext(path)
    if ext.lower() in (".csv", ".json"):
        return root + "." + fmt
    return path + "." + fmt


def write_table(path: str, header: list, rows: list, fmt: str) -> str:
    path = _with_extension(path, fmt)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    else:
        records = [{k: _round12(v) for k, v in zip(header, row)} for row in rows]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(records, fh, indent=2)
            fh.write("\n")
    return path


def _map_points(func, points, workers: int):
    """Evaluate sweep points concurrently, results in input order."""
    if workers <= 1 or len(points) <= 1:
        return [func(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, points))


# ---------------------------------------------------------------------------
# point evaluation shared by the figure commands
# ---------------------------------------------------------------------------


def _resolve_pair(m: int, db: float, t_policy, policy: NumericPolicy):
    """Build the macroscopic pair for one sweep point.

    Returns (plus, minus, t_value).  Raises ZeroStateError at degenerate
    points (photon subtraction from vacuum).
    """
    r = db_to_r(db)
    if t_policy == "bal":
        plus, minus = balanced_macro_pair(m, r, policy=policy)
        if m == 0:
            nbar = math.sinh(r) ** 2
            t_value = nbar / (1.0 + nbar)
        else:
            input_state, _ = photon_subtracted_squeezed(m, r, policy=policy)
            t_value = t_balanced(input_state, policy)
        return plus, minus, t_value
    t_value = 0.5 if t_policy == "half" else float(t_policy)
    plus, minus = macro_pair(m, r, t_value, policy=policy)
    return plus, minus, t_value


def _policy_label(t_policy) -> str:
    if isinstance(t_policy, float):
        return _fmt(t_policy)
    return t_policy


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _summary_record(cfg: RunConfig) -> dict:
    pol = cfg.policy
    t_policy = cfg.t_policies[0]
    if cfg.alpha is not None:
        alpha = cfg.alpha
        if alpha <= 0:
            raise ConfigError(f"--alpha must be positive, got {alpha}")
        if t_policy == "bal":
            t_value = cat_pointer_transmission(alpha)
        elif t_policy == "half":
            t_value = 0.5
        else:
            t_value = float(t_policy)
        state = coherent_cat_scheme(alpha, t_value, policy=pol)
        plus, minus, _ = macro_components(state, pol)
        dist = phase_space_distance(plus, minus, pol)
        rate = discrimination_rate(plus, minus, policy=pol)
        n_hi, n_lo, beta = displaced_photon_discrimination(plus, minus, pol)
        return {
            "mode": "cat",
            "alpha": alpha,
            "t_policy": _policy_label(t_policy),
            "t": t_value,
            "herald_weight": state.herald_weight,
            "entropy": entanglement_of(state, pol),
            "D": dist,
            "P": rate,
            "snu": 2.0 * dist,
            "n_plus_displaced": n_hi,
            "n_minus_displaced": n_lo,
            "beta": beta,
        }

    db = cfg.db_values[0]
    m = cfg.m_values[0]
    r = db_to_r(db)
    try:
        if m == 0:
            input_state = None
            nbar = math.sinh(r) ** 2
            t_bal = nbar / (1.0 + nbar)
        else:
            input_state, _ = photon_subtracted_squeezed(m, r, policy=pol)
            t_bal = t_balanced(input_state, pol)
        if t_policy == "bal":
            t_value = t_bal
        elif t_policy == "half":
            t_value = 0.5
        else:
            t_value = float(t_policy)
        if t_policy == "bal" and t_value <= 0.0:
            raise ConfigError(
                f"balanced transmission degenerates to 0 at m={m}, {db} dB: "
                "the tap output is a product state with no heralded pair")
        if input_state is None:
            from .states import squeezed_vacuum
            input_state = squeezed_vacuum(r, policy=pol)
        outcome = joint_subtract(input_state, t_value, pol)
        plus, minus, _ = macro_components(outcome.state, pol)
    except ZeroStateError as exc:
        raise ConfigError(f"degenerate parameters (m={m}, {db} dB, T policy {t_policy}): {exc}") from exc
    dist = phase_space_distance(plus, minus, pol)
    rate = discrimination_rate(plus, minus, policy=pol)
    n_hi, n_lo, beta = displaced_photon_discrimination(plus, minus, pol)
    return {
        "mode": "squeezed",
        "r_db": db,
        "r": r,
        "m": m,
        "t_policy": _policy_label(t_policy),
        "t": t_value,
        "t_bal": t_bal,
        "herald_weight": outcome.state.herald_weight,
        "entropy": entanglement_of(outcome.state, pol),
        "D": dist,
        "P": rate,
        "snu": 2.0 * dist,
        "n_plus_displaced": n_hi,
        "n_minus_displaced": n_lo,
        "beta": beta,
    }


def cmd_summary(cfg: RunConfig) -> int:
    record = _summary_record(cfg)
    for key, value in record.items():
        print(f"{key} = {_fmt(value)}")
    if cfg.out != "summary":
        header = list(record.keys())
        write_table(cfg.out, header, [tuple(record.values())], cfg.fmt)
    return 0


def cmd_fig2(cfg: RunConfig) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    pol = cfg.policy
    for m in cfg.m_values:
        for db in cfg.db_values:
            for t_policy in cfg.t_policies:
                try:
                    plus, minus, _ = _resolve_pair(m, db, t_policy, pol)
                except ZeroStateError as exc:
                    raise ConfigError(
                        f"fig2 point m={m}, {db} dB, policy {t_policy} is degenerate: {exc}"
                    ) from exc
                n_top = max(mean_photon(plus, pol), mean_photon(minus, pol))
                half_width = max(8.0, float(math.ceil(4.0 * math.sqrt(2.0 * n_top + 1.0))))
                xs = np.linspace(-half_width, half_width, cfg.grid_points)
                p_plus = density(plus, xs)
                p_minus = density(minus, xs)
                rows = [(float(x), float(pp), float(pm))
                        for x, pp, pm in zip(xs, p_plus, p_minus)]
                name = f"fig2_m{m}_db{db:g}_{_policy_label(t_policy)}"
                write_table(os.path.join(cfg.out, name), FIG2_COLUMNS, rows, cfg.fmt)
    return 0


def _fig34_rows(cfg: RunConfig, want: str) -> list:
    pol = cfg.policy
    points = [(m, db, tp) for tp in cfg.t_policies for m in cfg.m_values for db in cfg.db_values]

    def evaluate(point):
        m, db, t_policy = point
        label = _policy_label(t_policy)
        try:
            plus, minus, _ = _resolve_pair(m, db, t_policy, pol)
        except ZeroStateError:
            return (db, m, label, 0.0, "degenerate")
        if want == "D":
            value = phase_space_distance(plus, minus, pol)
        else:
            value = discrimination_rate(plus, minus, policy=pol)
        return (db, m, label, value, "ok")

    return _map_points(evaluate, points, cfg.workers)


def cmd_fig3(cfg: RunConfig) -> int:
    write_table(cfg.out, FIG3_COLUMNS, _fig34_rows(cfg, "D"), cfg.fmt)
    return 0


def cmd_fig4(cfg: RunConfig) -> int:
    write_table(cfg.out, FIG4_COLUMNS, _fig34_rows(cfg, "P"), cfg.fmt)
    return 0


def cmd_fig5(cfg: RunConfig) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    pol = cfg.policy
    t_grid = tuple(float(t) for t in np.linspace(0.01, 0.99, cfg.t_points))
    for m in cfg.m_values:
        points = [(m, db, t) for db in cfg.db_values for t in t_grid]

        def evaluate(point):
            mm, db, t = point
            try:
                plus, minus, _ = _resolve_pair(mm, db, t, pol)
            except ZeroStateError:
                return (db, t, 0.0, "degenerate")
            return (db, t, discrimination_rate(plus, minus, policy=pol), "ok")

        rows = _map_points(evaluate, points, cfg.workers)
        write_table(os.path.join(cfg.out, f"fig5_m{m}"), FIG5_COLUMNS, rows, cfg.fmt)

        tbal_rows = []
        for db in cfg.db_values:
            r = db_to_r(db)
            if m == 0:
                nbar = math.sinh(r) ** 2
                tbal_rows.append((db, nbar / (1.0 + nbar), "ok"))
                continue
            try:
                input_state, _ = photon_subtracted_squeezed(m, r, policy=pol)
            except ZeroStateError:
                tbal_rows.append((db, 0.0, "degenerate"))
                continue
            tbal_rows.append((db, t_balanced(input_state, pol), "ok"))
        write_table(os.path.join(cfg.out, f"fig5_m{m}_tbal"), FIG5_TBAL_COLUMNS, tbal_rows, cfg.fmt)
    return 0


def cmd_remote(cfg: RunConfig) -> int:
    pol = cfg.policy
    points = [(lam, eta) for lam in cfg.lambdas for eta in cfg.etas]
    target = None

    def evaluate(point):
        lam, eta = point
        nonlocal target
        try:
            outcome = remote_heralded_photon(lam, lam, eta, eta, policy=pol)
        except ImpossibleOutcomeError:
            return (lam, eta, 0.0, 0.0, 0.0, "impossible")
        rho = outcome.state
        if target is None or target.dims != rho.dims:
            d = rho.dims[0]
            coeffs = np.zeros((d, d), dtype=complex)
            coeffs[0, 1] = coeffs[1, 0] = 1.0 / math.sqrt(2.0)
            target = TwoModeState(coeffs)
        fid = pure_state_fidelity(rho, target)
        return (lam, eta, outcome.probability, fid, log_negativity(rho), "ok")

    rows = _map_points(evaluate, points, cfg.workers)
    write_table(cfg.out, REMOTE_COLUMNS, rows, cfg.fmt)
    return 0


_COMMANDS = {
    "summary": cmd_summary,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "fig5": cmd_fig5,
    "remote": cmd_remote,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    return _COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ZeroStateError, ImpossibleOutcomeError) as exc:
        print(f"error: degenerate configuration: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: numerical convergence failure: {exc}", file=sys.stderr)
        return 3
    except MicromacroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
