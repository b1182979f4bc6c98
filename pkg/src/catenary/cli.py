"""``catenary`` command line: solve, sweep-gamma, discrete-check.

Exit status: 0 success, 1 malformed input, 2 cable too short to sag,
3 solver did not converge, 4 discrete check exceeded its bound.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import discrete, elastic, inelastic
from .emit import csv_text, curve_dict, json_text, svg_text
from .errors import CatenaryError, NotSagging, SolverError
from .model import AnchorSpan, CableSpec, make_span
from .rootfind import SolverOptions
from .sample import sample_curve, summarize

log = logging.getLogger("catenary")

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_SOLVER, EXIT_CHECK = 0, 1, 2, 3, 4
RETRY_STEP = 0.1
LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage, which would collide with "infeasible"
    def error(self, message):
        raise InputError(message)


@dataclass
class ProblemConfig:
    a: float | None = None
    b: float | None = None
    h: float | None = None
    k: float | None = None
    length: float | None = None
    rho: float = 1.0
    gravity: float = 9.81
    q: float | None = None
    gamma: float | None = None
    samples: int = 200
    format: str = "json"
    out: str | None = None
    tol: float = 1e-12
    max_iter: int = 100
    continuation_step: float | None = None
    gamma_from: float = 0.0
    gamma_to: float = 2.0
    gamma_step: float = 0.2
    n: int = 200
    bound: float = 5e-2

    def __post_init__(self):
        if self.format not in ("csv", "json", "svg"):
            raise InputError(f"format must be csv, json or svg, got {self.format!r}")

    def span(self) -> AnchorSpan:
        missing = [name for name in ("a", "b", "h", "k", "length") if getattr(self, name) is None]
        if missing:
            raise InputError("missing required value(s): " + ", ".join("--" + m for m in missing))
        return make_span(self.a, self.b, self.h, self.k)

    def cable(self) -> CableSpec:
        if self.q is not None and self.gamma is not None:
            raise InputError("give either --q or --gamma, not both")
        if self.gamma is not None:
            return CableSpec.from_gamma(self.length, self.gamma, self.rho, self.gravity)
        return CableSpec(self.length, self.rho, self.gravity, self.q or 0.0)

    def options(self) -> SolverOptions:
        return SolverOptions(self.tol, self.max_iter)


_FLOAT_KEYS = {"a", "b", "h", "k", "length", "rho", "gravity", "q", "gamma", "tol",
               "continuation_step", "gamma_from", "gamma_to", "gamma_step", "bound"}
_INT_KEYS = {"samples", "max_iter", "n"}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _INT_KEYS:
        if isinstance(value, bool) or not float(value).is_integer():
            raise InputError(f"{key} must be an integer, got {value!r}")
        return int(value)
    if key in _FLOAT_KEYS:
        if isinstance(value, bool):
            raise InputError(f"{key} must be a number, got {value!r}")
        return float(value)
    return value


def load_config(path: str | None, overrides: dict) -> ProblemConfig:
    """Merge a JSON config file with command-line values; flags win."""
    known = {f.name for f in fields(ProblemConfig)}
    merged: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path!r}: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("config file must hold a JSON object")
        unknown = set(data) - known
        if unknown:
            raise InputError("unknown config key(s): " + ", ".join(sorted(unknown)))
        merged.update(data)
    merged.update({k: v for k, v in overrides.items() if v is not None and k in known})
    try:
        return ProblemConfig(**{k: _coerce(k, v) for k, v in merged.items()})
    except (TypeError, ValueError, OverflowError) as exc:
        raise InputError(str(exc)) from exc


def _common(parser: argparse.ArgumentParser, cable_flags: bool = True) -> None:
    for name in ("a", "b", "h", "k", "length", "rho", "gravity"):
        parser.add_argument(f"--{name}", type=float)
    if cable_flags:
        parser.add_argument("--q", type=float, help="compliance per unit length")
        parser.add_argument("--gamma", type=float, help="elasticity index q*rho*L*g")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--format", choices=("csv", "json", "svg"))
    parser.add_argument("--out")
    parser.add_argument("--config", help="JSON file with any of the flag values")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--max-iter", dest="max_iter", type=int)
    parser.add_argument("--continuation-step", dest="continuation_step", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catenary", description="Equilibrium shapes of hanging cables.",
                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("solve", help="solve one cable", allow_abbrev=False))
    sweep = sub.add_parser("sweep-gamma", help="solve a family of elasticities",
                           allow_abbrev=False)
    _common(sweep, cable_flags=False)
    sweep.add_argument("--gamma-from", dest="gamma_from", type=float)
    sweep.add_argument("--gamma-to", dest="gamma_to", type=float)
    sweep.add_argument("--gamma-step", dest="gamma_step", type=float)
    check = sub.add_parser("discrete-check", help="compare with a mass-spring chain",
                           allow_abbrev=False)
    _common(check)
    check.add_argument("--n", type=int, help="number of springs")
    check.add_argument("--bound", type=float, help="allowed deviation as a fraction of the chord")
    return parser


def _write(text: str, cfg: ProblemConfig, summary_lines: Sequence[str]) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        for line in summary_lines:
            print(line)
    else:
        sys.stdout.write(text)
        for line in summary_lines:
            print(line, file=sys.stderr)


def _log_trace(label: str, trace) -> None:
    if log.isEnabledFor(logging.DEBUG):
        for i, r in enumerate(trace.residual_norms):
            log.debug("%s iter %d residual %.3e", label, i, r)
    log.info("%s: %d iterations, final residual %.3e", label, trace.iterations, trace.final_residual)


def solve_shape(span: AnchorSpan, spec: CableSpec, cfg: ProblemConfig):
    opts = cfg.options()
    if spec.gamma() == 0.0:
        return inelastic.solve_general(span, spec.length, opts), None
    try:
        shape, trace = elastic.solve(span, spec, opts, cfg.continuation_step)
    except SolverError:
        if cfg.continuation_step is not None:
            raise
        log.info("direct elastic solve failed; retrying with continuation step %r", RETRY_STEP)
        shape, trace = elastic.solve(span, spec, opts, RETRY_STEP)
    _log_trace("elastic", trace)
    return shape, trace


def cmd_solve(cfg: ProblemConfig) -> int:
    span, spec = cfg.span(), cfg.cable()
    shape, _ = solve_shape(span, spec, cfg)
    curve = sample_curve(shape, spec, cfg.samples)
    summary = summarize(shape, spec)
    if cfg.format == "csv":
        text = csv_text([curve])
    elif cfg.format == "svg":
        text = svg_text([curve])
    else:
        text = json_text(curve_dict(summary, curve))
    _write(text, cfg, [summary.line()])
    return EXIT_OK


def gamma_grid(start: float, stop: float, step: float) -> list[float]:
    if not (0.0 <= start <= stop) or not step > 0:
        raise InputError("need 0 <= gamma-from <= gamma-to and gamma-step > 0")
    count = int(np.floor((stop - start) / step + 1e-9))
    grid = [round(start + i * step, 12) for i in range(count + 1)]
    if stop - grid[-1] > 1e-9 * max(1.0, stop):
        grid.append(stop)
    else:
        grid[-1] = stop
    return grid


def cmd_sweep(cfg: ProblemConfig) -> int:
    span = cfg.span()
    base = CableSpec(cfg.length, cfg.rho, cfg.gravity)
    gammas = gamma_grid(cfg.gamma_from, cfg.gamma_to, cfg.gamma_step)
    results = elastic.sweep(span, cfg.length, gammas, cfg.options(),
                            fallback_step=cfg.continuation_step or RETRY_STEP)
    curves, docs, lines = [], [], []
    for gamma, (shape, trace) in zip(gammas, results):
        spec = CableSpec.from_gamma(cfg.length, gamma, cfg.rho, cfg.gravity) if gamma else base
        _log_trace(f"gamma={gamma!r}", trace)
        curve = sample_curve(shape, spec, cfg.samples)
        summary = summarize(shape, spec)
        curves.append(curve)
        docs.append(curve_dict(summary, curve, iterations=trace.iterations))
        lines.append(f"gamma={gamma!r} iterations={trace.iterations} sag={summary.sag!r}")
    if cfg.format == "csv":
        text = csv_text(curves, with_gamma=True)
    elif cfg.format == "svg":
        text = svg_text(curves)
    else:
        text = json_text({"curves": docs})
    _write(text, cfg, lines)
    return EXIT_OK


def cmd_discrete_check(cfg: ProblemConfig) -> int:
    span, spec = cfg.span(), cfg.cable()
    chain = discrete.build_chain(span, spec, cfg.n)
    shape, _ = solve_shape(span, spec, cfg)
    pos, trace = discrete.solve_equilibrium(chain, discrete.continuum_positions(chain, shape))
    _log_trace(f"chain N={cfg.n}", trace)
    deviation = discrete.max_deviation(chain, pos, shape)
    errors = np.abs(discrete.tension_errors(chain, pos, shape, spec))
    horizontal = discrete.horizontal_tensions(chain, pos)
    limit = cfg.bound * span.chord()
    ok = deviation < limit
    print(f"springs={cfg.n} gamma={spec.gamma()!r} newton_iterations={trace.iterations}")
    print(f"max_deviation={deviation!r} bound={limit!r} relative={deviation / span.chord()!r}")
    print(f"tension_rel_error max={float(errors.max())!r} mean={float(errors.mean())!r}")
    print(f"horizontal_tension spread={float(np.ptp(horizontal))!r} mean={float(horizontal.mean())!r}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {"solve": cmd_solve, "sweep-gamma": cmd_sweep, "discrete-check": cmd_discrete_check}


def configure_logging() -> None:
    setting = os.environ.get("CATENARY_LOG", "").strip().lower()
    level = LOG_LEVELS.get(setting, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("catenary").setLevel(level)
    if setting and setting not in LOG_LEVELS:
        log.warning("CATENARY_LOG=%r not recognised; expected quiet, info or trace", setting)


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except InputError as exc:
        print(f"catenary: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotSagging as exc:
        print(f"catenary: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        print(f"catenary: solver failed: {exc}", file=sys.stderr)
        if exc.trace is not None:
            tail = ", ".join(f"{r:.3e}" for r in exc.trace.tail())
            print(f"catenary: last residuals: {tail}", file=sys.stderr)
        return EXIT_SOLVER
    except (CatenaryError, ValueError) as exc:
        print(f"catenary: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
