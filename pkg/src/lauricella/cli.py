"""Command-line front end.

Exit codes: 0 success, 1 check or domain failure, 2 usage/configuration error.
Complex numbers are written as ``[re, im]`` pairs; matrices are row-major in
the total order of F_2^m.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path as FilePath

import numpy as np

from . import __version__
from .combinatorics import Mask, enumerate_masks
from .connection import build_connection, build_gauge, gauged_omega_at, omega_at
from .continuation import DEFAULT_CLEARANCE, DEFAULT_TOL, Path, integrate_path, monodromy_loop
from .errors import LauricellaError, NonGenericError
from .intersection import build_intersection
from .params import DEFAULT_EPS, ParameterSet, enforce_genericity
from .series import SeriesOptions, fa_partial_truncated, solution_vector, tail_estimate
from .verify import run_checks


class ConfigError(Exception):
    pass


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _vector_json(vec) -> list:
    return [_pair(z) for z in np.asarray(vec).ravel()]


def _matrix_json(M) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(M)]


def _order_json(m: int) -> list:
    return [list(v.as_tuple()) for v in enumerate_masks(m)]


def _load_json_arg(value: str, what: str):
    """Parse ``value`` as inline JSON or as the path of a JSON file."""
    text = value
    if not value.lstrip().startswith(("{", "[")):
        try:
            text = FilePath(value).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {what} file {value!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed {what} JSON: {exc}") from exc


def _load_params(args) -> ParameterSet:
    if args.params is None:
        raise ConfigError("--params is required")
    data = _load_json_arg(args.params, "parameter")
    if not isinstance(data, dict):
        raise ConfigError("parameter JSON must be an object with keys a, b, c")
    try:
        return ParameterSet.from_dict(data)
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc


def _parse_point(text: str, m: int) -> np.ndarray:
    try:
        if text.lstrip().startswith("["):
            raw = json.loads(text)
            pts = [complex(*p) if isinstance(p, list) else complex(p) for p in raw]
        else:
            pts = [complex(t.strip().replace(" ", "")) for t in text.split(",")]
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse point {text!r}: {exc}") from exc
    if len(pts) != m:
        raise ConfigError(f"point {text!r} has {len(pts)} coordinates, parameters have m={m}")
    return np.array(pts, dtype=complex)


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from exc


def _series_options(args) -> SeriesOptions:
    return SeriesOptions(args.N, args.tail_tol, getattr(args, "gamma_prefactor", False))


def cmd_matrix(args, params: ParameterSet) -> tuple[int, dict]:
    m = params.m
    out: dict = {"what": args.what, "order": _order_json(m)}
    what = args.what
    if what in ("C", "phipsi", "psipsi"):
        data = build_intersection(params)
        M = {"C": data.C, "phipsi": data.phi_psi, "psipsi": data.psi_psi}[what]
    elif what in ("P", "Pinv"):
        g = build_gauge(params)
        M = g.P if what == "P" else g.Pinv
    elif what == "R0k":
        if args.k is None:
            raise ConfigError("--k is required for R0k")
        if not 1 <= args.k <= m:
            raise ConfigError(f"--k must be in 1..{m}")
        M = build_connection(params).R0[args.k - 1]
        out["k"] = args.k
    elif what == "RV":
        if args.v is None:
            raise ConfigError("--v is required for RV (e.g. --v 1,1)")
        bits = _parse_ints(args.v)
        if len(bits) != m or any(b not in (0, 1) for b in bits) or not any(bits):
            raise ConfigError(f"--v must be a nonzero 0/1 vector of length {m}")
        M = build_connection(params).RV[Mask.from_tuple(bits)]
        out["v"] = bits
    elif what == "omega":
        if args.at is None:
            raise ConfigError("--at is required for omega")
        x = _parse_point(args.at, m)
        conn = build_connection(params)
        mats = gauged_omega_at(conn, build_gauge(params), x) if args.gauged else omega_at(conn, x)
        out["at"] = _vector_json(x)
        out["gauged"] = bool(args.gauged)
        out["matrices"] = [_matrix_json(A) for A in mats]
        return 0, out
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown matrix {what!r}")
    out["matrix"] = _matrix_json(M)
    return 0, out


def cmd_eval(args, params: ParameterSet) -> tuple[int, dict]:
    x = _parse_point(args.at, params.m)
    opts = _series_options(args)
    out: dict = {"at": _vector_json(x), "N": opts.max_total_degree}
    if args.vector:
        sol = solution_vector(params, x, opts)
        out["vector"] = _vector_json(sol.values)
        out["order"] = _order_json(params.m)
        out["tail"] = sol.tail
    else:
        deriv = _parse_ints(args.deriv) if args.deriv else []
        out["deriv"] = deriv
        out["value"] = _pair(fa_partial_truncated(params, x, opts, deriv))
        out["tail"] = tail_estimate(params, x, opts)
    return 0, out


def cmd_verify(args, params: ParameterSet) -> tuple[int, dict]:
    rng = np.random.default_rng(args.seed)
    report = run_checks(params, rng, eps=args.eps, opts=_series_options(args))
    report["seed"] = args.seed
    return (0 if report["passed"] else 1), report


def _load_path(value: str, what: str) -> Path:
    data = _load_json_arg(value, what)
    try:
        return Path.from_dict(data)
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise ConfigError(f"invalid {what}: {exc}") from exc


def _frame(args, params):
    conn = build_connection(params)
    gauge = build_gauge(params) if args.frame == "gauged" else None
    return conn, gauge


def cmd_continue(args, params: ParameterSet) -> tuple[int, dict]:
    path = _load_path(args.path, "path")
    if path.m != params.m:
        raise ConfigError(f"path lives in C^{path.m}, parameters have m={params.m}")
    conn, gauge = _frame(args, params)
    if args.from_series:
        if gauge is None:
            raise ConfigError("--from-series produces derivative-frame data; use --frame gauged")
        initial = solution_vector(params, path.start, _series_options(args)).values
    else:
        raw = _load_json_arg(args.initial, "initial vector")
        try:
            initial = np.array([complex(*p) if isinstance(p, list) else complex(p) for p in raw])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid initial vector: {exc}") from exc
        if initial.size != conn.size:
            raise ConfigError(f"initial vector must have {conn.size} entries")
    res = integrate_path(conn, gauge, path, initial, args.tol, args.clearance)
    return 0, {
        "frame": args.frame,
        "start": _vector_json(path.start),
        "end": _vector_json(path.end),
        "initial": _vector_json(initial),
        "vector": _vector_json(res.end),
        "order": _order_json(params.m),
        "steps": res.steps,
        "rejected": res.rejected,
        "max_local_error": res.max_local_error,
    }


def cmd_monodromy(args, params: ParameterSet) -> tuple[int, dict]:
    loop = _load_path(args.loop, "loop")
    if loop.m != params.m:
        raise ConfigError(f"loop lives in C^{loop.m}, parameters have m={params.m}")
    if not loop.is_closed(1e-10):
        raise ConfigError("loop is not closed")
    conn, gauge = _frame(args, params)
    M = monodromy_loop(conn, gauge, loop, args.tol, args.clearance)
    ev = np.linalg.eigvals(M)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    return 0, {
        "frame": args.frame,
        "basepoint": _vector_json(loop.start),
        "matrix": _matrix_json(M),
        "eigenvalues": _vector_json(ev),
        "order": _order_json(params.m),
    }


COMMANDS = {
    "matrix": cmd_matrix,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "continue": cmd_continue,
    "monodromy": cmd_monodromy,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="parameter JSON (inline or file path)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--eps", type=float, default=DEFAULT_EPS, help="genericity threshold")
    common.add_argument("--strict", action="store_true", help="fail on non-generic parameters")

    series = argparse.ArgumentParser(add_help=False)
    series.add_argument("--N", type=int, default=60, help="maximum total degree")
    series.add_argument("--tail-tol", type=float, default=1e-12)

    integ = argparse.ArgumentParser(add_help=False)
    integ.add_argument("--tol", type=float, default=DEFAULT_TOL)
    integ.add_argument("--clearance", type=float, default=DEFAULT_CLEARANCE)
    integ.add_argument("--frame", choices=("gauged", "phi"), default="gauged")

    parser = argparse.ArgumentParser(prog="lauricella", description="Pfaffian system of Lauricella's F_A")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", parents=[common], help="emit C, pairings, residues, P, Pinv or Omega")
    p.add_argument("--what", required=True, choices=("C", "phipsi", "psipsi", "R0k", "RV", "P", "Pinv", "omega"))
    p.add_argument("--k", type=int, help="variable index for R0k (1-based)")
    p.add_argument("--v", help="mask for RV, e.g. 1,1")
    p.add_argument("--at", help="point for omega, e.g. 0.1,0.2+0.1j")
    p.add_argument("--gauged", action="store_true", help="conjugate omega by P")

    p = sub.add_parser("eval", parents=[common, series], help="evaluate the series")
    p.add_argument("--at", required=True)
    p.add_argument("--deriv", help="1-based indices to differentiate, e.g. 1,2")
    p.add_argument("--vector", action="store_true", help="emit the solution vector")
    p.add_argument("--gamma-prefactor", action="store_true")

    sub.add_parser("verify", parents=[common, series], help="run all numerical checks")

    p = sub.add_parser("continue", parents=[common, series, integ], help="continue along a path")
    p.add_argument("--path", required=True, help="path JSON (inline or file)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--from-series", action="store_true")
    src.add_argument("--initial", help="initial vector JSON (inline or file)")

    p = sub.add_parser("monodromy", parents=[common, integ], help="monodromy matrix along a loop")
    p.add_argument("--loop", required=True, help="closed path JSON (inline or file)")
    return parser


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, sort_keys=True)
    if output:
        FilePath(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = _load_params(args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            enforce_genericity(params, args.eps, args.strict)
            code, payload = COMMANDS[args.command](args, params)
        notes = sorted({str(w.message) for w in caught})
        if notes:
            payload["notices"] = notes
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonGenericError as exc:
        _emit({"error": str(exc), "genericity": exc.report.to_dict()}, args.output)
        return 1
    except LauricellaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": str(exc), "type": type(exc).__name__}, args.output)
        return 1
    _emit(payload, args.output)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
