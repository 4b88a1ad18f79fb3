"""Command line front end: every operation as a reproducible experiment.

Each subcommand parses its inputs, runs the corresponding library call,
and emits a single JSON document that embeds the full run configuration,
so any artifact can be replayed exactly. Output files are written
atomically (temp file then rename); a failing command leaves no partial
artifact behind.

Exit codes: 0 success / no refutation, 1 negative mathematical outcome
(refuted, not nonnegative, missing bracket), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional

import numpy as np

from .core import NoConvergence, NonPositiveInput, Polynomial, perron_normalize
from .exact import (
    IllConditioned,
    NotNonnegative,
    polya_szego_decompose,
)
from .families import (
    Alpha,
    ConjectureGap,
    FamilySpec,
    InvalidSpec,
    LoewyGeneral,
    build,
    necessary_conditions,
    spec_to_json_dict,
)
from .membership import (
    BadBracket,
    NoUpperRefutation,
    Refuted,
    SearchConfig,
    max_t,
    refute,
    trace_slice,
    verdict_to_json,
)
from .volume import (
    compare_experiment,
    estimate_cone_fraction,
    estimate_projection_fraction,
    estimates_csv,
)

ENV_SEED = "NONNEG_CONE_SEED"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything needed to replay a command, echoed into every artifact."""

    command: str
    seed: int
    threads: int
    restarts: int
    samples: int
    tol: float
    out: Optional[str]
    params: dict

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)


def _resolve_seed(arg_seed: Optional[int]) -> int:
    if arg_seed is not None:
        return arg_seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as e:
            raise SystemExit(f"error: {ENV_SEED} is not an integer: {env!r}")
    return 0


def _run_config(args: argparse.Namespace, command: str, params: dict,
                default_restarts: int) -> RunConfig:
    seed = _resolve_seed(args.seed)
    requested = args.threads if args.threads else (os.cpu_count() or 1)
    # worker cap; all reductions are order-independent so the count only
    # affects wall time, never results
    threads = max(1, min(requested, os.cpu_count() or 1))
    restarts = args.restarts if args.restarts is not None else default_restarts
    return RunConfig(command=command, seed=seed, threads=threads,
                     restarts=restarts, samples=args.samples, tol=args.tol,
                     out=args.out, params=params)


def _search_config(rc: RunConfig, max_iters: int = 200) -> SearchConfig:
    return SearchConfig(restarts=rc.restarts, max_iters=max_iters,
                        confirm_tol=rc.tol, seed=rc.seed)


def _parse_json_arg(text: str, what: str):
    """JSON literal, or @path to read a file containing one."""
    if text.startswith("@"):
        try:
            with open(text[1:], "r") as fh:
                text = fh.read()
        except OSError as e:
            raise _InputError(f"cannot read {what} file {text[1:]!r}: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise _InputError(f"malformed {what} JSON: {e}")


def _parse_poly(text: str) -> Polynomial:
    data = _parse_json_arg(text, "polynomial")
    if not isinstance(data, list) or not data or \
            not all(isinstance(c, (int, float)) for c in data):
        raise _InputError("polynomial must be a nonempty JSON array of "
                          "numbers, constant term first")
    return Polynomial(data)


def _parse_matrix(text: str) -> np.ndarray:
    data = _parse_json_arg(text, "matrix")
    try:
        a = np.array(data, dtype=float)
    except (ValueError, TypeError):
        raise _InputError("matrix must be a JSON array of equal-length "
                          "numeric rows")
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise _InputError(f"matrix must be square, got shape {a.shape}")
    return a


class _InputError(ValueError):
    """Bad user input; maps to exit code 2."""


def _family_spec(args: argparse.Namespace) -> FamilySpec:
    kind = args.kind
    try:
        if kind == "loewy":
            if args.m is None or args.s is None:
                raise _InputError("loewy requires --m and --s")
            return LoewyGeneral(n=args.n, m=args.m, s=args.s, t=args.t)
        if kind == "alpha":
            return Alpha(n=args.n, alpha=args.t)
        if kind == "conjecture":
            if args.m is None or args.s is None:
                raise _InputError("conjecture requires --m and --s")
            return ConjectureGap(n=args.n, m=args.m, s=args.s, t=args.t)
    except InvalidSpec as e:
        raise _InputError(str(e))
    raise _InputError(f"unknown family kind {kind!r}")


def _write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(payload: dict, rc: RunConfig, extra_files: Optional[dict] = None) -> None:
    """Print the artifact and persist it (plus side files) atomically."""
    payload = {"run_config": rc.to_json_dict(), **payload}
    text = json.dumps(payload, indent=2) + "\n"
    if rc.out:
        _write_atomic(rc.out, text)
    for path, body in (extra_files or {}).items():
        _write_atomic(path, body)
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args: argparse.Namespace) -> int:
    p = _parse_poly(args.poly)
    rc = _run_config(args, "check", {"poly": list(p.coeffs), "n": args.n},
                     default_restarts=50)
    cfg = _search_config(rc)
    flags = [{"kind": kind, "degree": deg}
             for kind, deg in necessary_conditions(p, args.n)]
    verdict = refute(p, args.n, cfg)
    payload = {
        "necessary_condition_failures": flags,
        "verdict": json.loads(verdict_to_json(verdict, cfg)),
    }
    _emit(payload, rc)
    return 1 if isinstance(verdict, Refuted) else 0


def cmd_maxt(args: argparse.Namespace) -> int:
    spec = _family_spec(args)
    rc = _run_config(args, "maxt",
                     {"family": spec_to_json_dict(spec), "t_hi": args.t_hi,
                      "width": args.width, "n": spec.n},
                     default_restarts=50)
    cfg = _search_config(rc)
    probes: list = []
    try:
        lo, hi = max_t(spec, spec.n, cfg, t_hi=args.t_hi, width=args.width,
                       probe_log=probes)
    except NoUpperRefutation as e:
        _emit({"error": "no_upper_refutation", "detail": str(e)}, rc)
        return 1
    trace_rows = "\n".join(["t,refuted"] +
                           [f"{t!r},{int(hit)}" for t, hit in probes]) + "\n"
    extra = {}
    if rc.out:
        extra[os.path.splitext(rc.out)[0] + ".trace.csv"] = trace_rows
    payload = {
        "interval": [lo, hi],
        "width": hi - lo,
        "probes": [{"t": t, "refuted": hit} for t, hit in probes],
    }
    _emit(payload, rc, extra)
    return 0


def cmd_volume(args: argparse.Namespace) -> int:
    rc = _run_config(args, "volume",
                     {"n": args.n, "k": args.k, "projection": args.projection,
                      "c_cap": args.c_cap, "z": args.z},
                     default_restarts=20)
    cfg = _search_config(rc, max_iters=120)
    if args.projection:
        est = estimate_projection_fraction(args.n, args.k, rc.samples, cfg,
                                           c_cap=args.c_cap, z=args.z)
    else:
        est = estimate_cone_fraction(args.n, args.k, rc.samples, cfg, z=args.z)
    extra = {}
    if rc.out:
        extra[os.path.splitext(rc.out)[0] + ".csv"] = estimates_csv([est])
    _emit({"estimate": est.to_json_dict()}, rc, extra)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    params = _parse_json_arg(args.params, "experiment parameters")
    if not isinstance(params, dict):
        raise _InputError("experiment parameters must be a JSON object")
    rc = _run_config(args, "compare", {"kind": args.kind, **params},
                     default_restarts=20)
    cfg = _search_config(rc, max_iters=120)
    try:
        report = compare_experiment(args.kind, params, rc.samples, cfg)
    except (KeyError, AssertionError, ValueError) as e:
        raise _InputError(f"bad parameters for {args.kind!r}: {e}")
    _emit({"report": report}, rc)
    return 0


def cmd_slice(args: argparse.Namespace) -> int:
    p = _parse_poly(args.p)
    q = _parse_poly(args.q)
    u = _parse_poly(args.u)
    rc = _run_config(args, "slice",
                     {"p": list(p.coeffs), "q": list(q.coeffs),
                      "u": list(u.coeffs), "n": args.n, "grid": args.grid},
                     default_restarts=50)
    cfg = _search_config(rc)
    try:
        tr = trace_slice(p, q, u, args.n, args.grid, cfg)
    except BadBracket as e:
        _emit({"error": "bad_bracket", "detail": str(e)}, rc)
        return 1
    payload = {
        "points": [[t, mu] for t, mu in tr.points],
        "missing": list(tr.missing),
        "collinearity_residual": tr.residual,
    }
    _emit(payload, rc)
    return 0


def cmd_family(args: argparse.Namespace) -> int:
    spec = _family_spec(args)
    rc = _run_config(args, "family", {"family": spec_to_json_dict(spec)},
                     default_restarts=50)
    p = build(spec)
    _emit({"coefficients": list(p.coeffs), "degree": p.degree()}, rc)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    p = _parse_poly(args.poly)
    rc = _run_config(args, "decompose", {"poly": list(p.coeffs)},
                     default_restarts=50)
    try:
        dec = polya_szego_decompose(p)
    except NotNonnegative as e:
        _emit({"error": "not_nonnegative", "detail": str(e)}, rc)
        return 1
    except IllConditioned as e:
        _emit({"error": "ill_conditioned", "detail": str(e)}, rc)
        return 1
    payload = {
        "f1": list(dec.f1.coeffs),
        "f2": list(dec.f2.coeffs),
        "g1": list(dec.g1.coeffs),
        "g2": list(dec.g2.coeffs),
        "residual": dec.residual,
    }
    _emit(payload, rc)
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    a = _parse_matrix(args.matrix)
    rc = _run_config(args, "normalize", {"matrix": a.tolist()},
                     default_restarts=50)
    try:
        dec = perron_normalize(a)
    except NonPositiveInput as e:
        raise _InputError(str(e))
    except NoConvergence as e:
        _emit({"error": "no_convergence", "detail": str(e)}, rc)
        return 1
    err = float(np.max(np.abs(dec.reconstruct() - a)))
    payload = {
        "rho": dec.rho,
        "stochastic": dec.s.tolist(),
        "scaling": dec.d.tolist(),
        "roundtrip_error": err,
    }
    _emit(payload, rc)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (fallback: ${ENV_SEED}, then 0)")
    sp.add_argument("--threads", type=int, default=0,
                    help="worker cap (0 = available parallelism)")
    sp.add_argument("--restarts", type=int, default=None,
                    help="search restarts per membership query")
    sp.add_argument("--samples", type=int, default=10000,
                    help="Monte Carlo sample count")
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="witness confirmation threshold")
    sp.add_argument("--out", type=str, default=None,
                    help="write the JSON artifact here (atomically)")


def _add_family_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("kind", choices=["loewy", "alpha", "conjecture"])
    sp.add_argument("--n", type=int, required=True, help="matrix order")
    sp.add_argument("--m", type=int, default=None, help="center degree")
    sp.add_argument("--s", type=int, default=None, help="offset")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nonnegcone",
        description="Numerical laboratory for polynomials that preserve "
                    "entrywise nonnegativity of matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="test one polynomial for membership")
    sp.add_argument("poly", help="JSON coefficient array or @file")
    sp.add_argument("--n", type=int, required=True, help="matrix order")
    _add_common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("maxt", help="bisect the largest safe family weight")
    _add_family_args(sp)
    sp.add_argument("--t-hi", type=float, default=4.0,
                    help="upper end of the bisection bracket")
    sp.add_argument("--width", type=float, default=0.01,
                    help="target bracket width")
    _add_common(sp)
    sp.set_defaults(fn=cmd_maxt)

    sp = sub.add_parser("volume", help="Monte Carlo cone fraction of the ball")
    sp.add_argument("--n", type=int, required=True, help="matrix order")
    sp.add_argument("--k", type=int, required=True, help="degree bound")
    sp.add_argument("--projection", action="store_true",
                    help="measure the one-degree-down projection instead")
    sp.add_argument("--c-cap", type=float, default=10.0,
                    help="projection completion coefficient cap")
    sp.add_argument("--z", type=float, default=3.0, help="CI z level")
    _add_common(sp)
    sp.set_defaults(fn=cmd_volume)

    sp = sub.add_parser("compare", help="paired fraction experiments")
    sp.add_argument("kind", choices=["order", "projection", "degree", "trend"])
    sp.add_argument("params", help="JSON parameter object, e.g. "
                    '\'{"n_a":1,"n_b":2,"k":4}\'')
    _add_common(sp)
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("slice", help="trace the boundary along a segment")
    sp.add_argument("p", help="left endpoint polynomial JSON")
    sp.add_argument("q", help="right endpoint polynomial JSON")
    sp.add_argument("u", help="probe direction polynomial JSON")
    sp.add_argument("--n", type=int, required=True, help="matrix order")
    sp.add_argument("--grid", type=int, default=9,
                    help="number of interior segment points")
    _add_common(sp)
    sp.set_defaults(fn=cmd_slice)

    sp = sub.add_parser("family", help="print family coefficients")
    _add_family_args(sp)
    sp.add_argument("--t", type=float, default=2.0, help="center weight")
    _add_common(sp)
    sp.set_defaults(fn=cmd_family)

    sp = sub.add_parser("decompose",
                        help="two-square certificate for a half-line member")
    sp.add_argument("poly", help="JSON coefficient array or @file")
    _add_common(sp)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("normalize",
                        help="Perron scaling of a positive matrix")
    sp.add_argument("matrix", help="JSON row-major square matrix or @file")
    _add_common(sp)
    sp.set_defaults(fn=cmd_normalize)

    # maxt reuses the family flags but takes t from the bisection, not --t
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not hasattr(args, "t"):
        args.t = 2.0  # placeholder weight for specs parsed inside maxt
    try:
        return args.fn(args)
    except _InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except InvalidSpec as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
