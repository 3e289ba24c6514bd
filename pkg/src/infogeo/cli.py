"""Command line front end.

Every subcommand prints one JSON ``CommandResult`` document on standard
output, ``{"status": "ok" | "error", "payload": ..., "diagnostics": ...}``,
and exits with 0 exactly when the status is ok.  Logs go to standard error.

Document arguments (points, tangents, metric specs) accept either a file
path, ``-`` for standard input, or an inline JSON literal.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from . import family as fam
from . import geometry as geo
from . import metric as met
from . import oracle
from .errors import DomainError, InfoGeoError, NotSPDError, ParseError, UsageError
from .family import FamilyParams, Point
from .metric import MetricParams, Tangent

log = logging.getLogger("infogeo")


@dataclass
class CommandResult:
    status: str
    payload: dict
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> str:
        return json.dumps({"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics},
                          allow_nan=False)


def error_result(code: str, message: str, diagnostics=None) -> CommandResult:
    return CommandResult("error", {"code": code, "message": message}, diagnostics or {})


# ---------------------------------------------------------------- documents


def _load(arg: str):
    """Decode a JSON document given inline, as a file path, or ``-`` for stdin."""
    text = arg
    if arg == "-":
        text = sys.stdin.read()
    elif not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError("expected a number", path)
    v = float(v)
    if not math.isfinite(v):
        raise ParseError("non-finite number", path)
    return v


def _vector(v, n, path):
    if not isinstance(v, list):
        raise ParseError("expected an array", path)
    if n is not None and len(v) != n:
        raise ParseError(f"expected {n} entries, got {len(v)}", path)
    return np.array([_number(e, f"{path}[{i}]") for i, e in enumerate(v)])


def _matrix(v, n, path):
    if not isinstance(v, list) or not v:
        raise ParseError("expected a non-empty array of rows", path)
    n = len(v) if n is None else n
    if len(v) != n:
        raise ParseError(f"expected {n} rows, got {len(v)}", path)
    return np.array([_vector(row, n, f"{path}[{i}]") for i, row in enumerate(v)])


def _document(text_or_doc):
    if isinstance(text_or_doc, (str, bytes)):
        try:
            return json.loads(text_or_doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})") from None
    return text_or_doc


def point_from_doc(doc, path: str = "point") -> Point:
    if not isinstance(doc, dict):
        raise ParseError("expected an object with fields n, D, u", path)
    n = None
    if "n" in doc:
        n = doc["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParseError("expected a positive integer", f"{path}.n")
    if "D" not in doc:
        raise ParseError("missing field", f"{path}.D")
    D = _matrix(doc["D"], n, f"{path}.D")
    n = D.shape[0]
    u = _vector(doc["u"], n, f"{path}.u") if "u" in doc else np.zeros(n)
    try:
        return Point(D, u)
    except NotSPDError as exc:
        raise ParseError(str(exc), f"{path}.D") from None
    except DomainError as exc:
        raise ParseError(str(exc), f"{path}.D") from None


def parse_point(text) -> Point:
    """Point from a PointDocument ``{"n": .., "D": [[..]], "u": [..]}`` (text or decoded)."""
    return point_from_doc(_document(text))


def point_to_doc(pt: Point) -> dict:
    return {"n": pt.n, "D": pt.D.tolist(), "u": pt.u.tolist()}


def serialize_point(pt: Point) -> str:
    """PointDocument text; floats use the shortest repr that round-trips exactly."""
    return json.dumps(point_to_doc(pt))


def parse_tangent(text_or_doc, n: int, path: str = "tangent") -> Tangent:
    doc = _document(text_or_doc)
    if not isinstance(doc, dict):
        raise ParseError('expected an object {"X": [[..]], "x": [..]}', path)
    X = _matrix(doc["X"], n, f"{path}.X") if "X" in doc else np.zeros((n, n))
    x = _vector(doc["x"], n, f"{path}.x") if "x" in doc else np.zeros(n)
    try:
        return Tangent(X, x)
    except DomainError as exc:
        raise ParseError(str(exc), f"{path}.X") from None


def tangent_to_doc(t: Tangent) -> dict:
    return {"X": t.X.tolist(), "x": t.x.tolist()}


# ---------------------------------------------------------------- argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


def _metric_flags(p, alpha=0.0, beta=1.0):
    p.add_argument("--alpha", type=float, default=alpha)
    p.add_argument("--beta", type=float, default=beta)
    p.add_argument("--scale", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infogeo", description="Geometry of p-Gaussian families.")
    parser.add_argument("--seed", type=int, default=0, help="seed for Monte Carlo oracles (default 0)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to standard error")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("entropy", help="Renyi, Tsallis or Shannon entropy")
    p.add_argument("kind", choices=["renyi", "tsallis", "shannon"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--point", default=None)
    p.add_argument("--method", choices=["closed", "oracle"], default="closed")

    p = sub.add_parser("metric", help="evaluate a named metric on two tangents")
    p.add_argument("--spec", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("geodesic", help="geodesic traces (CSV)")
    p.add_argument("mode", choices=["ivp", "closed", "bvp"])
    p.add_argument("--point", help="start point (ivp)")
    p.add_argument("--velocity", help="initial velocity tangent (ivp)")
    p.add_argument("--p0")
    p.add_argument("--p1")
    p.add_argument("--family", choices=["auto", "n1", "special-normal", "alpha0"], default="auto")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=geo.STEPS_PER_UNIT_TIME)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="CSV destination")
    _metric_flags(p)

    p = sub.add_parser("distance", help="closed-form Rao distances")
    p.add_argument("--case", choices=["n1", "special-normal", "alpha0", "shoot"], required=True)
    p.add_argument("--p0")
    p.add_argument("--p1")
    _metric_flags(p)

    p = sub.add_parser("curvature", help="Riemann, Ricci, scalar curvature, ball volume")
    p.add_argument("what", choices=["riemann", "ricci", "scalar", "ball-volume"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--point")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--dim", type=int, default=None, help="ball dimension (default: n(n+1)/2 + n)")
    p.add_argument("--method", choices=["closed", "oracle"], default="closed")
    _metric_flags(p)

    p = sub.add_parser("verify", help="compare closed forms with the numerical oracles")
    p.add_argument("--suite", choices=["family", "metric", "geometry", "curvature", "all"], default="all")
    p.add_argument("--tol-profile", choices=["default", "strict"], default="default")
    return parser


# ---------------------------------------------------------------- commands


def _mp(args) -> MetricParams:
    return MetricParams(args.alpha, args.beta, args.scale)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required here")


def _point_arg(arg, path):
    return point_from_doc(_load(arg), path)


def cmd_entropy(args, diag):
    if args.point is not None:
        pt = _point_arg(args.point, "point")
        if args.n is not None and args.n != pt.n:
            raise ParseError(f"--n {args.n} does not match the point dimension {pt.n}", "point.n")
    else:
        _need(args, "n")
        pt = Point(np.eye(args.n))
    fp = FamilyParams(pt.n, args.p)
    if args.kind != "shannon":
        _need(args, "q")
    q = args.q
    diag["method"] = "closed-form" if args.method == "closed" else "grid"
    if args.method == "closed":
        if args.kind == "renyi":
            val = fam.renyi_entropy(fp, pt.D, q).value
        elif args.kind == "tsallis":
            val = fam.tsallis_entropy(fp, pt.D, q).value
        else:
            val = fam.shannon_entropy(fp, pt.D).value
        payload = {"kind": args.kind, "value": val}
    else:
        if args.kind == "renyi":
            est = oracle.quad_renyi(fp, pt, q)
        elif args.kind == "tsallis":
            est = oracle.quad_tsallis(fp, pt, q)
        else:
            est = oracle.quad_shannon(fp, pt)
        payload = {"kind": args.kind, "value": est.value, "error": est.error}
    payload.update({"n": pt.n, "p": args.p, "q": 1.0 if args.kind == "shannon" else q})
    return payload


def cmd_metric(args, diag):
    spec = met.spec_from_json(_load(args.spec))
    pt = _point_arg(args.point, "point")
    a = parse_tangent(_load(args.a), pt.n, "a")
    b = parse_tangent(_load(args.b), pt.n, "b")
    fp = None
    if isinstance(spec, (met.Fisher, met.Tsallis)):
        fp = FamilyParams(pt.n, spec.p)
    val = met.named_eval(spec, fp, pt, a, b)
    u = met.as_unified(spec, pt.n)
    unified = None if u is None else {"alpha": u.alpha, "beta": u.beta, "scale": u.scale, "special": u.special}
    diag["method"] = "closed-form"
    return {"value": val, "metric": met.spec_to_json(spec), "unified": unified}


def _closed_geodesic(args, mp, p0, p1):
    fam_name = args.family
    if fam_name == "auto":
        if np.array_equal(p0.u, p1.u):
            fam_name = "special-normal"
        elif p0.n == 1:
            fam_name = "n1"
        else:
            fam_name = "alpha0"
    if fam_name == "special-normal":
        if not np.array_equal(p0.u, p1.u):
            raise DomainError("special-normal geodesics need equal means")
        return geo.geodesic_special_normal(p0.D, p1.D, p0.u), geo.distance_special_normal(mp, p0.D, p1.D)
    if fam_name == "n1":
        return geo.geodesic_n1(mp, p0, p1)
    if mp.alpha != 0.0 or mp.scale != 1.0:
        raise DomainError("the pullback geodesic needs alpha = 0 and scale = 1")
    return geo.geodesic_alpha0(mp.beta, p0, p1)


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def cmd_geodesic(args, diag):
    mp = _mp(args)
    payload = {"mode": args.mode}
    if args.mode == "ivp":
        _need(args, "point", "velocity")
        pt = _point_arg(args.point, "point")
        vel = parse_tangent(_load(args.velocity), pt.n, "velocity")
        trace = geo.geodesic_ivp(mp, geo.GeodesicState(pt, vel), args.t_end, args.steps)
        diag["method"] = "rk4"
        diag["steps"] = args.steps
    else:
        _need(args, "p0", "p1")
        p0 = _point_arg(args.p0, "p0")
        p1 = _point_arg(args.p1, "p1")
        if args.mode == "closed":
            g, dist = _closed_geodesic(args, mp, p0, p1)
            trace = g.trace(args.steps, 0.0, 1.0, mp)
            payload["family"] = g.family.value
            payload["coefficients"] = {k: _jsonable(v) for k, v in g.coefficients.items()}
            diag["method"] = "closed-form"
        else:
            st = geo.geodesic_bvp_shoot(mp, p0, p1, tol=args.tol, steps=args.steps)
            trace = geo.geodesic_ivp(mp, st, 1.0, args.steps)
            payload["initial_velocity"] = tangent_to_doc(st.vel)
            dist = math.sqrt(max(met.unified_eval(mp, st.pt, st.vel, st.vel), 0.0))
            diag["method"] = "shooting"
            diag["tol"] = args.tol
        payload["distance"] = dist
    payload["samples"] = len(trace)
    payload["end_point"] = point_to_doc(trace.end_point())
    if args.out:
        trace.to_csv(args.out)
        payload["csv"] = args.out
        log.info("wrote %d rows to %s", len(trace), args.out)
    return payload


def cmd_distance(args, diag):
    _need(args, "p0", "p1")
    mp = _mp(args)
    p0 = _point_arg(args.p0, "p0")
    p1 = _point_arg(args.p1, "p1")
    if p0.n != p1.n:
        raise DomainError("endpoints differ in dimension")
    if args.case == "n1":
        _, d = geo.geodesic_n1(mp, p0, p1)
    elif args.case == "special-normal":
        if not np.array_equal(p0.u, p1.u):
            raise DomainError("special-normal distance needs equal means")
        d = geo.distance_special_normal(mp, p0.D, p1.D)
    elif args.case == "alpha0":
        if mp.alpha != 0.0 or mp.scale != 1.0:
            raise DomainError("the pullback distance needs alpha = 0 and scale = 1")
        _, d = geo.geodesic_alpha0(mp.beta, p0, p1)
    else:
        d = geo.shooting_distance(mp, p0, p1)
    diag["method"] = "shooting" if args.case == "shoot" else "closed-form"
    return {"distance": d, "case": args.case}


def cmd_curvature(args, diag):
    mp = _mp(args)
    if args.point is not None:
        pt = _point_arg(args.point, "point")
        n = pt.n
    else:
        _need(args, "n")
        n = args.n
        pt = Point(np.eye(n))
    diag["method"] = "closed-form" if args.method == "closed" else "finite-difference"
    if args.what == "scalar":
        if args.method == "closed":
            return {"scal": cv.scalar_full(mp, n), "scal_special": cv.scalar_special(mp, n)}
        chart = oracle.Chart(n)
        c = chart.to_coords(pt)
        return {"scal": oracle.fd_scalar(mp, chart, c), "scal_special": oracle.fd_scalar(mp, chart, c, special=True)}
    if args.what == "ball-volume":
        _need(args, "radius")
        scal = cv.scalar_full(mp, n)
        # the ball lives in the full parameter manifold unless told otherwise
        dim = n * (n + 1) // 2 + n if args.dim is None else args.dim
        if dim < 1:
            raise DomainError("ball dimension must be positive")
        return {"volume": cv.ball_volume(dim, scal, args.radius), "scal": scal, "dim": dim}
    if args.what == "ricci":
        if args.a is None and args.b is None:
            rep = cv.curvature_report(mp, pt, "closed-form" if args.method == "closed" else "finite-difference")
            return rep.to_json()
        _need(args, "a", "b")
        a = parse_tangent(_load(args.a), n, "a")
        b = parse_tangent(_load(args.b), n, "b")
        return {"ricci": cv.ricci(mp, pt, a, b)}
    _need(args, "a", "b", "c")
    a = parse_tangent(_load(args.a), n, "a")
    b = parse_tangent(_load(args.b), n, "b")
    c = parse_tangent(_load(args.c), n, "c")
    return {"riemann": tangent_to_doc(cv.riemann(mp, pt, a, b, c))}


def cmd_verify(args, diag):
    from .verify import run_suite

    checks = run_suite(args.suite, args.tol_profile)
    diag["tol_profile"] = args.tol_profile
    failed = [c.name for c in checks if not c.passed]
    payload = {"checks": [c.to_json() for c in checks], "passed": len(checks) - len(failed), "failed": failed}
    if failed:
        raise _VerifyFailed(payload)
    return payload


class _VerifyFailed(Exception):
    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


COMMANDS = {"entropy": cmd_entropy, "metric": cmd_metric, "geodesic": cmd_geodesic,
            "distance": cmd_distance, "curvature": cmd_curvature, "verify": cmd_verify}


def _finite(obj) -> bool:
    if isinstance(obj, float):
        return math.isfinite(obj)
    if isinstance(obj, dict):
        return all(_finite(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return all(_finite(v) for v in obj)
    return True


def dispatch(argv=None) -> CommandResult:
    """Parse ``argv`` and run the subcommand; never raises for user errors."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return error_result(exc.code, str(exc))
    if args.command is None:
        return error_result("usage", "a subcommand is required")
    diag = {"seed": args.seed, "command": args.command}
    if args.verbose:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        payload = COMMANDS[args.command](args, diag)
    except _VerifyFailed as exc:
        res = error_result("verification-failed", "one or more checks failed", diag)
        res.payload.update(exc.payload)
        return res
    except InfoGeoError as exc:
        return error_result(exc.code, str(exc), diag)
    except OSError as exc:
        return error_result("io", str(exc), diag)
    if not _finite(payload):
        return error_result("non-finite", "result contains infinite or NaN values", diag)
    return CommandResult("ok", payload, diag)


def main(argv=None) -> int:
    res = dispatch(argv)
    sys.stdout.write(res.to_json() + "\n")
    return 0 if res.ok else 1


if __name__ == "__main__":
    sys.exit(main())
