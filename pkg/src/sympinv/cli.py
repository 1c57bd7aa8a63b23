"""Command-line interface.

Exit codes: 0 ok, 1 other error, 2 unparsable input, 3 dimension limit,
4 degenerate form, 5 forms in different orbits, 6 invariant gap found,
7 vanishing coefficient.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import expr as ex
from .errors import (
    DegenerateFormError,
    DifferentOrbitError,
    DimensionError,
    FormError,
    SympInvError,
    VanishingCoefficientError,
)
from .forms import SampleDomain, global_invariants, multiset_match, parse_form
from .matrix import MAX_ORACLE_N, SkewMatrix, invariants, pfaffian, sum_function
from .orbit4 import (
    Shape,
    classify,
    lift_to_orbit,
    orbit_geometry,
    orbit_map_negative_delta,
    orbit_map_positive_delta,
    witness,
)
from .scalar import DEFAULT_EPS, Mode, format_scalar, parse_scalar
from .symplectic import SymplecticMatrix, act, is_symplectic, parse_square_matrix, random_symplectic

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_DEGENERATE = 4
EXIT_DIFFERENT_ORBIT = 5
EXIT_GAP = 6
EXIT_VANISHING = 7

MAX_N = MAX_ORACLE_N


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: Mode
    epsilon: float
    seed: int
    out: Path | None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError(f"--epsilon must be positive, got {self.epsilon}")


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _read_matrix(path: str, cfg: RunConfig) -> SkewMatrix:
    data = _read_json(path)
    if isinstance(data, dict) and isinstance(data.get("n"), int) and data["n"] > MAX_N:
        raise DimensionError(f"{path}: n={data['n']} exceeds the supported maximum {MAX_N}")
    try:
        return SkewMatrix.from_json(data, cfg.mode)
    except (DimensionError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_square(path: str, cfg: RunConfig):
    try:
        return parse_square_matrix(_read_json(path), cfg.mode)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(cfg: RunConfig, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text, encoding="utf-8")


# -- subcommands -------------------------------------------------------------


def cmd_pfaffian(args, cfg):
    a = _read_matrix(args.matrix, cfg)
    _emit(cfg, {"n": a.n, "pfaffian": format_scalar(pfaffian(a))})
    return EXIT_OK


def cmd_invariants(args, cfg):
    a = _read_matrix(args.matrix, cfg)
    inv = invariants(a, cfg.epsilon)
    _emit(
        cfg,
        {
            "n": a.n,
            "pfaffian": format_scalar(pfaffian(a)),
            "sum": format_scalar(sum_function(a)),
            "invariants": inv.to_json(),
        },
    )
    return EXIT_OK


def cmd_classify(args, cfg):
    a = _read_matrix(args.matrix, cfg)
    _emit(cfg, classify(a, cfg.epsilon).to_json())
    return EXIT_OK


def cmd_witness(args, cfg):
    a = _read_matrix(args.source, cfg)
    b = _read_matrix(args.target, cfg)
    cert = witness(a, b, cfg.epsilon)
    _emit(cfg, cert.to_json())
    return EXIT_OK


def cmd_verify(args, cfg):
    p = _read_square(args.matrix, cfg)
    _emit(cfg, {"symplectic": is_symplectic(p, cfg.epsilon)})
    return EXIT_OK


def cmd_act(args, cfg):
    a = _read_matrix(args.matrix, cfg)
    if args.P is None:
        p = random_symplectic(a.n, cfg.seed, args.complexity)
        if cfg.mode is Mode.FLOAT:
            p = p.to_mode(Mode.FLOAT)
    else:
        p = SymplecticMatrix(_read_square(args.P, cfg), cfg.epsilon)
    out = act(p, a).to_json()
    if args.P is None:
        out = {**out, "P": p.to_json()["rows"]}
    _emit(cfg, out)
    return EXIT_OK


def cmd_geometry_sample(args, cfg):
    p = parse_scalar(args.p, cfg.mode)
    q = parse_scalar(args.q, cfg.mode)
    geo = orbit_geometry(p, q, cfg.epsilon)
    if geo.shape is Shape.BOUNDARY:
        raise InputError("delta = 0: no parametrization is available for the boundary case")
    rng = random.Random(cfg.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "c", "d", "e", "f", "sheet", "on_boundary"])
    delta = float(geo.delta)
    for _ in range(args.count):
        on_boundary = rng.random() < args.boundary_fraction
        theta = rng.uniform(0, 2 * math.pi)
        rad = 1.0 if on_boundary else math.sqrt(rng.random()) * 0.999
        u, v = rad * math.cos(theta), rad * math.sin(theta)
        s1, s2 = rng.uniform(-args.radius, args.radius), rng.uniform(-args.radius, args.radius)
        if geo.shape is Shape.SPHERE_TIMES_PLANE:
            bcde = orbit_map_positive_delta(u, v, s1, s2, delta, cfg.epsilon)
        else:
            if rad == 0:
                continue
            bcde = orbit_map_negative_delta(s1, s2, u, v, delta, cfg.epsilon)
        sheet = rng.choice(("upper", "lower"))
        m = lift_to_orbit(*bcde, float(p), float(q), sheet, cfg.epsilon)
        writer.writerow([repr(float(x)) for x in m.abcdef()] + [sheet, int(on_boundary)])
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def _parse_box(text: str):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"--box expects 'lo,hi', got {text!r}") from exc
    return lo, hi


def _read_form(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_form(text)


def cmd_forms_invariants(args, cfg):
    form = _read_form(args.form)
    lo, hi = _parse_box(args.box)
    domain = SampleDomain.box(form.n, lo, hi, args.res, args.t)
    inv = global_invariants(form, domain, cfg.epsilon)
    _emit(cfg, {"form": args.form, "t": args.t, **inv.to_json()})
    return EXIT_OK


def cmd_forms_compare(args, cfg):
    paths = args.form
    if len(paths) == 1:
        paths = paths * 2
    if len(paths) != 2:
        raise InputError("forms compare takes one or two --form files")
    ts = args.t or [0.0]
    if len(ts) == 1:
        ts = ts * 2
    if len(ts) != 2:
        raise InputError("forms compare takes one or two --t values")
    f1, f2 = (_read_form(p) for p in paths)
    lo, hi = _parse_box(args.box)
    d1 = SampleDomain.box(f1.n, lo, hi, args.res, ts[0])
    d2 = SampleDomain.box(f2.n, lo, hi, args.res, ts[1])
    report = multiset_match(f1, f2, d1, d2, eps=cfg.epsilon)
    out = report.to_json()
    out["forms"] = [{"form": p, "t": t} for p, t in zip(paths, ts)]
    _emit(cfg, out)
    return EXIT_GAP if report.gap_found else EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RATIONAL.value)
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPS, help="zero tolerance in float mode")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="sympinv", description="Invariants and orbits of linear symplectic forms."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pfaffian", parents=[common], help="Pfaffian of a skew matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_pfaffian)

    p = sub.add_parser("invariants", parents=[common], help="Pfaffian, sum and s_0..s_{n-1}")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", parents=[common], help="orbit label of a 4x4 form")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", parents=[common], help="P with act(P, target) = source")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="check P^T J P = J")
    p.add_argument("matrix", help='JSON {"rows": [[...], ...]}')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("act", parents=[common], help="P^T A P (random P from --seed if --P is omitted)")
    p.add_argument("matrix")
    p.add_argument("--P", default=None, help='symplectic matrix JSON {"rows": ...}')
    p.add_argument("--complexity", type=int, default=8)
    p.set_defaults(func=cmd_act)

    geo = sub.add_parser("geometry", help="orbit geometry")
    geo_sub = geo.add_subparsers(dest="geometry_command", required=True)
    p = geo_sub.add_parser("sample", parents=[common], help="CSV point cloud of an orbit A_{p,q}")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--radius", type=float, default=5.0, help="half-width for the unbounded factor")
    p.add_argument("--boundary-fraction", type=float, default=0.1)
    p.set_defaults(func=cmd_geometry_sample)

    forms = sub.add_parser("forms", help="split nonlinear symplectic forms")
    forms_sub = forms.add_subparsers(dest="forms_command", required=True)
    p = forms_sub.add_parser("invariants", parents=[common], help="grid-approximate global invariants")
    p.add_argument("--form", required=True)
    p.add_argument("--box", required=True, help="lo,hi (write --box=-10,10 for negative bounds)")
    p.add_argument("--res", type=int, required=True, help="grid points per axis")
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(func=cmd_forms_invariants)

    p = forms_sub.add_parser("compare", parents=[common], help="look for a global invariant gap")
    p.add_argument("--form", action="append", required=True)
    p.add_argument("--box", required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--t", type=float, action="append")
    p.set_defaults(func=cmd_forms_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(Mode(args.mode), args.epsilon, args.seed, args.out)
        return args.func(args, cfg)
    except (InputError, ex.ExprError, FormError) as exc:
        code = EXIT_PARSE
        if isinstance(exc, ex.EvaluationError):
            code = EXIT_ERROR
        _fail(exc)
        return code
    except DimensionError as exc:
        _fail(exc)
        return EXIT_DIMENSION
    except DegenerateFormError as exc:
        _fail(exc)
        return EXIT_DEGENERATE
    except DifferentOrbitError as exc:
        _fail(exc)
        return EXIT_DIFFERENT_ORBIT
    except VanishingCoefficientError as exc:
        _fail(exc)
        return EXIT_VANISHING
    except (SympInvError, ValueError) as exc:
        _fail(exc)
        return EXIT_ERROR


def _fail(exc: Exception) -> None:
    print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
