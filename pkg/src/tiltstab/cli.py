"""tiltstab command line.

Exit status: 0 on success, 1 when a verification reports failures, 2 on
usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import codec
from .chern import ProjectedChern, beta_bar, delta_bar, project, twist
from .exactnum import DomainError, MixedRadicalError, dirichlet_convergents, parse_scalar, within_dirichlet_bound
from .frobenius import CASES, PreconditionError, thomsen_decompose, verify_vanishing
from .geometry import (
    ModelError,
    chern_of_line_bundle,
    euler_char,
    euler_polynomial,
    is_ample,
    point_class,
    structure_sheaf_of_plane,
)
from .tilt import (
    TiltPoint,
    bmt_surplus,
    central_charge,
    central_charge_real_alt,
    mu_slope,
    nu_slope,
    reduced_check,
)
from .walls import (
    Wall,
    bmt_scan,
    counterexample_certificate,
    destabilizer_scan,
    wall_between,
)

COMMANDS = (
    "chern",
    "slope",
    "nu",
    "charge",
    "bmt",
    "reduce",
    "thomsen",
    "verify",
    "euler-poly",
    "walls",
    "counterexample",
    "dirichlet",
    "scan",
)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument handling


def _add_model_args(p: argparse.ArgumentParser, need_char: bool = False) -> None:
    p.add_argument("--model", help="P1xS, P2xC, P1xP1xC or CY3")
    p.add_argument("--d", help="polarization degree of the abelian surface (P1xS)")
    p.add_argument("--s", help="L^3 on the CY3 model")
    p.add_argument("--H", dest="H", help='polarization, e.g. "h+f", "h:1,f:1" or "2L-1/2D"')
    if need_char:
        g = p.add_argument_group("character")
        g.add_argument("--char", help='projected character "e0,e1,e2,e3"')
        g.add_argument("--line", help="divisor D; uses ch(O(D))")
        g.add_argument("--plane", action="store_true", help="ch(O_D) of the plane on CY3")


def _common_args(suppress: bool) -> argparse.ArgumentParser:
    # the same options are accepted before and after the subcommand
    default = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=default, help="JSON file with default flag values")
    common.add_argument(
        "--seed",
        type=int,
        default=argparse.SUPPRESS if suppress else 0,
        help="accepted for interface stability; scans are exhaustive",
    )
    common.add_argument(
        "--format",
        choices=("json", "csv", "text", "svg"),
        default=default,
        help="svg writes the figure of walls/counterexample to stdout",
    )
    return common


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="tiltstab", description=__doc__.splitlines()[0], parents=[_common_args(False)]
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_args(True)
    _orig = sub.add_parser

    def add_parser(name, **kw):
        return _orig(name, parents=[common], **kw)

    sub.add_parser = add_parser
    subs = {}

    p = subs["chern"] = sub.add_parser("chern", help="projection, twist, discriminant and beta-bar")
    _add_model_args(p, need_char=True)
    p.add_argument("--beta", help="optional twist parameter")

    for name, helptext in (
        ("slope", "mu and nu slopes"),
        ("nu", "tilt slope nu"),
        ("charge", "central charge Z"),
        ("bmt", "BMT surplus alpha^2/6 H^2ch1^beta - ch3^beta"),
    ):
        p = subs[name] = sub.add_parser(name, help=helptext)
        _add_model_args(p, need_char=True)
        p.add_argument("--alpha", required=False)
        p.add_argument("--beta", required=False)

    p = subs["reduce"] = sub.add_parser("reduce", help="sign of ch3 twisted at beta-bar")
    _add_model_args(p, need_char=True)

    p = subs["thomsen"] = sub.add_parser("thomsen", help="toric Frobenius pushforward of O(D)")
    p.add_argument("--toric", help="P1, P2 or P1xP1")
    p.add_argument("--D", dest="D", help="Picard coordinates, e.g. 1 or 0,1")
    p.add_argument("--m", type=int)

    p = subs["verify"] = sub.add_parser("verify", help="vanishing-lemma verifier")
    _add_model_args(p)
    p.add_argument("--case", choices=CASES)
    for key in ("m", "p", "q", "u", "v"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    p.add_argument("--json", action="store_true", help="same as --format json")

    p = subs["euler-poly"] = sub.add_parser("euler-poly", help="chi(f^{(m^2,m)*} E) as a polynomial in m")
    _add_model_args(p)
    p.add_argument("--line", help="divisor D; uses ch(O(D))")
    p.add_argument("--point", help="multiple of the point class")

    p = subs["walls"] = sub.add_parser("walls", help="numerical walls of a character")
    p.add_argument("--char", help="projected character v")
    p.add_argument("--w", help="a single second character; otherwise scan --box")
    p.add_argument("--box", help='"lo:hi,lo:hi,lo:hi" bounds for e0, e1, e2')
    p.add_argument("--den", type=int, default=1, help="denominator cap for the box")
    p.add_argument("--svg", help="write the wall diagram to this file")

    p = subs["counterexample"] = sub.add_parser("counterexample", help="plane-in-CY3 certificate")
    p.add_argument("--s")
    p.add_argument("--m", type=int)
    p.add_argument("--figure", help="write the Re Z / window figure to this file")
    p.add_argument("--json", action="store_true", help="same as --format json")

    p = subs["dirichlet"] = sub.add_parser("dirichlet", help="continued-fraction convergents")
    p.add_argument("--x", help='value, e.g. "sqrt(2)" or "1/2+1/2*sqrt(5)"')
    p.add_argument("--char", help="use beta-bar of this projected character")
    p.add_argument("--n", type=int, default=10)

    p = subs["scan"] = sub.add_parser("scan", help="BMT sign survey on nu = 0 loci")
    _add_model_args(p)
    p.add_argument("--chars", help='";"-separated projected characters')
    p.add_argument("--multiples", help="lo:hi, scan O(cH) for integer c in range")
    p.add_argument("--plane", action="store_true", help="include O_D on CY3")
    p.add_argument("--betas", help="comma-separated beta grid")
    p.add_argument("--alphas", default="", help="alpha grid used where the locus does not fix alpha")
    return parser, subs


def _load_config(argv: list[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        data = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def _join_negative_values(parser, subs, argv: list[str]) -> list[str]:
    """Rewrite ``--box -2:2`` as ``--box=-2:2`` so leading minus signs survive argparse."""
    flags = set()
    for p in [parser, *subs.values()]:
        for action in p._actions:
            if action.nargs is None and action.option_strings:
                flags.update(action.option_strings)
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_args(argv: list[str]) -> argparse.Namespace:
    cfg = _load_config(argv)
    parser, subs = build_parser()
    argv = _join_negative_values(parser, subs, argv)
    if cfg:
        model = cfg.get("model")
        if isinstance(model, dict):
            cfg = dict(cfg)
            cfg["model"] = model.get("kind")
            for key in ("d", "s"):
                if key in model:
                    cfg.setdefault(key, model[key])
        flat = {k.replace("-", "_"): (str(v) if isinstance(v, (int, float)) and k not in ("m", "p", "q", "u", "v", "n", "den", "seed") else v) for k, v in cfg.items()}
        for p in subs.values():
            known = {a.dest for a in p._actions}
            p.set_defaults(**{k: v for k, v in flat.items() if k in known and k not in ("seed", "format", "config")})
        parser.set_defaults(**{k: v for k, v in flat.items() if k in ("seed", "format")})
    return parser.parse_args(argv)


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) in (None, "")]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _model_and_H(args):
    _require(args, "model")
    model = codec.model_from_json({"kind": args.model, "d": args.d, "s": args.s})
    H = codec.parse_divisor(model, args.H) if args.H else model.default_polarization()
    try:
        ok = is_ample(model, H)
    except ModelError as exc:
        raise UsageError(f"polarization H: {exc}") from exc
    if not ok:
        raise UsageError("polarization H is not ample")
    return model, H


def _character(args, required_nonzero: bool = False):
    """Projected character from --char, --line or --plane (the latter two need a model)."""
    sources = [s for s in ("char", "line", "plane") if getattr(args, s, None)]
    if len(sources) != 1:
        raise UsageError("give exactly one of --char, --line, --plane")
    if args.char:
        p = codec.projected_from_json(args.char)
    else:
        model, H = _model_and_H(args)
        if args.line:
            v = chern_of_line_bundle(model, codec.parse_divisor(model, args.line))
        else:
            v = structure_sheaf_of_plane(model)
        p = project(model, H, v)
    if required_nonzero and p.is_zero():
        raise UsageError("the zero character has no slope")
    return p


def _tilt(args) -> TiltPoint:
    _require(args, "alpha", "beta")
    return TiltPoint(parse_scalar(args.alpha), parse_scalar(args.beta))


# ---------------------------------------------------------------------------
# commands


def cmd_chern(args) -> tuple[dict, int]:
    p = _character(args)
    out = {"projected": codec.projected_to_json(p), "delta_bar": codec.scalar_to_json(delta_bar(p))}
    try:
        out["beta_bar"] = codec.scalar_to_json(beta_bar(p))
    except DomainError as exc:
        out["beta_bar"] = None
        out["beta_bar_error"] = str(exc)
    if args.beta is not None:
        out["twisted"] = codec.projected_to_json(twist(p, parse_scalar(args.beta)))
    return out, 0


def cmd_slope(args) -> tuple[dict, int]:
    p = _character(args, required_nonzero=True)
    t = _tilt(args)
    return {"mu": codec.slope_to_json(mu_slope(p, t.beta)), "nu": codec.slope_to_json(nu_slope(p, t))}, 0


def cmd_nu(args) -> tuple[dict, int]:
    p = _character(args, required_nonzero=True)
    return codec.slope_to_json(nu_slope(p, _tilt(args))), 0


def cmd_charge(args) -> tuple[dict, int]:
    p = _character(args)
    t = _tilt(args)
    z = central_charge(p, t)
    return {
        "re": codec.scalar_to_json(z.re),
        "im_over_sqrt3": codec.scalar_to_json(z.im_over_sqrt3),
        "re_alt_normalization": codec.scalar_to_json(central_charge_real_alt(p, t)),
    }, 0


def cmd_bmt(args) -> tuple[dict, int]:
    from .exactnum import quad_sign

    p = _character(args)
    s = bmt_surplus(p, _tilt(args))
    return {"surplus": codec.scalar_to_json(s), "inequality_holds": quad_sign(s) >= 0}, 0


def cmd_reduce(args) -> tuple[dict, int]:
    r = reduced_check(_character(args))
    return {
        "verdict": r.verdict,
        "value": codec.scalar_to_json(r.value),
        "beta_bar": codec.scalar_to_json(r.beta_bar),
        "hypotheses": r.hypotheses,
    }, 0


def cmd_thomsen(args) -> tuple[dict, int]:
    _require(args, "toric", "D", "m")
    D = tuple(int(x) for x in args.D.split(","))
    dec = thomsen_decompose(args.toric, D, args.m)
    return {
        "toric": args.toric,
        "D": list(D),
        "m": args.m,
        "rank": dec.rank,
        "summands": [{"divisor": list(d), "multiplicity": n} for d, n in dec.summands],
    }, 0


def cmd_verify(args) -> tuple[dict, int]:
    _require(args, "case")
    model, H = _model_and_H(args)
    params = {k: getattr(args, k) for k in ("m", "p", "q", "u", "v") if getattr(args, k) is not None}
    report = verify_vanishing(model, args.case, params, H=H, timed=args.timing)
    out = {
        "model": model.describe(),
        "H": codec.divisor_to_json(model, H),
        "case": report.case,
        "parameters": report.parameters,
        "passed": report.passed,
        "residues_checked": report.residues_checked,
        "tuples_covered": report.tuples_covered,
        "failures": report.failures,
    }
    if report.wall_clock is not None:
        out["wall_clock_s"] = round(report.wall_clock, 6)
    return out, 0 if report.passed else 1


def cmd_euler_poly(args) -> tuple[dict, int]:
    model, _ = _model_and_H(args)
    if bool(args.line) == bool(args.point):
        raise UsageError("give exactly one of --line, --point")
    v = chern_of_line_bundle(model, codec.parse_divisor(model, args.line)) if args.line else point_class(model, parse_scalar(args.point))
    poly = euler_polynomial(model, v)
    return {
        "character": codec.coh_to_json(model, v),
        "polynomial": codec.polynomial_to_json(poly),
        "text": str(poly),
        "chi": codec.scalar_to_json(euler_char(model, v)),
    }, 0


def _wall_json(w) -> dict:
    if not isinstance(w, Wall):
        return {"result": w}
    return {
        "result": "vertical wall" if w.vertical else "wall",
        "center_beta": codec.scalar_to_json(w.center_beta),
        "radius": None if w.vertical else codec.scalar_to_json(w.radius),
        "pair": [codec.projected_to_json(w.pair[0]), codec.projected_to_json(w.pair[1])],
    }


def _parse_box(text: str) -> list[tuple[Fraction, Fraction]]:
    box = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise UsageError(f"box entries look like lo:hi, got {part!r}")
        box.append((Fraction(lo), Fraction(hi)))
    if len(box) != 3:
        raise UsageError("box needs three ranges (e0, e1, e2)")
    return box


def cmd_walls(args) -> tuple[dict, int]:
    _require(args, "char")
    v = codec.projected_from_json(args.char)
    if args.w:
        result = wall_between(v, codec.projected_from_json(args.w))
        walls = [result] if isinstance(result, Wall) else []
        out = _wall_json(result)
    else:
        _require(args, "box")
        walls = destabilizer_scan(v, _parse_box(args.box), args.den)
        out = {"character": codec.projected_to_json(v), "walls": [_wall_json(w) for w in walls]}
    if args.svg:
        from .plotting import plot_walls

        out["figure"] = str(plot_walls(walls, args.svg, title=f"walls of ({args.char})"))
    return out, 0


def cmd_counterexample(args) -> tuple[dict, int]:
    _require(args, "s", "m")
    cert = counterexample_certificate(parse_scalar(args.s), args.m)
    model_H = {"L": codec.scalar_to_json(cert.H[0]), "D": codec.scalar_to_json(cert.H[1])}
    out = {
        "s": codec.scalar_to_json(cert.s),
        "m": cert.m,
        "H": model_H,
        "projected": codec.projected_to_json(cert.projected),
        "twisted_beta_1": codec.projected_to_json(cert.twisted),
        "nu_numerator_at_beta_1": codec.scalar_to_json(cert.nu_at_beta1),
        "wall_center": codec.scalar_to_json(cert.checks["wall_center"]),
        "radius_bound": codec.scalar_to_json(cert.radius_bound),
        "rez_thresholds": [codec.scalar_to_json(t) for t in cert.rez_thresholds],
        "rez_real_parts": {
            "omega_alpha_sqrt3_H": cert.checks["central_charge_real_convention"],
            "alt_normalization": cert.checks["central_charge_real_alt"],
        },
        "threshold_discrepancy_flagged": cert.checks["thresholds_disagree"],
        "window": None if cert.window is None else [codec.scalar_to_json(x) for x in cert.window],
        "alt_window": None if cert.alt_window is None else [codec.scalar_to_json(x) for x in cert.alt_window],
        "window_nonempty": cert.window_nonempty,
        "checks": {k: v for k, v in cert.checks.items() if isinstance(v, bool)},
    }
    if args.figure:
        from .plotting import plot_certificate

        out["figure"] = str(plot_certificate(cert, args.figure))
    # the threshold disagreement is reported, not a failure
    ok = cert.window_nonempty and all(v for k, v in out["checks"].items() if k != "thresholds_disagree")
    return out, 0 if ok else 1


def cmd_dirichlet(args) -> tuple[dict, int]:
    if bool(args.x) == bool(args.char):
        raise UsageError("give exactly one of --x, --char")
    x = parse_scalar(args.x) if args.x else beta_bar(codec.projected_from_json(args.char))
    pairs, terminated = dirichlet_convergents(x, args.n)
    return {
        "x": codec.scalar_to_json(x),
        "terminated": terminated,
        "convergents": [
            {"p": p, "q": q, "within_bound": terminated or within_dirichlet_bound(x, p, q)} for p, q in pairs
        ],
    }, 0


def cmd_scan(args) -> tuple[dict, int]:
    _require(args, "betas")
    chars: list[ProjectedChern] = []
    if args.chars:
        chars.extend(codec.projected_from_json(c) for c in args.chars.split(";"))
    if args.multiples or args.plane:
        model, H = _model_and_H(args)
        if args.multiples:
            lo, _, hi = args.multiples.partition(":")
            for c in range(int(lo), int(hi) + 1):
                chars.append(project(model, H, chern_of_line_bundle(model, H * c)))
        if args.plane:
            chars.append(project(model, H, structure_sheaf_of_plane(model)))
    betas = [parse_scalar(b) for b in args.betas.split(",") if b.strip()]
    alphas = [parse_scalar(a) for a in args.alphas.split(",") if a.strip()]
    report = bmt_scan(chars, betas, alphas)
    return {
        "note": report.note,
        "entries": [
            {
                "character": codec.projected_to_json(e.character),
                "beta": codec.scalar_to_json(e.beta),
                "alpha": codec.scalar_to_json(e.alpha),
                "surplus": codec.scalar_to_json(e.surplus),
                "status": e.status,
            }
            for e in report.entries
        ],
        "classification": [
            {"character": codec.projected_to_json(chars[i]), "status": st}
            for i, st in sorted(report.classification.items())
        ],
    }, 0


HANDLERS = {
    "chern": cmd_chern,
    "slope": cmd_slope,
    "nu": cmd_nu,
    "charge": cmd_charge,
    "bmt": cmd_bmt,
    "reduce": cmd_reduce,
    "thomsen": cmd_thomsen,
    "verify": cmd_verify,
    "euler-poly": cmd_euler_poly,
    "walls": cmd_walls,
    "counterexample": cmd_counterexample,
    "dirichlet": cmd_dirichlet,
    "scan": cmd_scan,
}


# ---------------------------------------------------------------------------
# output


def _flatten(obj, prefix: str = "") -> dict:
    if isinstance(obj, dict) and not set(obj) == {"a", "b", "d"}:
        out = {}
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}."))
        return out
    if isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        out = {}
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
        return out
    return {prefix.rstrip("."): obj}


def _render_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"a", "b", "d"}:
        from .exactnum import QuadraticNumber, format_quadratic

        return format_quadratic(QuadraticNumber(Fraction(v["a"]), Fraction(v["b"]), v["d"]))
    if isinstance(v, list):
        return "(" + ", ".join(_render_value(x) for x in v) + ")"
    return "" if v is None else str(v)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return codec.dumps(payload) + "\n"
    rows = _flatten(payload)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k, v in rows.items():
            writer.writerow([k, _render_value(v)])
        return buf.getvalue()
    width = max((len(k) for k in rows), default=0)
    return "".join(f"{k.ljust(width)}  {_render_value(v)}\n" for k, v in rows.items())


def _run_svg(args, stdout) -> int:
    import tempfile

    dest = {"walls": "svg", "counterexample": "figure"}.get(args.command)
    if dest is None:
        raise UsageError("--format svg is only available for walls and counterexample")
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "figure.svg"
        setattr(args, dest, str(path))
        _, code = HANDLERS[args.command](args)
        stdout.write(path.read_text(encoding="utf-8"))
    return code


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"tiltstab: error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.format or "json"
    try:
        if fmt == "svg":
            return _run_svg(args, stdout)
        if getattr(args, "model", None):
            _model_and_H(args)
        payload, code = HANDLERS[args.command](args)
    except (UsageError, ModelError, DomainError, PreconditionError, MixedRadicalError, ValueError, ZeroDivisionError) as exc:
        print(f"tiltstab {args.command}: error: {exc}", file=stderr)
        return 2
    stdout.write(render(payload, fmt))
    return code


def main() -> None:
    sys.exit(run())
