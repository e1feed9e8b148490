"""Command-line front end.

Subcommands: ``eval`` (localized transform values), ``bound`` (assemble
the wave-front bound from charts), ``pcrit`` (tangency locus of a curve
scene), ``probe`` (smoothness probes), ``verify`` (identity suites).

Exit codes: 0 ok, 2 scene/flag parse error, 3 evaluator error, 4 a
verification assertion failed.  Output is deterministic JSON (sorted
keys) or the documented CSV; rationals are serialized as "num/den"
strings so golden files are byte-stable.  Relative --output paths land in
$PADICFT_OUTPUT_DIR when that is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .bound import (
    CurveScene,
    build_wavefront_bound,
    hyperplane_tangency_exact,
)
from .charsums import brute_force_ft, direct_ft, inverse_ft
from .cubes import ResidueCube
from .cyclotomic import CyclotomicValue
from .errors import EvaluatorError, PadicFTError, SceneParseError
from .geometry import descriptor_to_dict
from .scenefile import load_scene_file, parse_rational
from .scenes import FrequencyPoint, MonomialScene, PolynomialScene
from .verify import ProbePlanEntry, homogeneity_suite, smoothness_probe, wavefront_cover_check

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_EVAL = 3
EXIT_ASSERT = 4


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _value_record(v: CyclotomicValue) -> dict:
    z = v.to_complex()
    return {
        "level": v.level,
        "coeffs": {str(j): _frac(c) for j, c in v.terms()},
        "complex": {"re": z.real, "im": z.imag},
        "exact_zero": v.is_zero(),
    }


def _emit(payload, args) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write_text(text, args)


def _write_text(text: str, args) -> None:
    out = getattr(args, "output", None)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if not path.is_absolute():
        root = os.environ.get("PADICFT_OUTPUT_DIR")
        if root:
            path = Path(root) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _parse_cube_flag(spec: str, ctx) -> ResidueCube:
    base, levels = [], []
    for part in spec.split(","):
        if "@" not in part:
            raise SceneParseError(f"cube coordinate {part!r} is not 'base@level'")
        b, k = part.split("@", 1)
        base.append(int(b))
        levels.append(int(k))
    return ResidueCube(ctx, tuple(base), tuple(levels))


def _cmd_eval(args) -> int:
    sf = load_scene_file(args.scene)
    ctx = sf.context()
    cube = _parse_cube_flag(args.cube, ctx) if args.cube else sf.cube(ctx)
    if sf.kind == "monomial":
        xi = parse_rational(args.xi) if args.xi else (sf.xi or (None,))[0]
        if xi is None:
            raise SceneParseError("no frequency given (scene xi or --xi)")
        value = inverse_ft(ctx, sf.scene, cube, xi)
        freq_repr = [_frac(Fraction(xi))]
        oracle = None
        if args.oracle_level is not None:
            oracle = brute_force_ft(ctx, sf.scene, cube, Fraction(xi), args.oracle_level)
    elif sf.kind == "polynomial":
        if args.xi:
            xs = tuple(parse_rational(x) for x in args.xi.split(","))
            freq = FrequencyPoint(xs, sf.twist_scale)
        else:
            freq = sf.frequency()
        value = direct_ft(ctx, sf.scene, cube, freq)
        freq_repr = [_frac(x) for x in freq.xi]
        oracle = None
        if args.oracle_level is not None:
            oracle = brute_force_ft(ctx, sf.scene, cube, freq, args.oracle_level)
    else:
        raise SceneParseError(f"cmd eval does not apply to scene kind {sf.kind!r}")
    payload = {
        "scene_kind": sf.kind,
        "prime": sf.prime,
        "cube": {"base": list(cube.base), "levels": list(cube.levels)},
        "xi": freq_repr,
        "value": _value_record(value),
        "oracle": None if oracle is None else _value_record(oracle),
        "oracle_agrees": None if oracle is None else (oracle == value),
    }
    _emit(payload, args)
    if oracle is not None and oracle != value:
        return EXIT_ASSERT
    return EXIT_OK


def _cmd_bound(args) -> int:
    sf = load_scene_file(args.scene)
    if sf.kind != "charts":
        raise SceneParseError("cmd bound needs a charts scene")
    desc = build_wavefront_bound(sf.charts, d=sf.w_dim, q=sf.y_dim)
    _emit(descriptor_to_dict(desc), args)
    return EXIT_OK


def _cmd_pcrit(args) -> int:
    sf = load_scene_file(args.scene)
    if sf.kind != "curve":
        raise SceneParseError("cmd pcrit needs a curve scene")
    report = hyperplane_tangency_exact(sf.scene)
    payload = {
        "method": report.method,
        "nvars": report.nvars,
        "whole_space": report.whole_space,
        "equations": [
            [
                {"coef": _frac(c), "exps": list(e)}
                for e, c in eq.terms
            ]
            for eq in report.equations
        ],
        "samples": [[_frac(x) for x in pt] for pt in report.samples],
    }
    _emit(payload, args)
    return EXIT_OK


def _probe_entries(sf, ctx):
    entries = []
    for spec in sf.probes:
        cube = ResidueCube(ctx, spec.cube_base, spec.cube_levels)
        if sf.kind == "monomial":
            direction = spec.direction[0]
        else:
            direction = FrequencyPoint(spec.direction, sf.twist_scale)
        entries.append(
            ProbePlanEntry(
                probe_id=spec.probe_id,
                scene=sf.scene,
                cube=cube,
                direction=direction,
                k_max=spec.k_max,
                base=spec.base,
                covector=spec.covector,
            )
        )
    return entries


def _cmd_probe(args) -> int:
    sf = load_scene_file(args.scene)
    if sf.kind not in ("monomial", "polynomial"):
        raise SceneParseError("cmd probe needs a monomial or polynomial scene")
    if not sf.probes:
        raise SceneParseError("scene file lists no probes")
    ctx = sf.context()
    fmt = args.format or sf.output_format
    reports = []
    for entry in _probe_entries(sf, ctx):
        rep = smoothness_probe(
            ctx, entry.scene, entry.cube, entry.direction, entry.k_max,
            scene_ref=entry.probe_id,
        )
        reports.append((entry.probe_id, rep))
    if fmt == "csv":
        lines = ["probe_id,level,value_re,value_im,exact_zero"]
        for pid, rep in reports:
            for k, v in enumerate(rep.values, start=1):
                z = v.to_complex()
                lines.append(
                    f"{pid},{k},{z.real!r},{z.imag!r},{str(v.is_zero()).lower()}"
                )
        _write_text("\n".join(lines) + "\n", args)
        return EXIT_OK
    payload = {
        "probes": [
            {
                "id": pid,
                "outcome": rep.outcome.kind,
                "outcome_level": rep.outcome.level,
                "levels_tested": rep.levels_tested,
                "values": [_value_record(v) for v in rep.values],
            }
            for pid, rep in reports
        ]
    }
    _emit(payload, args)
    return EXIT_OK


def _cmd_verify(args) -> int:
    sf = load_scene_file(args.scene)
    ctx = sf.context()
    if args.suite == "homogeneity":
        if sf.kind != "monomial":
            raise SceneParseError("homogeneity suite needs a monomial scene")
        rep = homogeneity_suite(ctx, sf.scene, trials=args.trials, seed=args.seed)
        payload = {
            "suite": rep.suite,
            "trials": rep.trials,
            "seed": rep.seed,
            "passed": rep.passed,
            "failures": list(rep.failures),
        }
        _emit(payload, args)
        if args.output:
            verdict = "pass" if rep.passed else f"{len(rep.failures)} failures"
            print(f"suite homogeneity: {rep.trials} trials, seed {rep.seed}: {verdict}")
        return EXIT_OK if rep.passed else EXIT_ASSERT
    if args.suite == "cover":
        if sf.kind not in ("monomial", "polynomial"):
            raise SceneParseError("cover suite needs an evaluatable scene")
        if not args.charts:
            raise SceneParseError("cover suite needs --charts CHARTFILE")
        cf = load_scene_file(args.charts)
        if cf.kind != "charts":
            raise SceneParseError("--charts must point at a charts scene")
        bound = build_wavefront_bound(cf.charts, d=cf.w_dim, q=cf.y_dim)
        rep = wavefront_cover_check(ctx, bound, _probe_entries(sf, ctx))
        payload = {
            "suite": "cover",
            "passed": rep.passed,
            "entries": list(rep.entries),
            "violations": list(rep.violations),
        }
        _emit(payload, args)
        if args.output:
            for entry in rep.entries:
                member = entry["member"]
                tag = "-" if member is None else ("in-bound" if member else "OUTSIDE")
                print(f"{entry['probe_id']}: {entry['outcome']} {tag}")
            print(f"suite cover: {'pass' if rep.passed else 'FAIL'}")
        return EXIT_OK if rep.passed else EXIT_ASSERT
    raise SceneParseError(f"unknown suite {args.suite!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicft",
        description="Exact p-adic Fourier transforms of algebraic measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a localized transform")
    pe.add_argument("scene")
    pe.add_argument("--xi", help="frequency override: rational or comma list")
    pe.add_argument("--cube", help="cube override: base@level,base@level,...")
    pe.add_argument("--oracle-level", type=int, default=None)
    pe.add_argument("--output")
    pe.set_defaults(func=_cmd_eval)

    pb = sub.add_parser("bound", help="assemble the wave-front bound")
    pb.add_argument("scene")
    pb.add_argument("--output")
    pb.set_defaults(func=_cmd_bound)

    pp = sub.add_parser("pcrit", help="tangency locus of a curve scene")
    pp.add_argument("scene")
    pp.add_argument("--output")
    pp.set_defaults(func=_cmd_pcrit)

    pr = sub.add_parser("probe", help="run the scene file's probe plan")
    pr.add_argument("scene")
    pr.add_argument("--format", choices=["json", "csv"], default=None)
    pr.add_argument("--output")
    pr.set_defaults(func=_cmd_probe)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("scene")
    pv.add_argument("--suite", required=True, choices=["homogeneity", "cover"])
    pv.add_argument("--trials", type=int, default=200)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--charts", help="charts scene for the cover suite")
    pv.add_argument("--output")
    pv.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except SceneParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EvaluatorError, PadicFTError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
