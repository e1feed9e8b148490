"""Strict scene-file parsing: TOML for humans, JSON for machines.

Strictness contract: unknown keys are rejected, the format version must
match, and every numeric literal in a scene body is an exact integer or a
"num/den" rational string -- float literals are a parse error in either
format.  This keeps golden files byte-stable and evaluation exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

try:
    import tomllib  # Python >= 3.11
except ImportError:  # pragma: no cover
    import tomli as tomllib

from .bound import CurveScene, ResolutionChart
from .cubes import ResidueCube
from .errors import SceneParseError
from .padic import PrimeContext
from .scenes import FrequencyPoint, MonomialScene, Polynomial, PolynomialScene

FORMAT_VERSION = 1

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise SceneParseError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SceneParseError(f"float literal {value!r} rejected; use 'num/den'")
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value.strip()):
            raise SceneParseError(f"malformed rational literal {value!r}")
        return Fraction(value.strip())
    raise SceneParseError(f"expected a rational, got {type(value).__name__}")


def _reject_floats(node, where: str) -> None:
    if isinstance(node, float):
        raise SceneParseError(f"float literal in scene body at {where}")
    if isinstance(node, dict):
        for k, v in node.items():
            _reject_floats(v, f"{where}.{k}")
    if isinstance(node, list):
        for i, v in enumerate(node):
            _reject_floats(v, f"{where}[{i}]")


def _check_keys(table: dict, allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise SceneParseError(f"unknown key(s) {sorted(unknown)} in {where}")


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise SceneParseError(f"missing key {key!r} in {where}")
    return table[key]


@dataclass(frozen=True)
class ProbeSpec:
    probe_id: str
    cube_base: tuple[int, ...]
    cube_levels: tuple[int, ...]
    direction: tuple[Fraction, ...]
    k_max: int
    base: Optional[tuple[Fraction, ...]]
    covector: Optional[tuple[Fraction, ...]]


@dataclass(frozen=True)
class SceneFile:
    prime: int
    max_level: int
    kind: str  # "monomial" | "polynomial" | "charts" | "curve"
    scene: object
    w_dim: int
    y_dim: int
    charts: tuple[ResolutionChart, ...]
    cube_base: Optional[tuple[int, ...]]
    cube_levels: Optional[tuple[int, ...]]
    xi: Optional[tuple[Fraction, ...]]
    twist_scale: Optional[Fraction]
    probes: tuple[ProbeSpec, ...]
    output_format: str  # "json" | "csv"

    def context(self) -> PrimeContext:
        return PrimeContext(self.prime, self.max_level)

    def cube(self, ctx: PrimeContext) -> ResidueCube:
        if self.cube_base is None:
            n = getattr(self.scene, "n", 1)
            return ResidueCube.zp(ctx, n)
        return ResidueCube(ctx, self.cube_base, self.cube_levels)

    def frequency(self) -> FrequencyPoint:
        if self.xi is None:
            raise SceneParseError("scene file carries no frequency")
        return FrequencyPoint(self.xi, self.twist_scale)


def _parse_poly(node, nvars: int, where: str) -> Polynomial:
    if not isinstance(node, list):
        raise SceneParseError(f"{where} must be a list of terms")
    terms = {}
    for i, term in enumerate(node):
        if not isinstance(term, dict):
            raise SceneParseError(f"{where}[{i}] must be a table")
        _check_keys(term, {"coef", "exps"}, f"{where}[{i}]")
        coef = parse_rational(_require(term, "coef", f"{where}[{i}]"))
        exps = _require(term, "exps", f"{where}[{i}]")
        if not isinstance(exps, list) or len(exps) != nvars:
            raise SceneParseError(f"{where}[{i}].exps must list {nvars} exponents")
        key = tuple(int(e) for e in exps)
        terms[key] = terms.get(key, Fraction(0)) + coef
    return Polynomial.from_dict(nvars, terms)


def _parse_cube(node, n: int, where: str):
    _check_keys(node, {"base", "level"}, where)
    base = _require(node, "base", where)
    if not isinstance(base, list) or len(base) != n:
        raise SceneParseError(f"{where}.base must list {n} residues")
    level = _require(node, "level", where)
    levels = (
        tuple(int(x) for x in level) if isinstance(level, list) else (int(level),) * n
    )
    if len(levels) != n:
        raise SceneParseError(f"{where}.level must broadcast to {n} coordinates")
    return tuple(int(b) for b in base), levels


def _parse_probes(node, where: str) -> tuple[ProbeSpec, ...]:
    probes = []
    for i, pr in enumerate(node):
        w = f"{where}[{i}]"
        _check_keys(
            pr, {"id", "cube", "direction", "k_max", "base", "covector"}, w
        )
        direction = _require(pr, "direction", w)
        if not isinstance(direction, list):
            direction = [direction]
        dirv = tuple(parse_rational(x) for x in direction)
        cube_node = _require(pr, "cube", w)
        n = len(cube_node.get("base", []))
        cb, cl = _parse_cube(cube_node, n, f"{w}.cube")
        base = pr.get("base")
        cov = pr.get("covector")
        probes.append(
            ProbeSpec(
                probe_id=str(_require(pr, "id", w)),
                cube_base=cb,
                cube_levels=cl,
                direction=dirv,
                k_max=int(_require(pr, "k_max", w)),
                base=None if base is None else tuple(parse_rational(x) for x in base),
                covector=None if cov is None else tuple(parse_rational(x) for x in cov),
            )
        )
    return tuple(probes)


def parse_scene_data(data: dict) -> SceneFile:
    _reject_floats(data, "$")
    _check_keys(
        data,
        {"format_version", "prime", "max_level", "scene", "probes", "output"},
        "top level",
    )
    version = _require(data, "format_version", "top level")
    if version != FORMAT_VERSION:
        raise SceneParseError(
            f"format_version {version!r} unsupported (expected {FORMAT_VERSION})"
        )
    prime = int(_require(data, "prime", "top level"))
    max_level = int(_require(data, "max_level", "top level"))
    scene_node = _require(data, "scene", "top level")
    kind = _require(scene_node, "kind", "scene")

    cube_base = cube_levels = None
    xi = None
    twist_scale = None
    charts: tuple[ResolutionChart, ...] = ()
    w_dim = y_dim = 0

    if kind == "monomial":
        _check_keys(scene_node, {"kind", "n", "l", "r", "cube", "xi"}, "scene")
        n = int(_require(scene_node, "n", "scene"))
        scene = MonomialScene(
            n,
            tuple(int(x) for x in _require(scene_node, "l", "scene")),
            tuple(int(x) for x in _require(scene_node, "r", "scene")),
        )
        w_dim = 1
        if "cube" in scene_node:
            cube_base, cube_levels = _parse_cube(scene_node["cube"], n, "scene.cube")
        if "xi" in scene_node:
            xi = (parse_rational(scene_node["xi"]),)
    elif kind == "polynomial":
        _check_keys(
            scene_node,
            {"kind", "n", "d", "r", "phi", "twist", "twist_scale", "cube", "xi"},
            "scene",
        )
        n = int(_require(scene_node, "n", "scene"))
        d = int(_require(scene_node, "d", "scene"))
        phi_node = _require(scene_node, "phi", "scene")
        if not isinstance(phi_node, list) or len(phi_node) != d:
            raise SceneParseError("scene.phi must list d polynomial components")
        phi = tuple(
            _parse_poly(comp, n, f"scene.phi[{i}]") for i, comp in enumerate(phi_node)
        )
        twist = (
            _parse_poly(scene_node["twist"], n, "scene.twist")
            if "twist" in scene_node
            else None
        )
        scene = PolynomialScene(
            n,
            d,
            phi,
            tuple(int(x) for x in _require(scene_node, "r", "scene")),
            twist,
        )
        w_dim = d
        if "cube" in scene_node:
            cube_base, cube_levels = _parse_cube(scene_node["cube"], n, "scene.cube")
        if "xi" in scene_node:
            xi_node = scene_node["xi"]
            if not isinstance(xi_node, list):
                xi_node = [xi_node]
            xi = tuple(parse_rational(x) for x in xi_node)
        if "twist_scale" in scene_node:
            twist_scale = parse_rational(scene_node["twist_scale"])
    elif kind == "charts":
        _check_keys(scene_node, {"kind", "d", "q", "charts"}, "scene")
        w_dim = int(_require(scene_node, "d", "scene"))
        y_dim = int(_require(scene_node, "q", "scene"))
        chart_list = []
        for i, cnode in enumerate(_require(scene_node, "charts", "scene")):
            w = f"scene.charts[{i}]"
            _check_keys(
                cnode,
                {"id", "n", "l", "r", "pole_flags", "y_coords", "w_direction", "glue"},
                w,
            )
            wdir = cnode.get("w_direction")
            chart_list.append(
                ResolutionChart(
                    chart_id=str(_require(cnode, "id", w)),
                    n=int(_require(cnode, "n", w)),
                    l=tuple(int(x) for x in _require(cnode, "l", w)),
                    r=tuple(int(x) for x in _require(cnode, "r", w)),
                    pole_flags=tuple(bool(x) for x in _require(cnode, "pole_flags", w)),
                    y_coords=tuple(int(x) for x in cnode.get("y_coords", [])),
                    w_direction=(
                        None
                        if wdir is None
                        else tuple(parse_rational(x) for x in wdir)
                    ),
                    glue=cnode.get("glue"),
                )
            )
        charts = tuple(chart_list)
        scene = charts
    elif kind == "curve":
        _check_keys(scene_node, {"kind", "param"}, "scene")
        param_node = _require(scene_node, "param", "scene")
        scene = CurveScene.make(
            [[parse_rational(c) for c in comp] for comp in param_node]
        )
        w_dim = scene.ncomponents
    else:
        raise SceneParseError(f"unknown scene kind {kind!r}")

    probes = ()
    if "probes" in data:
        probes = _parse_probes(data["probes"], "probes")

    output_format = "json"
    if "output" in data:
        _check_keys(data["output"], {"format"}, "output")
        output_format = data["output"].get("format", "json")
        if output_format not in ("json", "csv"):
            raise SceneParseError(f"unknown output format {output_format!r}")

    return SceneFile(
        prime=prime,
        max_level=max_level,
        kind=kind,
        scene=scene,
        w_dim=w_dim,
        y_dim=y_dim,
        charts=charts,
        cube_base=cube_base,
        cube_levels=cube_levels,
        xi=xi,
        twist_scale=twist_scale,
        probes=probes,
        output_format=output_format,
    )


def load_scene_file(path: Union[str, Path]) -> SceneFile:
    path = Path(path)
    text = path.read_bytes()
    if path.suffix == ".toml":
        try:
            data = tomllib.loads(text.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise SceneParseError(f"TOML parse failure: {exc}") from exc
    elif path.suffix == ".json":
        def _no_floats(s: str):
            raise SceneParseError(f"float literal {s!r} rejected; use 'num/den'")

        try:
            data = json.loads(text.decode("utf-8"), parse_float=_no_floats)
        except json.JSONDecodeError as exc:
            raise SceneParseError(f"JSON parse failure: {exc}") from exc
    else:
        raise SceneParseError(f"unknown scene file suffix {path.suffix!r}")
    if not isinstance(data, dict):
        raise SceneParseError("scene file must be a table at top level")
    return parse_scene_data(data)
