"""Scenario files: a YAML schema describing one full verification setup.

A scenario names a source and target manifold (dimension, metric entries
or preset, sampling domain), an almost complex structure, the submersion
map, the Clairaut exponent, sampling and tolerance settings, and a list of
geodesic initial conditions.  Validation is strict: unknown keys are
rejected, and every error message carries the dotted path of the offending
field.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .clairaut import ClairautScenario, SamplingConfig, Tolerances
from .expr import ExprError, parse
from .geometry import ExclusionTube, ManifoldSpec, SamplingDomain
from .hermitian import AlmostComplexField
from .presets import map_preset, metric_preset, phi_preset
from .submersion import SmoothMap


class ScenarioValidationError(Exception):
    pass


@dataclass(frozen=True)
class GeodesicConfig:
    p0: tuple
    v0: tuple
    length: float
    step: float = 1e-3


@dataclass
class ScenarioBundle:
    scenario: ClairautScenario
    geodesics: tuple
    path: str


def _err(path: str, message: str):
    raise ScenarioValidationError(f"{path}: {message}")


def _as_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        _err(path, "expected a mapping")
    return value


def _check_keys(mapping: dict, path: str, required: tuple, optional: tuple = ()):
    for key in required:
        if key not in mapping:
            _err(path, f"missing required key {key!r}")
    allowed = set(required) | set(optional)
    for key in mapping:
        if key not in allowed:
            _err(f"{path}.{key}", "unknown key")


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _err(path, "expected a number")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _err(path, "expected an integer")
    return value


def _as_vector(value, dim: int, path: str) -> tuple:
    if not isinstance(value, list) or len(value) != dim:
        _err(path, f"expected a list of {dim} numbers")
    return tuple(_as_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def _parse_expr(text, dim: int, path: str):
    if not isinstance(text, str):
        _err(path, "expected an expression string")
    try:
        return parse(text, dim)
    except ExprError as exc:
        _err(path, f"bad expression: {exc}")


def _load_domain(raw, dim: int, path: str) -> SamplingDomain:
    raw = _as_mapping(raw, path)
    _check_keys(raw, path, required=("intervals",), optional=("exclude",))
    intervals_raw = raw["intervals"]
    if not isinstance(intervals_raw, list) or len(intervals_raw) != dim:
        _err(f"{path}.intervals", f"expected {dim} [lo, hi] pairs")
    intervals = []
    for i, pair in enumerate(intervals_raw):
        if not isinstance(pair, list) or len(pair) != 2:
            _err(f"{path}.intervals[{i}]", "expected [lo, hi]")
        lo = _as_number(pair[0], f"{path}.intervals[{i}][0]")
        hi = _as_number(pair[1], f"{path}.intervals[{i}][1]")
        if hi <= lo:
            _err(f"{path}.intervals[{i}]", "upper bound must exceed lower bound")
        intervals.append((lo, hi))
    tubes = []
    for i, tube_raw in enumerate(raw.get("exclude", []) or []):
        tpath = f"{path}.exclude[{i}]"
        tube_raw = _as_mapping(tube_raw, tpath)
        _check_keys(tube_raw, tpath, required=("expr", "radius"))
        tubes.append(
            ExclusionTube(
                _parse_expr(tube_raw["expr"], dim, f"{tpath}.expr"),
                _as_number(tube_raw["radius"], f"{tpath}.radius"),
            )
        )
    return SamplingDomain(tuple(intervals), tuple(tubes))


def _load_manifold(raw, path: str) -> ManifoldSpec:
    raw = _as_mapping(raw, path)
    _check_keys(raw, path, required=("dim", "metric", "domain"))
    dim = _as_int(raw["dim"], f"{path}.dim")
    if dim < 1:
        _err(f"{path}.dim", "must be positive")
    metric_raw = raw["metric"]
    if isinstance(metric_raw, str):
        try:
            metric = metric_preset(metric_raw, dim)
        except ValueError as exc:
            _err(f"{path}.metric", str(exc))
    elif isinstance(metric_raw, list):
        if len(metric_raw) != dim or any(
            not isinstance(row, list) or len(row) != dim for row in metric_raw
        ):
            _err(f"{path}.metric", f"expected a {dim}x{dim} matrix of strings")
        metric = [
            [
                _parse_expr(metric_raw[i][j], dim, f"{path}.metric[{i}][{j}]")
                for j in range(dim)
            ]
            for i in range(dim)
        ]
    else:
        _err(f"{path}.metric", "expected a preset name or a matrix of strings")
    domain = _load_domain(raw["domain"], dim, f"{path}.domain")
    return ManifoldSpec(dim, metric, domain)


def _load_phi(raw, dim: int, path: str) -> AlmostComplexField:
    if isinstance(raw, str):
        try:
            return AlmostComplexField(phi_preset(raw, dim))
        except ValueError as exc:
            _err(path, str(exc))
    if isinstance(raw, list):
        if len(raw) != dim or any(
            not isinstance(row, list) or len(row) != dim for row in raw
        ):
            _err(path, f"expected a {dim}x{dim} matrix of strings")
        return AlmostComplexField(
            [
                [_parse_expr(raw[i][j], dim, f"{path}[{i}][{j}]") for j in range(dim)]
                for i in range(dim)
            ]
        )
    _err(path, "expected a preset name or a matrix of strings")


def _load_map(raw, source: ManifoldSpec, target: ManifoldSpec, path: str) -> SmoothMap:
    if isinstance(raw, str):
        try:
            components = map_preset(raw)
        except ValueError as exc:
            _err(path, str(exc))
        if len(components) != target.dim:
            _err(path, f"preset has {len(components)} components, target dim is {target.dim}")
    elif isinstance(raw, list):
        if len(raw) != target.dim:
            _err(path, f"expected {target.dim} component expressions")
        components = tuple(
            _parse_expr(raw[i], source.dim, f"{path}[{i}]") for i in range(len(raw))
        )
    else:
        _err(path, "expected a preset name or a list of strings")
    return SmoothMap(source, target, components)


def load_scenario(path) -> ScenarioBundle:
    """Load and validate a scenario file into a ready-to-run bundle."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        raise ScenarioValidationError(f"scenario file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ScenarioValidationError(f"{path}: not valid YAML: {exc}") from None
    return build_scenario(raw, str(path))


def build_scenario(raw, origin: str = "<memory>") -> ScenarioBundle:
    raw = _as_mapping(raw, "scenario")
    _check_keys(
        raw,
        "scenario",
        required=("source", "target", "phi", "map", "clairaut"),
        optional=("name", "sampling", "geodesics", "tolerances"),
    )
    source = _load_manifold(raw["source"], "source")
    target = _load_manifold(raw["target"], "target")
    if target.dim >= source.dim:
        _err("target.dim", "must be smaller than source.dim")
    phi = _load_phi(raw["phi"], source.dim, "phi")
    smap = _load_map(raw["map"], source, target, "map")

    clairaut_raw = _as_mapping(raw["clairaut"], "clairaut")
    _check_keys(clairaut_raw, "clairaut", required=("f",))
    f = _parse_expr(clairaut_raw["f"], source.dim, "clairaut.f")

    sampling = SamplingConfig()
    if "sampling" in raw:
        s_raw = _as_mapping(raw["sampling"], "sampling")
        _check_keys(s_raw, "sampling", required=(), optional=("count", "seed"))
        sampling = SamplingConfig(
            count=_as_int(s_raw.get("count", sampling.count), "sampling.count"),
            seed=_as_int(s_raw.get("seed", sampling.seed), "sampling.seed"),
        )
        if sampling.count < 1:
            _err("sampling.count", "must be positive")

    tolerances = Tolerances()
    if "tolerances" in raw:
        t_raw = _as_mapping(raw["tolerances"], "tolerances")
        _check_keys(t_raw, "tolerances", required=(), optional=("algebraic", "fd", "drift"))
        tolerances = Tolerances(
            algebraic=_as_number(t_raw.get("algebraic", tolerances.algebraic), "tolerances.algebraic"),
            fd=_as_number(t_raw.get("fd", tolerances.fd), "tolerances.fd"),
            drift=_as_number(t_raw.get("drift", tolerances.drift), "tolerances.drift"),
        )

    geodesics = []
    for i, g_raw in enumerate(raw.get("geodesics", []) or []):
        gpath = f"geodesics[{i}]"
        g_raw = _as_mapping(g_raw, gpath)
        _check_keys(g_raw, gpath, required=("p0", "v0", "length"), optional=("step",))
        step = _as_number(g_raw.get("step", 1e-3), f"{gpath}.step")
        if step <= 0:
            _err(f"{gpath}.step", "must be positive")
        geodesics.append(
            GeodesicConfig(
                p0=_as_vector(g_raw["p0"], source.dim, f"{gpath}.p0"),
                v0=_as_vector(g_raw["v0"], source.dim, f"{gpath}.v0"),
                length=_as_number(g_raw["length"], f"{gpath}.length"),
                step=step,
            )
        )

    name = raw.get("name", Path(origin).stem)
    if not isinstance(name, str):
        _err("name", "expected a string")

    scenario = ClairautScenario(
        name=name, J=phi, F=smap, f=f, tolerances=tolerances, sampling=sampling
    )
    return ScenarioBundle(scenario=scenario, geodesics=tuple(geodesics), path=origin)


def bundled_scenario_names() -> list:
    files = resources.files("riemsub") / "scenarios"
    return sorted(p.name[: -len(".yaml")] for p in files.iterdir() if p.name.endswith(".yaml"))


def bundled_scenario_path(name: str) -> Path:
    candidate = resources.files("riemsub") / "scenarios" / f"{name}.yaml"
    with resources.as_file(candidate) as concrete:
        if not concrete.exists():
            raise ScenarioValidationError(f"no bundled scenario named {name!r}")
        return concrete


def resolve_scenario_path(spec: str) -> Path:
    """Interpret ``spec`` as a file path, else as a bundled scenario name."""
    p = Path(spec)
    if p.exists():
        return p
    try:
        return bundled_scenario_path(spec)
    except ScenarioValidationError:
        raise ScenarioValidationError(
            f"{spec!r} is neither a file nor a bundled scenario "
            f"(bundled: {', '.join(bundled_scenario_names())})"
        ) from None
