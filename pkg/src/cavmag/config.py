"""JSON system descriptions: parsing, validation, serialization, presets.

Validation is strict: unknown keys are rejected and every error message
carries the JSON path of the offending element.
"""
from __future__ import annotations

import json
import math
from importlib import resources

from .errors import DuplicateMode, SchemaError, UnknownModeInCoupling
from .model import (
    DEFAULT_FIELD_SWEEP,
    DEFAULT_FREQUENCY_SWEEP,
    CouplingSpec,
    FieldLinear,
    ModeSpec,
    Static,
    Sweep,
    SystemConfig,
)

_TOP_KEYS = {"modes", "couplings", "field_sweep", "frequency_sweep", "description"}
_MODE_KEYS = {"name", "frequency", "alpha_ghz", "beta_ghz"}
_STATIC_KEYS = {"type", "value_ghz"}
_LINEAR_KEYS = {"type", "slope_ghz_per_koe", "intercept_ghz"}
_COUPLING_KEYS = {"a", "b", "j_ghz", "gamma_ghz"}
_SWEEP_KEYS = {"start", "stop", "points"}


def _require_dict(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    return obj


def _require_list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(f"{path}: expected an array")
    return obj


def _reject_unknown(obj: dict, allowed: set, path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}: unknown key")


def _number(obj: dict, key: str, path: str) -> float:
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise SchemaError(f"{path}.{key}: expected a finite number")
    return float(val)


def _string(obj: dict, key: str, path: str) -> str:
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing")
    val = obj[key]
    if not isinstance(val, str) or not val:
        raise SchemaError(f"{path}.{key}: expected a non-empty string")
    return val


def _parse_frequency(obj, path: str):
    node = _require_dict(obj, path)
    kind = _string(node, "type", path)
    if kind == "static":
        _reject_unknown(node, _STATIC_KEYS, path)
        value = _number(node, "value_ghz", path)
        if value <= 0.0:
            raise SchemaError(f"{path}.value_ghz: must be positive")
        return Static(value)
    if kind == "field_linear":
        _reject_unknown(node, _LINEAR_KEYS, path)
        slope = _number(node, "slope_ghz_per_koe", path)
        intercept = _number(node, "intercept_ghz", path)
        if intercept < 0.0:
            raise SchemaError(f"{path}.intercept_ghz: must be non-negative")
        return FieldLinear(slope, intercept)
    raise SchemaError(f"{path}.type: expected 'static' or 'field_linear'")


def _parse_mode(obj, path: str) -> ModeSpec:
    node = _require_dict(obj, path)
    _reject_unknown(node, _MODE_KEYS, path)
    name = _string(node, "name", path)
    frequency = _parse_frequency(node.get("frequency"), f"{path}.frequency")
    alpha = _number(node, "alpha_ghz", path)
    beta = _number(node, "beta_ghz", path)
    for key, val in (("alpha_ghz", alpha), ("beta_ghz", beta)):
        if val < 0.0:
            raise SchemaError(f"{path}.{key}: must be non-negative")
    return ModeSpec(name=name, frequency=frequency, alpha=alpha, beta=beta)


def _parse_coupling(obj, path: str, names: set) -> CouplingSpec:
    node = _require_dict(obj, path)
    _reject_unknown(node, _COUPLING_KEYS, path)
    a = _string(node, "a", path)
    b = _string(node, "b", path)
    for key, end in (("a", a), ("b", b)):
        if end not in names:
            raise UnknownModeInCoupling(f"{path}.{key}: unknown mode {end!r}")
    if a == b:
        raise SchemaError(f"{path}: coupling endpoints must differ")
    return CouplingSpec(a=a, b=b, j=_number(node, "j_ghz", path),
                        gamma=_number(node, "gamma_ghz", path))


def _parse_sweep(obj, path: str) -> Sweep:
    node = _require_dict(obj, path)
    _reject_unknown(node, _SWEEP_KEYS, path)
    start = _number(node, "start", path)
    stop = _number(node, "stop", path)
    if "points" not in node:
        raise SchemaError(f"{path}.points: missing")
    points = node["points"]
    if isinstance(points, bool) or not isinstance(points, int):
        raise SchemaError(f"{path}.points: expected an integer")
    if points < 2:
        raise SchemaError(f"{path}.points: must be >= 2")
    if not start < stop:
        raise SchemaError(f"{path}: start must be below stop")
    return Sweep(start=start, stop=stop, points=points)


def parse_config(text: str) -> SystemConfig:
    """Parse a JSON system description into a validated SystemConfig.

    Raises
    ------
    SchemaError
        On malformed JSON, unknown keys, or out-of-range values; the
        message names the JSON path.
    DuplicateMode, UnknownModeInCoupling
        On inconsistent mode references.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"$: invalid JSON: {exc}") from None
    root = _require_dict(doc, "$")
    _reject_unknown(root, _TOP_KEYS, "$")
    if "description" in root and not isinstance(root["description"], str):
        raise SchemaError("$.description: expected a string")

    mode_list = _require_list(root.get("modes"), "$.modes")
    if not mode_list:
        raise SchemaError("$.modes: must not be empty")
    modes = [_parse_mode(m, f"$.modes[{i}]") for i, m in enumerate(mode_list)]
    names = set()
    for i, mode in enumerate(modes):
        if mode.name in names:
            raise DuplicateMode(f"$.modes[{i}].name: duplicate mode {mode.name!r}")
        names.add(mode.name)

    couplings = []
    seen_pairs = set()
    for i, c in enumerate(_require_list(root.get("couplings", []), "$.couplings")):
        coupling = _parse_coupling(c, f"$.couplings[{i}]", names)
        pair = frozenset((coupling.a, coupling.b))
        if pair in seen_pairs:
            raise SchemaError(f"$.couplings[{i}]: duplicate pair "
                              f"{coupling.a!r}, {coupling.b!r}")
        seen_pairs.add(pair)
        couplings.append(coupling)

    field_sweep = (_parse_sweep(root["field_sweep"], "$.field_sweep")
                   if "field_sweep" in root else DEFAULT_FIELD_SWEEP)
    frequency_sweep = (_parse_sweep(root["frequency_sweep"], "$.frequency_sweep")
                       if "frequency_sweep" in root else DEFAULT_FREQUENCY_SWEEP)
    return SystemConfig(modes=tuple(modes), couplings=tuple(couplings),
                        field_sweep=field_sweep, frequency_sweep=frequency_sweep)


def _frequency_dict(law) -> dict:
    if isinstance(law, Static):
        return {"type": "static", "value_ghz": law.value}
    return {"type": "field_linear", "slope_ghz_per_koe": law.slope,
            "intercept_ghz": law.intercept}


def serialize_config(config: SystemConfig) -> str:
    """Render a SystemConfig as JSON accepted by :func:`parse_config`."""
    doc = {
        "modes": [
            {
                "name": m.name,
                "frequency": _frequency_dict(m.frequency),
                "alpha_ghz": m.alpha,
                "beta_ghz": m.beta,
            }
            for m in config.modes
        ],
        "couplings": [
            {"a": c.a, "b": c.b, "j_ghz": c.j, "gamma_ghz": c.gamma}
            for c in config.couplings
        ],
        "field_sweep": {
            "start": config.field_sweep.start,
            "stop": config.field_sweep.stop,
            "points": config.field_sweep.points,
        },
        "frequency_sweep": {
            "start": config.frequency_sweep.start,
            "stop": config.frequency_sweep.stop,
            "points": config.frequency_sweep.points,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def preset_names() -> list[str]:
    """Sorted names of the bundled preset configurations."""
    pkg = resources.files("cavmag.presets")
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> SystemConfig:
    """Load a bundled preset by name (with or without the .json suffix)."""
    stem = name[:-5] if name.endswith(".json") else name
    candidate = resources.files("cavmag.presets") / f"{stem}.json"
    if not candidate.is_file():
        known = ", ".join(preset_names())
        raise SchemaError(f"unknown preset {name!r}; available: {known}")
    return parse_config(candidate.read_text(encoding="utf-8"))
