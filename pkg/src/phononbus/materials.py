"""Material presets, support geometry and scenario files.

A scenario file is JSON with three sections::

    {
      "material": "Si",
      "support":  {"kind": "string", "derive_from_N": true,
                   "lambda_kg_per_m": {"value": 1, "unit": "lambda0"},
                   "l_m": {"value": 3, "unit": "um"},
                   "omega1_rad_per_s": 1e8},
      "scenario": {"N": 50, "epsilon": 0.1, "wave_config": "standing",
                   "cos_theta": 1.0}
    }

``material`` is a preset name or an inline record; an inline record may carry
``"preset"`` to inherit unspecified fields.  Any number may be written as
``{"value": x, "unit": "..."}``.
"""

from __future__ import annotations

import copy
import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence

import jsonschema

from .errors import InvariantError, ScenarioParseError, SchemaError, UnknownMaterialError
from .units import LAMBDA0, convert, energy_to_rate, energy_to_wavenumber

#: Laser wavenumber used by the presets (k1 ~ k2 ~ 2.1 per micrometre).
DEFAULT_K2 = 2.1e6
#: Diffraction-limited laser spot, also the dot spacing.
DEFAULT_UNIT_LENGTH = 3e-6


class SupportKind(str, Enum):
    STRING = "string"
    ROD = "rod"


class WaveConfig(str, Enum):
    STANDING = "standing"
    TRAVELLING = "travelling"

    @classmethod
    def parse(cls, text: str) -> "WaveConfig":
        key = text.strip().lower().replace("_", "").replace("-", "")
        aliases = {
            "standing": cls.STANDING,
            "standingwave": cls.STANDING,
            "travelling": cls.TRAVELLING,
            "traveling": cls.TRAVELLING,
            "travellingwave": cls.TRAVELLING,
            "travelingwave": cls.TRAVELLING,
        }
        try:
            return aliases[key]
        except KeyError:
            raise SchemaError(f"unknown wave_config {text!r}") from None


@dataclass(frozen=True)
class Material:
    """Exciton-side parameters of one nanocrystal species.

    Rates are angular (rad/s).  Dipoles are dimensionless multiples of the dot
    radius; ``dipole_0v``/``fc_product_01`` belong to the nodal-laser arm
    (virtual state to |0>), ``dipole_1v``/``fc_product_1v`` to the antinodal arm.
    """

    name: str
    gamma_rec: float
    omega_d1: float
    delta: float
    multiplet_gap: float
    dot_radius: float
    beta: float
    fc_product_01: float
    fc_product_1v: float
    dipole_0v: float
    dipole_1v: float
    i2_max: float
    i1_max: float | None = None

    def __post_init__(self) -> None:
        checks = [
            (self.gamma_rec > 0, "gamma_rec must be positive"),
            (self.delta > 0, "delta must be positive"),
            (self.omega_d1 > self.delta, "need omega_d1 > delta"),
            (self.multiplet_gap > 0, "multiplet_gap must be positive"),
            (self.dot_radius > 0, "dot_radius must be positive"),
            (0 < self.beta < 1, "beta must lie in (0, 1)"),
            (0 < self.fc_product_01 <= 1, "fc_product_01 must lie in (0, 1]"),
            (0 < self.fc_product_1v <= 1, "fc_product_1v must lie in (0, 1]"),
            (math.isfinite(self.dipole_0v) and math.isfinite(self.dipole_1v), "dipoles must be finite"),
            (self.i2_max > 0, "i2_max must be positive"),
            (self.i1_max is None or self.i1_max > 0, "i1_max must be positive"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvariantError(f"material {self.name!r}: {msg}")

    @property
    def i1_limit(self) -> float:
        return self.i2_max if self.i1_max is None else self.i1_max

    @property
    def gap_wavenumber(self) -> float:
        return energy_to_wavenumber(self.multiplet_gap)


_CDTE = Material(
    name="CdTe",
    gamma_rec=1e6,
    omega_d1=2.45e12,
    delta=1e11,
    multiplet_gap=0.4,
    dot_radius=2e-9,
    beta=0.2,
    fc_product_01=0.98,
    fc_product_1v=0.98,
    dipole_0v=0.11,
    dipole_1v=-0.013,
    i2_max=1e16,  # 1e12 W/cm^2
)

_SI = dataclasses.replace(
    _CDTE,
    name="Si",
    gamma_rec=1e3,
    omega_d1=energy_to_rate(5e-3),  # ~5 meV lowest internal phonon
    fc_product_01=0.9,
    fc_product_1v=0.9,
)

PRESETS: dict[str, Material] = {"CdTe": _CDTE, "Si": _SI}


def builtin_material(name: str) -> Material:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown material preset {name!r}; available: {', '.join(PRESETS)}"
        ) from None


@dataclass(frozen=True)
class SupportSpec:
    """Geometry and elasticity of the linear support.

    ``stiffness`` is the grouping Y*I_z/(lambda*A) in m^4/s^2 (rods only).
    """

    kind: SupportKind
    length_L: float
    linear_density: float
    unit_length: float
    tension: float | None = None
    stiffness: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, SupportKind):
            object.__setattr__(self, "kind", SupportKind(self.kind))
        for name in ("length_L", "linear_density", "unit_length"):
            if not getattr(self, name) > 0:
                raise InvariantError(f"support {name} must be positive")
        if self.tension is not None and not self.tension > 0:
            raise InvariantError("support tension must be positive")
        if self.stiffness is not None and not self.stiffness > 0:
            raise InvariantError("support stiffness must be positive")

    @property
    def total_mass(self) -> float:
        return self.linear_density * self.length_L


@dataclass(frozen=True)
class Scenario:
    material: Material
    support: SupportSpec
    n_dots: int
    epsilon: float
    wave_config: WaveConfig = WaveConfig.STANDING
    cos_theta: float = 1.0
    k2_magnitude: float = DEFAULT_K2

    def __post_init__(self) -> None:
        if isinstance(self.n_dots, bool) or int(self.n_dots) != self.n_dots or self.n_dots < 1:
            raise InvariantError(f"n_dots must be an integer >= 1, got {self.n_dots!r}")
        object.__setattr__(self, "n_dots", int(self.n_dots))
        if not 0 < self.epsilon < 1:
            raise InvariantError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 <= self.cos_theta <= 1:
            raise InvariantError(f"cos_theta must lie in [0, 1], got {self.cos_theta}")
        if not isinstance(self.wave_config, WaveConfig):
            object.__setattr__(self, "wave_config", WaveConfig.parse(str(self.wave_config)))
        expected_L = self.support.unit_length * self.n_dots
        if not math.isclose(self.support.length_L, expected_L, rel_tol=1e-9):
            raise InvariantError(
                f"support length {self.support.length_L:g} m differs from l*N = {expected_L:g} m"
            )
        k_gap = self.material.gap_wavenumber
        if not self.k2_magnitude > 0 or abs(self.k2_magnitude - k_gap) > 0.1 * k_gap:
            raise InvariantError(
                f"k2 = {self.k2_magnitude:.4g} 1/m inconsistent with multiplet gap "
                f"({k_gap:.4g} 1/m expected within 10%)"
            )

    @property
    def total_mass(self) -> float:
        return self.support.total_mass


def preset_scenario(
    material: str | Material = "CdTe",
    n_dots: int = 10,
    epsilon: float = 0.1,
    lambda_ratio: float = 1.0,
    unit_length: float = DEFAULT_UNIT_LENGTH,
    kind: SupportKind = SupportKind.STRING,
) -> Scenario:
    mat = builtin_material(material) if isinstance(material, str) else material
    support = SupportSpec(
        kind=kind,
        length_L=unit_length * n_dots,
        linear_density=lambda_ratio * LAMBDA0,
        unit_length=unit_length,
    )
    return Scenario(material=mat, support=support, n_dots=n_dots, epsilon=epsilon)


# --- JSON scenario files -------------------------------------------------

_NUMBER = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "object",
            "properties": {"value": {"type": "number"}, "unit": {"type": "string"}},
            "required": ["value", "unit"],
            "additionalProperties": False,
        },
    ]
}

MATERIAL_FIELDS: dict[str, str] = {
    "gamma_rec": "rate",
    "omega_d1": "rate",
    "delta": "rate",
    "multiplet_gap": "energy",
    "dot_radius": "length",
    "beta": "dimensionless",
    "fc_product_01": "dimensionless",
    "fc_product_1v": "dimensionless",
    "dipole_0v": "dipole",
    "dipole_1v": "dipole",
    "i2_max": "intensity",
    "i1_max": "intensity",
}

SUPPORT_FIELDS: dict[str, str] = {
    "L_m": "length",
    "lambda_kg_per_m": "density",
    "tension_N": "force",
    "stiffness_m4_per_s2": "stiffness",
    "omega1_rad_per_s": "rate",
    "l_m": "length",
}

SCENARIO_FIELDS: dict[str, str] = {
    "epsilon": "dimensionless",
    "cos_theta": "dimensionless",
    "k2_per_m": "wavenumber",
}

SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["material", "support", "scenario"],
    "additionalProperties": False,
    "properties": {
        "material": {
            "oneOf": [
                {"type": "string"},
                {
                    "type": "object",
                    "properties": {
                        "name": {"type": "string"},
                        "preset": {"type": "string"},
                        **{k: _NUMBER for k in MATERIAL_FIELDS},
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "support": {
            "type": "object",
            "required": ["kind", "lambda_kg_per_m", "l_m"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["string", "rod"]},
                "derive_from_N": {"type": "boolean"},
                **{k: _NUMBER for k in SUPPORT_FIELDS},
            },
        },
        "scenario": {
            "type": "object",
            "required": ["N", "epsilon"],
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer"},
                "wave_config": {"type": "string"},
                **{k: _NUMBER for k in SCENARIO_FIELDS},
            },
        },
    },
}


def _number(raw: Any, dimension: str, where: str) -> float:
    if isinstance(raw, Mapping):
        return convert(raw["value"], raw["unit"], dimension)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {raw!r}")
    return float(raw)


def _material_from(raw: Any) -> Material:
    if isinstance(raw, str):
        return builtin_material(raw)
    base: dict[str, Any] = {}
    if "preset" in raw:
        base = dataclasses.asdict(builtin_material(raw["preset"]))
    for key, dim in MATERIAL_FIELDS.items():
        if key in raw:
            base[key] = _number(raw[key], dim, f"material.{key}")
    base["name"] = raw.get("name", base.get("name", "custom"))
    base.setdefault("beta", 0.2)
    missing = [f.name for f in dataclasses.fields(Material) if f.name not in base and f.default is dataclasses.MISSING]
    if missing:
        raise SchemaError(f"material record missing fields: {', '.join(missing)}")
    return Material(**base)


def _support_from(raw: Mapping[str, Any], n_dots: int) -> SupportSpec:
    kind = SupportKind(raw["kind"])
    vals = {k: _number(raw[k], dim, f"support.{k}") for k, dim in SUPPORT_FIELDS.items() if k in raw}
    lam, l = vals["lambda_kg_per_m"], vals["l_m"]
    if raw.get("derive_from_N", False) or "L_m" not in vals:
        L = l * n_dots
    else:
        L = vals["L_m"]
    tension = vals.get("tension_N")
    stiffness = vals.get("stiffness_m4_per_s2")
    if kind is SupportKind.STRING and "stiffness_m4_per_s2" in vals:
        raise SchemaError("support.stiffness_m4_per_s2 applies to rods only")
    if kind is SupportKind.ROD and "tension_N" in vals:
        raise SchemaError("support.tension_N applies to strings only")
    omega1 = vals.get("omega1_rad_per_s")
    if omega1 is not None:
        if tension is not None or stiffness is not None:
            raise SchemaError("give either omega1_rad_per_s or the restoring constant, not both")
        if not omega1 > 0 or not L > 0:
            raise InvariantError("support omega1 and length must be positive")
        if kind is SupportKind.STRING:
            tension = lam * (omega1 * L / math.pi) ** 2
        else:
            from .support import rod_root

            stiffness = (omega1 * L**2 / rod_root(1) ** 2) ** 2
    return SupportSpec(
        kind=kind, length_L=L, linear_density=lam, unit_length=l, tension=tension, stiffness=stiffness
    )


def scenario_from_dict(doc: Mapping[str, Any]) -> Scenario:
    """Validate a parsed scenario document and build the :class:`Scenario`."""
    try:
        jsonschema.validate(doc, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {exc.message}") from None
    sc = doc["scenario"]
    n_dots = sc["N"]
    if n_dots < 1:
        raise InvariantError(f"scenario.N must be >= 1, got {n_dots}")
    material = _material_from(doc["material"])
    support = _support_from(doc["support"], n_dots)
    extra = {k: _number(sc[k], dim, f"scenario.{k}") for k, dim in SCENARIO_FIELDS.items() if k in sc}
    return Scenario(
        material=material,
        support=support,
        n_dots=n_dots,
        epsilon=extra["epsilon"],
        wave_config=WaveConfig.parse(sc.get("wave_config", "standing")),
        cos_theta=extra.get("cos_theta", 1.0),
        k2_magnitude=extra.get("k2_per_m", DEFAULT_K2),
    )


def read_scenario_document(path: str | Path) -> dict[str, Any]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return doc


def load_scenario(path: str | Path, overrides: Sequence[str] = ()) -> Scenario:
    doc = read_scenario_document(path)
    if overrides:
        doc = apply_overrides(doc, overrides)
    return scenario_from_dict(doc)


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    """Fully explicit document; ``scenario_from_dict`` inverts it exactly."""
    mat = dataclasses.asdict(scenario.material)
    if mat["i1_max"] is None:
        del mat["i1_max"]
    sup = scenario.support
    support: dict[str, Any] = {
        "kind": sup.kind.value,
        "L_m": sup.length_L,
        "lambda_kg_per_m": sup.linear_density,
        "l_m": sup.unit_length,
    }
    if sup.tension is not None:
        support["tension_N"] = sup.tension
    if sup.stiffness is not None:
        support["stiffness_m4_per_s2"] = sup.stiffness
    return {
        "material": mat,
        "support": support,
        "scenario": {
            "N": scenario.n_dots,
            "epsilon": scenario.epsilon,
            "wave_config": scenario.wave_config.value,
            "cos_theta": scenario.cos_theta,
            "k2_per_m": scenario.k2_magnitude,
        },
    }


def dump_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8")


def override_keys() -> list[str]:
    keys = ["material"] + [f"material.{k}" for k in ("name", "preset", *MATERIAL_FIELDS)]
    keys += [f"support.{k}" for k in ("kind", "derive_from_N", *SUPPORT_FIELDS)]
    keys += [f"scenario.{k}" for k in ("N", "wave_config", *SCENARIO_FIELDS)]
    return keys


def apply_overrides(doc: Mapping[str, Any], overrides: Sequence[str]) -> dict[str, Any]:
    """Apply ``section.key=value`` assignments; values parse as JSON when possible.

    ``material=NAME`` swaps the whole material record for a preset.
    """
    out = copy.deepcopy(dict(doc))
    allowed = set(override_keys())
    for item in overrides:
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep:
            raise SchemaError(f"override {item!r} is not of the form key=value")
        if key not in allowed:
            raise SchemaError(f"unknown override key {key!r}")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        if key == "material":
            out["material"] = value
            continue
        section, field = key.split(".", 1)
        target = out.setdefault(section, {})
        if section == "material" and isinstance(target, str):
            target = out["material"] = {"preset": target}
        if section == "support" and field == "L_m":
            target.pop("derive_from_N", None)
        if section == "scenario" and field == "N" and "L_m" in out.get("support", {}):
            # a new dot count implies a new support length
            out["support"].pop("L_m")
        target[field] = value
    return out
