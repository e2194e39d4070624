"""
Scenario configuration: the validated description of one simulation run.

Scenarios are single JSON documents. Unknown keys are rejected, and the
physicality checks of the spin, kicked top and Bell-diagonal types are applied
at load time so that a bad scenario fails before any evolution starts.
"""

import json
import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qktdiscord.core.correlations import BellDiagonalParams
from qktdiscord.core.errors import ConfigError
from qktdiscord.core.kicked_top import KickedTopParams
from qktdiscord.core.spin_algebra import SpinCoherentAngles, SpinParams, random_sphere_angles

OUTPUT_COLUMNS = ("F", "alpha", "Q", "CC", "REE", "concurrence", "MI", "lambdas")


class SourceKind(str, Enum):
    QKT = "qkt"
    MARKOVIAN = "markovian"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ScenarioFieldError(ValueError):
    """Cross-field validation failure attributed to one scenario key."""

    def __init__(self, message: str, key: str):
        super().__init__(message)
        self.key = key


def _check(build: Callable[[], Any], key: str) -> None:
    try:
        build()
    except ValueError as e:
        raise ScenarioFieldError(str(e), key) from e


class ScenarioConfig(BaseModel):
    """Parameters of one run; field names double as scenario JSON keys."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: Optional[str] = None
    j: float = 100.0
    nu: float = math.pi / 2
    eta: float = 20.0
    epsilon: float = Field(default=0.001, ge=0.0)
    n_kicks: int = Field(default=3000, ge=0)
    c_x: float = 0.95
    c_y: float = -0.85
    c_z: float = 0.85
    theta0: Optional[float] = None
    phi0: Optional[float] = None
    seed: Optional[int] = Field(default=None, ge=0)
    source: SourceKind = SourceKind.QKT
    gamma: Optional[float] = Field(default=None, ge=0.0)
    outputs: List[str] = Field(default_factory=lambda: list(OUTPUT_COLUMNS))
    output_path: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV
    oracle: bool = False

    @field_validator("j")
    @classmethod
    def validate_spin(cls, v: float) -> float:
        return SpinParams(v).j

    @field_validator("nu", "eta", "epsilon", "c_x", "c_y", "c_z")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @field_validator("outputs")
    @classmethod
    def validate_outputs(cls, v: List[str]) -> List[str]:
        unknown = [name for name in v if name not in OUTPUT_COLUMNS]
        if unknown:
            raise ValueError(
                f"unknown outputs {unknown}, expected a subset of {list(OUTPUT_COLUMNS)}"
            )
        return v

    @model_validator(mode="after")
    def validate_physics(self) -> "ScenarioConfig":
        _check(self.kicked_top_params, "eta")
        _check(self.correlations, "c_x,c_y,c_z")
        if (self.theta0 is None) != (self.phi0 is None):
            missing = "phi0" if self.phi0 is None else "theta0"
            raise ScenarioFieldError("theta0 and phi0 must be given together", missing)
        if self.theta0 is not None:
            _check(self.initial_angles, "theta0" if not 0.0 <= self.theta0 <= math.pi else "phi0")
        if self.source is SourceKind.MARKOVIAN and self.gamma is None:
            raise ScenarioFieldError("gamma is required for the markovian source", "gamma")
        return self

    def spin(self) -> SpinParams:
        return SpinParams(self.j)

    def kicked_top_params(self) -> KickedTopParams:
        return KickedTopParams(nu=self.nu, eta=self.eta, epsilon=self.epsilon, spin=self.spin())

    def correlations(self) -> BellDiagonalParams:
        return BellDiagonalParams(self.c_x, self.c_y, self.c_z)

    @property
    def explicit_angles(self) -> bool:
        return self.theta0 is not None

    def initial_angles(self, default_seed: int = 0) -> SpinCoherentAngles:
        """Explicit (theta0, phi0) when given, else a uniform draw from the seed."""
        if self.explicit_angles:
            return SpinCoherentAngles(theta=self.theta0, phi=self.phi0)
        return random_sphere_angles(self.seed if self.seed is not None else default_seed)

    def with_overrides(self, **overrides: Any) -> "ScenarioConfig":
        """Copy with some keys replaced, validated like a freshly loaded scenario."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return scenario_from_dict(data)

    def echo(self) -> Dict[str, Any]:
        """JSON-ready dump for output metadata."""
        return self.model_dump(mode="json")


# initial direction of the fig1 presets; its chaotic plateau stays below F = 0.1
FIG1_SEED = 3

PRESETS: Dict[str, Dict[str, Any]] = {
    "fig1-chaotic": {
        "name": "fig1-chaotic",
        "j": 100,
        "nu": math.pi / 2,
        "eta": 20.0,
        "epsilon": 0.001,
        "n_kicks": 3000,
        "seed": FIG1_SEED,
    },
    "fig1-regular": {
        "name": "fig1-regular",
        "j": 100,
        "nu": math.pi / 2,
        "eta": 0.1,
        "epsilon": 0.001,
        "n_kicks": 7000,
        "seed": FIG1_SEED,
    },
    "fig2": {
        "name": "fig2",
        "j": 100,
        "nu": math.pi / 2,
        "eta": 20.0,
        "epsilon": 0.001,
        "n_kicks": 3000,
        "c_x": 0.95,
        "c_y": -0.85,
        "c_z": 0.85,
    },
    "fig3": {
        "name": "fig3",
        "j": 100,
        "nu": math.pi / 2,
        "eta": 0.1,
        "epsilon": 0.001,
        "n_kicks": 3300,
        "c_x": 0.95,
        "c_y": -0.85,
        "c_z": 0.85,
    },
}

PRESET_NOTES = (
    "Figure parameter sets carry no numeric reference tables; "
    "outputs are checked by qualitative properties only."
)


def _error_key(error: Dict[str, Any]) -> Optional[str]:
    cause = error.get("ctx", {}).get("error")
    if isinstance(cause, ScenarioFieldError):
        return cause.key
    location = [str(part) for part in error.get("loc", ()) if part != "__root__"]
    return ".".join(location) or None


def scenario_from_dict(data: Dict[str, Any]) -> ScenarioConfig:
    """
    Validate a scenario mapping.

    Raises:
        ConfigError: Naming the first offending key
    """
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        message = first.get("msg", str(e))
        raise ConfigError(message, key=_error_key(first)) from e


def preset(name: str, **overrides: Any) -> ScenarioConfig:
    """
    Scenario for a named figure parameter set.

    Raises:
        ConfigError: If the preset name is unknown
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}', expected one of {', '.join(PRESETS)}", key="preset")
    data = dict(PRESETS[name])
    data.update({k: v for k, v in overrides.items() if v is not None})
    return scenario_from_dict(data)


def read_scenario_document(path: str) -> Dict[str, Any]:
    """
    Read a scenario JSON document without validating its values.

    Raises:
        ConfigError: Unreadable file, invalid JSON or a non-object document
    """
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read scenario file {path}: {e.strerror}", key="config") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e.msg} (line {e.lineno})", key="config") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object", key="config")
    return data


def load_scenario(path: str) -> ScenarioConfig:
    """
    Load and validate a scenario JSON file.

    Raises:
        ConfigError: Unreadable file, invalid JSON or invalid values
    """
    return scenario_from_dict(read_scenario_document(path))
