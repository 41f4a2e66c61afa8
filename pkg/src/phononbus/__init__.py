"""Feasibility engine for phonon-bus quantum gates between nanocrystal dots on a linear support."""

from .errors import ConfigError, NumericalError, PhononBusError
from .materials import Material, Scenario, SupportKind, SupportSpec, WaveConfig, builtin_material, load_scenario
from .units import CONSTANTS, LAMBDA0

__all__ = [
    "CONSTANTS",
    "LAMBDA0",
    "ConfigError",
    "Material",
    "NumericalError",
    "PhononBusError",
    "Scenario",
    "SupportKind",
    "SupportSpec",
    "WaveConfig",
    "builtin_material",
    "load_scenario",
]

__version__ = "0.1.0"
