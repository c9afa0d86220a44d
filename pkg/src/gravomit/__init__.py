"""Probe transmission of a microwave optomechanical cavity whose mechanical
oscillator is driven by the time-varying gravity of a vibrating source mass.

Submodules
----------
params
    Parameter containers, derived quantities, config loading.
response
    Analytic probe transmission and intracavity response.
perturbation
    Stationary working point, sideband coefficients, force decomposition.
noise
    Force-noise budget and measurement-time estimates.
oracle
    Independent time-domain integration (imported explicitly; pulls in numba).
analysis
    Extended-precision peak metrics, comparisons, parameter sweeps.
history
    Dataset of small-source-mass gravity and massive-resonator experiments.
plotting
    SVG figure rendering (imported explicitly; pulls in matplotlib).
cli
    Command-line interface (``gravomit`` entry point).
"""

from gravomit import analysis, history, noise, params, perturbation, response
from gravomit.params import (
    CavityParams,
    ConfigError,
    DerivedQuantities,
    EnvironmentParams,
    GravityDriveParams,
    MechanicsParams,
    MembraneParams,
    ParameterError,
    ProbeParams,
    SystemParams,
    derive,
    load_config,
    load_preset,
)

__version__ = "0.1.0"

__all__ = [
    "CavityParams",
    "ConfigError",
    "DerivedQuantities",
    "EnvironmentParams",
    "GravityDriveParams",
    "MechanicsParams",
    "MembraneParams",
    "ParameterError",
    "ProbeParams",
    "SystemParams",
    "__version__",
    "analysis",
    "derive",
    "history",
    "load_config",
    "load_preset",
    "noise",
    "params",
    "perturbation",
    "response",
]
