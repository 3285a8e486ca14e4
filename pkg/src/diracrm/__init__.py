"""Dirac bound states in an improved Rosen-Morse well with a Coulomb-like tensor term."""
from .errors import *  # noqa: F401,F403
from .model import (
    CentrifugalApprox,
    DerivedParams,
    PhysicalConfig,
    SymmetryLimit,
    derived_params,
    energy_window,
    fit_centrifugal,
)
from .spectrum import BoundState, SolverOptions, quantization_residual, solve_spectrum
from .oracle import OracleOptions, ShootResult, oracle_spectrum, shoot
from .nu_check import NuParams, weight_condition_values

__version__ = "0.1.0"
