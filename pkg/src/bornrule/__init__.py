"""Exact and simulated Born-rule weights for two-outcome spin measurements.

Submodules: ``quantum_model`` (states, angles, ancillas), ``dsw_games``
(axiomatic weight derivation and game values), ``samplers`` (Copenhagen
and branch-counting semantics), ``branch_ledger`` (the ``2**N`` branch
bookkeeping), ``inference`` (angle estimation and the signalling
channel), ``classical`` (ball and rabbit analogs) and ``cli``.
"""

__version__ = "0.1.0"

from .errors import (AxiomConflictError, BornRuleError, ConfigurationError,
                     SizeError, UnsupportedError)
from .kernels import BACKEND
from .quantum_model import Angle, AncillaSpec, MeasurementSetup, SpinAmplitudes
from .weights import WeightVector, total_variation
from .dsw_games import AxiomSet, derive, derive_symmetric_weights, game_value
from .samplers import RunStats, Semantics, run_experiment
from .branch_ledger import enumerate_branch_classes, typicality_report
from .inference import estimate_theta, run_channel
from .classical import ball_game_distribution, rabbit_game_value

__all__ = [
    "__version__", "BACKEND",
    "BornRuleError", "ConfigurationError", "AxiomConflictError", "UnsupportedError", "SizeError",
    "Angle", "AncillaSpec", "MeasurementSetup", "SpinAmplitudes",
    "WeightVector", "total_variation",
    "AxiomSet", "derive", "derive_symmetric_weights", "game_value",
    "RunStats", "Semantics", "run_experiment",
    "enumerate_branch_classes", "typicality_report",
    "estimate_theta", "run_channel",
    "ball_game_distribution", "rabbit_game_value",
]
