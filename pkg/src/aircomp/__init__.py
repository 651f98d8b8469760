"""Precoder design for over-the-air aggregation of correlated sensor data.

Modules
-------
numerics    Hermitian eigendecomposition, Cholesky and PD solves.
model       System configuration, covariances, summation and mask matrices.
waterfill   Power allocation over paired eigenmodes.
precoder    Proposed spectral design and baseline designs.
receiver    LMMSE aggregation receiver and MSE evaluation.
montecarlo  Seeded channel/source simulation and parameter sweeps.
cli         ``aircomp`` command-line interface.
"""

from .exceptions import (
    AirCompError,
    ContractError,
    DegeneratePrecoderError,
    NoUsableModeError,
    SingularMatrixError,
)
from .model import SystemConfig, build_covariances, build_mask, build_Q
from .montecarlo import TrialPlan, run_point, run_sweep
from .precoder import (
    DESIGN_TAGS,
    Precoder,
    design,
    design_comm_then_compute,
    design_ignoring_correlation,
    design_proposed,
    design_random,
)
from .receiver import lmmse_matrix, mse_closed_form, mse_direct

__version__ = "0.1.0"
