"""Rigorous log-space bounds on the volume and in-radius of separable states.

Submodules: :mod:`numerics` (precision contexts, log-gamma, LogReal),
:mod:`qubit_geometry` (Pauli coordinates and the balancing map), :mod:`gue`
(moment bounds on GUE norms), :mod:`nets` (certified spherical nets),
:mod:`bounds` (report pipelines), :mod:`mc_oracle` (Monte Carlo checks) and
:mod:`cli`.
"""

from .bounds import (
    BoundReport,
    asymptotic_constants,
    inradius_report,
    qudit_bound,
    ratio_bounds,
    tabulated_net_pipeline,
    vol_D_log,
)
from .numerics import DomainError, LogReal, PrecisionContext

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DomainError",
    "LogReal",
    "PrecisionContext",
    "asymptotic_constants",
    "inradius_report",
    "qudit_bound",
    "ratio_bounds",
    "tabulated_net_pipeline",
    "vol_D_log",
]
