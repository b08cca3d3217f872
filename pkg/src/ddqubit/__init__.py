"""Exact pure-dephasing qubit dynamics under bang-bang dynamical decoupling.

A qubit coupled to a zero-temperature bosonic environment of the Ohmic
class dephases with a coherence envelope ``exp(-Gamma(t))`` that is known
in closed form, both freely and under arbitrary sequences of instantaneous
pi pulses.  This package evaluates the exact envelope, quantifies
information back-flow and decoupling efficiency, and searches for the
environment parameters that maximize long-time coherence.  All times are
in units of the inverse bath cutoff.
"""

from .bath import (
    BathSpec,
    OracleConvergenceError,
    gamma0,
    gamma0_asymptote,
    gamma0_oracle,
    rate0,
    spectral_density,
    tbar,
)
from .ddcontrol import (
    DecoherenceProfile,
    PulseSequence,
    controlled_gamma,
    controlled_gamma_direct,
    controlled_rate,
    periodic_sequence,
    profile,
)
from .measures import (
    InitialState,
    MeasureReport,
    backflow_intervals,
    blp_measure,
    dd_efficiency,
    fidelity,
    stationary_coherence,
)
from .sweep import (
    FIGURE_IDS,
    FigureData,
    OptimalOhmicity,
    SliceOptimum,
    SweepRecord,
    SweepResult,
    SweepSpec,
    figure_dataset,
    optimal_s,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "OracleConvergenceError",
    "spectral_density",
    "gamma0",
    "gamma0_oracle",
    "rate0",
    "tbar",
    "gamma0_asymptote",
    "PulseSequence",
    "DecoherenceProfile",
    "periodic_sequence",
    "controlled_gamma",
    "controlled_gamma_direct",
    "controlled_rate",
    "profile",
    "InitialState",
    "MeasureReport",
    "blp_measure",
    "backflow_intervals",
    "dd_efficiency",
    "fidelity",
    "stationary_coherence",
    "SweepSpec",
    "SweepRecord",
    "SliceOptimum",
    "SweepResult",
    "OptimalOhmicity",
    "run_sweep",
    "optimal_s",
    "figure_dataset",
    "FigureData",
    "FIGURE_IDS",
    "__version__",
]
