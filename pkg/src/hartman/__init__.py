"""Stationary scattering, causality bounds, and wave-packet passage times
for one-dimensional square barriers and wells.

The hot amplitude/phase-derivative kernel runs compiled when the Cython
extension was built and falls back to NumPy otherwise; `kernel_backend()`
reports which one is active.
"""
from ._kernel import BACKEND as _backend_name
from ._kernel import available_backends
from .boundstates import (
    BoundLevel,
    BoundStateSpectrum,
    count_bound_states,
    is_at_threshold,
    levinson_check,
    solve_bound_states,
    threshold_depths,
)
from .delays import (
    DelayRecord,
    DwellRecord,
    causality_bounds,
    dwell_time,
    eigenphase_derivative_bounds,
    interior_norm,
    phase_time,
    smith_identity_check,
    wigner_delay,
)
from .errors import ConvergenceError, PhaseAnchorError, ThresholdDivergenceError
from .potential import ATOMIC, PhysicalConstants, SquarePotential
from .scattering import (
    Amplitudes,
    EigenChannelValues,
    PhaseTable,
    amplitudes,
    build_phase_table,
    default_k_max,
    eigen_channels,
    van_kampen_check,
)
from .wavepacket import (
    GaussianPacketSpec,
    PassageTimeReport,
    classical_reference_time,
    critical_width,
    crossover_width_empirical,
    mean_exit_time,
    mean_exit_time_via_flux,
    packet_amplitude,
    transmission_probability,
    x0_of_p,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Active kernel backend: "compiled" or "python"."""
    return _backend_name


__all__ = [
    "ATOMIC",
    "Amplitudes",
    "BoundLevel",
    "BoundStateSpectrum",
    "ConvergenceError",
    "DelayRecord",
    "DwellRecord",
    "EigenChannelValues",
    "GaussianPacketSpec",
    "PassageTimeReport",
    "PhaseAnchorError",
    "PhaseTable",
    "PhysicalConstants",
    "SquarePotential",
    "ThresholdDivergenceError",
    "amplitudes",
    "available_backends",
    "build_phase_table",
    "causality_bounds",
    "classical_reference_time",
    "count_bound_states",
    "critical_width",
    "crossover_width_empirical",
    "default_k_max",
    "dwell_time",
    "eigen_channels",
    "eigenphase_derivative_bounds",
    "interior_norm",
    "is_at_threshold",
    "kernel_backend",
    "levinson_check",
    "mean_exit_time",
    "mean_exit_time_via_flux",
    "packet_amplitude",
    "phase_time",
    "smith_identity_check",
    "solve_bound_states",
    "threshold_depths",
    "transmission_probability",
    "van_kampen_check",
    "wigner_delay",
    "x0_of_p",
]
