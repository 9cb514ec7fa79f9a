"""Converse-KAM detection for 3D volume-preserving flows.

Thin re-export of the compiled module: parameter types, single-orbit
detection, parameter sweeps, Poincare sections, finite-time Lyapunov
exponents, and the self-check suites.
"""

from ._ckam import (
    AxisSpec,
    DetectionResult,
    DetectorOptions,
    Foliation,
    GridResult,
    GridSpec,
    QFlowParams,
    StepControl,
    TwoWaveParams,
    __version__,
    axis_value,
    detect_q_flow,
    detect_two_wave,
    ftle_q_flow,
    ftle_two_wave,
    poincare_section,
    psi,
    read_grid_csv,
    run_sweep,
    verify,
)

__all__ = [
    "AxisSpec",
    "DetectionResult",
    "DetectorOptions",
    "Foliation",
    "GridResult",
    "GridSpec",
    "QFlowParams",
    "StepControl",
    "TwoWaveParams",
    "__version__",
    "axis_value",
    "detect_q_flow",
    "detect_two_wave",
    "ftle_q_flow",
    "ftle_two_wave",
    "poincare_section",
    "psi",
    "read_grid_csv",
    "run_sweep",
    "verify",
]
