"""Guided-mode electric-quadrupole coupling near an optical nanofiber.

Computes the exact vector modes of a vacuum-clad step-index nanofiber,
the electric-quadrupole Rabi frequency of a two-level alkali atom in the
evanescent field, and the resulting azimuthal force and axial orbital
torque from the driven steady state of the optical Bloch equations.

The package is organized bottom-up:

``angular``
    Wigner 3j/6j symbols, spherical quadrupole tensor matrices, selection
    rules, reduced-matrix-element calibration from oscillator strengths.
``fibermodes``
    Exact HE/EH/TE/TM characteristic equations, field profiles, power
    normalization, drive configuration.
``quadcoupling``
    Field-gradient factors, the u^(q) contraction, Rabi frequencies.
``dynamics``
    Optical Bloch equations, steady states, axial torque and azimuthal
    force.
``scenarios``
    Sweep configuration files, bundled presets, CSV output.
"""

from .angular import (
    HalfInt,
    QuadTensorMatrix,
    TransitionSpec,
    oscillator_strength_to_reduced_element,
    quad_tensor_matrix,
    reduced_element_F,
    reduced_element_J,
    wigner_3j,
    wigner_6j,
)
from .dynamics import (
    GROUND,
    AtomState,
    TorqueResult,
    evolve,
    steady_state,
    torque_axial,
    torque_weak_field,
)
from .fibermodes import (
    DriveConfig,
    FiberSpec,
    FieldSample,
    ModeId,
    ModeProfile,
    ModeSolution,
    bessel_j_pair,
    bessel_k_pair,
    bessel_suite,
    field_amplitude,
    mode_profile,
    normalize_power,
    solve_modes,
    vnumber,
)
from .quadcoupling import (
    GradientFactors,
    RabiSample,
    gradient_factors,
    gradient_tensor,
    phase_gradient_check,
    rabi_frequency,
)
from .scenarios import (
    ConfigError,
    DriveRequest,
    SweepConfig,
    SweepRow,
    dump_config,
    emit_csv,
    load_config,
    load_preset,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AtomState",
    "ConfigError",
    "DriveConfig",
    "DriveRequest",
    "FiberSpec",
    "FieldSample",
    "GROUND",
    "GradientFactors",
    "HalfInt",
    "ModeId",
    "ModeProfile",
    "ModeSolution",
    "QuadTensorMatrix",
    "RabiSample",
    "SweepConfig",
    "SweepRow",
    "TorqueResult",
    "TransitionSpec",
    "bessel_j_pair",
    "bessel_k_pair",
    "bessel_suite",
    "dump_config",
    "emit_csv",
    "evolve",
    "field_amplitude",
    "gradient_factors",
    "gradient_tensor",
    "load_config",
    "load_preset",
    "mode_profile",
    "normalize_power",
    "oscillator_strength_to_reduced_element",
    "phase_gradient_check",
    "quad_tensor_matrix",
    "rabi_frequency",
    "reduced_element_F",
    "reduced_element_J",
    "run_sweep",
    "solve_modes",
    "steady_state",
    "torque_axial",
    "torque_weak_field",
    "vnumber",
    "wigner_3j",
    "wigner_6j",
]
