"""Two-level density-matrix dynamics and the axial orbital torque.

The atom is driven on a quadrupole transition with Rabi frequency Omega
and detuning Delta, and decays at total rate Gamma.  In the rotating
frame the optical Bloch equations for the closed two-level system are

    d rho_ee / dt = -Im(rho_ge Omega) - Gamma rho_ee
    d rho_ge / dt = (i/2) Omega* (2 rho_ee - 1) - (i Delta + Gamma/2) rho_ge

with rho_gg = 1 - rho_ee.  Because the guided-drive Rabi frequency winds
as exp(i (p l - M' + M) phi), absorption transfers a quantized amount of
axial angular momentum per photon, giving the orbital torque

    T_z = (i hbar / 2) (p l - M' + M) (rho_ge Omega - rho_eg Omega*),

equal to hbar (p l - M' + M) (Gamma rho_ee + d rho_ee/dt) along any
trajectory of the equations above (photon-bookkeeping conservation law).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .angular import HalfInt, TransitionSpec
from .constants import hbar
from .fibermodes import DriveConfig
from .quadcoupling import rabi_frequency

__all__ = [
    "AtomState",
    "GROUND",
    "TorqueResult",
    "steady_state",
    "evolve",
    "torque_axial",
    "torque_weak_field",
]

# tolerated excursion outside the physical region before the integrator
# (or a caller) is declared inaccurate
_POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class AtomState:
    """Two-level density-matrix state (rho_ee real, rho_ge complex)."""

    rho_ee: float
    rho_ge: complex

    def __post_init__(self):
        if not (-_POSITIVITY_TOL <= self.rho_ee <= 1.0 + _POSITIVITY_TOL):
            raise ValueError(f"rho_ee = {self.rho_ee!r} outside [0, 1]")
        if abs(self.rho_ge) ** 2 > self.rho_ee * self.rho_gg + _POSITIVITY_TOL:
            raise ValueError(
                "coherence exceeds the positivity bound |rho_ge|^2 <= rho_ee rho_gg"
            )

    @property
    def rho_gg(self) -> float:
        return 1.0 - self.rho_ee

    @property
    def rho_eg(self) -> complex:
        return complex(self.rho_ge).conjugate()


GROUND = AtomState(rho_ee=0.0, rho_ge=0.0 + 0.0j)


@dataclass(frozen=True)
class TorqueResult:
    """Rabi frequency, axial torque, and azimuthal force at one position.

    ``factor`` is the integer p l - M' + M: the axial angular momentum in
    units of hbar transferred per absorbed photon.  F_phi = T_z / r holds
    exactly (T_z = r F_phi is how the azimuthal force is defined).
    """

    omega: complex
    t_z: float
    r: float
    factor: int

    @property
    def f_phi(self) -> float:
        return self.t_z / self.r


def _torque_factor(p: int, l: int, M, Mp) -> int:
    dm2 = HalfInt.of(Mp).twice - HalfInt.of(M).twice
    if dm2 % 2:
        raise ValueError("M' - M must be an integer")
    return p * l - dm2 // 2


def steady_state(omega: complex, delta: float, gamma: float) -> AtomState:
    """Fixed point of the Bloch equations (exact algebra, no integration).

    rho_ee = (|Omega|^2/4) / (Delta^2 + Gamma^2/4 + |Omega|^2/2)
    rho_ge = (i Omega*/2)(2 rho_ee - 1) / (i Delta + Gamma/2)

    In the weak-field limit rho_ge -> Omega*/(i Gamma - 2 Delta).
    """
    if gamma <= 0:
        raise ValueError("decay rate must be positive")
    w2 = abs(omega) ** 2
    if w2 == 0.0:
        return GROUND
    denom = delta**2 + gamma**2 / 4.0 + w2 / 2.0
    rho_ee = 0.25 * w2 / denom
    rho_ge = (
        0.5j * np.conj(omega) * (2.0 * rho_ee - 1.0) / (1j * delta + gamma / 2.0)
    )
    return AtomState(rho_ee=rho_ee, rho_ge=complex(rho_ge))


def evolve(
    initial: AtomState,
    omega: complex,
    delta: float,
    gamma: float,
    t_final: float,
    dt: float,
) -> list[tuple[float, AtomState, float]]:
    """Integrate the Bloch equations with fixed-step RK4.

    Returns the trajectory as (t, state, d rho_ee/dt) samples including
    both endpoints.  The recorded derivative is the exact right-hand side
    at the sample, for use in conservation-law checks.

    dt must resolve the fastest scale, dt <= 0.01 / max(|Omega|, Gamma,
    |Delta|); a positivity excursion beyond 1e-9 raises (integration
    accuracy, not physics).
    """
    if gamma < 0:
        raise ValueError("decay rate must be >= 0")
    if t_final < 0 or dt <= 0:
        raise ValueError("need t_final >= 0 and dt > 0")
    fastest = max(abs(omega), gamma, abs(delta))
    if fastest > 0 and dt > 0.01 / fastest:
        raise ValueError(
            f"dt = {dt!r} too coarse: need dt <= {0.01 / fastest!r} "
            f"to resolve the fastest scale"
        )

    om_c = np.conj(omega)

    def rhs(y: np.ndarray) -> np.ndarray:
        rho_ee = y[0]
        rho_ge = y[1] + 1j * y[2]
        d_ee = -float(np.imag(rho_ge * omega)) - gamma * rho_ee
        d_ge = 0.5j * om_c * (2.0 * rho_ee - 1.0) - (1j * delta + gamma / 2.0) * rho_ge
        return np.array([d_ee, d_ge.real, d_ge.imag])

    def sample(t: float, y: np.ndarray):
        state = AtomState(rho_ee=y[0], rho_ge=complex(y[1], y[2]))
        return (t, state, rhs(y)[0])

    y = np.array([initial.rho_ee, initial.rho_ge.real, initial.rho_ge.imag])
    n_steps = max(1, math.ceil(t_final / dt)) if t_final > 0 else 0
    traj = [sample(0.0, y)]
    for n in range(n_steps):
        step = min(dt, t_final - n * dt)
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * step * k1)
        k3 = rhs(y + 0.5 * step * k2)
        k4 = rhs(y + step * k3)
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not (-_POSITIVITY_TOL <= y[0] <= 1.0 + _POSITIVITY_TOL):
            raise RuntimeError(
                f"integration lost positivity at step {n + 1}: rho_ee = {y[0]!r}"
            )
        traj.append(sample(min((n + 1) * dt, t_final), y))
    return traj


def torque_axial(state: AtomState, omega: complex, p: int, l: int, M, Mp) -> float:
    """Axial orbital torque T_z [N m] on the atom in a given state.

    T_z = (i hbar / 2)(p l - M' + M)(rho_ge Omega - rho_eg Omega*); the
    parenthesis is 2i Im(rho_ge Omega), so the result is real exactly.
    """
    factor = _torque_factor(p, l, M, Mp)
    return -hbar * factor * float(np.imag(state.rho_ge * omega))


def torque_weak_field(
    spec: TransitionSpec,
    drive: DriveConfig,
    position: tuple[float, float, float],
    gamma: float | Callable[[float, HalfInt], float] | None = None,
) -> TorqueResult:
    """Steady-state weak-field torque and azimuthal force at a position.

    T_z = hbar (p l - M' + M) |Omega|^2 Gamma / (4 Delta^2 + Gamma^2),
    F_phi = T_z / r.  Gamma defaults to the transition's decay rate; pass
    a number to override it, or a callable gamma(r, M') for a
    position-dependent (fiber-modified) rate.

    Warns (does not fail) when |Omega| >= 0.1 Gamma, where the lowest-
    order formula starts to degrade.
    """
    g = spec.gamma if gamma is None else gamma
    if callable(g):
        g = g(position[0], spec.Mp)
    if g <= 0:
        raise ValueError("decay rate must be positive")
    om = rabi_frequency(spec, drive, position).omega
    if abs(om) >= 0.1 * g:
        warnings.warn(
            f"|Omega| = {abs(om):.3e} is not small against Gamma = {g:.3e}; "
            f"weak-field torque is only first order in |Omega|^2/Gamma^2",
            stacklevel=2,
        )
    factor = _torque_factor(drive.p, drive.l, spec.M, spec.Mp)
    t_z = (
        hbar * factor * abs(om) ** 2 * g
        / (4.0 * drive.detuning**2 + g**2)
    )
    return TorqueResult(omega=om, t_z=t_z, r=position[0], factor=factor)
