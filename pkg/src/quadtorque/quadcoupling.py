"""Quadrupole coupling of a two-level atom to the evanescent field.

The electric-quadrupole Rabi frequency involves the field *gradient*
tensor d E_j / d x_i contracted with the spherical matrices u^(q).  For a
guided mode the contraction factorizes into a radial gradient factor
V_q(r) and a pure phase,

    sum_ij u^(q)_ij dE_j/dx_i = V_q(r) exp(i f beta z + i (p l - q) phi),

which is the engine behind the azimuthal-force and torque results: the
only phi dependence of the Rabi frequency is the winding exp(i(pl-q)phi).

Two independent routes to the contraction are kept deliberately:
:func:`gradient_factors` evaluates the closed-form V_q from the profile
functions and their radial derivatives, while :func:`gradient_tensor`
builds the full Cartesian Jacobian from the rotation-matrix calculus and
contracts it with u^(q).  Their agreement (and agreement with a brute
finite-difference oracle in the tests) pins down both the algebra and
the sign conventions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .angular import (
    TransitionSpec,
    quad_tensor_matrix,
    reduced_element_F,
    reduced_element_J,
    wigner_3j,
)
from .constants import e as e_charge, hbar
from .fibermodes import DriveConfig

__all__ = [
    "GradientFactors",
    "RabiSample",
    "gradient_factors",
    "gradient_tensor",
    "rabi_frequency",
    "phase_gradient_check",
]

_SQRT6 = math.sqrt(6.0)


@dataclass(frozen=True)
class GradientFactors:
    """The five radial gradient factors V_q(r) of one drive at one radius."""

    V: dict[int, complex]  # q in -2..2 -> V_q(r), units V/m^2
    r: float

    def __getitem__(self, q: int) -> complex:
        return self.V[q]


@dataclass(frozen=True)
class RabiSample:
    """Rabi frequency at one position for one (M, M') pair.

    omega is the complex Rabi frequency [rad/s]; q = M' - M is the
    spherical component the drive gradient couples to.
    """

    omega: complex
    position: tuple[float, float, float]
    q: int


def gradient_factors(drive: DriveConfig, r: float) -> GradientFactors:
    """Closed-form gradient factors V_q(r) for q in -2..2.

    Requires the atom outside the fiber (r > a): the coupling model is
    built for the evanescent region, and the profile derivative stencil
    must not straddle the index step.

    With v_pm = e_r -/+ i p e_phi and the drive's f, p, l, beta:

        V_0    = -(1/sqrt6) (e_r' + e_r/r + i l e_phi / r - 2 i beta e_z)
        V_{+-1} = -/+ (f/2) [i beta v_pm + e_z' +/- (p l / r) e_z]
        V_{+-2} = (1/2) [e_r' -/+ i p e_phi' - (1 -/+ p l)/r v_pm]
    """
    a = drive.mode.fiber.a
    if r <= a:
        raise ValueError(
            f"atom must sit outside the fiber: r = {r!r} <= a = {a!r}"
        )
    prof = drive.mode.profile(r)
    p, f, l, beta = drive.p, drive.f, drive.l, drive.beta
    er, ephi, ez = prof.e_r, prof.e_phi, prof.e_z
    der, dephi, dez = prof.de_r, prof.de_phi, prof.de_z

    vp = er - 1j * p * ephi   # couples to q = +1, +2
    vm = er + 1j * p * ephi   # couples to q = -1, -2

    V = {
        0: -(der + er / r + 1j * l * ephi / r - 2j * beta * ez) / _SQRT6,
        +1: -(f / 2.0) * (1j * beta * vp + dez + (p * l / r) * ez),
        -1: +(f / 2.0) * (1j * beta * vm + dez - (p * l / r) * ez),
        +2: 0.5 * (der - 1j * p * dephi - (1.0 - p * l) / r * vp),
        -2: 0.5 * (der + 1j * p * dephi - (1.0 + p * l) / r * vm),
    }
    return GradientFactors(V={q: complex(v) for q, v in V.items()}, r=r)


def _jacobian(drive: DriveConfig, position: tuple[float, float, float]) -> np.ndarray:
    """Cartesian gradient matrix G[i, j] = dE_j / dx_i at a point.

    Built analytically from the cylindrical profile: with the component
    triplet v = (e_r, p e_phi, f e_z), rotation M(phi) into Cartesian
    axes, and total phase Phi = f beta z + p l phi,

        dE/dr   = M v' e^{iPhi}
        dE/dphi = (M' v + i p l M v) e^{iPhi}
        dE/dz   = i f beta M v e^{iPhi}

    then the chain rule with dr = (cos, sin), dphi = (-sin, cos)/r.
    """
    r, phi, z = position
    prof = drive.mode.profile(r)
    p, f, l, beta = drive.p, drive.f, drive.l, drive.beta

    v = np.array([prof.e_r, p * prof.e_phi, f * prof.e_z])
    dv = np.array([prof.de_r, p * prof.de_phi, f * prof.de_z])
    cs, sn = math.cos(phi), math.sin(phi)
    M = np.array([[cs, -sn, 0.0], [sn, cs, 0.0], [0.0, 0.0, 1.0]])
    dM = np.array([[-sn, -cs, 0.0], [cs, -sn, 0.0], [0.0, 0.0, 0.0]])

    a_vec = M @ dv                                  # radial change
    b_vec = (dM @ v + 1j * p * l * (M @ v)) / r     # azimuthal change
    e_vec = M @ v

    phase = np.exp(1j * (f * beta * z + p * l * phi))
    G = np.empty((3, 3), dtype=complex)
    G[0] = (cs * a_vec - sn * b_vec) * phase        # d/dx
    G[1] = (sn * a_vec + cs * b_vec) * phase        # d/dy
    G[2] = 1j * f * beta * e_vec * phase            # d/dz
    return G


def gradient_tensor(drive: DriveConfig, position: tuple[float, float, float], q: int) -> complex:
    """Contraction sum_ij u^(q)_ij dE_j/dx_i at a point outside the fiber.

    Equals V_q(r) exp(i f beta z + i (p l - q) phi); computed here by the
    independent Cartesian-Jacobian route.
    """
    if abs(q) > 2:
        raise ValueError(f"spherical component q={q} outside -2..2")
    r = position[0]
    a = drive.mode.fiber.a
    if r <= a:
        raise ValueError(
            f"atom must sit outside the fiber: r = {r!r} <= a = {a!r}"
        )
    G = _jacobian(drive, position)
    u = quad_tensor_matrix(q).entries
    return complex(np.sum(u * G))


def rabi_frequency(
    spec: TransitionSpec,
    drive: DriveConfig,
    position: tuple[float, float, float],
) -> RabiSample:
    """Quadrupole Rabi frequency of a two-level atom at a point [rad/s].

    Omega = (e / 2 hbar) (-1)^(F'-M') 3j(F' 2 F; -M' q M)
            <n'F'||T2||nF> sum_ij u^(q)_ij dE_j/dx_i,   q = M' - M.

    The drive must be resonant enough for the two-level reduction to make
    sense, but no check on the wavelength match is made here: the mode
    frequency and the transition frequency are the caller's pairing.
    """
    q = spec.q
    three_j = wigner_3j(spec.Fp, 2, spec.F, -spec.Mp, q, spec.M)
    if three_j == 0.0:
        return RabiSample(omega=0.0 + 0.0j, position=position, q=q)
    red_f = reduced_element_F(
        reduced_element_J(spec), spec.J, spec.Jp, spec.I, spec.F, spec.Fp
    )
    sign = -1.0 if (spec.Fp.twice - spec.Mp.twice) // 2 % 2 else 1.0
    # closed-form contraction V_q(r) x winding phase: exact zeros (e.g. the
    # transverse-electric q = 0 null) stay exactly zero on this route; the
    # Jacobian route of gradient_tensor cross-checks it in the test suite
    r, phi, z = position
    v_q = gradient_factors(drive, r)[q]
    winding = cmath.exp(
        1j * (drive.f * drive.beta * z + (drive.p * drive.l - q) * phi)
    )
    omega = complex(
        (e_charge / (2.0 * hbar)) * sign * three_j * red_f * v_q * winding
    )
    return RabiSample(omega=omega, position=position, q=q)


def phase_gradient_check(spec: TransitionSpec, drive: DriveConfig, r: float) -> float:
    """Residual of the Rabi-phase winding law dOmega/dphi = i(pl - q) Omega.

    Evaluates a central finite difference in phi against the analytic
    winding at a fixed reference angle; returns the relative residual
    |FD - i (p l - q) Omega| / |Omega|, or 0 when Omega vanishes
    identically (both sides are then zero).
    """
    phi0, z0 = 0.3, 0.0
    delta = 1e-4
    om0 = rabi_frequency(spec, drive, (r, phi0, z0)).omega
    if om0 == 0.0:
        return 0.0
    omp = rabi_frequency(spec, drive, (r, phi0 + delta, z0)).omega
    omm = rabi_frequency(spec, drive, (r, phi0 - delta, z0)).omega
    fd = (omp - omm) / (2.0 * delta)
    factor = drive.p * drive.l - spec.q
    return abs(fd - 1j * factor * om0) / abs(om0)
