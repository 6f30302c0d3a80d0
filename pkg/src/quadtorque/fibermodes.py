"""Exact guided modes of a two-layer step-index circular waveguide.

Solves the full vector characteristic equations for the HE/EH hybrid and
TE/TM mode families of a dielectric cylinder (core index n1, radius a)
surrounded by an infinite cladding (index n2, vacuum for a nanofiber),
with no weak-guidance approximation.  Field profiles are Bessel J inside
the core and modified Bessel K outside, with coefficients fixed by the
continuity of the tangential components at r = a, and are normalized so
the axial Poynting flux carries a prescribed power.

Profile phase convention for hybrid modes: e_r real, e_phi and e_z purely
imaginary (the choice in which a counterclockwise quasicircular mode has
p = +1).  The stored profiles describe the forward, counterclockwise
member (f = +1, p = +1); other members follow by the symmetry

    E = (e_r, p e_phi, f e_z) exp(i f beta z + i p l phi)
    H = p f (h_r, p h_phi, f h_z) exp(i f beta z + i p l phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import jv, jvp, kv, kvp

from .constants import c, epsilon_0, mu_0

__all__ = [
    "FiberSpec",
    "ModeId",
    "ModeProfile",
    "ModeSolution",
    "DriveConfig",
    "FieldSample",
    "bessel_suite",
    "bessel_j_pair",
    "bessel_k_pair",
    "vnumber",
    "solve_modes",
    "mode_profile",
    "normalize_power",
    "field_amplitude",
]

_FAMILY_ORDER = {"HE": 0, "EH": 1, "TE": 2, "TM": 3}

# root scan resolution over the guided-mode interval (n2 k, n1 k)
_SCAN_POINTS = 2000
# characteristic functions blow up at J_l(ha) zeros; a bracketed "root"
# whose refined residual exceeds this is a pole crossing, not a mode
_POLE_REJECT = 1e-6


# ====================================================================== #
#  Bessel helpers                                                        #
# ====================================================================== #

def bessel_j_pair(order: int, x: float) -> tuple[float, float]:
    """(J_n(x), J_n'(x)) for x >= 0."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if x < 0:
        raise ValueError("x must be >= 0 for the J pair")
    return float(jv(order, x)), float(jvp(order, x))


def bessel_k_pair(order: int, x: float) -> tuple[float, float]:
    """(K_n(x), K_n'(x)) for x > 0; K diverges at the origin."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if x <= 0:
        raise ValueError("x must be > 0 for the K pair")
    return float(kv(order, x)), float(kvp(order, x))


def bessel_suite(order: int, x: float) -> tuple[float, float, float, float]:
    """(J_n, J_n', K_n, K_n') at x > 0.

    The J pair alone is defined down to x = 0 (use :func:`bessel_j_pair`);
    the suite requires x > 0 because K_n diverges at the origin.
    """
    return bessel_j_pair(order, x) + bessel_k_pair(order, x)


# ====================================================================== #
#  Fiber and mode descriptions                                           #
# ====================================================================== #

@dataclass(frozen=True)
class FiberSpec:
    """Step-index fiber geometry: core radius a [m], indices n1 > n2 >= 1."""

    a: float
    n1: float
    n2: float = 1.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("fiber radius must be positive")
        if not self.n1 > self.n2 >= 1.0:
            raise ValueError("indices must satisfy n1 > n2 >= 1")


@dataclass(frozen=True, order=True)
class ModeId:
    """Guided-mode identity: family HE/EH/TE/TM, azimuthal l, radial m."""

    family: str
    l: int
    m: int

    def __post_init__(self):
        if self.family not in _FAMILY_ORDER:
            raise ValueError(f"unknown mode family {self.family!r}")
        if self.family in ("TE", "TM"):
            if self.l != 0:
                raise ValueError("TE/TM modes have l = 0")
        elif self.l < 1:
            raise ValueError("hybrid modes have l >= 1")
        if self.m < 1:
            raise ValueError("radial order m counts from 1")

    @property
    def label(self) -> str:
        return f"{self.family}{self.l}{self.m}"

    @classmethod
    def parse(cls, text: str) -> "ModeId":
        """Parse labels like ``HE11``, ``TE01``, ``TM01``, ``HE21``."""
        s = text.strip().upper()
        fam = s[:2]
        digits = s[2:]
        if fam not in _FAMILY_ORDER or len(digits) < 2 or not digits.isdigit():
            raise ValueError(f"cannot parse mode label {text!r}")
        return cls(fam, int(digits[0]), int(digits[1:]))

    def sort_key(self):
        return (_FAMILY_ORDER[self.family], self.l, self.m)


@dataclass(frozen=True)
class ModeProfile:
    """Field profile functions and radial derivatives at one radius.

    Electric parts in V/m, magnetic parts in A/m (at the solution's
    current normalization), primes in V/m^2.  These are the f = +1,
    p = +1 profile functions; direction indices are applied at the
    field-amplitude level.
    """

    e_r: complex
    e_phi: complex
    e_z: complex
    h_r: complex
    h_phi: complex
    h_z: complex
    de_r: complex
    de_phi: complex
    de_z: complex


@dataclass(frozen=True)
class ModeSolution:
    """One solved guided mode at a fixed frequency.

    beta is refined to |d beta| / beta < 1e-12 and always lies strictly
    inside the guided bracket (n2 w/c, n1 w/c).  ``norm`` is the overall
    amplitude scale; ``power`` records the axial Poynting flux the mode
    was last normalized to (None until :func:`normalize_power` is used).
    """

    mode: ModeId
    fiber: FiberSpec
    omega: float
    beta: float
    norm: float = 1.0
    power: float | None = None

    # quantities fixed by (omega, beta, fiber) -------------------------------

    @property
    def k(self) -> float:
        return self.omega / c

    @property
    def n_eff(self) -> float:
        return self.beta / self.k

    @property
    def h(self) -> float:
        """Transverse wavenumber in the core."""
        return math.sqrt((self.fiber.n1 * self.k) ** 2 - self.beta**2)

    @property
    def q(self) -> float:
        """Evanescent decay constant in the cladding."""
        return math.sqrt(self.beta**2 - (self.fiber.n2 * self.k) ** 2)

    @cached_property
    def _hybrid_params(self) -> tuple[float, float, float, float]:
        """(s, s1, s2, kappa) for hybrid modes.

        s is the polarization parameter l(1/h^2a^2 + 1/q^2a^2) divided by
        the bracketed Bessel-ratio sum; s1 and s2 are its core/cladding
        companions beta^2 s / (n^2 k^2); kappa = J_l(ha)/K_l(qa) matches
        the interior and exterior longitudinal profiles.
        """
        a, n1, n2 = self.fiber.a, self.fiber.n1, self.fiber.n2
        l, h, q, k, beta = self.mode.l, self.h, self.q, self.k, self.beta
        ha, qa = h * a, q * a
        J, Jd = bessel_j_pair(l, ha)
        K, Kd = bessel_k_pair(l, qa)
        X = Jd / (ha * J)
        Y = Kd / (qa * K)
        s = l * (1.0 / ha**2 + 1.0 / qa**2) / (X + Y)
        s1 = beta**2 * s / (n1 * k) ** 2
        s2 = beta**2 * s / (n2 * k) ** 2
        kappa = J / K
        return s, s1, s2, kappa

    # profile evaluation ------------------------------------------------------

    def profile(self, r: float) -> ModeProfile:
        """Evaluate all six components and the three radial e-derivatives."""
        if r < 0:
            raise ValueError("radius must be >= 0")
        if self.mode.family == "TE":
            return self._profile_te(r)
        if self.mode.family == "TM":
            return self._profile_tm(r)
        return self._profile_hybrid(r)

    def _profile_hybrid(self, r: float) -> ModeProfile:
        A = self.norm
        l, h, q, beta, omega = self.mode.l, self.h, self.q, self.beta, self.omega
        n1, n2, a = self.fiber.n1, self.fiber.n2, self.fiber.a
        s, s1, s2, kappa = self._hybrid_params
        if r <= a:
            x = h * r
            jm, jp = jv(l - 1, x), jv(l + 1, x)
            djm, djp = h * jvp(l - 1, x), h * jvp(l + 1, x)
            jl, djl = jv(l, x), h * jvp(l, x)
            ce = A * beta / (2.0 * h)
            ch = A * omega * epsilon_0 * n1**2 / (2.0 * h)
            return ModeProfile(
                e_r=ce * ((1 - s) * jm - (1 + s) * jp),
                e_phi=1j * ce * ((1 - s) * jm + (1 + s) * jp),
                e_z=-1j * A * jl,
                h_r=-1j * ch * ((1 - s1) * jm + (1 + s1) * jp),
                h_phi=ch * ((1 - s1) * jm - (1 + s1) * jp),
                h_z=A * beta * s / (omega * mu_0) * jl,
                de_r=ce * ((1 - s) * djm - (1 + s) * djp),
                de_phi=1j * ce * ((1 - s) * djm + (1 + s) * djp),
                de_z=-1j * A * djl,
            )
        x = q * r
        km, kp = kv(l - 1, x), kv(l + 1, x)
        dkm, dkp = q * kvp(l - 1, x), q * kvp(l + 1, x)
        kl, dkl = kv(l, x), q * kvp(l, x)
        ce = A * kappa * beta / (2.0 * q)
        ch = A * kappa * omega * epsilon_0 * n2**2 / (2.0 * q)
        return ModeProfile(
            e_r=ce * ((1 - s) * km + (1 + s) * kp),
            e_phi=1j * ce * ((1 - s) * km - (1 + s) * kp),
            e_z=-1j * A * kappa * kl,
            h_r=-1j * ch * ((1 - s2) * km - (1 + s2) * kp),
            h_phi=ch * ((1 - s2) * km + (1 + s2) * kp),
            h_z=A * kappa * beta * s / (omega * mu_0) * kl,
            de_r=ce * ((1 - s) * dkm + (1 + s) * dkp),
            de_phi=1j * ce * ((1 - s) * dkm - (1 + s) * dkp),
            de_z=-1j * A * kappa * dkl,
        )

    def _profile_te(self, r: float) -> ModeProfile:
        B = self.norm
        h, q, beta, omega, a = self.h, self.q, self.beta, self.omega, self.fiber.a
        zero = 0.0 + 0.0j
        if r <= a:
            j0, j1 = jv(0, h * r), jv(1, h * r)
            dj1 = h * jvp(1, h * r)
            return ModeProfile(
                e_r=zero,
                e_phi=B * omega * mu_0 / h * j1,
                e_z=zero,
                h_r=-B * beta / h * j1,
                h_phi=zero,
                h_z=-1j * B * j0,
                de_r=zero,
                de_phi=B * omega * mu_0 / h * dj1,
                de_z=zero,
            )
        kap = jv(0, h * a) / kv(0, q * a)
        k0, k1 = kv(0, q * r), kv(1, q * r)
        dk1 = q * kvp(1, q * r)
        return ModeProfile(
            e_r=zero,
            e_phi=-B * kap * omega * mu_0 / q * k1,
            e_z=zero,
            h_r=B * kap * beta / q * k1,
            h_phi=zero,
            h_z=-1j * B * kap * k0,
            de_r=zero,
            de_phi=-B * kap * omega * mu_0 / q * dk1,
            de_z=zero,
        )

    def _profile_tm(self, r: float) -> ModeProfile:
        A = self.norm
        h, q, beta, omega, a = self.h, self.q, self.beta, self.omega, self.fiber.a
        n1, n2 = self.fiber.n1, self.fiber.n2
        zero = 0.0 + 0.0j
        if r <= a:
            j0, j1 = jv(0, h * r), jv(1, h * r)
            dj0, dj1 = h * jvp(0, h * r), h * jvp(1, h * r)
            return ModeProfile(
                e_r=A * beta / h * j1,
                e_phi=zero,
                e_z=1j * A * j0,
                h_r=zero,
                h_phi=A * omega * epsilon_0 * n1**2 / h * j1,
                h_z=zero,
                de_r=A * beta / h * dj1,
                de_phi=zero,
                de_z=1j * A * dj0,
            )
        kap = jv(0, h * a) / kv(0, q * a)
        k0, k1 = kv(0, q * r), kv(1, q * r)
        dk0, dk1 = q * kvp(0, q * r), q * kvp(1, q * r)
        return ModeProfile(
            e_r=-A * kap * beta / q * k1,
            e_phi=zero,
            e_z=1j * A * kap * k0,
            h_r=zero,
            h_phi=-A * kap * omega * epsilon_0 * n2**2 / q * k1,
            h_z=zero,
            de_r=-A * kap * beta / q * dk1,
            de_phi=zero,
            de_z=1j * A * kap * dk0,
        )

    # axial Poynting flux ------------------------------------------------------

    def axial_flux(self) -> float:
        """Total axial Poynting flux 2 pi int (1/2) Re(E x H*)_z r dr [W]."""

        def integrand(r: float) -> float:
            p = self.profile(r)
            sz = 0.5 * (p.e_r * np.conj(p.h_phi) - p.e_phi * np.conj(p.h_r)).real
            return sz * r

        a = self.fiber.a
        inner, _ = quad(integrand, 0.0, a, limit=200)
        outer, _ = quad(integrand, a, np.inf, limit=200)
        return 2.0 * math.pi * (inner + outer)


def mode_profile(sol: ModeSolution, r: float) -> ModeProfile:
    """Profile components (e_r, e_phi, e_z, h_r, h_phi, h_z) + e-derivatives."""
    return sol.profile(r)


# ====================================================================== #
#  Characteristic equations and root search                              #
# ====================================================================== #

def vnumber(fiber: FiberSpec, wavelength: float) -> float:
    """Normalized frequency V = (2 pi a / lambda) sqrt(n1^2 - n2^2).

    A fiber is single-mode (HE11 only) for V below 2.405, the first zero
    of J_0, where the TE01/TM01 pair cuts off.
    """
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return (2.0 * math.pi * fiber.a / wavelength) * math.sqrt(
        fiber.n1**2 - fiber.n2**2
    )


def _char_te(fiber: FiberSpec, k: float, beta: float) -> float:
    a = fiber.a
    ha = math.sqrt((fiber.n1 * k) ** 2 - beta**2) * a
    qa = math.sqrt(beta**2 - (fiber.n2 * k) ** 2) * a
    return jv(1, ha) / (ha * jv(0, ha)) + kv(1, qa) / (qa * kv(0, qa))


def _char_tm(fiber: FiberSpec, k: float, beta: float) -> float:
    a = fiber.a
    ha = math.sqrt((fiber.n1 * k) ** 2 - beta**2) * a
    qa = math.sqrt(beta**2 - (fiber.n2 * k) ** 2) * a
    return fiber.n1**2 * jv(1, ha) / (ha * jv(0, ha)) + fiber.n2**2 * kv(1, qa) / (
        qa * kv(0, qa)
    )


def _char_hybrid(fiber: FiberSpec, k: float, l: int, sign: int, beta: float) -> float:
    """Two-branch hybrid characteristic function; sign -1 = HE, +1 = EH.

    Zero of  J_{l-1}(ha)/(ha J_l(ha))
             + [(n1^2+n2^2)/(2 n1^2)] K_l'(qa)/(qa K_l(qa)) - l/(ha)^2
             -/+ sqrt{ [(n1^2-n2^2)/(2 n1^2) K_l'(qa)/(qa K_l(qa))]^2
                       + (l beta / n1 k)^2 (1/(qa)^2 + 1/(ha)^2)^2 }.
    """
    a, n1, n2 = fiber.a, fiber.n1, fiber.n2
    ha = math.sqrt((n1 * k) ** 2 - beta**2) * a
    qa = math.sqrt(beta**2 - (n2 * k) ** 2) * a
    Y = kvp(l, qa) / (qa * kv(l, qa))
    u = 1.0 / ha**2 + 1.0 / qa**2
    R = math.sqrt(
        ((n1**2 - n2**2) / (2.0 * n1**2) * Y) ** 2 + (l * beta / (n1 * k)) ** 2 * u**2
    )
    lhs = jv(l - 1, ha) / (ha * jv(l, ha))
    rhs = -(n1**2 + n2**2) / (2.0 * n1**2) * Y + l / ha**2 + sign * R
    return lhs - rhs


def _find_roots(func, lo: float, hi: float) -> list[float]:
    """Bracket sign changes of func on [lo, hi] and refine the true roots.

    The characteristic functions have poles (at zeros of J_l(ha)) that
    also produce sign changes; those are rejected by the residual check
    after refinement.
    """
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = np.array([func(b) for b in grid])
    roots = []
    for i in range(len(grid) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)) or v0 == 0.0:
            continue
        if v0 * v1 < 0.0:
            b = brentq(func, grid[i], grid[i + 1], xtol=1e-300, rtol=1e-14)
            if abs(func(b)) < _POLE_REJECT:
                roots.append(b)
    return roots


def solve_modes(fiber: FiberSpec, wavelength: float) -> list[ModeSolution]:
    """All guided modes of the fiber at the given vacuum wavelength.

    Scans each family and azimuthal order for roots of the exact
    characteristic equations on the guided interval n2 k < beta < n1 k,
    refines each to |d beta|/beta < 1e-12, and returns solutions sorted
    by (family, l, m) with m counted from the largest beta down.  An
    empty list (not an error) means the fiber guides nothing.
    """
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    k = 2.0 * math.pi / wavelength
    omega = c * k
    span = (fiber.n1 - fiber.n2) * k
    lo = fiber.n2 * k + 1e-9 * span
    hi = fiber.n1 * k - 1e-9 * span

    solutions: list[ModeSolution] = []

    def collect(family: str, l: int, func) -> int:
        betas = sorted(_find_roots(func, lo, hi), reverse=True)
        for m, b in enumerate(betas, start=1):
            solutions.append(
                ModeSolution(ModeId(family, l, m), fiber, omega, b)
            )
        return len(betas)

    collect("TE", 0, lambda b: _char_te(fiber, k, b))
    collect("TM", 0, lambda b: _char_tm(fiber, k, b))
    l = 1
    while True:
        n_he = collect("HE", l, lambda b: _char_hybrid(fiber, k, l, -1, b))
        n_eh = collect("EH", l, lambda b: _char_hybrid(fiber, k, l, +1, b))
        if n_he == 0 and n_eh == 0:
            break
        l += 1

    solutions.sort(key=lambda s: s.mode.sort_key())
    return solutions


def normalize_power(sol: ModeSolution, power: float) -> ModeSolution:
    """Rescale a solution so its axial Poynting flux equals ``power`` [W]."""
    if power <= 0:
        raise ValueError("power must be positive")
    flux = sol.axial_flux()
    if not flux > 0.0:
        raise RuntimeError(
            f"degenerate axial flux {flux!r} for {sol.mode.label}"
        )
    scale = math.sqrt(power / flux)
    return replace(sol, norm=sol.norm * scale, power=power)


# ====================================================================== #
#  Drive and field amplitude                                             #
# ====================================================================== #

@dataclass(frozen=True)
class DriveConfig:
    """A guided drive field: mode, direction f, circulation p, power, detuning.

    f = +1/-1 selects forward/backward propagation; p = +1/-1 the
    counterclockwise/clockwise phase circulation of a hybrid mode (p is
    meaningless for TE/TM and pinned to +1).  The mode is renormalized on
    construction so its axial flux equals ``power``.
    """

    mode: ModeSolution
    power: float
    f: int = 1
    p: int = 1
    detuning: float = 0.0

    def __post_init__(self):
        if self.f not in (-1, 1) or self.p not in (-1, 1):
            raise ValueError("f and p must be +1 or -1")
        if self.power <= 0:
            raise ValueError("power must be positive")
        if self.mode.mode.family in ("TE", "TM") and self.p != 1:
            object.__setattr__(self, "p", 1)
        if self.mode.power is None or not math.isclose(
            self.mode.power, self.power, rel_tol=1e-12
        ):
            object.__setattr__(self, "mode", normalize_power(self.mode, self.power))

    @property
    def l(self) -> int:
        return self.mode.mode.l

    @property
    def beta(self) -> float:
        return self.mode.beta


@dataclass(frozen=True)
class FieldSample:
    """Complex field vector at one point, in both local bases."""

    cylindrical: np.ndarray  # (E_r, E_phi, E_z)
    cartesian: np.ndarray    # (E_x, E_y, E_z), fiber-frame axes


def field_amplitude(drive: DriveConfig, position: tuple[float, float, float]) -> FieldSample:
    """Complex electric amplitude E at (r, phi, z) for a drive.

    E = (e_r, p e_phi, f e_z) exp(i f beta z + i p l phi) in cylindrical
    components, converted to the fiber-frame Cartesian basis with
    r-hat = (cos phi, sin phi, 0), phi-hat = (-sin phi, cos phi, 0).
    """
    r, phi, z = position
    if r < 0:
        raise ValueError("radius must be >= 0")
    prof = drive.mode.profile(r)
    phase = np.exp(1j * (drive.f * drive.beta * z + drive.p * drive.l * phi))
    cyl = np.array(
        [prof.e_r, drive.p * prof.e_phi, drive.f * prof.e_z], dtype=complex
    ) * phase
    cphi, sphi = math.cos(phi), math.sin(phi)
    cart = np.array(
        [
            cyl[0] * cphi - cyl[1] * sphi,
            cyl[0] * sphi + cyl[1] * cphi,
            cyl[2],
        ]
    )
    return FieldSample(cylindrical=cyl, cartesian=cart)
