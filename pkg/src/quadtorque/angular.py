"""Angular-momentum algebra for electric-quadrupole (E2) transitions.

This module collects everything about the *atom* side of the coupling:
exact half-integer bookkeeping, Wigner 3j and 6j symbols evaluated from
the Racah factorial sums in exact rational arithmetic, the five rank-2
spherical tensor matrices u^(q) that carry the Cartesian structure of the
quadrupole operator Q_ij = e(3 x_i x_j - R^2 delta_ij), the E2 selection
rules, and the reduced matrix elements.  The J-basis reduced element is
calibrated from the measured oscillator strength of the quadrupole line,

    f = m_e w0^3 |<n'J'||T2||nJ>|^2 / (20 hbar c^2 (2J+1)),

inverted for |<n'J'||T2||nJ>|, and carried to the hyperfine F basis by
the standard rank-2 reduction with a 6j symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import c, hbar, m_e

__all__ = [
    "HalfInt",
    "QuadTensorMatrix",
    "TransitionSpec",
    "wigner_3j",
    "wigner_6j",
    "quad_tensor_matrix",
    "reduced_element_J",
    "reduced_element_F",
    "oscillator_strength_to_reduced_element",
]

# Exact integer factorials.  Racah-sum arguments stay tiny for the angular
# momenta of interest (j <= 4 needs entries up to ~30); the table is sized
# with headroom and math.factorial covers anything beyond it.
_FACT = [math.factorial(n) for n in range(68)]


def _fact(n: int) -> int:
    return _FACT[n] if n < len(_FACT) else math.factorial(n)


@dataclass(frozen=True, order=True)
class HalfInt:
    """An exact half-integer, stored as twice its value.

    Angular momenta and projections (F, M, J, I, L, ...) are integers or
    half-odd-integers; storing ``2j`` as an int keeps triangle conditions
    and phase exponents exact.  Construct via :meth:`of`, which accepts
    HalfInt, int, float, or strings like ``"3/2"``.
    """

    twice: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(2 * int(x))
        if isinstance(x, str):
            s = x.strip()
            if "/" in s:
                num, den = s.split("/")
                if int(den) == 2:
                    return cls(int(num))
                if int(den) == 1:
                    return cls(2 * int(num))
                raise ValueError(f"not a half-integer: {x!r}")
            x = float(s)
        if isinstance(x, (float, np.floating)):
            t = 2.0 * float(x)
            r = round(t)
            if abs(t - r) > 1e-9:
                raise ValueError(f"not a half-integer: {x!r}")
            return cls(int(r))
        raise TypeError(f"cannot interpret {x!r} as a half-integer")

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2.0

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other) -> "HalfInt":
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))


def _twice(j) -> int:
    return HalfInt.of(j).twice


def _triangle_ok(a: int, b: int, c: int) -> bool:
    # twice-value triangle condition, including the integer-perimeter rule
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _phase(exponent2: int) -> int:
    """(-1)**(exponent2/2) for an even twice-valued exponent."""
    if exponent2 % 2:
        raise ValueError("phase exponent is not an integer")
    return -1 if (exponent2 // 2) % 2 else 1


# ====================================================================== #
#  Wigner symbols (Racah factorial sums, exact rationals)                #
# ====================================================================== #

def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol ( j1 j2 j3 / m1 m2 m3 ).

    Parameters
    ----------
    j1, j2, j3, m1, m2, m3 : HalfInt, int, float, or str
        Angular momenta and projections; half-integers are exact.

    Returns
    -------
    float
        The symbol value.  Couplings that violate the triangle rule or
        the projection conditions (m1+m2+m3 = 0, |m| <= j, j-m integer)
        return exactly 0.0.

    Notes
    -----
    Evaluated with the Racah single-sum formula over an exact integer
    factorial table.  The alternating sum and the squared prefactor are
    accumulated as rationals, so the only rounding is the final square
    root into a double.
    """
    a, b, c3 = _twice(j1), _twice(j2), _twice(j3)
    ma, mb, mc = _twice(m1), _twice(m2), _twice(m3)
    if min(a, b, c3) < 0:
        raise ValueError("angular momentum magnitudes must be >= 0")
    if ma + mb + mc != 0:
        return 0.0
    if not _triangle_ok(a, b, c3):
        return 0.0
    for j, m in ((a, ma), (b, mb), (c3, mc)):
        if abs(m) > j or (j + m) % 2:
            return 0.0

    t_min = max(0, (b - c3 - ma) // 2, (a - c3 + mb) // 2)
    t_max = min((a + b - c3) // 2, (a - ma) // 2, (b + mb) // 2)
    if t_min > t_max:
        return 0.0

    ssum = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            _fact(t)
            * _fact((c3 - b + ma) // 2 + t)
            * _fact((c3 - a - mb) // 2 + t)
            * _fact((a + b - c3) // 2 - t)
            * _fact((a - ma) // 2 - t)
            * _fact((b + mb) // 2 - t)
        )
        ssum += Fraction(-1 if t % 2 else 1, den)
    if ssum == 0:
        return 0.0

    pref = Fraction(
        _fact((a + b - c3) // 2)
        * _fact((a - b + c3) // 2)
        * _fact((-a + b + c3) // 2),
        _fact((a + b + c3) // 2 + 1),
    )
    for j, m in ((a, ma), (b, mb), (c3, mc)):
        pref *= _fact((j + m) // 2) * _fact((j - m) // 2)

    sign = _phase(a - b - mc) * (1 if ssum > 0 else -1)
    return sign * math.sqrt(float(pref * ssum * ssum))


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol { j1 j2 j3 / j4 j5 j6 }.

    Racah factorial-sum evaluation in exact rational arithmetic; returns
    0.0 when any of the four triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6),
    (j4 j5 j3) violates the triangle rule.
    """
    a, b, c6 = _twice(j1), _twice(j2), _twice(j3)
    d, e6, f6 = _twice(j4), _twice(j5), _twice(j6)
    if min(a, b, c6, d, e6, f6) < 0:
        raise ValueError("angular momentum magnitudes must be >= 0")
    triads = ((a, b, c6), (a, e6, f6), (d, b, f6), (d, e6, c6))
    if not all(_triangle_ok(*tr) for tr in triads):
        return 0.0

    def delta(x, y, z):
        return Fraction(
            _fact((x + y - z) // 2) * _fact((x - y + z) // 2) * _fact((-x + y + z) // 2),
            _fact((x + y + z) // 2 + 1),
        )

    T = [sum(tr) // 2 for tr in triads]
    Q = [(a + b + d + e6) // 2, (b + c6 + e6 + f6) // 2, (a + c6 + d + f6) // 2]

    ssum = Fraction(0)
    for t in range(max(T), min(Q) + 1):
        den = 1
        for ti in T:
            den *= _fact(t - ti)
        for qi in Q:
            den *= _fact(qi - t)
        ssum += Fraction((-1 if t % 2 else 1) * _fact(t + 1), den)
    if ssum == 0:
        return 0.0

    dprod = delta(a, b, c6) * delta(a, e6, f6) * delta(d, b, f6) * delta(d, e6, c6)
    sign = 1 if ssum > 0 else -1
    return sign * math.sqrt(float(dprod * ssum * ssum))


# ====================================================================== #
#  Rank-2 spherical tensor matrices                                      #
# ====================================================================== #

_SQRT6 = math.sqrt(6.0)

# u^(q) carries the Cartesian structure of the spherical component q of a
# symmetric traceless rank-2 tensor; entries are dimensionless.
_U_ENTRIES = {
    2: 0.5 * np.array([[1, -1j, 0], [-1j, -1, 0], [0, 0, 0]], dtype=complex),
    1: 0.5 * np.array([[0, 0, -1], [0, 0, 1j], [-1, 1j, 0]], dtype=complex),
    0: (1.0 / _SQRT6) * np.array([[-1, 0, 0], [0, -1, 0], [0, 0, 2]], dtype=complex),
    -1: 0.5 * np.array([[0, 0, 1], [0, 0, 1j], [1, 1j, 0]], dtype=complex),
    -2: 0.5 * np.array([[1, 1j, 0], [1j, -1, 0], [0, 0, 0]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class QuadTensorMatrix:
    """One spherical component u^(q) of the quadrupole tensor structure."""

    q: int
    entries: np.ndarray  # 3x3 complex, symmetric, traceless


def quad_tensor_matrix(q: int) -> QuadTensorMatrix:
    """Return the 3x3 matrix u^(q) for spherical component q in {-2..2}.

    The matrices are symmetric and traceless and satisfy
    u^(-q) = (-1)^q conj(u^(q)).
    """
    if q not in _U_ENTRIES:
        raise ValueError(f"spherical component q={q} outside -2..2")
    return QuadTensorMatrix(q, _U_ENTRIES[q].copy())


# ====================================================================== #
#  Transition description and selection rules                            #
# ====================================================================== #

@dataclass(frozen=True)
class TransitionSpec:
    """A two-level electric-quadrupole transition |nFM> -> |n'F'M'>.

    Quantum numbers are exact half-integers (any HalfInt-coercible value
    is accepted).  Construction enforces the E2 selection rules:
    |F'-F| <= 2 <= F'+F, |M'-M| <= 2, |J'-J| <= 2 <= J'+J, and
    |L'-L| in {0, 2} with L+L' >= 2.

    Attributes
    ----------
    lower, upper : str
        Opaque level labels, e.g. ``"5S1/2"`` and ``"4D5/2"``.
    F, M, Fp, Mp, J, Jp, I, L, Lp : HalfInt
        Hyperfine, electronic, nuclear, and orbital quantum numbers
        (``p`` suffix marks the upper level).
    lambda0 : float
        Transition wavelength [m].
    f_osc : float
        Measured oscillator strength of the quadrupole line.
    gamma : float
        Total decay rate of the upper level [1/s].
    """

    lower: str
    upper: str
    F: HalfInt
    M: HalfInt
    Fp: HalfInt
    Mp: HalfInt
    J: HalfInt
    Jp: HalfInt
    I: HalfInt
    L: HalfInt
    Lp: HalfInt
    lambda0: float
    f_osc: float
    gamma: float

    def __post_init__(self):
        for name in ("F", "M", "Fp", "Mp", "J", "Jp", "I", "L", "Lp"):
            object.__setattr__(self, name, HalfInt.of(getattr(self, name)))
        if self.lambda0 <= 0:
            raise ValueError("wavelength must be positive")
        if self.f_osc <= 0:
            raise ValueError("oscillator strength must be positive")
        if self.gamma <= 0:
            raise ValueError("decay rate must be positive")
        for j, name in ((self.F, "F"), (self.Fp, "F'"), (self.J, "J"),
                        (self.Jp, "J'"), (self.I, "I"), (self.L, "L"),
                        (self.Lp, "L'")):
            if j.twice < 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.L.is_integer or not self.Lp.is_integer:
            raise ValueError("orbital angular momenta must be integers")
        for j, m, name in ((self.F, self.M, "M"), (self.Fp, self.Mp, "M'")):
            if (j.twice + m.twice) % 2:
                raise ValueError(f"{name} must differ from its F by an integer")
            if abs(m.twice) > j.twice:
                raise ValueError(f"|{name}| exceeds its F")
        dF = abs(self.Fp.twice - self.F.twice)
        if not (dF <= 4 <= self.Fp.twice + self.F.twice):
            raise ValueError(
                f"E2 selection rule violated: need |F'-F| <= 2 <= F'+F, "
                f"got F={self.F}, F'={self.Fp}"
            )
        if abs(self.Mp.twice - self.M.twice) > 4:
            raise ValueError(
                f"E2 selection rule violated: need |M'-M| <= 2, "
                f"got M={self.M}, M'={self.Mp}"
            )
        dJ = abs(self.Jp.twice - self.J.twice)
        if not (dJ <= 4 <= self.Jp.twice + self.J.twice):
            raise ValueError(
                f"E2 selection rule violated: need |J'-J| <= 2 <= J'+J, "
                f"got J={self.J}, J'={self.Jp}"
            )
        dL = abs(self.Lp.twice - self.L.twice)
        if dL not in (0, 4) or self.Lp.twice + self.L.twice < 4:
            raise ValueError(
                f"E2 selection rule violated: need |L'-L| in {{0, 2}} and "
                f"L+L' >= 2, got L={self.L}, L'={self.Lp}"
            )

    @property
    def omega0(self) -> float:
        """Transition angular frequency 2*pi*c/lambda0 [rad/s]."""
        return 2.0 * math.pi * c / self.lambda0

    @property
    def q(self) -> int:
        """Spherical component M' - M driven by this transition."""
        dq2 = self.Mp.twice - self.M.twice
        return dq2 // 2


# ====================================================================== #
#  Reduced matrix elements                                               #
# ====================================================================== #

def oscillator_strength_to_reduced_element(f_osc: float, omega0: float, J) -> float:
    """|<n'J'||T2||nJ>| [m^2] from the quadrupole oscillator strength.

    Inverts f = m_e w0^3 |<T2>|^2 / (20 hbar c^2 (2J+1)).  The sign of the
    reduced element is fixed positive; only |Omega|^2 enters observables.
    f_osc = 0 is allowed and gives 0 (no transition strength).
    """
    if f_osc < 0:
        raise ValueError("oscillator strength must be >= 0")
    if omega0 <= 0:
        raise ValueError("transition frequency must be positive")
    gJ = _twice(J) + 1  # 2J + 1
    return math.sqrt(20.0 * hbar * c**2 * gJ * f_osc / (m_e * omega0**3))


def reduced_element_J(spec: TransitionSpec) -> float:
    """J-basis reduced quadrupole element |<n'J'||T2||nJ>| [m^2] for a spec."""
    return oscillator_strength_to_reduced_element(spec.f_osc, spec.omega0, spec.J)


def reduced_element_F(red_j: float, J, Jp, I, F, Fp) -> float:
    """Hyperfine-basis reduced element <n'F'||T2||nF> [m^2].

    Standard rank-2 reduction of an electronic operator in the coupled
    |(J I) F> basis:

        <n'F'||T2||nF> = red_j * (-1)^(F'+J+2+I)
                         * sqrt((2F'+1)(2F+1)) * 6j{J' F' I / F J 2}

    Triangle violations (including F outside |J-I|..J+I) return 0.
    """
    Jh, Jph, Ih, Fh, Fph = (HalfInt.of(x) for x in (J, Jp, I, F, Fp))
    sixj = wigner_6j(Jph, Fph, Ih, Fh, Jh, 2)
    if sixj == 0.0:
        return 0.0
    phase = _phase(Fph.twice + Jh.twice + 4 + Ih.twice)
    weight = math.sqrt((Fph.twice + 1.0) * (Fh.twice + 1.0))
    return red_j * phase * weight * sixj
