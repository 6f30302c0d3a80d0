"""Shared fixtures: the benchmark nanofiber and alkali transition.

The scenario used throughout is a vacuum-clad silica fiber (radius 280 nm,
core index 1.4615) carrying 1 nW at 516.5 nm, driving the quadrupole line
5S1/2 F=2 -> 4D5/2 F'=4 of 87Rb.  Solving the guided modes once per test
session keeps the suite fast; every consumer treats the solutions as
immutable.
"""

from __future__ import annotations

import pytest

from quadtorque import FiberSpec, TransitionSpec, normalize_power, solve_modes

WAVELENGTH = 516.5e-9
POWER = 1e-9
GAMMA = 1.119e7


@pytest.fixture(scope="session")
def fiber():
    return FiberSpec(a=280e-9, n1=1.4615, n2=1.0)


@pytest.fixture(scope="session")
def guided(fiber):
    """Power-normalized guided modes at 516.5 nm, keyed by label."""
    sols = solve_modes(fiber, WAVELENGTH)
    return {s.mode.label: normalize_power(s, POWER) for s in sols}


@pytest.fixture(scope="session")
def rb_transition():
    """Factory for the 87Rb 5S1/2 F=2,M -> 4D5/2 F'=4,M' quadrupole line."""

    def make(Mp, M=2):
        return TransitionSpec(
            lower="5S1/2",
            upper="4D5/2",
            F=2,
            M=M,
            Fp=4,
            Mp=Mp,
            J="1/2",
            Jp="5/2",
            I="3/2",
            L=0,
            Lp=2,
            lambda0=WAVELENGTH,
            f_osc=8.06e-7,
            gamma=GAMMA,
        )

    return make
