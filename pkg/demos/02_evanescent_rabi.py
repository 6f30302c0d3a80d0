"""Quadrupole Rabi frequency in the evanescent field.

An atom outside the fiber couples to the *gradient* of the guided field:
the five spherical components V_q(r) of the gradient tensor set which
Zeeman transitions M -> M' = M + q each mode can drive.  This script
prints the |V_q| fingerprint of every mode at r = 1.2 a, then follows
|Omega| of the 87Rb 5S1/2 F=2,M=2 -> 4D5/2 F'=4,M'=4 line (q = +2, driven
by all four modes at 1 nW) into the evanescent tail.

Run:  python3 demos/02_evanescent_rabi.py
"""

from pathlib import Path

import numpy as np

from quadtorque import (
    DriveConfig,
    FiberSpec,
    TransitionSpec,
    gradient_factors,
    normalize_power,
    rabi_frequency,
    solve_modes,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

WAVELENGTH = 516.5e-9
POWER = 1e-9
A = 280e-9

transition = TransitionSpec(
    lower="5S1/2", upper="4D5/2",
    F=2, M=2, Fp=4, Mp=4,
    J="1/2", Jp="5/2", I="3/2", L=0, Lp=2,
    lambda0=WAVELENGTH, f_osc=8.06e-7, gamma=1.119e7,
)

fiber = FiberSpec(a=A, n1=1.4615, n2=1.0)
modes = {
    s.mode.label: normalize_power(s, POWER)
    for s in solve_modes(fiber, WAVELENGTH)
}
order = ["HE11", "TE01", "TM01", "HE21"]

# ---------------------------------------------------------------------
# which q each mode drives: the gradient fingerprint at r = 1.2 a
# ---------------------------------------------------------------------

print("normalized |V_q| at r = 1.2 a (q = M' - M selects the transition)\n")
print(f"{'mode':<6}" + "".join(f"  q={q:+d}" for q in range(-2, 3)))
for label in order:
    d = DriveConfig(modes[label], power=POWER, f=1, p=1)
    gf = gradient_factors(d, 1.2 * A)
    top = max(abs(gf[q]) for q in range(-2, 3))
    cells = "".join(f" {abs(gf[q]) / top:5.2f}" for q in range(-2, 3))
    print(f"{label:<6}{cells}")
print("\n(TE01 shows the exact q = 0 null: its gradient has no isotropic"
      "\n radial part, so pi-type M' = M transitions stay dark)")

# ---------------------------------------------------------------------
# evanescent decay of the q = +2 Rabi frequency
# ---------------------------------------------------------------------

radii = np.linspace(1.02 * A, 3.0 * A, 120)
omegas = {
    label: np.array(
        [
            abs(
                rabi_frequency(
                    transition,
                    DriveConfig(modes[label], power=POWER, f=1, p=1),
                    (float(r), 0.0, 0.0),
                ).omega
            )
            for r in radii
        ]
    )
    for label in order
}

print(f"\n|Omega| / 2pi [kHz] on M=2 -> M'=4 at 1 nW:\n")
print(f"{'r/a':<6}" + "".join(f" {label:>9}" for label in order))
for rfac in (1.05, 1.25, 1.5, 2.0, 3.0):
    i = int(np.argmin(np.abs(radii - rfac * A)))
    row = "".join(f" {omegas[label][i] / (2e3 * np.pi):>9.3f}" for label in order)
    print(f"{radii[i] / A:<6.2f}{row}")

# 1/e length of |Omega| in the far tail, from the log-slope
print("\nevanescent 1/e length of |Omega| (fit on r in [1.5a, 3a]):")
sel = radii >= 1.5 * A
for label in order:
    slope = np.polyfit(radii[sel], np.log(omegas[label][sel]), 1)[0]
    print(f"  {label:<6} {-1.0 / slope * 1e9:6.1f} nm")

if plt is None:
    print("\nmatplotlib not installed; skipping the decay plot")
else:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label in order:
        ax.semilogy(radii / A, omegas[label] / (2e3 * np.pi), label=label)
    ax.set_xlabel("radial position r / a")
    ax.set_ylabel(r"$|\Omega| / 2\pi$  [kHz]")
    ax.set_title("quadrupole Rabi frequency, M=2 -> M'=4, 1 nW")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(__file__).with_name("02_evanescent_rabi.png")
    fig.savefig(out, dpi=160)
    print(f"\ndecay plot -> {out}")
