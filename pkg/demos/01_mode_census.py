"""Guided-mode census of a vacuum-clad nanofiber.

A 280 nm silica fiber (n1 = 1.4615) in vacuum at 516.5 nm sits just above
the few-mode threshold: besides the fundamental HE11 it guides the first
excited triplet TE01, TM01, HE21.  This script solves the exact
characteristic equations at the operating point, prints the dispersion
table, and (when matplotlib is importable) traces the effective index of
every guided mode against the fiber radius to show where each family cuts
on.

Run:  python3 demos/01_mode_census.py
"""

from pathlib import Path

import numpy as np

from quadtorque import FiberSpec, solve_modes, vnumber

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # plotting is optional; the tables stand alone
    plt = None

WAVELENGTH = 516.5e-9
N1 = 1.4615


# ---------------------------------------------------------------------
# census at the operating point
# ---------------------------------------------------------------------

fiber = FiberSpec(a=280e-9, n1=N1, n2=1.0)
v = vnumber(fiber, WAVELENGTH)
sols = solve_modes(fiber, WAVELENGTH)

print(f"fiber: a = {fiber.a * 1e9:.0f} nm, n1 = {fiber.n1}, n2 = {fiber.n2}")
print(f"wavelength = {WAVELENGTH * 1e9:.1f} nm  ->  V = {v:.4f}")
print(f"{len(sols)} guided modes:\n")
print(f"{'mode':<6} {'n_eff':>10} {'beta [rad/um]':>15}")
for s in sorted(sols, key=lambda s: -s.n_eff):
    print(f"{s.mode.label:<6} {s.n_eff:>10.6f} {s.beta * 1e-6:>15.6f}")

# ---------------------------------------------------------------------
# dispersion against fiber radius
# ---------------------------------------------------------------------

if plt is None:
    print("\nmatplotlib not installed; skipping the dispersion plot")
else:
    radii = np.linspace(120e-9, 460e-9, 35)
    curves: dict[str, list[tuple[float, float]]] = {}
    for a in radii:
        for s in solve_modes(FiberSpec(a=float(a), n1=N1, n2=1.0), WAVELENGTH):
            curves.setdefault(s.mode.label, []).append((a * 1e9, s.n_eff))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, pts in sorted(curves.items()):
        arr = np.array(pts)
        ax.plot(arr[:, 0], arr[:, 1], marker=".", ms=3, label=label)
    ax.axvline(280, color="0.6", ls=":", lw=1)
    ax.set_xlabel("fiber radius [nm]")
    ax.set_ylabel("effective index $n_{eff}$")
    ax.set_title("mode cuton at 516.5 nm (dotted line: a = 280 nm)")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(__file__).with_name("01_mode_census.png")
    fig.savefig(out, dpi=160)
    print(f"\ndispersion plot -> {out}")
