"""Two-level Bloch dynamics behind the steady-state torque.

The torque formula rests on the driven two-level steady state, so this
script integrates the optical Bloch equations from the ground state for
the physical nanofiber drive (TM01, 1 nW, r = 300 nm: deep in the
weak-field regime) and for a saturating drive Omega = Gamma, checks both
against the closed-form fixed point, and verifies the bookkeeping
identity T_z = hbar (p l - M' + M)(Gamma rho_ee + d rho_ee/dt) along the
whole transient -- torque is absorbed angular-momentum flux, so it must
track excitation at every instant, not only in steady state.

Run:  python3 demos/04_bloch_dynamics.py
"""

from pathlib import Path

import numpy as np

from quadtorque import (
    DriveConfig,
    FiberSpec,
    TransitionSpec,
    evolve,
    normalize_power,
    rabi_frequency,
    solve_modes,
    steady_state,
    torque_axial,
    torque_weak_field,
)
from quadtorque.constants import hbar
from quadtorque.dynamics import GROUND

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

WAVELENGTH = 516.5e-9
GAMMA = 1.119e7
R_ATOM = 300e-9

transition = TransitionSpec(
    lower="5S1/2", upper="4D5/2",
    F=2, M=2, Fp=4, Mp=4,
    J="1/2", Jp="5/2", I="3/2", L=0, Lp=2,
    lambda0=WAVELENGTH, f_osc=8.06e-7, gamma=GAMMA,
)

fiber = FiberSpec(a=280e-9, n1=1.4615, n2=1.0)
tm01 = next(
    s for s in solve_modes(fiber, WAVELENGTH) if s.mode.label == "TM01"
)
drive = DriveConfig(normalize_power(tm01, 1e-9), power=1e-9, f=1, p=1)

om_phys = rabi_frequency(transition, drive, (R_ATOM, 0.0, 0.0)).omega
print(
    f"physical drive at r = {R_ATOM * 1e9:.0f} nm: "
    f"|Omega| = {abs(om_phys):.4g} rad/s = {abs(om_phys) / GAMMA:.2e} Gamma"
)

# ---------------------------------------------------------------------
# transients: physical (weak) drive and a saturating one
# ---------------------------------------------------------------------

cases = {
    "physical, 1 nW": om_phys,
    "saturating, Omega = Gamma": GAMMA * np.exp(1j * np.angle(om_phys)),
}
trajectories = {}
print(f"\n{'case':<28} {'rho_ee(t=30/Gamma)':>20} {'fixed point':>14} {'|diff|':>9}")
for name, om in cases.items():
    dt = 0.005 / max(abs(om), GAMMA)
    traj = evolve(GROUND, om, 0.0, GAMMA, 30.0 / GAMMA, dt)
    trajectories[name] = traj
    final = traj[-1][1].rho_ee
    ss = steady_state(om, 0.0, GAMMA).rho_ee
    print(f"{name:<28} {final:>20.6e} {ss:>14.6e} {abs(final - ss):>9.1e}")

# ---------------------------------------------------------------------
# torque as angular-momentum bookkeeping along the transient
# ---------------------------------------------------------------------

factor = drive.p * drive.l - (4 - 2)  # p l - M' + M = -2 for this line
om = cases["saturating, Omega = Gamma"]
strong = trajectories["saturating, Omega = Gamma"]
worst = 0.0
for _, state, d_ee in strong:
    t_z = torque_axial(state, om, drive.p, drive.l, 2, 4)
    flux = hbar * factor * (GAMMA * state.rho_ee + d_ee)
    worst = max(worst, abs(t_z - flux))
print(
    f"\nconservation check (saturating case): worst |T_z - hbar ({factor}) "
    f"(Gamma rho_ee + rho_ee')| = {worst:.2e} N m over {len(strong)} steps"
)

# the weak-field shortcut against the exact steady state, physical drive
res = torque_weak_field(transition, drive, (R_ATOM, 0.0, 0.0))
exact = torque_axial(
    steady_state(om_phys, 0.0, GAMMA), om_phys, drive.p, drive.l, 2, 4
)
print(
    f"weak-field torque  : {res.t_z:+.6e} N m\n"
    f"exact steady state : {exact:+.6e} N m "
    f"(relative gap {abs(res.t_z - exact) / abs(exact):.1e}, "
    f"of order (Omega/Gamma)^2 = {(abs(om_phys) / GAMMA) ** 2:.1e})"
)

if plt is None:
    print("\nmatplotlib not installed; skipping the transient plot")
else:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, traj in trajectories.items():
        t = np.array([s[0] for s in traj]) * GAMMA
        ee = np.array([s[1].rho_ee for s in traj])
        scale = steady_state(cases[name], 0.0, GAMMA).rho_ee
        ax.plot(t, ee / scale, label=f"{name} (fixed point {scale:.2e})")
    ax.set_xlabel(r"time  [$1/\Gamma$]")
    ax.set_ylabel(r"$\rho_{ee}(t)$ / fixed point")
    ax.set_title("approach to the driven steady state")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    out = Path(__file__).with_name("04_bloch_dynamics.png")
    fig.savefig(out, dpi=160)
    print(f"\ntransient plot -> {out}")
