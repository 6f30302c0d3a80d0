"""Command-line interface: mode census, single-point coupling, and sweeps.

Subcommands
-----------
modes   : solve the guided-mode census at the transition wavelength
rabi    : Rabi frequency at one radius for each configured drive/sublevel
torque  : weak-field torque and azimuthal force at one radius
sweep   : full (drive, M', r) sweep written as CSV

Every subcommand starts from a configuration (--config FILE or a bundled
--preset; the default is the paper_fig2_fig4 preset) and applies any
overriding flags on top: --mode restricts to one drive, --f/--p/
--power-nw/--detuning-mhz reconfigure the drive, --m/--mprime choose
sublevels, --r-nm places the atom.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from decimal import Decimal

from .angular import HalfInt
from .fibermodes import DriveConfig, ModeId, solve_modes, vnumber
from .dynamics import torque_weak_field
from .quadcoupling import rabi_frequency
from .scenarios import (
    ConfigError,
    SweepConfig,
    _cell,
    dump_config,
    emit_csv,
    load_config,
    load_preset,
    run_sweep,
)

_DEFAULT_PRESET = "paper_fig2_fig4"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadtorque",
        description=(
            "Guided-mode quadrupole coupling: Rabi frequencies, azimuthal "
            "forces, and axial torques of a two-level atom near a nanofiber."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, r_flag: bool):
        p.add_argument("--config", help="path to a sweep configuration file")
        p.add_argument(
            "--preset",
            help=f"bundled preset name (default {_DEFAULT_PRESET} when no --config)",
        )
        p.add_argument("--mode", help="restrict to one mode label, e.g. HE21")
        p.add_argument("--f", type=int, choices=(-1, 1),
                       help="propagation direction override")
        p.add_argument("--p", type=int, choices=(-1, 1),
                       help="circulation index override")
        p.add_argument("--power-nw", type=float, help="drive power override [nW]")
        p.add_argument("--detuning-mhz", type=float,
                       help="detuning override [MHz, spectroscopic]")
        p.add_argument("--m", help="lower-state sublevel M override")
        p.add_argument("--mprime", help="upper sublevel(s): single value or lo..hi")
        if r_flag:
            p.add_argument("--r-nm", type=float, required=True,
                           help="atom radial position [nm]")

    p_modes = sub.add_parser("modes", help="guided-mode census and dispersion table")
    add_common(p_modes, r_flag=False)

    p_rabi = sub.add_parser("rabi", help="Rabi frequency at one radius")
    add_common(p_rabi, r_flag=True)

    p_torque = sub.add_parser("torque", help="weak-field torque at one radius")
    add_common(p_torque, r_flag=True)

    p_sweep = sub.add_parser("sweep", help="full radial sweep to CSV")
    add_common(p_sweep, r_flag=False)
    p_sweep.add_argument("--out", help="output CSV path (overrides config)")

    p_cfg = sub.add_parser("config", help="print the effective configuration")
    add_common(p_cfg, r_flag=False)

    return parser


def _load_base(args) -> SweepConfig:
    if args.config and args.preset:
        raise ConfigError("<args>", 0, "pass either --config or --preset, not both")
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return load_config(fh.read())
    return load_preset(args.preset or _DEFAULT_PRESET)


def _parse_mprime(text: str) -> tuple[HalfInt, ...]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty sublevel range {text!r}")
        return tuple(HalfInt.of(v) for v in range(lo, hi + 1))
    return (HalfInt.of(text),)


def _apply_overrides(cfg: SweepConfig, args) -> SweepConfig:
    drives = list(cfg.drives)
    if args.mode is not None:
        wanted = ModeId.parse(args.mode)
        matching = [d for d in drives if d.mode == wanted]
        drives = matching or [replace(drives[0], mode=wanted)]
    if args.f is not None:
        drives = [replace(d, f=args.f) for d in drives]
    if args.p is not None:
        drives = [replace(d, p=args.p) for d in drives]
    if args.power_nw is not None:
        watts = float(Decimal(str(args.power_nw)) * Decimal("1e-9"))
        drives = [replace(d, power=watts) for d in drives]
    if args.detuning_mhz is not None:
        drives = [replace(d, detuning=args.detuning_mhz * 2.0e6 * math.pi)
                  for d in drives]
    sublevels = tuple(sorted(
        _parse_mprime(args.mprime) if args.mprime is not None else cfg.sublevels
    ))
    # swap M and the template M' in one step so selection rules are only
    # ever checked against the final combination
    changes = {"Mp": sublevels[0]}
    if args.m is not None:
        changes["M"] = HalfInt.of(args.m)
    transition = replace(cfg.transition, **changes)
    return replace(
        cfg, drives=tuple(drives), transition=transition, sublevels=sublevels,
    )


def _census(cfg: SweepConfig):
    lam = cfg.transition.lambda0
    sols = solve_modes(cfg.fiber, lam)
    return lam, {s.mode.label: s for s in sols}, sols


def _resolve_drive(cfg, census, req) -> DriveConfig:
    sol = census.get(req.mode.label)
    if sol is None:
        raise ConfigError(
            "drives", 0,
            f"mode {req.mode.label} is not guided at the transition "
            f"wavelength (V = {vnumber(cfg.fiber, cfg.transition.lambda0):.4f})",
        )
    return DriveConfig(mode=sol, power=req.power, f=req.f, p=req.p,
                       detuning=req.detuning)


def _cmd_modes(cfg: SweepConfig) -> int:
    lam, _, sols = _census(cfg)
    print(f"wavelength_nm={float(Decimal(lam) / Decimal('1e-9'))!r} "
          f"V={vnumber(cfg.fiber, lam):.6f} n_modes={len(sols)}")
    # dispersion-table order: fastest (largest effective index) first
    for s in sorted(sols, key=lambda s: -s.n_eff):
        print(f"mode={s.mode.label} n_eff={s.n_eff:.12f} beta_rad_m={s.beta!r}")
    return 0


def _iter_points(cfg: SweepConfig, args):
    """(drive, spec, position) triples for the single-point subcommands."""
    _, census, _ = _census(cfg)
    r = float(Decimal(str(args.r_nm)) * Decimal("1e-9"))
    for req in cfg.drives:
        drive = _resolve_drive(cfg, census, req)
        for mp in cfg.sublevels:
            spec = replace(cfg.transition, Mp=mp)
            yield req, drive, spec, (r, 0.0, 0.0)


def _cmd_rabi(cfg: SweepConfig, args) -> int:
    for req, drive, spec, pos in _iter_points(cfg, args):
        om = rabi_frequency(spec, drive, pos).omega
        print(f"mode={req.mode.label} f={req.f} p={drive.p} M={spec.M} "
              f"Mprime={spec.Mp} r_nm={args.r_nm!r} "
              f"abs_omega_rad_s={abs(om)!r}")
    return 0


def _cmd_torque(cfg: SweepConfig, args) -> int:
    for req, drive, spec, pos in _iter_points(cfg, args):
        res = torque_weak_field(spec, drive, pos)
        print(f"mode={req.mode.label} f={req.f} p={drive.p} M={spec.M} "
              f"Mprime={spec.Mp} r_nm={args.r_nm!r} factor={res.factor} "
              f"abs_omega_rad_s={abs(res.omega)!r} "
              f"Tz_zN_nm={_cell(res.t_z, '1e-30')} "
              f"Fphi_zN={_cell(res.f_phi, '1e-21')}")
    return 0


def _cmd_sweep(cfg: SweepConfig, args) -> int:
    out = args.out or cfg.output
    if out is None:
        print("no output path: pass --out or set 'output' in the config",
              file=sys.stderr)
        return 2
    rows = run_sweep(cfg)
    emit_csv(rows, out)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(_load_base(args), args)
        if args.command == "modes":
            return _cmd_modes(cfg)
        if args.command == "rabi":
            return _cmd_rabi(cfg, args)
        if args.command == "torque":
            return _cmd_torque(cfg, args)
        if args.command == "sweep":
            return _cmd_sweep(cfg, args)
        if args.command == "config":
            sys.stdout.write(dump_config(cfg))
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
