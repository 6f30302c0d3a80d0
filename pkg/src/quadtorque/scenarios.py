"""Sweep configuration, radial sweeps, and deterministic CSV output.

A sweep evaluates, for every configured drive, upper sublevel M', and
radius on a grid, the weak-field steady-state observables |Omega|, T_z,
and F_phi.  Configurations are nested YAML with explicit units on every
dimensional scalar ("280 nm", "1 nW", "1.119e7 s^-1", "0 MHz"); all unit
conversion to SI happens in :func:`load_config` and nowhere else.  Unit
factors are applied in decimal arithmetic so that the same physical value
written in different units parses to the identical float.
"""

from __future__ import annotations

import importlib.resources
import math
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation

import numpy as np
import yaml

from .angular import HalfInt, TransitionSpec
from .dynamics import torque_weak_field
from .fibermodes import DriveConfig, FiberSpec, ModeId, solve_modes, vnumber

__all__ = [
    "ConfigError",
    "DriveRequest",
    "SweepConfig",
    "SweepRow",
    "load_config",
    "dump_config",
    "load_preset",
    "preset_text",
    "run_sweep",
    "emit_csv",
]


class ConfigError(ValueError):
    """A configuration problem, carrying the offending key and line."""

    def __init__(self, key: str, line: int, message: str):
        self.key = key
        self.line = line
        super().__init__(f"{key} (line {line}): {message}")


@dataclass(frozen=True)
class DriveRequest:
    """One drive to sweep: mode identity, direction, circulation, power, detuning."""

    mode: ModeId
    f: int = 1
    p: int = 1
    power: float = 1e-9
    detuning: float = 0.0


@dataclass(frozen=True)
class SweepConfig:
    """A full sweep scenario.

    ``transition`` is the template transition; the sweep substitutes each
    entry of ``sublevels`` for its M'.  ``r_range`` is (r_min, r_max,
    n_points) in SI with r_min strictly outside the fiber.
    """

    fiber: FiberSpec
    transition: TransitionSpec
    drives: tuple[DriveRequest, ...]
    sublevels: tuple[HalfInt, ...]
    r_range: tuple[float, float, int]
    output: str | None = None

    def __post_init__(self):
        r_min, r_max, n = self.r_range
        if r_min <= self.fiber.a:
            raise ValueError(
                f"r_min = {r_min!r} must exceed the fiber radius {self.fiber.a!r}"
            )
        if r_max <= r_min:
            raise ValueError("r_max must exceed r_min")
        if n < 2:
            raise ValueError("n_points must be >= 2")
        if not self.drives:
            raise ValueError("at least one drive is required")
        if not self.sublevels:
            raise ValueError("at least one sublevel is required")
        for mp in self.sublevels:
            # template substitution revalidates all selection rules
            replace(self.transition, Mp=mp)


@dataclass(frozen=True)
class SweepRow:
    """One sweep sample: drive identity, sublevel, radius, observables (SI)."""

    mode: str
    f: int
    p: int
    M: HalfInt
    Mp: HalfInt
    r: float
    abs_omega: float
    t_z: float
    f_phi: float


# ====================================================================== #
#  Config text <-> SweepConfig                                           #
# ====================================================================== #

# decimal unit factors; applied before conversion to float so that
# "280 nm" and "2.8e-7 m" produce bit-identical values
_LENGTH_UNITS = {"nm": Decimal("1e-9"), "um": Decimal("1e-6"), "m": Decimal(1)}
_POWER_UNITS = {
    "nW": Decimal("1e-9"),
    "uW": Decimal("1e-6"),
    "mW": Decimal("1e-3"),
    "W": Decimal(1),
}
_RATE_UNITS = {"s^-1": Decimal(1), "1/s": Decimal(1)}
# detunings: spectroscopic MHz is a frequency (factor 2 pi to rad/s)
_DETUNING_SCALE = {"MHz": 2.0e6 * math.pi, "rad/s": 1.0}


def _node_line(node) -> int:
    return node.start_mark.line + 1


def _mapping_items(node, key: str):
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(key, _node_line(node), "expected a mapping")
    out = []
    for k_node, v_node in node.value:
        out.append((str(k_node.value), k_node, v_node))
    return out


def _as_map(node, key: str, allowed: set[str]) -> dict:
    found = {}
    for name, k_node, v_node in _mapping_items(node, key):
        if name not in allowed:
            raise ConfigError(f"{key}.{name}", _node_line(k_node), "unknown key")
        if name in found:
            raise ConfigError(f"{key}.{name}", _node_line(k_node), "duplicate key")
        found[name] = v_node
    return found


def _require(found: dict, key: str, name: str, section_node):
    if name not in found:
        raise ConfigError(
            f"{key}.{name}", _node_line(section_node), "missing required key"
        )
    return found[name]


def _raw(node, key: str) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise ConfigError(key, _node_line(node), "expected a scalar")
    return str(node.value).strip()

def _quantity(node, key: str, units: dict[str, Decimal]) -> float:
    text = _raw(node, key)
    parts = text.split()
    if len(parts) != 2:
        raise ConfigError(
            key, _node_line(node),
            f"expected '<number> <unit>' with unit in {sorted(units)}, got {text!r}",
        )
    num, unit = parts
    if unit not in units:
        raise ConfigError(
            key, _node_line(node), f"unknown unit {unit!r}; expected one of {sorted(units)}"
        )
    try:
        value = Decimal(num)
    except InvalidOperation:
        raise ConfigError(key, _node_line(node), f"not a number: {num!r}") from None
    return float(value * units[unit])


def _detuning(node, key: str) -> float:
    text = _raw(node, key)
    parts = text.split()
    if len(parts) != 2 or parts[1] not in _DETUNING_SCALE:
        raise ConfigError(
            key, _node_line(node),
            f"expected '<number> <unit>' with unit in {sorted(_DETUNING_SCALE)}, got {text!r}",
        )
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(key, _node_line(node), f"not a number: {parts[0]!r}") from None
    return value * _DETUNING_SCALE[parts[1]]


def _number(node, key: str) -> float:
    text = _raw(node, key)
    try:
        return float(text)
    except ValueError:
        raise ConfigError(key, _node_line(node), f"not a number: {text!r}") from None


def _integer(node, key: str) -> int:
    text = _raw(node, key)
    try:
        return int(text)
    except ValueError:
        raise ConfigError(key, _node_line(node), f"not an integer: {text!r}") from None


def _halfint(node, key: str) -> HalfInt:
    text = _raw(node, key)
    try:
        return HalfInt.of(text)
    except (ValueError, TypeError):
        raise ConfigError(
            key, _node_line(node), f"not a half-integer: {text!r}"
        ) from None


def _sign(node, key: str) -> int:
    v = _integer(node, key)
    if v not in (-1, 1):
        raise ConfigError(key, _node_line(node), "must be +1 or -1")
    return v


def load_config(text: str) -> SweepConfig:
    """Parse and validate a sweep configuration from YAML text.

    Every dimensional scalar carries its unit; all conversion to SI
    happens here.  Raises :class:`ConfigError` (with key and line) on
    unknown keys, missing units, or physics violations (selection rules,
    atom inside the fiber, ...).
    """
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<document>", getattr(
            getattr(exc, "problem_mark", None), "line", 0) + 1, str(exc)) from None
    if root is None:
        raise ConfigError("<document>", 1, "empty configuration")

    top = _as_map(root, "<root>", {
        "fiber", "transition", "drives", "sublevels", "grid", "output",
    })

    # ---- fiber ----------------------------------------------------------
    fiber_node = _require(top, "<root>", "fiber", root)
    fmap = _as_map(fiber_node, "fiber", {"radius", "core_index", "clad_index"})
    radius = _quantity(_require(fmap, "fiber", "radius", fiber_node),
                       "fiber.radius", _LENGTH_UNITS)
    n1 = _number(_require(fmap, "fiber", "core_index", fiber_node), "fiber.core_index")
    n2 = _number(_require(fmap, "fiber", "clad_index", fiber_node), "fiber.clad_index")
    try:
        fiber = FiberSpec(a=radius, n1=n1, n2=n2)
    except ValueError as exc:
        raise ConfigError("fiber", _node_line(fiber_node), str(exc)) from None

    # ---- transition -----------------------------------------------------
    tr_node = _require(top, "<root>", "transition", root)
    tmap = _as_map(tr_node, "transition", {
        "lower", "upper", "nuclear_spin", "wavelength",
        "oscillator_strength", "decay_rate",
    })
    lo_node = _require(tmap, "transition", "lower", tr_node)
    lmap = _as_map(lo_node, "transition.lower", {"label", "F", "M", "J", "L"})
    up_node = _require(tmap, "transition", "upper", tr_node)
    umap = _as_map(up_node, "transition.upper", {"label", "F", "J", "L"})

    # ---- sublevels ------------------------------------------------------
    sub_node = _require(top, "<root>", "sublevels", root)
    if not isinstance(sub_node, yaml.SequenceNode) or not sub_node.value:
        raise ConfigError("sublevels", _node_line(sub_node),
                          "expected a non-empty list of M' values")
    sublevels = tuple(sorted(
        _halfint(item, "sublevels") for item in sub_node.value
    ))

    try:
        transition = TransitionSpec(
            lower=_raw(_require(lmap, "transition.lower", "label", lo_node),
                       "transition.lower.label"),
            upper=_raw(_require(umap, "transition.upper", "label", up_node),
                       "transition.upper.label"),
            F=_halfint(_require(lmap, "transition.lower", "F", lo_node),
                       "transition.lower.F"),
            M=_halfint(_require(lmap, "transition.lower", "M", lo_node),
                       "transition.lower.M"),
            Fp=_halfint(_require(umap, "transition.upper", "F", up_node),
                        "transition.upper.F"),
            Mp=sublevels[0],
            J=_halfint(_require(lmap, "transition.lower", "J", lo_node),
                       "transition.lower.J"),
            Jp=_halfint(_require(umap, "transition.upper", "J", up_node),
                        "transition.upper.J"),
            I=_halfint(_require(tmap, "transition", "nuclear_spin", tr_node),
                       "transition.nuclear_spin"),
            L=_halfint(_require(lmap, "transition.lower", "L", lo_node),
                       "transition.lower.L"),
            Lp=_halfint(_require(umap, "transition.upper", "L", up_node),
                        "transition.upper.L"),
            lambda0=_quantity(_require(tmap, "transition", "wavelength", tr_node),
                              "transition.wavelength", _LENGTH_UNITS),
            f_osc=_number(_require(tmap, "transition", "oscillator_strength", tr_node),
                          "transition.oscillator_strength"),
            gamma=_quantity(_require(tmap, "transition", "decay_rate", tr_node),
                            "transition.decay_rate", _RATE_UNITS),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("transition", _node_line(tr_node), str(exc)) from None

    # ---- drives ---------------------------------------------------------
    dr_node = _require(top, "<root>", "drives", root)
    if not isinstance(dr_node, yaml.SequenceNode) or not dr_node.value:
        raise ConfigError("drives", _node_line(dr_node),
                          "expected a non-empty list of drives")
    drives = []
    for i, item in enumerate(dr_node.value):
        key = f"drives[{i}]"
        dmap = _as_map(item, key, {"mode", "f", "p", "power", "detuning"})
        mode_text = _raw(_require(dmap, key, "mode", item), f"{key}.mode")
        try:
            mode_id = ModeId.parse(mode_text)
        except ValueError as exc:
            raise ConfigError(f"{key}.mode", _node_line(item), str(exc)) from None
        drives.append(DriveRequest(
            mode=mode_id,
            f=_sign(_require(dmap, key, "f", item), f"{key}.f"),
            p=_sign(_require(dmap, key, "p", item), f"{key}.p"),
            power=_quantity(_require(dmap, key, "power", item),
                            f"{key}.power", _POWER_UNITS),
            detuning=_detuning(_require(dmap, key, "detuning", item),
                               f"{key}.detuning"),
        ))

    # ---- grid -----------------------------------------------------------
    grid_node = _require(top, "<root>", "grid", root)
    gmap = _as_map(grid_node, "grid", {"r_min", "r_max", "n_points"})
    r_min = _quantity(_require(gmap, "grid", "r_min", grid_node),
                      "grid.r_min", _LENGTH_UNITS)
    r_max = _quantity(_require(gmap, "grid", "r_max", grid_node),
                      "grid.r_max", _LENGTH_UNITS)
    n_points = _integer(_require(gmap, "grid", "n_points", grid_node),
                        "grid.n_points")

    output = None
    if "output" in top:
        output = _raw(top["output"], "output")

    try:
        return SweepConfig(
            fiber=fiber,
            transition=transition,
            drives=tuple(drives),
            sublevels=sublevels,
            r_range=(r_min, r_max, n_points),
            output=output,
        )
    except ValueError as exc:
        raise ConfigError("grid", _node_line(grid_node), str(exc)) from None


def dump_config(cfg: SweepConfig) -> str:
    """Serialize a SweepConfig to canonical YAML (SI units, exact floats).

    ``load_config(dump_config(cfg))`` reproduces ``cfg`` exactly: floats
    are written in shortest round-trip form and re-scaled decimally.
    """
    t = cfg.transition
    lines = [
        "fiber:",
        f"  radius: {cfg.fiber.a!r} m",
        f"  core_index: {cfg.fiber.n1!r}",
        f"  clad_index: {cfg.fiber.n2!r}",
        "transition:",
        f"  lower: {{label: {t.lower}, F: {t.F}, M: {t.M}, J: {t.J}, L: {t.L}}}",
        f"  upper: {{label: {t.upper}, F: {t.Fp}, J: {t.Jp}, L: {t.Lp}}}",
        f"  nuclear_spin: {t.I}",
        f"  wavelength: {t.lambda0!r} m",
        f"  oscillator_strength: {t.f_osc!r}",
        f"  decay_rate: {t.gamma!r} s^-1",
        "drives:",
    ]
    for d in cfg.drives:
        lines.append(
            f"  - {{mode: {d.mode.label}, f: {d.f}, p: {d.p}, "
            f"power: {d.power!r} W, detuning: {d.detuning!r} rad/s}}"
        )
    lines.append("sublevels: [" + ", ".join(str(m) for m in cfg.sublevels) + "]")
    r_min, r_max, n = cfg.r_range
    lines += [
        "grid:",
        f"  r_min: {r_min!r} m",
        f"  r_max: {r_max!r} m",
        f"  n_points: {n}",
    ]
    if cfg.output is not None:
        lines.append(f"output: {cfg.output}")
    return "\n".join(lines) + "\n"


def preset_text(name: str) -> str:
    """Raw YAML text of a bundled preset (e.g. ``paper_fig2_fig4``)."""
    res = importlib.resources.files("quadtorque") / "presets" / f"{name}.yaml"
    try:
        return res.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"no bundled preset named {name!r}") from None


def load_preset(name: str) -> SweepConfig:
    """Load a bundled preset configuration by name."""
    return load_config(preset_text(name))


# ====================================================================== #
#  Sweep execution and CSV output                                        #
# ====================================================================== #

def _rescale(value: float, unit: str) -> float:
    """value / unit with decimal (not binary) division, to the nearest float.

    Used for output unit scaling so that, e.g., 6e-31 N m lands exactly on
    the shortest decimal 0.6 zN nm instead of an ulp below it.
    """
    return float(Decimal(value) / Decimal(unit))


def _cell(value: float, unit: str) -> str:
    """Shortest decimal (in units of ``unit``) that reconstructs ``value``.

    A cell ``s`` is only as good as its round trip: we require
    ``float(Decimal(s) * Decimal(unit)) == value`` bit for bit, and print
    the shortest such decimal.  This keeps a 5 nm grid reading 480.0
    rather than 479.99999999999994 even when the nm and SI doubles sit in
    unfavorable binades.  Falls back to the plain decimal rescale when no
    short form reproduces the value exactly.
    """
    scaled = _rescale(value, unit)
    u = Decimal(unit)
    for prec in range(1, 18):
        s = f"{scaled:.{prec}g}"
        if float(Decimal(s) * u) == value:
            return repr(float(s))
    return repr(scaled)


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Evaluate the weak-field observables over (drive, M', r).

    The fiber is solved once at the transition wavelength; each drive's
    mode is then looked up in the census.  Rows are ordered by drive (as
    configured), then M' ascending, then r ascending, and zero values are
    emitted rather than skipped.
    """
    lam = cfg.transition.lambda0
    census = {s.mode.label: s for s in solve_modes(cfg.fiber, lam)}
    # grid the radius in nm so that round-number configurations sample
    # round-number radii (the SI endpoints are decimal-rescaled exactly)
    r_min, r_max, n = cfg.r_range
    radii = [
        float(Decimal(float(r_nm)) * Decimal("1e-9"))
        for r_nm in np.linspace(_rescale(r_min, "1e-9"), _rescale(r_max, "1e-9"), n)
    ]

    rows: list[SweepRow] = []
    for req in cfg.drives:
        sol = census.get(req.mode.label)
        if sol is None:
            raise ValueError(
                f"mode {req.mode.label} is not guided at wavelength "
                f"{lam!r} m (V = {vnumber(cfg.fiber, lam):.4f}; "
                f"guided: {sorted(census)})"
            )
        drive = DriveConfig(
            mode=sol, power=req.power, f=req.f, p=req.p, detuning=req.detuning
        )
        for mp in cfg.sublevels:
            spec = replace(cfg.transition, Mp=mp)
            for r in radii:
                res = torque_weak_field(spec, drive, (float(r), 0.0, 0.0))
                rows.append(SweepRow(
                    mode=req.mode.label,
                    f=req.f,
                    p=drive.p,
                    M=spec.M,
                    Mp=mp,
                    r=float(r),
                    abs_omega=abs(res.omega),
                    t_z=res.t_z,
                    f_phi=res.f_phi,
                ))
    return rows


CSV_HEADER = "mode,f,p,M,Mprime,r_nm,abs_omega_rad_s,Tz_zN_nm,Fphi_zN"


def emit_csv(table: list[SweepRow], path) -> None:
    """Write sweep rows as CSV (UTF-8, newline-terminated lines).

    Numeric cells use the shortest decimal that round-trips the double;
    lengths in nm, torque in zN nm, force in zN.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in table:
            fh.write(
                f"{row.mode},{row.f},{row.p},{row.M},{row.Mp},"
                f"{_cell(row.r, '1e-9')},{row.abs_omega!r},"
                f"{_cell(row.t_z, '1e-30')},{_cell(row.f_phi, '1e-21')}\n"
            )
