"""Command-line driver.

Usage::

    cavity-casimir <command> --config run.cfg [--out prefix] [--threads N]

The configuration is a flat list of ``key = value`` lines with dotted keys;
``#`` starts a comment.  Unknown keys are errors.  Output is CSV with a
header row whose column names carry their units, numbers written with 17
significant digits.

Exit status: 0 on success, 1 for configuration errors, 2 when a numerical
result did not converge or a numerical error occurred (partial output is
still written, with a ``converged`` column).
"""
from __future__ import annotations

import argparse
import difflib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .energy import atom_shift_result, channels_upto, log_mode_function, u0_scan
from .errors import ConfigError
from .media import Constant, Drude, Lorentzian, PerfectConductor, PolarizabilityModel, Vacuum
from .modes import count_modes, dos, dos_binned
from .quadrature import QuadratureSpec
from .scattering import TM, CavitySystem, Channel
from .units import UnitSystem, hydrogenic_alpha0_nm3

COMMANDS = ("scatter", "dos", "count-modes", "energy-scan", "atom-shift", "figure3", "figure4")


def _pos(v):
    return v > 0


def _nonneg(v):
    return v >= 0


# key -> (type, constraint, description of the constraint)
_KEYS = {
    "command": (str, lambda v: v in COMMANDS, f"one of {', '.join(COMMANDS)}"),
    "units.omega_ref_ev": (float, _pos, "> 0"),
    "wall.model": (str, lambda v: v in ("vacuum", "lorentzian", "drude", "pec", "constant"),
                   "vacuum, lorentzian, drude, pec or constant"),
    "wall.omega_p": (float, _nonneg, ">= 0"),
    "wall.omega_0": (float, _nonneg, ">= 0"),
    "wall.gamma": (float, _nonneg, ">= 0"),
    "wall.omega_p_ev": (float, _nonneg, ">= 0"),
    "wall.omega_0_ev": (float, _nonneg, ">= 0"),
    "wall.gamma_ev": (float, _nonneg, ">= 0"),
    "wall.epsilon": (float, _pos, "> 0"),
    "atom.alpha0": (float, _nonneg, ">= 0"),
    "atom.alpha0_a3": (float, _nonneg, ">= 0"),
    "atom.alpha0_model": (str, lambda v: v == "hydrogenic", "hydrogenic"),
    "atom.omega0": (float, _pos, "> 0"),
    "atom.omega0_ev": (float, _pos, "> 0"),
    "cavity.r": (float, _pos, "> 0"),
    "cavity.r_nm": (float, _pos, "> 0"),
    "channel.l": (int, lambda v: v >= 1, ">= 1"),
    "channel.pol": (str, lambda v: v in ("TE", "TM"), "TE or TM"),
    "grid.omega.min": (float, _pos, "> 0"),
    "grid.omega.max": (float, _pos, "> 0"),
    "grid.omega.n": (int, lambda v: v >= 1, ">= 1"),
    "grid.omega.axis": (str, lambda v: v in ("real", "imag"), "real or imag"),
    "grid.omega.bins": (int, lambda v: v >= 1, ">= 1"),
    "grid.u.min": (float, _pos, "> 0"),
    "grid.u.max": (float, _pos, "> 0"),
    "grid.u.n": (int, lambda v: v >= 2, ">= 2"),
    "grid.u.spacing": (str, lambda v: v in ("log", "linear"), "log or linear"),
    "grid.r.min": (float, _pos, "> 0"),
    "grid.r.max": (float, _pos, "> 0"),
    "grid.r.n": (int, lambda v: v >= 1, ">= 1"),
    "grid.r_nm.min": (float, _pos, "> 0"),
    "grid.r_nm.max": (float, _pos, "> 0"),
    "grid.r_nm.n": (int, lambda v: v >= 1, ">= 1"),
    "rect.re_min": (float, None, ""),
    "rect.re_max": (float, None, ""),
    "rect.im_min": (float, None, ""),
    "rect.im_max": (float, None, ""),
    "scan.l_max": (int, lambda v: v >= 2, ">= 2"),
    "scan.d_at": (float, _pos, "> 0"),
    "scan.d_at_nm": (float, _pos, "> 0"),
    "scan.fit_min": (int, lambda v: v >= 1, ">= 1"),
    "scan.fit_max": (int, lambda v: v >= 2, ">= 2"),
    "figure.l_max": (int, lambda v: v >= 1, ">= 1"),
    "quad.rule": (str, lambda v: v in ("tanh-sinh", "gauss-kronrod"), "tanh-sinh or gauss-kronrod"),
    "quad.rel_tol": (float, _pos, "> 0"),
    "quad.abs_tol": (float, _nonneg, ">= 0"),
    "quad.max_depth": (int, lambda v: v >= 1, ">= 1"),
    "quad.scale": (float, _pos, "> 0"),
    "output.prefix": (str, None, ""),
}

_DEFAULTS = {
    "wall.model": "pec",
    "wall.gamma": 0.0,
    "atom.omega0": 1.0,
    "channel.l": 1,
    "channel.pol": "TE",
    "grid.omega.axis": "real",
    "grid.omega.n": 100,
    "grid.u.min": 1e-3,
    "grid.u.max": 30.0,
    "grid.u.n": 200,
    "grid.u.spacing": "log",
    "grid.r.n": 10,
    "figure.l_max": 8,
    "quad.rule": "tanh-sinh",
    "quad.rel_tol": 1e-8,
    "quad.abs_tol": 1e-12,
    "quad.max_depth": 12,
}


@dataclass
class RunConfig:
    """Validated run configuration.

    ``values`` holds every key (defaults filled in, dimensionless); the
    remaining attributes are the objects built from them.
    """

    command: str
    values: dict
    wall: object
    atom: PolarizabilityModel | None
    R: float | None
    quad: QuadratureSpec
    units: UnitSystem | None = None
    sources: dict = field(default_factory=dict)


def _suggest(key: str) -> str:
    known = list(_KEYS)
    cands = difflib.get_close_matches(key, known, n=3, cutoff=0.6)
    if not cands:
        tails = {k.rsplit(".", 1)[-1]: k for k in known}
        cands = [tails[t] for t in difflib.get_close_matches(key.rsplit(".", 1)[-1], list(tails), n=3, cutoff=0.6)]
    if not cands:
        return ""
    return " (did you mean " + " or ".join(repr(c) for c in cands) + "?)"


def _convert(key, raw, line_no):
    typ = _KEYS[key][0]
    if typ is str:
        return raw.upper() if key == "channel.pol" else (raw if key == "output.prefix" else raw.lower())
    try:
        if typ is int:
            v = float(raw)
            if v != int(v):
                raise ValueError
            return int(v)
        v = float(raw)
        if not math.isfinite(v):
            raise ValueError
        return v
    except ValueError:
        raise ConfigError(f"line {line_no}: {key} = {raw!r} is not a valid {typ.__name__}") from None


def _parse_lines(text: str) -> tuple[dict, dict]:
    raw, where = {}, {}
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected 'key = value', got {line!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        key = k.lower()
        if key not in _KEYS:
            raise ConfigError(f"line {no}: unknown key {k!r}{_suggest(key)}")
        if key in raw:
            raise ConfigError(f"line {no}: duplicate key {k!r} (first set on line {where[key]})")
        if not v:
            raise ConfigError(f"line {no}: empty value for {k!r}")
        raw[key] = _convert(key, v, no)
        where[key] = no
    return raw, where


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a configuration document.

    Parameters
    ----------
    text : str
        ``key = value`` lines.
    command : str, optional
        Command from the command line; must agree with ``command`` in the
        document if both are given.

    Raises
    ------
    ConfigError
        For syntax errors (with line numbers), unknown keys (with
        suggestions) and every violated constraint at once.
    """
    vals, where = _parse_lines(text)
    errors = []
    if command is not None:
        if "command" in vals and vals["command"] != command:
            errors.append(f"command: document says {vals['command']!r} but {command!r} was requested")
        vals["command"] = command
    if "command" not in vals:
        errors.append("command: missing")
    for k, v in vals.items():
        check, desc = _KEYS[k][1], _KEYS[k][2]
        if check is not None and not check(v):
            errors.append(f"{k} = {v!r}: must be {desc}" + (f" (line {where[k]})" if k in where else ""))
    for k, v in _DEFAULTS.items():
        vals.setdefault(k, v)

    # laboratory units
    units = None
    ref = vals.get("units.omega_ref_ev", vals.get("atom.omega0_ev"))
    phys = [k for k in vals if k.endswith(("_ev", "_nm", "_a3")) or k.startswith("grid.r_nm") or k == "atom.alpha0_model"]
    phys = [k for k in phys if k != "units.omega_ref_ev"]
    if ref is not None and ref > 0:
        units = UnitSystem(ref)
    elif phys:
        errors.append(f"{', '.join(sorted(phys))}: laboratory units need units.omega_ref_ev or atom.omega0_ev")

    def pick(internal, lab, conv):
        if internal in vals and lab in vals and lab in where and internal in where:
            errors.append(f"{internal} and {lab}: give only one")
        if lab in vals and units is not None:
            try:
                vals[internal] = conv(vals[lab])
            except (ValueError, ZeroDivisionError) as e:
                errors.append(f"{lab}: {e}")

    if units is not None:
        pick("wall.omega_p", "wall.omega_p_ev", units.freq_from_ev)
        pick("wall.omega_0", "wall.omega_0_ev", units.freq_from_ev)
        pick("wall.gamma", "wall.gamma_ev", units.freq_from_ev)
        pick("atom.omega0", "atom.omega0_ev", units.freq_from_ev)
        pick("cavity.r", "cavity.r_nm", units.length_from_nm)
        pick("atom.alpha0", "atom.alpha0_a3", units.volume_from_a3)
        pick("scan.d_at", "scan.d_at_nm", units.length_from_nm)
        if vals.get("atom.alpha0_model") == "hydrogenic":
            if "atom.alpha0" in where or "atom.alpha0_a3" in where:
                errors.append("atom.alpha0_model: conflicts with an explicit alpha0")
            w0_ev = vals["atom.omega0"] * units.omega_ref_ev
            vals["atom.alpha0"] = units.volume_from_nm3(hydrogenic_alpha0_nm3(w0_ev))
        if "grid.r_nm.min" in vals or "grid.r_nm.max" in vals:
            for s in ("min", "max"):
                if f"grid.r_nm.{s}" in vals:
                    vals[f"grid.r.{s}"] = units.length_from_nm(vals[f"grid.r_nm.{s}"])
            vals["grid.r.n"] = vals.get("grid.r_nm.n", vals["grid.r.n"])

    # grids strictly increasing
    for g in ("grid.omega", "grid.u", "grid.r"):
        lo, hi = vals.get(f"{g}.min"), vals.get(f"{g}.max")
        if lo is not None and hi is not None and not hi > lo:
            errors.append(f"{g}.max must exceed {g}.min")
    if all(f"rect.{k}" in vals for k in ("re_min", "re_max", "im_min", "im_max")):
        if not vals["rect.re_max"] > vals["rect.re_min"]:
            errors.append("rect.re_max must exceed rect.re_min")
        if not vals["rect.im_max"] > vals["rect.im_min"]:
            errors.append("rect.im_max must exceed rect.im_min")

    # command requirements
    cmd = vals.get("command")
    need = {
        "scatter": ["cavity.r", "grid.omega.min", "grid.omega.max"],
        "dos": ["cavity.r", "grid.omega.min", "grid.omega.max"],
        "count-modes": ["cavity.r", "rect.re_min", "rect.re_max", "rect.im_min", "rect.im_max"],
        "energy-scan": ["cavity.r"],
        "atom-shift": ["atom.alpha0"],
        "figure3": ["cavity.r"],
        "figure4": ["atom.alpha0", "grid.r.min", "grid.r.max"],
    }.get(cmd, [])
    for k in need:
        if k not in vals:
            errors.append(f"{k}: required for {cmd}")
    if cmd == "atom-shift" and "cavity.r" not in vals and "grid.r.min" not in vals:
        errors.append("cavity.r or grid.r.min/max: required for atom-shift")
    if cmd == "energy-scan" and ("scan.l_max" in vals) == ("scan.d_at" in vals):
        errors.append("scan.l_max or scan.d_at: give exactly one for energy-scan")

    wall = None
    m = vals["wall.model"]
    try:
        if m == "vacuum":
            wall = Vacuum()
        elif m == "pec":
            wall = PerfectConductor()
        elif m == "lorentzian":
            miss = [k for k in ("wall.omega_p", "wall.omega_0") if k not in vals]
            if miss:
                errors += [f"{k}: required for wall.model = lorentzian" for k in miss]
            else:
                wall = Lorentzian(vals["wall.omega_p"], vals["wall.omega_0"], vals["wall.gamma"])
        elif m == "drude":
            if "wall.omega_p" not in vals:
                errors.append("wall.omega_p: required for wall.model = drude")
            else:
                wall = Drude(vals["wall.omega_p"], vals["wall.gamma"])
        elif m == "constant":
            if "wall.epsilon" not in vals:
                errors.append("wall.epsilon: required for wall.model = constant")
            else:
                wall = Constant(vals["wall.epsilon"])
    except ValueError as e:
        errors.append(f"wall: {e}")

    atom = None
    if "atom.alpha0" in vals and vals["atom.alpha0"] >= 0:
        try:
            atom = PolarizabilityModel(vals["atom.alpha0"], vals["atom.omega0"])
        except ValueError as e:
            errors.append(f"atom: {e}")
    try:
        quad = QuadratureSpec(vals["quad.rule"], vals["quad.rel_tol"], vals["quad.abs_tol"],
                              vals["quad.max_depth"], vals.get("quad.scale"))
    except ValueError as e:
        errors.append(f"quad: {e}")
        quad = None
    if errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
    return RunConfig(cmd, vals, wall, atom, vals.get("cavity.r"), quad, units, where)


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(v) for v in r) + "\n")


def _grid(vals, name, spacing="linear"):
    lo, hi, n = vals[f"{name}.min"], vals[f"{name}.max"], vals[f"{name}.n"]
    if n == 1:
        return np.array([lo])
    if spacing == "log":
        return np.logspace(math.log10(lo), math.log10(hi), n)
    return np.linspace(lo, hi, n)


def _system(cfg: RunConfig, R=None, atom=True) -> CavitySystem:
    return CavitySystem(cfg.wall, cfg.R if R is None else R, cfg.atom if atom else None)


def _channel(cfg):
    return Channel(cfg.values["channel.l"], cfg.values["channel.pol"])


def _cmd_scatter(cfg, prefix, threads):
    s = _system(cfg)
    ch = _channel(cfg)
    imag = cfg.values["grid.omega.axis"] == "imag"
    rows = []
    for w in _grid(cfg.values, "grid.omega"):
        wc = complex(0.0, w) if imag else complex(w, 0.0)
        sb = s.s_b(ch, wc).value
        sc = s.s_c(ch, wc).value
        f = s.mode_function(ch, wc)
        rows.append((ch.l, ch.pol, wc.real, wc.imag, sb.real, sb.imag, sc.real, sc.imag, f.real, f.imag))
    write_csv(Path(f"{prefix}.csv"),
              ["l", "pol", "omega_re[omega_ref]", "omega_im[omega_ref]", "s_b_re", "s_b_im",
               "s_c_re", "s_c_im", "mode_re", "mode_im"], rows)
    return True


def _cmd_dos(cfg, prefix, threads):
    s = _system(cfg)
    ch = _channel(cfg)
    v = cfg.values
    rows = []
    ok = True
    for w in _grid(v, "grid.omega"):
        try:
            rows.append((ch.l, ch.pol, w, dos(ch, w, s).rho, True))
        except ArithmeticError:
            rows.append((ch.l, ch.pol, w, float("nan"), False))
            ok = False
        except ValueError:
            rows.append((ch.l, ch.pol, w, float("nan"), False))
            ok = False
    write_csv(Path(f"{prefix}.csv"), ["l", "pol", "omega[omega_ref]", "rho[1/omega_ref]", "converged"], rows)
    if "grid.omega.bins" in v:
        bins = dos_binned(ch, (v["grid.omega.min"], v["grid.omega.max"]), v["grid.omega.bins"], s)
        write_csv(Path(f"{prefix}_binned.csv"),
                  ["l", "pol", "omega_lo[omega_ref]", "omega_hi[omega_ref]", "delta_n", "n_modes"],
                  [(ch.l, ch.pol, b.lo, b.hi, b.delta_n, b.n_modes) for b in bins])
    return ok


def _cmd_count(cfg, prefix, threads):
    s = _system(cfg)
    ch = _channel(cfg)
    v = cfg.values
    rect = (v["rect.re_min"], v["rect.re_max"], v["rect.im_min"], v["rect.im_max"])
    n = count_modes(ch, rect, s)
    write_csv(Path(f"{prefix}.csv"),
              ["l", "pol", "re_min[omega_ref]", "re_max[omega_ref]", "im_min[omega_ref]", "im_max[omega_ref]",
               "count"], [(ch.l, ch.pol, *rect, n)])
    return True


def _cmd_energy(cfg, prefix, threads):
    v = cfg.values
    fit = None
    if "scan.fit_min" in v or "scan.fit_max" in v:
        fit = (v.get("scan.fit_min", 1), v.get("scan.fit_max", 10 ** 9))
    rep = u0_scan(_system(cfg, atom=True), l_max=v.get("scan.l_max"), spec=cfg.quad,
                  d_at=v.get("scan.d_at"), threads=threads, fit_window=fit)
    write_csv(Path(f"{prefix}_channels.csv"),
              ["l", "pol", "energy[hbar*omega_ref]", "error[hbar*omega_ref]", "converged"],
              [(c.channel.l, c.channel.pol, c.value, c.error, c.converged) for c in rep.per_channel])
    write_csv(Path(f"{prefix}_cumulative.csv"),
              ["L", "per_term[hbar*omega_ref]", "U0[hbar*omega_ref]"],
              [(L, t, u) for (L, u), t in zip(rep.cumulative_vs_lmax, rep.per_term)])
    meta = {"cutoff": rep.cutoff, "fit": rep.fit, "converged": rep.converged,
            "units": {"energy": "hbar*omega_ref", "omega_ref_ev": cfg.units.omega_ref_ev if cfg.units else None}}
    Path(f"{prefix}_fit.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return rep.converged


def _radii(cfg):
    v = cfg.values
    if "grid.r.min" in v:
        return _grid(v, "grid.r", "log")
    return np.array([cfg.R])


def _shifts(cfg, radii, threads):
    def one(R):
        return atom_shift_result(R, cfg.wall, cfg.atom, cfg.quad)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(one, radii))
    return [one(R) for R in radii]


def _shift_rows(cfg, radii, res):
    rows = []
    for R, r in zip(radii, res):
        row = [R, r.value, r.error]
        if cfg.units:
            row += [cfg.units.length_to_nm(R), cfg.units.energy_to_mev(r.value)]
        rows.append(row + [r.converged])
    head = ["R[c/omega_ref]", "dU[hbar*omega_ref]", "error[hbar*omega_ref]"]
    if cfg.units:
        head += ["R[nm]", "dU[meV]"]
    return head + ["converged"], rows


def _cmd_atom(cfg, prefix, threads):
    radii = _radii(cfg)
    res = _shifts(cfg, radii, threads)
    head, rows = _shift_rows(cfg, radii, res)
    write_csv(Path(f"{prefix}.csv"), head, rows)
    return all(r.converged for r in res)


def _cmd_figure4(cfg, prefix, threads):
    radii = _radii(cfg)
    res = _shifts(cfg, radii, threads)
    head, rows = _shift_rows(cfg, radii, res)
    write_csv(Path(f"{prefix}.csv"), head, rows)
    dU = np.array([r.value for r in res])
    meta = {"slope": None, "intercept": None, "n": len(radii)}
    if len(radii) >= 2 and np.all(dU != 0):
        slope, icpt = np.polyfit(np.log(radii), np.log(np.abs(dU)), 1)
        meta.update(slope=float(slope), intercept=float(icpt),
                    model="log|dU| = slope * log R + intercept (R in c/omega_ref, dU in hbar*omega_ref)")
    meta["all_negative"] = bool(np.all(dU < 0))
    Path(f"{prefix}_fit.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return all(r.converged for r in res)


def figure3_rows(system: CavitySystem, l_max: int, u):
    """Rows ``(l, u, u_l)`` with ``u_l = (1/2pi) log|1 - s_b^TM(iu)|`` (no ``2l+1``)."""
    s = CavitySystem(system.wall, system.R, None)
    rows = []
    for l in range(1, l_max + 1):
        vals = log_mode_function(u, s, Channel(l, TM)) / (2.0 * math.pi)
        rows += [(l, float(x), float(y)) for x, y in zip(u, vals)]
    return rows


def _cmd_figure3(cfg, prefix, threads):
    v = cfg.values
    u = _grid(v, "grid.u", v["grid.u.spacing"])
    rows = figure3_rows(_system(cfg, atom=False), v["figure.l_max"], u)
    write_csv(Path(f"{prefix}.csv"), ["l", "u[omega_ref]", "u_l[dimensionless]"], rows)
    return True


_DISPATCH = {
    "scatter": _cmd_scatter,
    "dos": _cmd_dos,
    "count-modes": _cmd_count,
    "energy-scan": _cmd_energy,
    "atom-shift": _cmd_atom,
    "figure3": _cmd_figure3,
    "figure4": _cmd_figure4,
}


def run(cfg: RunConfig, out: str | None = None, threads: int = 1) -> int:
    """Execute a validated configuration; returns the exit status."""
    prefix = out or cfg.values.get("output.prefix") or cfg.command
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    try:
        ok = _DISPATCH[cfg.command](cfg, prefix, max(1, int(threads)))
    except (ArithmeticError, ValueError, RuntimeError) as e:
        if isinstance(e, ConfigError):
            raise
        print(f"numerical error: {e}", file=sys.stderr)
        return 2
    if not ok:
        print("warning: some results did not converge (see the 'converged' column)", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="cavity-casimir", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--out", default=None, help="output path prefix")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    a = p.parse_args(argv)
    try:
        text = Path(a.config).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text, a.command)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if a.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 1
    return run(cfg, a.out, a.threads)


if __name__ == "__main__":
    sys.exit(main())
