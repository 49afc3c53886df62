import json

import numpy as np
import pytest

from cavity_casimir.cli import main, parse_config, run
from cavity_casimir.energy import log_mode_function
from cavity_casimir.errors import ConfigError
from cavity_casimir.media import Lorentzian, PerfectConductor
from cavity_casimir.scattering import TM, CavitySystem, Channel

FIG3_CFG = """\
command = figure3
wall.model = lorentzian
wall.omega_p = 1
wall.omega_0 = 1
wall.gamma = 0.01   # weak loss
cavity.R = 1
grid.u.min = 1e-3
grid.u.max = 30
grid.u.n = 40
"""


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_minimal_atom_shift_defaults():
    cfg = parse_config("command = atom-shift\nwall.model = pec\natom.alpha0 = 1e-6\ncavity.R = 0.05\n")
    assert isinstance(cfg.wall, PerfectConductor)
    assert cfg.atom.omega0 == 1.0
    assert cfg.quad.rel_tol == 1e-8 and cfg.quad.abs_tol == 1e-12 and cfg.quad.max_depth == 12


def test_negative_radius_names_field():
    with pytest.raises(ConfigError, match="cavity.r"):
        parse_config("command = energy-scan\ncavity.R = -1\nscan.l_max = 4\n")


def test_all_violations_reported():
    with pytest.raises(ConfigError) as e:
        parse_config("command = figure4\nwall.model = drude\natom.alpha0 = -1\ngrid.R.min = 2\ngrid.R.max = 1\n")
    msg = str(e.value)
    for key in ("atom.alpha0", "wall.omega_p", "grid.r.max"):
        assert key in msg


def test_unknown_key_suggestion():
    with pytest.raises(ConfigError, match="wall.epsilon"):
        parse_config("command = scatter\nwall.epsilonn = 3\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("command = scatter\nwall.epsilonn = 3\n")


def test_syntax_errors():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("command scatter\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("command = dos\ncommand = dos\n")
    with pytest.raises(ConfigError, match="not a valid int"):
        parse_config("command = dos\nchannel.l = 1.5\n")


def test_lab_units():
    cfg = parse_config("command = atom-shift\nwall.model = pec\natom.omega0_ev = 2\n"
                       "atom.alpha0_model = hydrogenic\ncavity.R_nm = 2\n")
    assert cfg.units.omega_ref_ev == 2
    assert cfg.R == pytest.approx(2 / (197.3269804 / 2))
    # e^2/(m omega0^2) at 2 eV is about 27.4 cubic angstrom
    assert cfg.atom.alpha0 * (197.3269804 / 2) ** 3 * 1e3 == pytest.approx(27.43, abs=0.01)


def test_lab_units_need_reference():
    with pytest.raises(ConfigError, match="omega_ref_ev"):
        parse_config("command = atom-shift\nwall.model = pec\natom.alpha0 = 1\ncavity.R_nm = 2\n")


def test_figure3_roundtrip(tmp_path):
    out = tmp_path / "fig3"
    assert main(["figure3", "--config", _write(tmp_path, FIG3_CFG), "--out", str(out)]) == 0
    lines = (tmp_path / "fig3.csv").read_text().splitlines()
    assert lines[0] == "l,u[omega_ref],u_l[dimensionless]"
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert len(data) == 8 * 40
    s = CavitySystem(Lorentzian(1.0, 1.0, 0.01), 1.0)
    for l in range(1, 9):
        rows = data[data[:, 0] == l]
        ref = log_mode_function(rows[:, 1], s, Channel(l, TM)) / (2 * np.pi)
        assert np.array_equal(rows[:, 2], ref)


def test_determinism(tmp_path):
    cfg = _write(tmp_path, FIG3_CFG)
    main(["figure3", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["figure3", "--config", cfg, "--out", str(tmp_path / "b"), "--threads", "3"])
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert b"\r" not in a


def test_energy_scan_threads_identical(tmp_path):
    cfg = _write(tmp_path, "command = energy-scan\nwall.model = lorentzian\nwall.omega_p = 1\n"
                           "wall.omega_0 = 1\nwall.gamma = 0.01\ncavity.R = 1\nscan.l_max = 8\n")
    assert main(["energy-scan", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert main(["energy-scan", "--config", cfg, "--out", str(tmp_path / "b"), "--threads", "4"]) == 0
    for suffix in ("_channels.csv", "_cumulative.csv", "_fit.json"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()
    meta = json.loads((tmp_path / "a_fit.json").read_text())
    assert meta["cutoff"]["l_max"] == 8


def test_count_modes_command(tmp_path):
    cfg = _write(tmp_path, "command = count-modes\nwall.model = pec\ncavity.R = 1\nchannel.l = 1\n"
                           "channel.pol = TE\nrect.re_min = 4\nrect.re_max = 5\nrect.im_min = -0.5\n"
                           "rect.im_max = 0.5\n")
    assert main(["count-modes", "--config", cfg, "--out", str(tmp_path / "c")]) == 0
    last = (tmp_path / "c.csv").read_text().splitlines()[-1]
    assert last.split(",")[-1] == "1"


def test_figure4_sidecar(tmp_path):
    cfg = _write(tmp_path, "command = figure4\nwall.model = pec\natom.alpha0 = 1e-9\natom.omega0 = 1\n"
                           "grid.R.min = 0.01\ngrid.R.max = 0.1\ngrid.R.n = 6\n")
    assert main(["figure4", "--config", cfg, "--out", str(tmp_path / "f4")]) == 0
    meta = json.loads((tmp_path / "f4_fit.json").read_text())
    assert meta["slope"] == pytest.approx(-3.0, abs=0.03)
    assert meta["all_negative"]
    head = (tmp_path / "f4.csv").read_text().splitlines()[0]
    assert head.startswith("R[c/omega_ref],dU[hbar*omega_ref]")


def test_exit_codes(tmp_path):
    assert main(["scatter", "--config", _write(tmp_path, "command = scatter\nbogus = 1\n")]) == 1
    assert main(["scatter", "--config", str(tmp_path / "missing.cfg")]) == 1
    # a command mismatch between file and command line is a config error
    assert main(["dos", "--config", _write(tmp_path, FIG3_CFG)]) == 1


def test_nonconvergence_exit_two(tmp_path):
    cfg = parse_config("command = atom-shift\nwall.model = lorentzian\nwall.omega_p = 1\nwall.omega_0 = 1\n"
                       "atom.alpha0 = 0.01\ncavity.R = 1\nquad.max_depth = 1\nquad.rel_tol = 1e-14\n")
    out = tmp_path / "nc"
    assert run(cfg, str(out)) == 2
    lines = (tmp_path / "nc.csv").read_text().splitlines()
    assert lines[0].endswith(",converged") and lines[1].endswith(",0")


def test_dos_command_with_bins(tmp_path):
    cfg = _write(tmp_path, "command = dos\nwall.model = pec\ncavity.R = 1\nchannel.l = 1\n"
                           "grid.omega.min = 0.1\ngrid.omega.max = 8\ngrid.omega.n = 10\ngrid.omega.bins = 4\n")
    assert main(["dos", "--config", cfg, "--out", str(tmp_path / "d")]) == 0
    rows = (tmp_path / "d_binned.csv").read_text().splitlines()[1:]
    assert sum(int(r.split(",")[-1]) for r in rows) == 2
