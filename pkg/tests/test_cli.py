import json
from importlib import resources

import pytest

from irqubits import cli
from irqubits.io import read_csv

FAST = """
[spin]
random_states = 5
max_pairs = 8
[photon_grid]
n_radial = 16
n_polar = 12
n_azimuth = 12
"""


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "fast.ini"
    path.write_text(FAST)
    return path


def run(tmp_path, *args):
    out = tmp_path / "out"
    return cli.main(["--out", str(out), *args]), out


def test_cancellation_command(tmp_path, fast_config, capsys):
    code, out = run(tmp_path, "--config", str(fast_config), "--command", "cancellation")
    assert code == 0
    table = read_csv(out / "cancellation.csv")
    assert (table["residual_asymptotic"] < 1e-12).all()
    assert "PASS cancellation:asymptotic_residual" in capsys.readouterr().out
    checks = json.loads((out / "cancellation_checks.json").read_text())
    assert all(c["passed"] for c in checks.values())


def test_spin_rho_on_bundled_singlet(tmp_path, fast_config):
    code, out = run(tmp_path, "--config", str(fast_config), "--command", "spin-rho", "--seed", "9")
    assert code == 0
    m = json.loads((out / "spin_measures.json").read_text())
    assert m["free"]["concurrence"] == pytest.approx(1.0, abs=1e-12)
    assert m["dressed"]["concurrence"] == pytest.approx(1.0, abs=1e-12)
    assert m["max_diff"] == 0.0
    assert m["seed"] == 9
    assert (out / "rho_free.json").exists() and (out / "rho_dressed.csv").exists()


def test_softcount_command(tmp_path, fast_config):
    code, out = run(tmp_path, "--config", str(fast_config), "--command", "softcount")
    assert code == 0
    fit = json.loads((out / "softcount_fit.json").read_text())
    assert fit["slope"] > 0 and fit["r2"] > 0.99
    assert fit["max_dressed"] < 1e-10


def test_phases_and_stationary_outputs(tmp_path, fast_config):
    code, out = run(tmp_path, "--config", str(fast_config), "--command", "phases")
    assert code == 0
    assert set(read_csv(out / "phases.csv")) >= {"t0", "kappa1", "kappa2", "kappa12_quad", "phi"}
    code, out = run(tmp_path, "--config", str(fast_config), "--command", "stationary")
    table = read_csv(out / "stationary.csv")
    assert list(table["t"]) == [10.0, 100.0, 1e3, 1e4]
    checks = json.loads((out / "stationary_checks.json").read_text())
    # the exit code reflects the checks, whatever they are
    assert code == (0 if all(c["passed"] for c in checks.values()) else 1)


def test_all_is_deterministic(tmp_path, fast_config):
    a, b = tmp_path / "a", tmp_path / "b"
    code_a = cli.main(["--config", str(fast_config), "--out", str(a)])
    code_b = cli.main(["--config", str(fast_config), "--out", str(b)])
    assert code_a == code_b
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    verdict = json.loads((a / "verdict.json").read_text())
    assert set(verdict["checks"]) == {"phases", "cancellation", "spin-rho", "softcount", "stationary"}
    assert code_a == (0 if verdict["passed"] else 1)


def test_tolerance_override_can_fail_a_check(tmp_path, fast_config):
    code, _ = run(tmp_path, "--config", str(fast_config), "--command", "softcount", "--tolerance", "1e-30")
    assert code == 1


@pytest.mark.parametrize(
    "text",
    [
        "[physics]\nv1 = 0 0\n",
        "[physics]\nt0_schedule =\n",
        "[physics]\nratio = -1\n",
        "[nonsense]\nx = 1\n",
        "[physics]\nunknown = 1\n",
        "[spin]\nstate_file = missing.txt\n",
        "not an ini file",
    ],
)
def test_malformed_config(tmp_path, capsys, text):
    path = tmp_path / "bad.ini"
    path.write_text(text)
    code, _ = run(tmp_path, "--config", str(path))
    assert code == cli.EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_singular_configuration_names_parameters(tmp_path, capsys):
    path = tmp_path / "sing.ini"
    path.write_text("[physics]\nv1 = 0.5 0 0\nx1 = 5 0 0\nt0_schedule = 1\n")
    code, _ = run(tmp_path, "--config", str(path), "--command", "phases")
    assert code == cli.EXIT_NUMERICAL
    err = capsys.readouterr().err
    assert "numerical failure" in err and "v1=" in err and "x1=" in err


def test_relative_state_file(tmp_path):
    state = resources.files("irqubits") / "data" / "singlet.txt"
    (tmp_path / "s.txt").write_text(state.read_text())
    path = tmp_path / "c.ini"
    path.write_text("[spin]\nstate_file = s.txt\nrandom_states = 0\n")
    cfg = cli.load_config(path)
    assert cfg.state_file == str(tmp_path / "s.txt")


def test_bundled_default_config_parses():
    cfg = cli.load_config(resources.files("irqubits") / "data" / "default.ini")
    assert cfg.t0_schedule == (1e3, 1e4, 1e5)
