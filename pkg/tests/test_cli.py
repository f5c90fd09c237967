from pathlib import Path

from se3cbf.cli import main
from se3cbf.scenarios import build_scenario_slit

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_presets(capsys):
    code, out, _ = run_cli(capsys, "list")
    assert code == 0
    assert "slit" in out and "landing" in out


def test_run_short_slit(tmp_path, capsys):
    code, out, err = run_cli(
        capsys,
        "run", "--preset", "slit", "--alpha-e", "150", "--duration", "0.2",
        "--out", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "slit.csv").exists()
    assert (tmp_path / "slit.summary.txt").exists()
    assert "min_H_slit1" in out  # summary on stdout
    assert "digest" in err  # diagnostics on stderr


def test_run_config_file(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "run", "--config", str(CONFIGS / "landing.cfg"), "--duration", "0.2",
        "--out", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "landing.csv").exists()
    assert "max_Edir" in out


def test_run_rejects_bad_dt(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "run", "--preset", "slit", "--dt", "-1", "--out", str(tmp_path)
    )
    assert code == 2
    assert "dt" in err


def test_run_rejects_unknown_flag(tmp_path, capsys):
    code = main(["run", "--preset", "slit", "--frobnicate", "--out", str(tmp_path)])
    capsys.readouterr()
    assert code == 2


def test_run_requires_preset_or_config(capsys):
    code = main(["run"])
    capsys.readouterr()
    assert code == 2


def test_digest_is_reproducible(tmp_path, capsys):
    args = ("run", "--preset", "slit", "--duration", "0.05", "--out", str(tmp_path))
    _, _, err1 = run_cli(capsys, *args)
    _, _, err2 = run_cli(capsys, *args)
    digest_lines = [l for l in err1.splitlines() if "digest" in l]
    assert digest_lines == [l for l in err2.splitlines() if "digest" in l]
    import dataclasses

    expected = dataclasses.replace(build_scenario_slit(150.0), duration=0.05).digest()
    assert digest_lines[0].split()[-1] == expected


def test_no_filter_landing_exceeds_bound(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "run", "--preset", "landing", "--no-filter", "--out", str(tmp_path),
    )
    assert code == 0
    max_edir = float(
        next(l for l in out.splitlines() if l.startswith("max_Edir")).split("=")[1]
    )
    assert max_edir > 1.5


def test_sweep_writes_one_csv_per_value(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--preset", "slit", "--param", "alpha-e", "--values", "50,150",
        "--duration", "0.1", "--out", str(tmp_path),
    )
    assert code == 0
    files = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert files == ["slit_alpha_e_150p0.csv", "slit_alpha_e_50p0.csv"]


def test_sweep_rejects_bad_values(tmp_path, capsys):
    code, _, err = run_cli(
        capsys,
        "sweep", "--preset", "slit", "--param", "alpha-e", "--values", "50,oops",
        "--out", str(tmp_path),
    )
    assert code == 2
    assert "sweep" in err or "parse" in err


def test_emax_override_requires_directional(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "run", "--preset", "slit", "--emax", "2.0", "--out", str(tmp_path)
    )
    assert code == 2
    assert "directional" in err


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("scenario.kind = slit-traversal\nmystery = 1\n")
    code, _, err = run_cli(capsys, "run", "--config", str(bad), "--out", str(tmp_path))
    assert code == 2
    assert "mystery" in err
