import math

import pytest

from nlwalk.cli import main


def test_bad_instance_exits_2(capsys):
    code = main(["classify", "--n", "100", "--k", "60", "--g", "1", "--h", "1"])
    assert code == 2
    assert "2k" in capsys.readouterr().err


def test_unknown_figure_exits_2(capsys):
    code = main(["figures", "--id", "fig9", "--out-dir", "/tmp/x"])
    assert code == 2


def test_classify_output(capsys):
    assert main(["classify", "--n", "1000", "--k", "3", "--g", "999", "--h", "1"]) == 0
    out = capsys.readouterr().out
    assert "regime=SharpPeak" in out
    assert "sqrt(N/g)" in out


def test_analytic_output_self_describing(capsys):
    assert main(["analytic", "--n", "1000", "--k", "3", "--g", "999", "--h", "4"]) == 0
    out = capsys.readouterr().out
    assert "regime=Plateau" in out
    assert "h_c=3.00900900901e+00" in out
    # defaults are printed so records stand alone
    for key in ("epsilon=", "tau=", "dominance_ratio=", "norm_tol="):
        assert key in out
    t_half = float(dict(l.split("=", 1) for l in out.splitlines())["t_half"])
    assert t_half == pytest.approx(math.pi / 2, rel=0.02)


def test_simulate_writes_trajectory(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main([
        "simulate", "--n", "50", "--k", "1", "--g", "49", "--h", "1",
        "--t-max", "4", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x,alpha_re,alpha_im,beta_re,beta_im,gamma,norm_err"
    assert len(lines) > 100
    assert "event=FirstPeak" in capsys.readouterr().out


def test_sweep_roundtrip(tmp_path, capsys):
    spec = tmp_path / "sweep.spec"
    spec.write_text(
        "# h sweep at fixed instance\n"
        "n=1000\nk=3\ng=999\nh=1\n"
        "axis=h\nvalues=1,3,4\noutputs=x_plus,classification\n"
    )
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--spec-file", str(spec), "--out", str(out), "--jobs", "1"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "h,x_plus,classification"
    assert lines[3].endswith("Plateau")


def test_sweep_bad_spec_exits_2(tmp_path):
    spec = tmp_path / "bad.spec"
    spec.write_text("n=1000\nk=3\n")
    assert main(["sweep", "--spec-file", str(spec), "--out", str(tmp_path / "o.csv")]) == 2


def test_figures_writes_manifest(tmp_path, capsys):
    code = main(["figures", "--id", "fig6b", "--out-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "fig6b_manifest.txt").exists()


def test_resources_command(tmp_path, capsys):
    out = tmp_path / "fits.csv"
    code = main([
        "resources", "--family", "sqrt-g", "--n-values", "1e4,1e5,1e6,1e7,1e8",
        "--out", str(out),
    ])
    assert code == 0
    assert "n_bec_lower" in capsys.readouterr().out
    assert out.exists()


def test_verify_analytic_suite(capsys):
    assert main(["verify", "--suite", "analytic"]) == 0
    assert "analytic: pass" in capsys.readouterr().out


def test_jobs_env_default(monkeypatch):
    from nlwalk.cli import _default_jobs

    monkeypatch.setenv("NLWALK_JOBS", "7")
    assert _default_jobs() == 7
    monkeypatch.setenv("NLWALK_JOBS", "junk")
    assert _default_jobs() == 1
