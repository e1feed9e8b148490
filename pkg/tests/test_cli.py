import json
import os
import subprocess
import sys
from pathlib import Path

PKG_ROOT = Path(__file__).resolve().parents[1]
SCENES = PKG_ROOT / "scenes"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run_cli(*args, env_extra=None):
    env = os.environ.copy()
    env["PYTHONPATH"] = os.pathsep.join(
        filter(None, [str(PKG_ROOT / "src"), env.get("PYTHONPATH", "")])
    )
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "padicft", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_eval_with_oracle_agrees():
    res = run_cli(
        "eval", str(SCENES / "inverse_monomial.toml"), "--cube", "1@1",
        "--oracle-level", "4",
    )
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["oracle_agrees"] is True
    assert payload["value"]["coeffs"] == {"1": "1/3"}


def test_eval_direct_scene_value():
    res = run_cli("eval", str(SCENES / "square_phase.toml"), "--oracle-level", "2")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    # (1/3)(1 + 2 zeta_3)
    assert payload["value"]["coeffs"] == {"0": "1/3", "1": "2/3"}
    assert payload["oracle_agrees"] is True


def test_eval_xi_override_linear_floor():
    res = run_cli(
        "eval", str(SCENES / "square_phase.toml"), "--xi", "2"
    )
    payload = json.loads(res.stdout)
    assert payload["value"]["coeffs"] == {"0": "1"}


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text(
        (SCENES / "inverse_monomial.toml").read_text().replace('"1/3"', "0.5"),
        encoding="utf-8",
    )
    res = run_cli("eval", str(bad))
    assert res.returncode == 2
    assert "parse error" in res.stderr

    unknown = tmp_path / "unknown.toml"
    unknown.write_text(
        (SCENES / "inverse_monomial.toml").read_text() + "\nmystery = 1\n",
        encoding="utf-8",
    )
    res2 = run_cli("eval", str(unknown))
    assert res2.returncode == 2


def test_eval_error_exit_code(tmp_path):
    # frequency beyond the conductor cap is an evaluator error (exit 3)
    scene = (SCENES / "inverse_monomial.toml").read_text().replace(
        "max_level = 8", "max_level = 2"
    )
    f = tmp_path / "cap.toml"
    f.write_text(scene, encoding="utf-8")
    res = run_cli("eval", str(f), "--xi", "1/81")
    assert res.returncode == 3
    assert "evaluation error" in res.stderr


def test_bound_golden_bytes():
    res = run_cli("bound", str(SCENES / "inverse_chart.toml"))
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "bound_inverse_chart.json").read_text()
    res2 = run_cli("bound", str(SCENES / "square_chart.toml"))
    assert res2.stdout == (GOLDEN / "bound_square_chart.json").read_text()


def test_pcrit_golden_bytes():
    res = run_cli("pcrit", str(SCENES / "parabola.toml"))
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "pcrit_parabola.json").read_text()


def test_bound_round_trip():
    from padicft.geometry import descriptor_from_dict
    from padicft.scenefile import load_scene_file
    from padicft.bound import build_wavefront_bound

    res = run_cli("bound", str(SCENES / "inverse_chart.toml"))
    parsed = descriptor_from_dict(json.loads(res.stdout))
    sf = load_scene_file(SCENES / "inverse_chart.toml")
    assert parsed == build_wavefront_bound(sf.charts, d=sf.w_dim, q=sf.y_dim)


def test_probe_csv_schema():
    res = run_cli("probe", str(SCENES / "square_phase.toml"), "--format", "csv")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "probe_id,level,value_re,value_im,exact_zero"
    rows = [ln.split(",") for ln in lines[1:]]
    assert all(len(r) == 5 for r in rows)
    assert {r[0] for r in rows} == {"critical-ray", "unit-window"}
    # the unit window vanishes from level 2 on
    unit_rows = [r for r in rows if r[0] == "unit-window"]
    assert [r[4] for r in unit_rows] == ["false"] + ["true"] * 5


def test_probe_byte_stable():
    a = run_cli("probe", str(SCENES / "square_phase.toml"))
    b = run_cli("probe", str(SCENES / "square_phase.toml"))
    assert a.stdout == b.stdout


def test_verify_homogeneity_exit_zero():
    res = run_cli(
        "verify", str(SCENES / "inverse_monomial.toml"),
        "--suite", "homogeneity", "--trials", "200", "--seed", "7",
    )
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["passed"] is True and payload["trials"] == 200


def test_verify_cover_exit_zero():
    res = run_cli(
        "verify", str(SCENES / "square_phase.toml"),
        "--suite", "cover", "--charts", str(SCENES / "square_chart.toml"),
    )
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["passed"] is True


def test_wrong_scene_kind_is_parse_error():
    res = run_cli("probe", str(SCENES / "inverse_chart.toml"))
    assert res.returncode == 2
    res2 = run_cli("bound", str(SCENES / "parabola.toml"))
    assert res2.returncode == 2
    res3 = run_cli("pcrit", str(SCENES / "inverse_chart.toml"))
    assert res3.returncode == 2


def test_output_dir_env(tmp_path):
    res = run_cli(
        "bound", str(SCENES / "inverse_chart.toml"), "--output", "out/bound.json",
        env_extra={"PADICFT_OUTPUT_DIR": str(tmp_path)},
    )
    assert res.returncode == 0
    target = tmp_path / "out" / "bound.json"
    assert target.exists()
    assert target.read_text() == (GOLDEN / "bound_inverse_chart.json").read_text()
