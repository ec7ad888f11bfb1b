"""CLI subcommands and config round-trips."""

import json

import pytest

from isocensus.cli import _parse_isogeny, main
from isocensus.experiments import ExperimentConfig, Runner, write_reports


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_points_subcommand(capsys):
    code, payload = run_cli(capsys, "points", "--spec", "SL", "--p", "2", "--n", "1")
    assert code == 0 and payload["order"] == 6


def test_points_lists_elements(capsys):
    code, payload = run_cli(capsys, "points", "--spec", "Gm", "--p", "3",
                            "--n", "1", "--list", "2")
    assert code == 0 and len(payload["elements"]) == 2


def test_order_subcommand(capsys):
    code, payload = run_cli(capsys, "order", "--spec", "SL", "--q", "7")
    assert code == 0
    assert payload["order"] == payload["bn_order"] == 336
    assert payload["center_order"] == 2


def test_kernel_subcommand(capsys):
    code, payload = run_cli(capsys, "kernel", "--iso", "pow:3", "--spec", "Gm",
                            "--p", "2")
    assert code == 0
    assert payload["kernel_order"] == 3 and payload["minimal_level"] == 2


def test_image_subcommand(capsys):
    code, payload = run_cli(capsys, "image", "--iso", "pow:2", "--spec", "Gm",
                            "--p", "3", "--n", "1")
    assert code == 0 and payload["index_equals_kernel"]


def test_cokernel_subcommand(capsys):
    code, payload = run_cli(capsys, "cokernel", "--iso", "normcover",
                            "--spec", "NormTorus", "--p", "7", "--n", "1")
    assert code == 0
    assert payload["invariants"] == [2] and payload["mu_verified"] is True


def test_census_subcommand_with_reached(capsys):
    code, payload = run_cli(capsys, "census", "--spec", "NormTorus", "--p", "7",
                            "--k", "2", "--reached")
    assert code == 0 and payload["count"] == 3
    cover_hits = sum(1 for f in payload["reached"] if f["normcover"])
    assert cover_hits == 1


def test_composite_isogeny_parsing():
    iso = _parse_isogeny("compose:(pow:2,pow:3)", 5, 1, "Gm")
    assert iso.name == "compose:(pow:2,pow:3)"
    assert iso.kernel_order() == 6
    with pytest.raises(ValueError):
        _parse_isogeny("compose:(pow:2", 5, 1, "Gm")
    with pytest.raises(ValueError):
        _parse_isogeny("frobnicate", 5, 1, "Gm")


def test_cli_reports_errors_with_exit_2(capsys):
    code = main(["kernel", "--iso", "pow:3", "--spec", "Gm", "--p", "9"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_config_round_trip():
    config = ExperimentConfig(seed=7, e12_qs=(2, 3), e4_qs=((2, 1), (3, 1)))
    text = config.to_json()
    again = ExperimentConfig.from_json(text)
    assert again == config
    assert again.to_json() == text
    with pytest.raises(ValueError):
        ExperimentConfig.from_json('{"nonsense": 1}')


SMALL = dict(e12_qs=(2,), e12_n_max=2, e12_ks=(2, 3), e3_n_max=4,
             e4_qs=((2, 1),), e5_p_max=7, e6_qs=(2, 3), e6_ratio_n_max=3,
             e7_p_min=5, e7_p_max=5, e8_ps=(2,), e8_n_max=2)


def test_experiment_subcommand_writes_reports(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(ExperimentConfig(**SMALL).to_json())
    code, payload = run_cli(capsys, "experiment", "E8", "--config", str(cfg),
                            "--out", str(tmp_path / "reports"))
    assert code == 0
    assert (tmp_path / "reports" / "E8.json").exists()
    assert payload["summary"]["all_pass"]


def test_run_all_summary_structure(tmp_path):
    runner = Runner(ExperimentConfig(**SMALL))
    result = runner.run_all()
    assert set(result["reports"]) == {f"E{i}" for i in range(1, 9)}
    assert result["summary"]["all_pass"]
    paths = write_reports(result, str(tmp_path / "r"), "both")
    names = sorted(p.rsplit("/", 1)[1] for p in paths)
    assert "summary.json" in names and "E1.csv" in names
