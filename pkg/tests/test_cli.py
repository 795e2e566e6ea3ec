import json

import pytest

from gaborcert.cli import main
from gaborcert.windows import builtin_window, window_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_basic(capsys):
    code, out, _ = run(capsys, "analyze", "--window", "indicator",
                       "--budget", "20", "--m-max", "256")
    assert code == 0
    doc = json.loads(out)
    assert doc["sandwich"]["certified_lower"] == "1"
    assert doc["sandwich"]["certified_upper"] == "1"
    assert doc["sandwich"]["holds"] is True
    assert doc["sandwich"]["violations"] == 0


def test_analyze_includes_zak_only_on_unit_lattice(capsys):
    code, out, _ = run(capsys, "analyze", "--window", "stepped_indicator",
                       "--param", "eps=1/2", "--budget", "10", "--m-max", "128")
    assert code == 0
    assert "zak_bounds" in json.loads(out)

    code, out, _ = run(capsys, "analyze", "--window", "hat", "--b", "1/4",
                       "--budget", "10", "--m-max", "128")
    assert code == 0
    doc = json.loads(out)
    assert "zak_bounds" not in doc
    assert doc["walnut_bounds"]["lower"] == "2"


def test_perturb_pass_and_fail_exit_codes(capsys):
    code, _, err = run(capsys, "perturb", "--window", "double_indicator",
                       "--perturbed", "stepped_indicator",
                       "--perturbed-param", "eps=1/8",
                       "--criterion", "unit-lattice")
    # the unperturbed system is no frame (lower 0), so walnut bounds
    # cannot back the hypothesis; an explicit A is required
    assert code == 1
    assert "lower bound" in err

    code, out, _ = run(capsys, "perturb", "--window", "indicator",
                       "--perturbed", "scaled_double_indicator",
                       "--perturbed-param", "scale=1",
                       "--criterion", "correlation")
    assert code == 2  # adding chi_[1,2) costs R = 1 = A exactly

    code, out, _ = run(capsys, "perturb", "--window", "indicator",
                       "--perturbed", "box",
                       "--perturbed-param", "lo=0",
                       "--perturbed-param", "hi=1",
                       "--perturbed-param", "height=15/16",
                       "--criterion", "correlation")
    assert code == 0  # level tweak of 1/16 costs only R = 1/256
    doc = json.loads(out)
    assert doc["certificate"]["hypothesis_values"]["R"] == "1/256"
    assert doc["bounds_source"] == "walnut"


def test_perturb_certified_pass(capsys):
    code, out, _ = run(capsys, "perturb", "--window", "double_indicator",
                       "--perturbed", "stepped_indicator",
                       "--perturbed-param", "eps=1/8",
                       "--criterion", "unit-lattice",
                       "--lower", "1/16", "--upper", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["passed"] is True
    assert doc["bounds_source"] == "user"


def test_perturb_inconclusive_exit_code(capsys):
    perturbed = json.dumps({
        "breakpoints": ["0", "1"],
        "pieces": [{"c0re": "1", "c1re": "1/2", "c1im": "1/2"}],
    })
    code, out, _ = run(capsys, "perturb", "--window", "indicator",
                       "--perturbed", perturbed, "--criterion", "amalgam")
    assert code == 3
    doc = json.loads(out)
    assert doc["certificate"]["conclusive"] is False


def test_perturb_divergence(capsys):
    code, out, _ = run(capsys, "perturb", "--window", "double_indicator",
                       "--perturbed", "stepped_indicator",
                       "--perturbed-param", "eps=1/4",
                       "--criterion", "divergence")
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["divergent"] is True
    assert doc["report"]["resonance_count"] == 201


def test_shift_report_and_failure(capsys):
    code, out, _ = run(capsys, "shift", "--window", "hat", "--b", "1/4",
                       "--radius", "1/10000", "--mode", "report")
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["hypothesis_values"]["eps"] == "3/400"
    assert doc["certificate"]["hypothesis_values"]["b0"] == "1/8"

    code, out, _ = run(capsys, "shift", "--window", "hat", "--b", "1/4",
                       "--a-prime", "101/100", "--mode", "given")
    assert code == 2
    doc = json.loads(out)
    assert doc["certificate"]["passed"] is False


def test_shift_extra_rates(capsys):
    code, out, _ = run(capsys, "shift", "--window", "hat", "--b", "1/4",
                       "--radius", "1/10000", "--mode", "report",
                       "--b-prime", "1/8", "--b-prime", "1/16")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["bounds_at_b_prime"]) == 2
    assert set(doc["bounds_at_b_prime"]) == {"1/8", "1/16"}


def test_truncate(capsys):
    code, out, _ = run(capsys, "truncate", "--window", "hat", "--b", "1/4")
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["hypothesis_values"]["N"] == 2


def test_zak_csv(capsys, tmp_path):
    target = tmp_path / "grid.csv"
    code, out, _ = run(capsys, "zak", "--window", "stepped_indicator",
                       "--csv", str(target))
    assert code == 0
    header = target.read_text().splitlines()[0]
    assert header == "x,y,re,im,modulus_sq"
    doc = json.loads(out)
    assert doc["zak_bounds"]["kind"] == "certified"


def test_oracle_deterministic(capsys):
    args = ("oracle", "--window", "hat", "--b", "1/4",
            "--budget", "15", "--m-max", "128", "--seed", "7")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["oracle"]["seed"] == 7


def test_counterexamples(capsys):
    code, out, _ = run(capsys, "counterexamples", "--scenario", "step-boundary")
    assert code == 0
    doc = json.loads(out)
    names = [s["name"] for s in doc["scenarios"]]
    assert names == ["step-boundary"]
    assert all(s["passed"] for s in doc["scenarios"])


def test_identity_check(capsys):
    code, out, _ = run(capsys, "identity-check", "--window", "hat", "--b", "1/4",
                       "--m-max", "128")
    assert code == 0
    doc = json.loads(out)
    assert doc["identity"]["passed"] is True
    assert doc["identity"]["rhs_exact"] == "28/15"


def test_usage_errors(capsys):
    # argparse handles unknown subcommands itself and exits rather than
    # returning; the wrapper pins that exit status to the usage code
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    capsys.readouterr()
    code, _, err = run(capsys, "analyze", "--window", "gaussian")
    assert code == 1
    assert "error" in err


def test_inline_window_round_trip(capsys):
    spec = json.dumps(window_to_json(builtin_window("stepped_indicator")))
    code, out, _ = run(capsys, "analyze", "--window", spec,
                       "--budget", "10", "--m-max", "128")
    assert code == 0
    doc = json.loads(out)
    assert doc["walnut_bounds"]["lower"] == "1/16"


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        '[options]\nb = "1/4"\nbudget = 10\nm_max = 128\n\n'
        '[window]\nbuiltin = "hat"\n'
    )
    code, out, _ = run(capsys, "analyze", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["walnut_bounds"]["lower"] == "2"

    monkeypatch.setenv("GABORCERT_CONFIG", str(cfg))
    code, out, _ = run(capsys, "analyze")
    assert code == 0
    assert json.loads(out)["walnut_bounds"]["lower"] == "2"


def test_flag_overrides_config(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('[window]\nbuiltin = "hat"\n\n[options]\nb = "1/4"\n')
    code, out, _ = run(capsys, "analyze", "--config", str(cfg),
                       "--window", "indicator", "--b", "1",
                       "--budget", "10", "--m-max", "128")
    assert code == 0
    assert json.loads(out)["walnut_bounds"]["lower"] == "1"


def test_output_to_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "truncate", "--window", "hat", "--b", "1/4",
                       "--output", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["certificate"]["passed"] is True
