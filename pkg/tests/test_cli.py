import math
from pathlib import Path

import numpy as np
import pytest

from wormsim.cli import UsageError, _parse_list, build_sim_config, main, \
    parse_kv_file
from wormsim.kinetics import Constant, MaxwellBoltzmann2D
from wormsim.units import parse_length


SMALL_CONFIG = """\
# fast supercritical test setup
n = 300
density = "2e-3 /m^2"
radius = "5 m"
p = 0.2
delta = "1 /day"
speed = "2 km/day"
t_end = "0.5 day"
dt = "0.001 day"
seed = 7
initial_infected = 3
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.txt"
    path.write_text(SMALL_CONFIG)
    return path


class TestKvParsing:
    def test_comments_and_quotes(self, config_file):
        kv = parse_kv_file(config_file)
        assert kv["density"] == "2e-3 /m^2"
        assert kv["n"] == "300"
        assert "fast" not in " ".join(kv)

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("just some words\n")
        with pytest.raises(UsageError):
            parse_kv_file(path)

    def test_build_config_units(self, config_file):
        cfg = build_sim_config(parse_kv_file(config_file))
        assert cfg.n == 300
        assert cfg.rho == pytest.approx(2e-3)
        assert cfg.R == 5.0
        assert isinstance(cfg.speed, Constant)
        assert cfg.speed.mean == 2000.0
        assert cfg.dt == pytest.approx(0.001)

    def test_missing_keys(self):
        with pytest.raises(UsageError, match="missing config keys"):
            build_sim_config({"n": "100"})

    def test_maxwell_model(self, config_file):
        kv = parse_kv_file(config_file)
        kv["speed_model"] = "maxwell"
        cfg = build_sim_config(kv)
        assert isinstance(cfg.speed, MaxwellBoltzmann2D)

    def test_unknown_speed_model(self, config_file):
        kv = parse_kv_file(config_file)
        kv["speed_model"] = "levy"
        with pytest.raises(UsageError):
            build_sim_config(kv)


class TestParseList:
    def test_shared_trailing_unit(self):
        assert _parse_list("10 20 40 m", parse_length) == [10.0, 20.0, 40.0]

    def test_comma_separated(self):
        assert _parse_list("10, 20, 40", parse_length) == [10.0, 20.0, 40.0]

    def test_per_element_units(self):
        assert _parse_list("10m 1km", parse_length) == [10.0, 1000.0]

    def test_empty(self):
        with pytest.raises(UsageError):
            _parse_list("   ", parse_length)
        with pytest.raises(UsageError):
            _parse_list("m", parse_length)


class TestAnalytic:
    def test_reference_parameters(self, capsys, tmp_path):
        csv = tmp_path / "report.csv"
        rc = main(["analytic", "--density", "3000 /km^2", "--speed", "2 km/day",
                   "--radius", "5 m", "--p", "0.1", "--delta", "1 /day",
                   "--csv", str(csv)])
        assert rc == 0
        out = capsys.readouterr().out
        values = {}
        for line in out.splitlines()[1:]:
            parts = line.split()
            if len(parts) >= 2:
                try:
                    values[parts[0]] = float(parts[1])
                except ValueError:
                    pass
        assert values["contact_rate"] == pytest.approx(240.0 / math.pi, rel=1e-4)
        assert values["beta_chord"] == pytest.approx(6.0, rel=1e-6)
        assert values["critical_density"] == pytest.approx(5e-4, rel=1e-6)
        assert values["r0_basic"] == pytest.approx(24.0 / math.pi, rel=1e-4)
        assert values["final_size_fraction_basic"] == pytest.approx(0.99948, abs=1e-3)
        assert "epidemic possible" in out
        lines = csv.read_text().splitlines()
        assert lines[0] == "quantity,value,unit"
        assert any(line.startswith("beta_basic,") for line in lines)

    def test_below_threshold_verdict(self, capsys):
        rc = main(["analytic", "--density", "100 /km^2", "--speed", "2 km/day",
                   "--radius", "5 m", "--p", "0.1", "--delta", "1 /day"])
        assert rc == 0
        assert "no epidemic" in capsys.readouterr().out

    def test_bad_unit_exit_code(self, capsys):
        rc = main(["analytic", "--density", "3000 /acre", "--speed", "2 km/day",
                   "--radius", "5 m", "--p", "0.1", "--delta", "1 /day"])
        assert rc == 1
        assert "error" in capsys.readouterr().err


class TestSimulate:
    def test_outputs_and_manifest_round_trip(self, config_file, tmp_path, capsys):
        out1 = tmp_path / "a"
        rc = main(["simulate", "--config", str(config_file), "--out", str(out1)])
        assert rc == 0
        series = sorted(out1.glob("run_*_series.csv"))
        events = sorted(out1.glob("run_*_events.csv"))
        manifests = sorted(out1.glob("run_*_manifest.txt"))
        assert len(series) == len(events) == len(manifests) == 1
        assert series[0].read_text().splitlines()[0] == "t,s,i,p"
        assert events[0].read_text().splitlines()[0] == "t,source,target,impact_m"

        # the manifest is itself a config file reproducing the run exactly
        out2 = tmp_path / "b"
        rc = main(["simulate", "--config", str(manifests[0]), "--out", str(out2)])
        assert rc == 0
        series2 = sorted(out2.glob("run_*_series.csv"))
        assert series[0].read_bytes() == series2[0].read_bytes()
        events2 = sorted(out2.glob("run_*_events.csv"))
        assert events[0].read_bytes() == events2[0].read_bytes()

    def test_override_changes_run(self, config_file, tmp_path):
        rc = main(["simulate", "--config", str(config_file),
                   "--seed", "99", "--out", str(tmp_path)])
        assert rc == 0
        assert len(list(tmp_path.glob("run_*_99_series.csv"))) == 1

    def test_generated_seed_warning(self, config_file, tmp_path, capsys):
        text = "\n".join(line for line in SMALL_CONFIG.splitlines()
                         if not line.startswith("seed"))
        noseed = tmp_path / "noseed.txt"
        noseed.write_text(text)
        rc = main(["simulate", "--config", str(noseed), "--out", str(tmp_path)])
        assert rc == 0
        assert "generated seed" in capsys.readouterr().err

    def test_invalid_config_lists_violations(self, config_file, tmp_path, capsys):
        rc = main(["simulate", "--config", str(config_file), "--p", "2.0",
                   "--t-end", "-1 day", "--out", str(tmp_path)])
        assert rc == 1
        err = capsys.readouterr().err
        assert "config error" in err

    def test_missing_required_keys(self, tmp_path, capsys):
        rc = main(["simulate", "--n", "100", "--out", str(tmp_path)])
        assert rc == 1
        assert "missing config keys" in capsys.readouterr().err


class TestExperiment:
    def test_unknown_name(self, capsys):
        rc = main(["experiment", "frobnicate"])
        assert rc == 1
        assert "unknown experiment" in capsys.readouterr().err

    def test_rsweep_requires_radii(self, config_file, capsys):
        rc = main(["experiment", "rsweep", "--spec", str(config_file),
                   "--runs", "1"])
        assert rc == 1
        assert "radii" in capsys.readouterr().err

    def test_compare_writes_outputs(self, config_file, tmp_path, capsys):
        out = tmp_path / "exp"
        rc = main(["experiment", "compare", "--spec", str(config_file),
                   "--runs", "2", "--out", str(out)])
        assert rc == 0
        csvs = list(out.glob("compare_*.csv"))
        summaries = list(out.glob("compare_*_summary.txt"))
        manifests = list(out.glob("compare_*_manifest.txt"))
        assert len(csvs) == len(summaries) == len(manifests) == 1
        assert csvs[0].read_text().startswith("label,beta_model,linf_norm")
        assert "linf_norm" in summaries[0].read_text()
        assert "runs = 2" in manifests[0].read_text()

    def test_contact_rate_summary(self, tmp_path, capsys):
        spec = tmp_path / "spec.txt"
        spec.write_text(SMALL_CONFIG + 't_obs = "0.2 day"\n')
        out = tmp_path / "exp"
        rc = main(["experiment", "contact-rate", "--spec", str(spec),
                   "--out", str(out)])
        assert rc == 0
        text = next(out.glob("contact_rate_*_summary.txt")).read_text()
        assert "empirical_contact_rate" in text
        assert "analytic_contact_rate" in text

    def test_threshold_csv(self, tmp_path):
        spec = tmp_path / "spec.txt"
        spec.write_text(SMALL_CONFIG.replace('delta = "1 /day"',
                                             'delta = "4 /day"')
                        + 'factors = "0.25 4.0"\n')
        out = tmp_path / "exp"
        rc = main(["experiment", "threshold", "--spec", str(spec),
                   "--runs", "3", "--out", str(out)])
        assert rc == 0
        lines = next(out.glob("threshold_*[0-9].csv")).read_text().splitlines()
        assert lines[0].startswith("density_factor,rho_per_m2")
        assert len(lines) == 3
