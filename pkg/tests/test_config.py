"""Tests for settings, experiment configuration and unit parsing."""

import math
from pathlib import Path

import pytest
from assertpy import assert_that

from mimowpt.config import GridSettings, Settings, SolverSettings
from mimowpt.exceptions import ConfigurationError
from mimowpt.harness import ExperimentKind, config_from_dict, load_config
from mimowpt.rectenna import REFERENCE_PARAMS
from mimowpt.utils import db_to_linear, dbm_to_watt, linear_to_db, parse_power, watt_to_dbm

SAMPLE_CONFIG = """\
experiment:
  kind: ne_sweep
  realizations: 5
  seed: 3
  n_t: [2]
  n_e: [1, 2, 4]
  p_x: ["10 W", "40 dBm", 5]
channel:
  distance: 10.0
  rician_k: 1.0
grid:
  step: 0.5
  size: 40
solver:
  eps_sca: 1e-4
  n_restarts: 2
  backends: [clarabel, scs]
output:
  path: out/results.csv
"""


@pytest.fixture
def settings():
    return Settings()


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "experiment.yaml"
    path.write_text(text, encoding="utf-8")
    return path


# =============================================================================
# Settings
# =============================================================================


class TestSettings:
    """Environment-driven defaults."""

    def test_defaults(self):
        s = Settings()
        assert_that(s.solver.backends).is_equal_to(("CLARABEL", "SCS"))
        assert_that(s.solver.eps_sca).is_equal_to(1e-3)
        assert_that(s.grid.step * s.grid.size).is_close_to(100.0, 1e-12)
        assert_that(s.workers).is_equal_to(1)

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("MIMOWPT_SOLVERS", "scs, clarabel")
        monkeypatch.setenv("MIMOWPT_EPS_SCA", "1e-5")
        monkeypatch.setenv("MIMOWPT_GRID_SIZE", "200")
        monkeypatch.setenv("MIMOWPT_WORKERS", "0")
        monkeypatch.setenv("MIMOWPT_LOG_FORMAT", "console")
        s = Settings.from_env()
        assert_that(s.solver.backends).is_equal_to(("SCS", "CLARABEL"))
        assert_that(s.solver.eps_sca).is_equal_to(1e-5)
        assert_that(s.grid.size).is_equal_to(200)
        assert_that(s.workers).is_equal_to(1)
        assert_that(s.logging.format).is_equal_to("console")

    def test_from_env_ignores_garbage(self, monkeypatch):
        monkeypatch.setenv("MIMOWPT_RESTARTS", "many")
        monkeypatch.setenv("MIMOWPT_GRID_STEP", "wide")
        s = Settings.from_env()
        assert_that(s.solver.n_restarts).is_equal_to(3)
        assert_that(s.grid.step).is_equal_to(0.1)

    def test_merge_nested(self):
        base = Settings()
        merged = base.merge({"solver": {"n_restarts": 5, "backends": "scs"}, "seed": 9, "bogus": 1})
        assert_that(merged.solver.n_restarts).is_equal_to(5)
        assert_that(merged.solver.backends).is_equal_to(("SCS",))
        assert_that(merged.seed).is_equal_to(9)
        assert_that(base.solver.n_restarts).is_equal_to(3)
        assert_that(merged).is_not_same_as(base)


# =============================================================================
# Units
# =============================================================================


class TestUnits:
    """dB, dBm and power strings."""

    @pytest.mark.parametrize(
        "text, watts",
        [("10", 10.0), ("10 W", 10.0), ("250 mW", 0.25), ("40 dBm", 10.0), ("30dBm", 1.0), (2, 2.0)],
    )
    def test_parse_power(self, text, watts):
        assert_that(parse_power(text)).is_close_to(watts, 1e-12)

    @pytest.mark.parametrize("text", ["ten watts", "-1 W", "1 kW", True])
    def test_parse_power_rejects(self, text):
        with pytest.raises(ConfigurationError):
            parse_power(text)

    def test_conversions(self):
        assert_that(dbm_to_watt(0.0)).is_close_to(1e-3, 1e-18)
        assert_that(watt_to_dbm(1.0)).is_close_to(30.0, 1e-12)
        assert_that(watt_to_dbm(0.0)).is_equal_to(-math.inf)
        assert_that(db_to_linear(linear_to_db(123.0))).is_close_to(123.0, 1e-9)
        assert_that(linear_to_db(0.0)).is_equal_to(-math.inf)


# =============================================================================
# Experiment configuration
# =============================================================================


class TestLoadConfig:
    """YAML experiment files."""

    def test_defaults_without_file(self, settings):
        config = load_config(None, settings)
        assert_that(config.kind).is_equal_to(ExperimentKind.BUDGET_SWEEP)
        assert_that(config.params).is_equal_to(REFERENCE_PARAMS)
        assert_that(config.p_x).is_equal_to((10.0,))
        assert_that(config.output).is_none()

    def test_sample_file(self, tmp_path, settings):
        config = load_config(_write(tmp_path, SAMPLE_CONFIG), settings)
        assert_that(config.kind).is_equal_to(ExperimentKind.NE_SWEEP)
        assert_that(config.n_e).is_equal_to((1, 2, 4))
        assert_that(config.realizations).is_equal_to(5)
        assert_that(config.seed).is_equal_to(3)
        assert_that(config.p_x[0]).is_equal_to(10.0)
        assert_that(config.p_x[1]).is_close_to(10.0, 1e-12)
        assert_that(config.p_x[2]).is_equal_to(5.0)
        assert_that(config.grid).is_equal_to(GridSettings(step=0.5, size=40))
        assert_that(config.max_budget).is_equal_to(20.0)
        assert_that(config.output).is_equal_to(Path("out/results.csv"))

    def test_exponent_without_dot_is_a_number(self, tmp_path, settings):
        """PyYAML leaves 1e-4 as a string; it still becomes a float."""
        config = load_config(_write(tmp_path, SAMPLE_CONFIG), settings)
        assert_that(config.solver.eps_sca).is_equal_to(1e-4)
        assert_that(config.solver.n_restarts).is_equal_to(2)
        assert_that(config.solver.backends).is_equal_to(("CLARABEL", "SCS"))

    def test_unspecified_solver_values_come_from_settings(self, settings):
        tuned = settings.merge({"solver": {"sca_max_iter": 17}, "workers": 4})
        config = config_from_dict({"solver": {"eps_sca": 1e-2}}, tuned)
        assert_that(config.solver.sca_max_iter).is_equal_to(17)
        assert_that(config.solver.eps_sca).is_equal_to(1e-2)
        assert_that(config.workers).is_equal_to(4)

    def test_circuit_block(self, settings):
        circuit = dict(mu=1.0, v_t=0.025, i_s=5e-6, r_s=0.0, r_l=1e4, re_inv_za=1600.0, a_s_sq=25e-6)
        config = config_from_dict({"rectenna": {"circuit": circuit}}, settings)
        assert_that(config.params.a).is_close_to(2.0, 1e-12)
        assert_that(config.params.b).is_close_to(1.0, 1e-12)

    def test_partial_rectenna_override(self, settings):
        config = config_from_dict({"rectenna": {"a_s_sq": "1e-5"}}, settings)
        assert_that(config.params.a_s_sq).is_equal_to(1e-5)
        assert_that(config.params.a).is_equal_to(REFERENCE_PARAMS.a)

    def test_pure_los(self, settings):
        config = config_from_dict({"channel": {"rician_k": "inf"}}, settings)
        assert_that(config.rician_k).is_equal_to(math.inf)
        assert_that(config.describe()["rician_k"]).is_equal_to("inf")

    @pytest.mark.parametrize(
        "data",
        [
            {"plotting": {}},
            {"experiment": {"kind": "sideways"}},
            {"experiment": {"realizations": 0}},
            {"experiment": {"n_e": [0]}},
            {"experiment": {"p_x": ["-3 W"]}},
            {"experiment": {"seed": 1.5}},
            {"channel": {"distance": "far"}},
            {"channel": {"distance": -2.0}},
            {"rectenna": {"c": 1.0}},
            {"rectenna": {"a": -1.0}},
            {"rectenna": {"circuit": {"mu": 1.0, "flux": 2.0}}},
            {"solver": {"eps_sca": 0.0}},
            {"grid": [1]},
            {"grid": {"step": 0.01, "size": 10}, "experiment": {"p_x": [1.0]}},
        ],
    )
    def test_invalid(self, settings, data):
        with pytest.raises(ConfigurationError):
            config_from_dict(data, settings)

    def test_budget_beyond_grid_names_the_fix(self, settings):
        with pytest.raises(ConfigurationError) as exc:
            config_from_dict({"experiment": {"p_x": [150.0]}}, settings)
        assert_that(str(exc.value)).contains("grid.size")

    def test_missing_file(self, tmp_path, settings):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "absent.yaml", settings)

    def test_not_yaml(self, tmp_path, settings):
        with pytest.raises(ConfigurationError):
            load_config(_write(tmp_path, "experiment: [unclosed\n"), settings)

    def test_root_must_be_mapping(self, tmp_path, settings):
        with pytest.raises(ConfigurationError):
            load_config(_write(tmp_path, "- 1\n- 2\n"), settings)

    def test_with_overrides(self, settings):
        config = load_config(None, settings).with_overrides(realizations=7, seed=None)
        assert_that(config.realizations).is_equal_to(7)
        assert_that(config.seed).is_equal_to(0)

    def test_solver_settings_equality(self, settings):
        assert_that(load_config(None, settings).solver).is_equal_to(SolverSettings())
