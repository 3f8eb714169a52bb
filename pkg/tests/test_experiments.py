"""
Integration tests: every command end to end at toy scale.
"""

import json

import pytest
import structlog

from loopsoup.core.settings import get_settings
from loopsoup.experiments import COMMANDS, split_prob
from loopsoup.experiments.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main, spec_from_args
from loopsoup.experiments.schemas import ExperimentSpec
from loopsoup.utils.logging import configure_default_logging

pytestmark = pytest.mark.integration


@pytest.fixture
def small_settings(monkeypatch):
    """Settings with a small PD reference batch."""
    monkeypatch.setenv("LOOPSOUP_PD_REFERENCE_SAMPLES", "2000")
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()


def _run(out, *argv):
    return main([*argv, "--jobs", "1", "--seed", "7", "--out", str(out)])


def _report(out):
    return json.loads((out / "report.json").read_text(encoding="utf-8"))


class TestCli:
    """Tests for argument handling."""

    def test_every_command_registered(self):
        """Test the command table."""
        assert set(COMMANDS) == {
            "verify-oracle",
            "giant-cycles",
            "balance",
            "split-prob",
            "explore-stats",
            "lemma-checks",
            "pd-invariance",
        }

    def test_defaults_then_flags(self):
        """Test that flags override command defaults."""
        args = build_parser().parse_args(["giant-cycles", "--n", "500", "--T", "1", "2"])
        spec = spec_from_args(args)
        assert spec.n == 500
        assert spec.replicas == COMMANDS["giant-cycles"].DEFAULTS["replicas"]
        assert spec.t_grid == [1.0, 2.0]
        assert spec.seed == get_settings().DEFAULT_SEED
        assert spec.poisson is False

    def test_invalid_nu(self, tmp_path):
        """Test that ν outside [0, 1] is a usage error."""
        assert _run(tmp_path, "giant-cycles", "--nu", "1.5") == EXIT_USAGE
        assert not (tmp_path / "report.json").exists()

    def test_subcritical_split_prob(self, tmp_path):
        """Test that split-prob refuses β ≤ 1."""
        assert _run(tmp_path, "split-prob", "--beta", "0.8") == EXIT_USAGE

    def test_unknown_backend(self, tmp_path):
        """Test backend validation."""
        assert _run(tmp_path, "verify-oracle", "--backend", "skiplist") == EXIT_USAGE


class TestCommands:
    """Tests running each command at toy scale."""

    def test_verify_oracle(self, tmp_path):
        """Test that the oracle agrees and the result files are written."""
        code = _run(tmp_path, "verify-oracle", "--n", "8", "--replicas", "6", "--fuzz-ops", "300")
        assert code == EXIT_OK
        for name in ("report.json", "manifest.json", "dist_oracle.csv"):
            assert (tmp_path / name).exists()
        report = _report(tmp_path)
        assert report["passed"]
        assert report["statistics"]["mismatches"] == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["seeds"]) == 6
        assert "report.json" in manifest["files"]

    def test_reproducible(self, tmp_path):
        """Test that the same seed gives the same table."""
        _run(tmp_path / "a", "giant-cycles", "--n", "200", "--replicas", "3")
        _run(tmp_path / "b", "giant-cycles", "--n", "200", "--replicas", "3")
        a = (tmp_path / "a" / "dist_giant.csv").read_text(encoding="utf-8")
        assert a == (tmp_path / "b" / "dist_giant.csv").read_text(encoding="utf-8")

    @pytest.mark.parametrize(
        "argv,table",
        [
            (["giant-cycles", "--n", "200", "--beta", "0.8", "--replicas", "4"], "dist_giant.csv"),
            (["balance", "--n", "300", "--beta", "3", "--replicas", "2", "--samples", "5"], "dist_balance.csv"),
            (
                ["split-prob", "--n", "400", "--nu", "1", "--replicas", "2", "--samples", "20", "--steps", "100"],
                "dist_split_prob.csv",
            ),
            (["explore-stats", "--n", "200", "--beta", "0.8", "--replicas", "20", "--tmax", "20", "--T", "2", "5"], "dist_explore.csv"),
            (["lemma-checks", "--n", "50", "--replicas", "5", "--s", "0", "20", "50", "--k", "1", "2"], "dist_component_cycle_gaps.csv"),
        ],
    )
    def test_small_runs(self, tmp_path, argv, table):
        """Test that each command passes its hard checks at toy scale and writes its table."""
        assert _run(tmp_path, *argv) == EXIT_OK
        assert (tmp_path / table).exists()
        report = _report(tmp_path)
        assert report["checks"]
        assert report["passed"]

    def test_supercritical_giant_cycles(self, tmp_path):
        """Test that a supercritical toy run reports the giant-cycle checks."""
        assert _run(tmp_path, "giant-cycles", "--n", "200", "--replicas", "4") in (EXIT_OK, EXIT_FAILED)
        names = {c["name"] for c in _report(tmp_path)["checks"]}
        assert {"giant_fraction", "sum_squares", "top1_mean"} <= names

    @pytest.mark.slow
    def test_pd_invariance(self, tmp_path, small_settings):
        """Test the split-merge command with a small reference batch."""
        code = _run(tmp_path, "pd-invariance", "--replicas", "10", "--steps", "4", "--eps", "0.1", "--rho", "0.1", "0.3")
        # statistical hard checks on ten replicas may fail at this scale
        assert code in (EXIT_OK, EXIT_FAILED)
        report = _report(tmp_path)
        checks = {c["name"]: c for c in report["checks"]}
        assert checks["mass_conservation"]["passed"]
        assert checks["identical_start_stays_coupled"]["passed"]
        assert {"top_two_unmatched_dominate_0.1", "top_two_unmatched_dominate_0.3", "coupled_spread_shrinks"} <= set(checks)

        coupling = report["statistics"]["coupling"]
        # ⌈0.1^{-1/2}⌉ = 4 steps: checkpoints 0, 2 and 4
        assert set(coupling) == {"t0", "t2", "t4", "uniform_q"}
        for entry in coupling.values():
            assert -1e-12 <= entry["spread"] <= 1.0
            assert 0.0 <= entry["excess_gt_0.1"] <= 1.0
            assert entry["excess_gt_0.3"] <= entry["excess_gt_0.1"]

        lines = (tmp_path / "dist_chain_R.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "replica,t,R,Q,y1,y2,z1,N_0.1"
        assert len(lines) == 1 + 10 * 5
        for line in lines[1:]:
            _, _, R, Q, y1, y2, z1, _ = map(float, line.split(","))
            assert R + Q == pytest.approx(1.0, abs=1e-9)
            assert y2 <= y1 <= R + 1e-9
            assert z1 <= R + 1e-9
        reference = (tmp_path / "pd_reference.csv").read_text(encoding="utf-8").splitlines()
        assert len(reference) == 10


class TestSplitProbability:
    """Tests for the probe target of split-prob."""

    def test_defaults_collect_ten_thousand_probes(self):
        """Test that the default run asks for 10^4 probes at n = 10^5."""
        spec = ExperimentSpec(name="split-prob", **split_prob.DEFAULTS)
        assert spec.n == 100_000
        assert spec.replicas * spec.samples >= 10_000

    def test_replica_reaches_target(self):
        """Test that a replica keeps drawing configurations until it holds its probes."""
        spec = ExperimentSpec(name="split-prob", n=400, beta=1.5, nu=0.5, samples=60, steps=100)
        result = split_prob._replica(spec, 0, 11)
        assert result["probes"] == 60
        assert result["rounds"] >= 1
        assert len(result["p_exact"]) == 60
        assert all(0.0 <= p <= 1.0 for p in result["p_exact"])
        assert 0 <= result["same"] <= 60

    def test_bar_free_probes_are_certain(self):
        """Test that without bars every exact split probability is one."""
        spec = ExperimentSpec(name="split-prob", n=400, beta=1.5, nu=1.0, samples=20, steps=100)
        result = split_prob._replica(spec, 0, 3)
        assert result["same"] == result["probes"] == 20
        assert result["p_exact"] == [1.0] * 20

    def test_rounds_need_steps(self, tmp_path):
        """Test that zero steps per round is refused."""
        assert _run(tmp_path, "split-prob", "--n", "400", "--steps", "0") == EXIT_USAGE


class TestCliLogging:
    """Tests for the log line of rejected parameters."""

    @pytest.fixture(autouse=True)
    def _quiet_afterwards(self):
        yield
        structlog.reset_defaults()
        configure_default_logging()

    @staticmethod
    def _events(err):
        return [json.loads(line) for line in err.splitlines() if line.startswith("{")]

    def test_validation_error_code(self, tmp_path, capsys):
        """Test that a schema violation is logged with a validation error code."""
        assert _run(tmp_path, "giant-cycles", "--nu", "1.5", "--json-logs") == EXIT_USAGE
        events = [e for e in self._events(capsys.readouterr().err) if e["event"] == "cli.invalid_parameters"]
        assert events[0]["error_code"] == "validation_error"
        assert events[0]["command"] == "giant-cycles"

    def test_parameter_error_code(self, tmp_path, capsys):
        """Test that a refused parameter keeps the error code of its exception."""
        assert _run(tmp_path, "split-prob", "--beta", "0.8", "--json-logs") == EXIT_USAGE
        events = [e for e in self._events(capsys.readouterr().err) if e["event"] == "cli.invalid_parameters"]
        assert events[0]["error_code"] == "invalid_parameter"
