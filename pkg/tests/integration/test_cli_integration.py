"""tests/integration/test_cli_integration.py

Integration tests for the command-line surface.

Each test writes a configuration file and drives ``main`` through argv,
then reads back the JSON and CSV reports.
"""

import json

import pytest

from levyscope.cli.main import EXIT_OK, main

pytestmark = pytest.mark.integration

ATOMS = """
# two atoms and a coarse box
measure.kind = bounded
measure.atoms = 0.5:1; -0.5:1
grid.half_width = 1
grid.h = 0.1
"""


def _run(tmp_path, subcommand, text, *extra):
    path = tmp_path / f"{subcommand}.cfg"
    path.write_text(ATOMS + text, encoding="utf-8")
    out = tmp_path / subcommand
    status = main([subcommand, "--config", str(path), "--out", str(out), *extra])
    return status, out


def _load(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestStability:
    """The stability subcommand."""

    def test_constant_source_limit(self, tmp_path):
        """Test the vanishing-viscosity limit passes and is written out."""
        status, out = _run(
            tmp_path, "stability", "problem.source = 0.5\nstability.eps = 0.1; 0.05\n"
        )
        assert status == EXIT_OK
        report = _load(out / "stability.json")
        assert report["verification"]["verdict"] in ("pass", "no_contacts")
        assert list(report["members"]) == ["0.1", "0.05"]
        assert report["config"]["stability.eps"] == [0.1, 0.05]
        assert (out / "stability-limit.csv").exists()

    def test_lower_sign(self, tmp_path):
        """Test liminf* limits are audited as supersolutions."""
        status, out = _run(
            tmp_path, "stability", "problem.source = 0.5\nstability.sign = lower\n"
        )
        assert status == EXIT_OK
        assert _load(out / "stability.json")["verification"]["kind"] == "supersolution"


class TestCompare:
    """The compare subcommand."""

    @pytest.mark.parametrize(
        "problem",
        [
            "problem.kind = stationary_semilinear\nproblem.nu = 0.1\n",
            "problem.kind = parabolic_interface\nproblem.nu = 0.1\n"
            "problem.horizon = 0.05\n",
            "problem.kind = bellman\ncontrols.sigma = 0.5; 0\ncontrols.drift = 0; 1\n",
        ],
        ids=["stationary", "parabolic", "bellman"],
    )
    def test_ordering_survives(self, tmp_path, problem):
        """Test seeded ordered pairs produce no violation."""
        status, out = _run(tmp_path, "compare", problem + "compare.pairs = 4\n")
        assert status == EXIT_OK
        report = _load(out / "compare.json")
        assert report["pass"] is True
        assert report["pairs"] == 4
        assert report["violations"] == []

    def test_seed_reproducibility(self, tmp_path):
        """Test equal seeds give identical reports."""
        text = "problem.nu = 0.1\ncompare.pairs = 3\n"
        first_dir, second_dir = tmp_path / "a", tmp_path / "b"
        first_dir.mkdir()
        second_dir.mkdir()
        _, first = _run(first_dir, "compare", text, "--seed", "9")
        _, second = _run(second_dir, "compare", text, "--seed", "9")
        one, two = _load(first / "compare.json"), _load(second / "compare.json")
        assert one["config"]["run.seed"] == 9
        one.pop("config")
        two.pop("config")
        assert one == two


class TestSolveAndVerify:
    """Solver output and audits through argv."""

    def test_bellman_solve(self, tmp_path):
        """Test Howard output files and the summary."""
        status, out = _run(
            tmp_path,
            "solve",
            "problem.kind = bellman\ncontrols.sigma = 0.5; 0.5\n"
            "controls.source = 0; 1\n",
        )
        assert status == EXIT_OK
        summary = _load(out / "solve.json")
        assert summary["monotone_decrease"] is True
        assert summary["policy_counts"] == [21]
        policy = (out / "policy.csv").read_text(encoding="utf-8").splitlines()
        assert policy[1] == "x,control"

    def test_verify_periodic_cosine(self, tmp_path):
        """Test a periodic audit of the cosine with its manufactured source."""
        status, out = _run(
            tmp_path,
            "verify",
            "grid.extension = periodic\ncandidate.name = cosine\n"
            "candidate.k = 3.141592653589793\nverify.kind = sub\n",
        )
        assert status == EXIT_OK
        report = _load(out / "verify.json")
        assert report["kind"] == "subsolution"
        assert report["verdict"] == "pass"
        assert report["config"]["grid.extension"] == "periodic"
