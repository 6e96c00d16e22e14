"""CLI contract tests: verbs, formats, exit codes, determinism."""

import cmath
import json
import math

import pytest

from equizeta.cli import CSV_HEADER, main, parse_complex


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestParseComplex:
    def test_forms(self):
        assert parse_complex("1") == 1.0
        assert parse_complex("-2.5") == -2.5
        assert parse_complex("0+1i") == 1j
        assert parse_complex("1i") == 1j
        assert parse_complex("-0.5-2i") == -0.5 - 2j
        assert parse_complex("3.14159i") == 3.14159j

    def test_rejects_garbage(self):
        from equizeta.cli import ConfigError

        with pytest.raises(ConfigError):
            parse_complex("two plus i")


class TestEval:
    def test_line_json(self, capsys):
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--params", "g=2,alpha=0+1i",
            "--sigma", "1", "--format", "json",
        )
        assert code == 0
        row = json.loads(out)
        want = cmath.exp(2j - 2.0) / 4.0
        assert abs(row["logR_re"] - want.real) < 1e-12
        assert abs(row["logR_im"] - want.imag) < 1e-12
        assert row["method"] == "closed"
        assert abs(row["R_modulus"] - math.exp(row["logR_re"])) < 1e-12
        assert "est_error" in row and row["est_error"] >= 0

    @pytest.mark.parametrize("theta", ["2.0943951", "2.0943951023931953"])
    def test_euclid_value(self, capsys, theta):
        code, out = run_cli(
            capsys,
            "eval", "--model", "euclid",
            "--params", f"n=3,a=1,theta={theta},order=3,l0=1,alpha_v0=0",
            "--sigma", "0",
        )
        assert code == 0
        assert abs(json.loads(out)["logR_re"] - 1.0 / 3.0) < 1e-12

    def test_sphere_closed_not_applicable(self, capsys):
        code, out = run_cli(
            capsys,
            "eval", "--model", "sphere2", "--params", "theta=1",
            "--sigma", "0", "--method", "closed",
        )
        assert code == 3
        err = json.loads(out)
        assert err["code"] == 3
        assert err["error"] == "NotApplicableError"

    def test_invalid_tol(self, capsys):
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--params", "g=2", "--sigma", "1",
            "--tol", "1",
        )
        assert code == 1
        assert json.loads(out)["code"] == 1

    def test_unknown_model(self, capsys):
        code, out = run_cli(capsys, "eval", "--model", "torus", "--params", "g=1", "--sigma", "1")
        assert code == 1

    def test_nonconvergent_exit_code(self, capsys):
        # Re(sigma) so small that the direct window breaches the term cap.
        code, out = run_cli(
            capsys,
            "eval", "--model", "circle", "--params", "r0=0.25,alpha=1i",
            "--sigma", "1e-9", "--method", "direct",
        )
        assert code == 2
        assert json.loads(out)["error"] == "NonConvergentError"

    def test_missing_param(self, capsys):
        code, out = run_cli(capsys, "eval", "--model", "line", "--sigma", "1")
        assert code == 1

    def test_env_tol_override(self, capsys, monkeypatch):
        monkeypatch.setenv("EQUIZETA_TOL", "5")
        code, out = run_cli(capsys, "eval", "--model", "line", "--params", "g=2", "--sigma", "1")
        assert code == 1
        monkeypatch.setenv("EQUIZETA_TOL", "1e-10")
        code, _ = run_cli(capsys, "eval", "--model", "line", "--params", "g=2", "--sigma", "1")
        assert code == 0

    def test_csv_and_plain_formats(self, capsys):
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--params", "g=2", "--sigma", "1",
            "--format", "csv",
        )
        assert code == 0
        assert out.splitlines()[0] == CSV_HEADER
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--params", "g=2", "--sigma", "1",
            "--format", "plain",
        )
        assert code == 0
        assert "logR=" in out and "est_error=" in out

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "model.cfg"
        cfg.write_text("g=2\nalpha=0+1i\n")
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--config", str(cfg), "--sigma", "1",
        )
        assert code == 0
        want = cmath.exp(2j - 2.0) / 4.0
        assert abs(json.loads(out)["logR_im"] - want.imag) < 1e-12


class TestSweep:
    def test_sphere_monotone(self, capsys):
        code, out = run_cli(
            capsys,
            "sweep", "--model", "sphere2", "--params", "theta=1",
            "--sigma-start", "0.2", "--sigma-end", "2", "--steps", "10",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 11
        vals = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_circle_half_matches_closed_form(self, capsys):
        code, out = run_cli(
            capsys,
            "sweep", "--model", "circle",
            "--params", "r0=0.5,alpha=" + repr(math.pi) + "i",
            "--sigma-start", "0.5", "--sigma-end", "2", "--steps", "4",
        )
        assert code == 0
        lines = out.strip().splitlines()[1:]
        assert len(lines) == 4
        for line in lines:
            parts = line.split(",")
            sigma, log_re = float(parts[0]), float(parts[2])
            # at alpha = i*pi the paired half-integer atoms cancel exactly
            series = 2.0 * sum(
                math.cos(math.pi * (n + 0.5)) * math.exp(-(n + 0.5) * sigma) / (n + 0.5)
                for n in range(200)
            )
            assert abs(log_re - 0.5 * series) < 1e-12

    def test_trivial_element_rows(self, capsys):
        code, out = run_cli(
            capsys,
            "sweep", "--model", "line", "--params", "g=0,alpha=1i",
            "--sigma-start", "1", "--sigma-end", "2", "--steps", "3",
        )
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            assert float(line.split(",")[2]) == 0.0

    def test_bad_range(self, capsys):
        code, _ = run_cli(
            capsys,
            "sweep", "--model", "line", "--params", "g=1",
            "--sigma-start", "1", "--sigma-end", "1", "--steps", "5",
        )
        assert code == 1
        code, _ = run_cli(
            capsys,
            "sweep", "--model", "line", "--params", "g=1",
            "--sigma-start", "1", "--sigma-end", "2", "--steps", "1",
        )
        assert code == 1

    def test_failing_row_aborts_with_partial_output(self, capsys):
        # the direct method hits Re(sigma) <= 0 as the range crosses zero
        code, out = run_cli(
            capsys,
            "sweep", "--model", "circle", "--params", "r0=0.25,alpha=0",
            "--sigma-start", "1", "--sigma-end", "-1", "--steps", "3",
            "--method", "direct",
        )
        assert code != 0
        lines = out.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) >= 2  # partial rows plus the error object
        assert "error" in lines[-1]


class TestFried:
    def test_line_ok(self, capsys):
        code, out = run_cli(capsys, "fried", "--model", "line", "--params", "g=2,alpha=1i")
        assert code == 0
        rep = json.loads(out)
        assert rep["applicable"] is True
        assert rep["residual_abs"] == 0.0

    def test_circle_two_route_ok(self, capsys):
        code, out = run_cli(
            capsys,
            "fried", "--model", "circle",
            "--params", "r0=0.3333333333333333,alpha=1i", "--tol", "1e-8",
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["residual_abs"] < 1e-8

    def test_sphere3_not_applicable(self, capsys):
        code, out = run_cli(
            capsys,
            "fried", "--model", "sphere3",
            "--params", "theta1=1,theta2=" + repr(math.sqrt(2.0)),
        )
        assert code == 3
        assert json.loads(out)["applicable"] is False

    def test_violation_exit_code(self, capsys):
        # an absurdly tight tolerance turns the tiny two-route residual into
        # a reported violation: exit 4, not an error object
        code, out = run_cli(
            capsys,
            "fried", "--model", "circle",
            "--params", "r0=0.25,alpha=1i", "--tol", "1e-300",
        )
        assert code == 4
        assert json.loads(out)["applicable"] is True


class TestTrace:
    def test_line_atom(self, capsys):
        code, out = run_cli(
            capsys,
            "trace", "--model", "line", "--params", "g=2,alpha=0", "--window", "10",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["window"] == 10.0
        assert payload["atoms"] == [{"l": 2.0, "coeff_re": -1.0, "coeff_im": -0.0}]

    def test_line_identity_empty(self, capsys):
        code, out = run_cli(
            capsys,
            "trace", "--model", "line", "--params", "g=0,alpha=0", "--window", "10",
        )
        assert code == 0
        assert json.loads(out)["atoms"] == []

    def test_circle_identity(self, capsys):
        code, out = run_cli(
            capsys,
            "trace", "--model", "circle", "--params", "r0=0,alpha=0",
            "--window", "2.5",
        )
        assert code == 0
        atoms = json.loads(out)["atoms"]
        assert [a["l"] for a in atoms] == [-2.0, -1.0, 1.0, 2.0]
        assert all(a["coeff_re"] == -1.0 for a in atoms)


class TestSelftestAndDeterminism:
    def test_selftest_passes(self, capsys):
        code, out = run_cli(capsys, "selftest", "--seed", "1")
        assert code == 0
        assert "suites passed" in out

    def test_output_determinism(self, capsys):
        argv = [
            "sweep", "--model", "circle", "--params", "r0=0.25,alpha=1i",
            "--sigma-start", "0.5", "--sigma-end", "2", "--steps", "6",
        ]
        _, out1 = run_cli(capsys, *argv)
        _, out2 = run_cli(capsys, *argv)
        assert out1 == out2
        code, fried1 = run_cli(
            capsys, "fried", "--model", "circle", "--params", "r0=0.25,alpha=1i"
        )
        _, fried2 = run_cli(
            capsys, "fried", "--model", "circle", "--params", "r0=0.25,alpha=1i"
        )
        assert fried1 == fried2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "row.json"
        code, out = run_cli(
            capsys,
            "eval", "--model", "line", "--params", "g=2", "--sigma", "1",
            "--output", str(target),
        )
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["method"] == "closed"
