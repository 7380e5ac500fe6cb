"""
test_cli.py - End-to-end runs of the zaremba command line.
"""

import orjson
import pytest  # type: ignore

from main import main
from spectral.disk_spectrum import DiskModel, find_eigenvalues


def read_report(path):
    return orjson.loads(path.read_bytes())


def read_table(path):
    lines = path.read_text().splitlines()
    return lines[0], lines[1].split(","), [line.split(",") for line in lines[2:]]


class TestSpectrum:
    @pytest.mark.integration
    def test_spectrum_table(self, tmp_path):
        out, rep = tmp_path / "spectrum.csv", tmp_path / "report.json"
        code = main(
            ["spectrum", "--kmin", "0", "--kmax", "2", "--count", "5", "--output", str(out), "--report", str(rep)]
        )
        assert code == 0
        header, columns, rows = read_table(out)
        report = read_report(rep)
        assert header == f"# config_hash={report['config_hash']} seed=0"
        assert columns == ["k", "nu", "mu", "lambda_sq", "boundary_residual", "norm_hd"]
        assert len(rows) == 15
        assert report["passed"] and not report["partial"]
        assert report["artifacts"] == [str(out)]
        assert report["results"]["rows"] == 15

    @pytest.mark.integration
    def test_identical_runs_give_identical_tables(self, tmp_path, capsys):
        args = ["spectrum", "--d", "0.5", "--rho", "0.25", "--kmax", "1", "--count", "4"]
        assert main(args + ["--report", str(tmp_path / "a.json")]) == 0
        first = capsys.readouterr().out
        assert main(args + ["--report", str(tmp_path / "b.json")]) == 0
        second = capsys.readouterr().out
        assert first.startswith("# config_hash=")
        assert first == second

    @pytest.mark.integration
    def test_empty_config_file(self, tmp_path):
        config, out, rep = tmp_path / "empty.json", tmp_path / "out.csv", tmp_path / "report.json"
        config.write_text("")
        code = main(["spectrum", "--config", str(config), "--output", str(out), "--report", str(rep)])
        assert code == 2
        assert not out.exists()
        report = read_report(rep)
        assert report["partial"]
        assert report["errors"][0]["code"] == "CFG001"

    @pytest.mark.integration
    def test_out_of_range_rho(self, tmp_path):
        rep = tmp_path / "report.json"
        assert main(["spectrum", "--rho", "0.8", "--report", str(rep)]) == 2
        assert "rho" in read_report(rep)["errors"][0]["message"]

    @pytest.mark.integration
    def test_bad_tolerance_override(self, tmp_path):
        rep = tmp_path / "report.json"
        assert main(["spectrum", "--tol", "boundary_residual=tiny", "--report", str(rep)]) == 2


class TestCheckEllipticity:
    @pytest.mark.integration
    def test_constant_coefficients(self, tmp_path):
        config, out, rep = tmp_path / "run.json", tmp_path / "rays.csv", tmp_path / "report.json"
        config.write_bytes(orjson.dumps({"coefficients": {"preset": "constant", "value": [1.0, 0.0]}}))
        code = main(
            [
                "check-ellipticity", "--config", str(config), "--scan-rays", "8",
                "--output", str(out), "--report", str(rep),
            ]
        )
        assert code == 0
        _, columns, rows = read_table(out)
        assert columns == ["phi_gamma", "theta1", "eta"]
        assert len(rows) == 8
        results = read_report(rep)["results"]
        assert results["ray_source"] == "optimal"
        assert results["ray"]["theta1"] == pytest.approx(1.0)
        assert results["embedding_exponent"] == "0.5 - eps"

    @pytest.mark.integration
    def test_missing_coefficients(self, tmp_path):
        rep = tmp_path / "report.json"
        assert main(["check-ellipticity", "--report", str(rep)]) == 2


class TestExpand:
    @pytest.mark.integration
    def test_constant_preset(self, tmp_path):
        out, curve, rep = tmp_path / "coeffs.csv", tmp_path / "curve.csv", tmp_path / "report.json"
        code = main(
            [
                "expand", "--preset", "one", "--K", "0", "--N", "10",
                "--output", str(out), "--remainder-output", str(curve), "--report", str(rep),
            ]
        )
        assert code == 0
        _, columns, rows = read_table(out)
        assert columns == ["k", "nu", "re", "im"]
        assert len(rows) == 10
        _, _, remainders = read_table(curve)
        values = [float(row[1]) for row in remainders]
        assert values == sorted(values, reverse=True)

    @pytest.mark.integration
    def test_scattered_input(self, tmp_path):
        samples = tmp_path / "f.csv"
        lines = ["x1,x2,re,im"]
        for x1 in (-1.0, -0.5, 0.0, 0.5, 1.0):
            for x2 in (-1.0, -0.5, 0.0, 0.5, 1.0):
                lines.append(f"{x1},{x2},{x1},0")
        samples.write_text("\n".join(lines) + "\n")
        rep = tmp_path / "report.json"
        code = main(
            ["expand", "--input", str(samples), "--K", "1", "--N", "5", "--output", str(tmp_path / "c.csv"),
             "--report", str(rep)]
        )
        assert code == 0
        assert read_report(rep)["results"]["remainder"] < 0.1


class TestPencil:
    @pytest.mark.integration
    def test_char_values(self, tmp_path):
        out, rep = tmp_path / "cv.csv", tmp_path / "report.json"
        code = main(["pencil", "--char-values", "--K", "1", "--N", "3", "--output", str(out), "--report", str(rep)])
        assert code == 0
        _, columns, rows = read_table(out)
        assert columns[:2] == ["lambda_re", "lambda_im"]
        assert len(rows) == 18
        assert read_report(rep)["results"]["dim"] == 9

    @pytest.mark.integration
    def test_solve_at_characteristic_lambda(self, tmp_path, quad):
        mu1 = find_eigenvalues(DiskModel(), 0, 1, quad)[0].mu
        out, rep = tmp_path / "u.csv", tmp_path / "report.json"
        code = main(
            [
                "pencil", "--solve", "--K", "0", "--N", "3", "--lambda", f"0+{mu1!r}i",
                "--output", str(out), "--report", str(rep),
            ]
        )
        assert code == 1
        assert not out.exists()
        report = read_report(rep)
        assert report["partial"]
        assert report["errors"][0]["type"] == "CharacteristicLambda"

    @pytest.mark.integration
    def test_solve_regular_lambda(self, tmp_path):
        out, rep = tmp_path / "u.csv", tmp_path / "report.json"
        code = main(
            ["pencil", "--solve", "--K", "0", "--N", "3", "--lambda", "0.5", "--output", str(out), "--report", str(rep)]
        )
        assert code == 0
        _, columns, rows = read_table(out)
        assert columns == ["index", "re", "im"]
        assert len(rows) == 3

    @pytest.mark.integration
    def test_saved_family_is_reloaded(self, tmp_path):
        family = tmp_path / "family.json"
        rep = tmp_path / "report.json"
        args = ["pencil", "--double-completeness", "--K", "1", "--N", "2", "--report", str(rep)]
        assert main(args + ["--save-family", str(family), "--encoding", "base64"]) == 0
        assert family.exists()
        first = read_report(rep)["results"]
        assert main(["pencil", "--double-completeness", "--family", str(family), "--report", str(rep)]) == 0
        second = read_report(rep)["results"]
        assert first["rank"] == second["rank"] == 12

    @pytest.mark.integration
    def test_ray_scan(self, tmp_path):
        out, rep = tmp_path / "scan.csv", tmp_path / "report.json"
        code = main(
            ["pencil", "--ray-scan", "--K", "1", "--N", "3", "--phi", "0", "--moduli", "1:10:10",
             "--output", str(out), "--report", str(rep)]
        )
        assert code == 0
        _, _, rows = read_table(out)
        assert len(rows) == 10
        assert read_report(rep)["results"]["p1"] >= 0.9


class TestVerify:
    @pytest.mark.acceptance
    def test_rayleigh_suite(self, tmp_path):
        out, rep = tmp_path / "checks.csv", tmp_path / "report.json"
        code = main(
            ["verify", "--suite", "rayleigh", "--d", "0.5", "--rho", "0.5", "--output", str(out), "--report", str(rep)]
        )
        assert code == 0
        _, columns, rows = read_table(out)
        assert columns == ["name", "value", "tolerance", "passed", "gated"]
        assert [row[0] for row in rows] == ["rayleigh[paper_eq_unit]", "rayleigh[derived_from_B]"]

    @pytest.mark.acceptance
    def test_rayleigh_suite_in_normal_form(self, tmp_path):
        rep = tmp_path / "report.json"
        args = ["verify", "--suite", "rayleigh", "--d", "0.5", "--rho", "0.25", "--form", "normal"]
        assert main(args + ["--output", str(tmp_path / "c.csv"), "--report", str(rep)]) == 0
        report = read_report(rep)
        assert report["inputs"]["form"] == "normal"
        assert all(check["passed"] for check in report["checks"])

    @pytest.mark.acceptance
    def test_orthogonality_suite(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(["verify", "--suite", "orthogonality", "--rho", "0.25", "--output", str(tmp_path / "c.csv"),
                     "--report", str(rep)])
        assert code == 0
        names = {check["name"] for check in read_report(rep)["checks"]}
        assert names == {"gram_offdiagonal", "boundary_residual", "ode_residual"}

    @pytest.mark.acceptance
    def test_corners_suite(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(["verify", "--suite", "corners", "--output", str(tmp_path / "c.csv"), "--report", str(rep)])
        assert code == 0
        outliers = read_report(rep)["results"]["perturbed_outliers"]
        assert outliers["N"] == outliers["N+10"]

    @pytest.mark.acceptance
    def test_rayscan_suite(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(["verify", "--suite", "rayscan", "--output", str(tmp_path / "c.csv"), "--report", str(rep)])
        assert code == 0

    @pytest.mark.acceptance
    def test_completeness_suite(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(["verify", "--suite", "completeness", "--output", str(tmp_path / "c.csv"), "--report", str(rep)])
        assert code == 0

    @pytest.mark.acceptance
    def test_tightened_tolerance_fails_the_run(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(
            ["verify", "--suite", "rayleigh", "--tol", "rayleigh=0", "--output", str(tmp_path / "c.csv"),
             "--report", str(rep)]
        )
        assert code == 1
        assert not read_report(rep)["passed"]

    @pytest.mark.integration
    def test_unknown_suite_from_config(self, tmp_path):
        config, rep = tmp_path / "run.json", tmp_path / "report.json"
        config.write_bytes(orjson.dumps({"suite": "spiral"}))
        assert main(["verify", "--config", str(config), "--report", str(rep)]) == 2
        assert read_report(rep)["errors"][0]["code"] == "CFG002"

    @pytest.mark.slow
    def test_decay_suite_only_warns(self, tmp_path):
        rep = tmp_path / "report.json"
        code = main(["verify", "--suite", "decay", "--output", str(tmp_path / "c.csv"), "--report", str(rep)])
        assert code == 0
        check = read_report(rep)["checks"][0]
        assert check["name"] == "decay_slope" and check["gated"] is False
