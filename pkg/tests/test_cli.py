import json

import pytest

from planeflow.cli import parse_complex, run_cli
from planeflow.reports import load_schema, validate_report


def run(argv, capsys):
    code = run_cli(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseComplex:
    def test_pair(self):
        assert parse_complex("1,3.5") == 1 + 3.5j

    def test_literal(self):
        assert parse_complex("-1+2i") == -1 + 2j
        assert parse_complex("0.5") == 0.5

    def test_nonconstant_rejected(self):
        with pytest.raises(ValueError):
            parse_complex("z+1")


class TestSimulate:
    def test_blowup_summary_line(self, tmp_path, capsys):
        code, out, _ = run(
            ["simulate", "--f", "-exp(-z)", "--z0", "0", "--kind", "holo",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert out.splitlines()[0] == "FiniteTimeBlowup T≈1.0000"
        csv = (tmp_path / "trajectory.csv").read_text().splitlines()
        assert csv[0] == "t,re_z,im_z,abs_z,step_error"

    def test_csv_row_count_matches_samples(self, tmp_path, capsys):
        code, out, _ = run(
            ["simulate", "--f", "i*z", "--z0", "1", "--json", "--csv",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        rows = (tmp_path / "trajectory.csv").read_text().splitlines()
        report = json.loads((tmp_path / "trajectory.json").read_text())
        assert len(rows) - 1 == report["n_samples"]
        validate_report(report, load_schema())

    def test_svg_written(self, tmp_path, capsys):
        code, _, _ = run(
            ["simulate", "--f", "i*z", "--z0", "1", "--svg", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        doc = (tmp_path / "trajectory.svg").read_text()
        assert doc.startswith("<svg")

    def test_usage_error_exit_2(self, capsys):
        code, _, _ = run(["simulate", "--z0"], capsys)
        assert code == 2

    def test_missing_expression_is_numerical_failure(self, capsys):
        code, _, err = run(["simulate", "--z0", "1"], capsys)
        assert code == 3
        assert "error" in err

    def test_parse_error_exit(self, tmp_path, capsys):
        code, _, err = run(
            ["simulate", "--f", "1/z", "--z0", "1", "--out", str(tmp_path)], capsys
        )
        assert code == 3
        assert "EntiretyViolation" in err


class TestSubcommands:
    def test_transit_json(self, tmp_path, capsys):
        code, out, _ = run(
            ["transit", "--G", "z^3 * (1/3)", "--start", "1", "--Xmax", "1e6",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        data = json.loads((tmp_path / "transit.json").read_text())
        validate_report(data, load_schema())
        assert abs(data["quadrature_time"] - 0.9930663) <= 1e-4
        assert data["relative_gap"] <= 1e-3

    def test_level_trace_csv(self, tmp_path, capsys):
        code, out, _ = run(
            ["level-trace", "--G", "z^2 / 2", "--start", "1", "--Xmax", "50",
             "--out", str(tmp_path), "--svg", "--json"],
            capsys,
        )
        assert code == 0
        rows = (tmp_path / "level.csv").read_text().splitlines()
        assert rows[0] == "x,re_z,im_z"
        assert len(rows) > 2
        validate_report(json.loads((tmp_path / "level.json").read_text()), load_schema())

    def test_measure_deterministic_bytes(self, tmp_path, capsys):
        files = []
        for sub in ("a", "b"):
            out_dir = tmp_path / sub
            code, _, _ = run(
                ["measure", "--f", "-exp(-z)", "--z0", "0", "--delta", "1",
                 "--N", "40", "--seed", "7", "--tmax", "20", "--svg",
                 "--out", str(out_dir)],
                capsys,
            )
            assert code == 0
            files.append(
                (
                    (out_dir / "measure.json").read_bytes(),
                    (out_dir / "measure.svg").read_bytes(),
                )
            )
        assert files[0] == files[1]

    def test_measure_svg_styles_segment(self, tmp_path, capsys):
        code, _, _ = run(
            ["measure", "--f", "-exp(-z)", "--z0", "0", "--delta", "1",
             "--N", "10", "--seed", "3", "--tmax", "20", "--svg",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        doc = (tmp_path / "measure.svg").read_text()
        assert 'class="segment"' in doc
        assert 'class="trajectory"' in doc

    def test_poly_summary(self, tmp_path, capsys):
        code, out, _ = run(
            ["poly-summary", "--coeffs", "0,0,1", "--kind", "antiholo",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert "finite" in out
        data = json.loads((tmp_path / "poly_summary.json").read_text())
        assert data["finite_transit"] is True

    def test_rubel_cli(self, tmp_path, capsys):
        code, out, _ = run(
            ["rubel", "--f", "exp(z)", "--D", "0", "--seed-point", "2",
             "--t-end", "1e18", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        data = json.loads((tmp_path / "rubel.json").read_text())
        validate_report(data, load_schema())
        assert data["monotone"] is True

    def test_classify_output(self, tmp_path, capsys):
        code, out, _ = run(
            ["classify", "--f", "z^2", "--z0", "1", "--radius", "100",
             "--json", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert "escape time" in out
        data = json.loads((tmp_path / "classify.json").read_text())
        assert data["conclusive"] is True
