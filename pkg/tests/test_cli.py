import json
import sys

import pytest
from click.testing import CliRunner

from src.cli import cli, main
from tests.helpers import GAUSSIAN_DOC, MIXED, NOT_A_SQUARE, Q_DOC, abstract_skeleton, fiber_doc


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)
    return _write


class TestSkeletonCommands:
    def test_finite_residue_field_is_crossed(self, runner, write):
        result = runner.invoke(cli, ["crossed", write("finite.json", abstract_skeleton({"kind": "Finite", "q": 4}))])
        assert result.exit_code == 0
        assert "Crossed (finite residue field)" in result.output

    def test_validate_reports_violations(self, runner, write):
        result = runner.invoke(cli, ["validate", write("bad.json", NOT_A_SQUARE)])
        assert result.exit_code == 1
        assert "perfect-square" in result.output

    def test_validate_valid(self, runner, write):
        result = runner.invoke(cli, ["validate", write("mixed.json", MIXED)])
        assert result.exit_code == 0
        assert "deg D = 4" in result.output

    def test_canonical(self, runner, write):
        result = runner.invoke(cli, ["canonical", write("mixed.json", MIXED)])
        assert result.exit_code == 0
        assert "deg C = 2, [D:E] = 2, deg D = 4" in result.output

    def test_json_output_parses(self, runner, write):
        result = runner.invoke(cli, ["--json", "crossed", write("mixed.json", MIXED)])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["status"] == "Crossed"
        assert "trace" not in report

    def test_trace(self, runner, write):
        path = write("cd.json", abstract_skeleton({"kind": "CdLeOne"}))
        result = runner.invoke(cli, ["--trace", "crossed", path])
        assert "[residue-field-shortcut]" in result.output

    def test_output_file(self, runner, write, tmp_path):
        target = tmp_path / "report.txt"
        result = runner.invoke(cli, ["--output", str(target), "crossed", write("mixed.json", MIXED)])
        assert result.exit_code == 0
        assert result.output == ""
        assert "Crossed (split residue class)" in target.read_text(encoding="utf-8")


class TestFiberCommands:
    def test_classify_gaussian_fiber(self, runner, write):
        result = runner.invoke(cli, ["classify-fiber", write("fiber.json", fiber_doc(GAUSSIAN_DOC))])
        assert result.exit_code == 0
        assert "NoncrossedExist, n2=5" in result.output

    def test_classify_is_deterministic(self, runner, write):
        path = write("fiber.json", fiber_doc(GAUSSIAN_DOC))
        first = runner.invoke(cli, ["--json", "--trace", "classify-fiber", path])
        second = runner.invoke(cli, ["--json", "--trace", "classify-fiber", path])
        assert first.output == second.output

    def test_rational_fiber(self, runner, write):
        result = runner.invoke(cli, ["classify-fiber", write("q.json", fiber_doc(Q_DOC))])
        assert result.exit_code == 0
        assert "AllCrossed" in result.output

    def test_witness(self, runner, write):
        result = runner.invoke(cli, ["--json", "witness", write("fiber.json", fiber_doc(GAUSSIAN_DOC)), "32",
                                     "--exclude", "5"])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["S"] == ["7", "11", "13"]

    def test_witness_rejects_bad_exclusion(self, runner, write):
        result = runner.invoke(cli, ["witness", write("fiber.json", fiber_doc(GAUSSIAN_DOC)), "32",
                                     "--exclude", "4"])
        assert result.exit_code == 1

    def test_cover_search_found(self, runner, write):
        result = runner.invoke(cli, ["--json", "cover-search", write("q.json", Q_DOC), "2",
                                     "--demand", "3:2", "--demand", "5:2", "--demand", "inf:2"])
        assert result.exit_code == 0
        assert json.loads(result.output)["cover"] == {"conductor": 3, "subgroup": [1]}

    def test_cover_search_impossible(self, runner, write):
        result = runner.invoke(cli, ["cover-search", write("q.json", Q_DOC), "3", "--demand", "inf:3"])
        assert result.exit_code == 2
        assert "Not found within bound" in result.output

    def test_cover_search_bad_demand(self, runner, write):
        result = runner.invoke(cli, ["cover-search", write("q.json", Q_DOC), "2", "--demand", "3:x"])
        assert result.exit_code == 1


class TestInputErrors:
    def test_malformed_json(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\"Z\": ", encoding="utf-8")
        result = runner.invoke(cli, ["classify-fiber", str(path)])
        assert result.exit_code == 1

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["validate", str(tmp_path / "absent.json")])
        assert result.exit_code == 1

    def test_invalid_bound(self, runner, write):
        result = runner.invoke(cli, ["--conductor-bound", "0", "validate", write("mixed.json", MIXED)])
        assert result.exit_code == 1

    def test_usage_error_through_entry_point(self, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["tame-algebra", "witness"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == 1

    def test_bound_limited_exit_through_entry_point(self, monkeypatch, write):
        monkeypatch.setattr(sys, "argv", ["tame-algebra", "cover-search", write("q.json", Q_DOC), "3",
                                          "--demand", "inf:3"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == 2
