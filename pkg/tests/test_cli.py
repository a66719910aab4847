import json
import re

import pytest

from knotword.cli import build_parser, main

from conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def machine_block(text):
    m = re.search(r"```json\n(.*)\n```", text, re.S)
    assert m, text
    return json.loads(m.group(1))


class TestReduce:
    def test_partial(self, capsys):
        code, out, _ = run(capsys, "reduce", "--partial", "RSRSRSSRS")
        assert code == 0 and "R-omega-reducible" in out

    def test_irreducible(self, capsys):
        code, out, _ = run(capsys, "reduce", "--cyclic", "SS")
        assert code == 1 and "omega-irreducible" in out

    def test_punctured_word(self, capsys):
        code, out, _ = run(capsys, "reduce", "--cyclic", "SP2RSRSPSSRSS")
        assert code == 0 and machine_block(out)["verdict"] == "omega-reducible"

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "reduce", "SQ")
        assert code == 2 and "error" in err

    def test_even_partial_word(self, capsys):
        code, _, _ = run(capsys, "reduce", "--partial", "SR")
        assert code == 2

    def test_trace_roundtrip(self, capsys, tmp_path):
        code, _, _ = run(capsys, "reduce", "SRSRSRSR", "--out", tmp_path)
        assert code == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert "trace.json" in manifest["artifacts"]
        code, out, _ = run(capsys, "reduce", "--replay", tmp_path / "trace.json")
        assert code == 0 and machine_block(out)["valid"]

    def test_tampered_trace(self, capsys, tmp_path):
        run(capsys, "reduce", "SRSR", "--out", tmp_path)
        data = json.loads((tmp_path / "trace.json").read_text())
        data["steps"][0]["after"] = "SS"
        (tmp_path / "trace.json").write_text(json.dumps(data))
        code, _, _ = run(capsys, "reduce", "--replay", tmp_path / "trace.json")
        assert code == 1

    def test_missing_trace(self, capsys, tmp_path):
        code, _, _ = run(capsys, "reduce", "--replay", tmp_path / "nope.json")
        assert code == 2


class TestCheck:
    def test_valid(self, capsys):
        code, out, _ = run(capsys, "check", fixture_path("fig10_sphere.kw"))
        assert code == 0 and machine_block(out)["pass"]

    def test_violation(self, capsys):
        code, out, _ = run(capsys, "check", fixture_path("alternating_violation.kw"))
        block = machine_block(out)
        assert code == 1
        assert any(v["reducible"] is False and v["witness"] for v in block["verdicts"])

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "check", "missing.kw")
        assert code == 2

    def test_malformed_file(self, capsys):
        code, _, err = run(capsys, "check", fixture_path("dangling_reference.kw"))
        assert code == 2 and "dangling-reference" in err

    def test_emit_virtual(self, capsys, tmp_path):
        run(capsys, "check", fixture_path("fig10_sphere.kw"), "--emit-virtual", tmp_path)
        names = json.loads((tmp_path / "manifest.json").read_text())["artifacts"]
        assert len(names) == 4 and all(n.endswith(".dot") for n in names)


class TestEnumerate:
    def test_r4(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--r", 4)
        assert code == 0 and machine_block(out)["counts_by_genus"] == {"0": 1}

    @pytest.mark.parametrize("r", [5, 2, 14])
    def test_out_of_range(self, capsys, r):
        code, _, _ = run(capsys, "enumerate", "--r", r)
        assert code == 2

    def test_files_and_determinism(self, capsys, tmp_path):
        run(capsys, "enumerate", "--r", 6, "--out", tmp_path / "a")
        _, first, _ = run(capsys, "enumerate", "--r", 6, "--out", tmp_path / "b")
        _, second, _ = run(capsys, "enumerate", "--r", 6)
        assert first == second
        a = (tmp_path / "a" / "manifest.json").read_text()
        b = (tmp_path / "b" / "manifest.json").read_text()
        assert a == b
        assert {"summary.json", "r6_000.dot", "r6_000.json"} <= set(json.loads(a)["artifacts"])

    def test_jobs_do_not_change_output(self, capsys, monkeypatch):
        _, one, _ = run(capsys, "enumerate", "--r", 6)
        monkeypatch.setenv("KNOTWORD_JOBS", "2")
        _, two, _ = run(capsys, "enumerate", "--r", 6)
        assert one == two


class TestOther:
    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "oracle", "--max-length", 8)
        block = machine_block(out)
        assert code == 0 and block["disagreements"] == []

    def test_euler(self, capsys):
        code, out, _ = run(capsys, "euler", fixture_path("fig10_sphere.kw"))
        block = machine_block(out)
        assert code == 0 and block["euler"] == 2 and block["genus"] == 0

    def test_euler_on_sketch(self, capsys):
        code, _, _ = run(capsys, "euler", fixture_path("fig4_paired.kw"))
        assert code == 2

    def test_header_line(self, capsys):
        _, out, _ = run(capsys, "reduce", "RR")
        assert out.startswith("# knotword ")

    def test_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
