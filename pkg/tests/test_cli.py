"""End-to-end command-line interface behaviour and exit codes."""

import json

import pytest

from soslen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFieldInfo:
    def test_biquadratic(self, capsys):
        code, out, _ = run(capsys, "field", "info", "Q(sqrt 10, sqrt 17)")
        assert code == 0
        assert "degree: 4" in out
        assert "discriminant: 462400" in out
        assert "1/2 + 0*sqrt(10) + 1/2*sqrt(17) + 0*sqrt(170)" in out

    def test_bad_descriptor(self, capsys):
        code, _, err = run(capsys, "field", "info", "Q(sqrt 12)")
        assert code == 2
        assert "input error" in err


class TestElemLength:
    def test_quartic_witness(self, capsys):
        code, out, _ = run(
            capsys,
            "elem", "length", "Q(sqrt 6, sqrt 7)",
            "--coords", "43,1,-8,1", "--max-squares", "8",
        )
        assert code == 0 and "length: 7" in out

    def test_non_integral_input(self, capsys):
        code, _, err = run(
            capsys, "elem", "length", "Q(sqrt 17)", "--coords", "1/2,1"
        )
        assert code == 2

    def test_not_sos(self, capsys):
        code, out, _ = run(
            capsys, "elem", "length", "Q(sqrt 6)", "--coords", "1,1"
        )
        assert code == 1 and "not a sum of squares" in out

    def test_exceeds_bound(self, capsys):
        code, out, _ = run(
            capsys, "elem", "length", "Q", "--coords", "7", "--max-squares", "3"
        )
        assert code == 1 and "exceeds 3" in out

    def test_certificate_output(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        code, out, _ = run(
            capsys,
            "elem", "length", "Q", "--coords", "10", "--cert-out", str(path),
        )
        assert code == 0
        code2, out2, _ = run(capsys, "verify", "--cert-in", str(path))
        assert code2 == 0 and "verified" in out2


class TestFormCommands:
    def test_form_length(self, capsys):
        code, out, _ = run(
            capsys,
            "form", "length", "Q", "--gram", "2;1;1", "--max-squares", "5",
        )
        assert code == 0 and "length: 2" in out

    def test_form_represent_yes(self, capsys):
        code, out, _ = run(
            capsys, "form", "represent", "Q", "--gram", "1;0;1", "--squares", "2"
        )
        assert code == 0 and "represented with 2 squares" in out

    def test_form_represent_no(self, capsys):
        code, out, _ = run(
            capsys, "form", "represent", "Q", "--gram", "7", "--squares", "3"
        )
        assert code == 1 and "no representation" in out

    def test_form_not_psd(self, capsys):
        code, out, _ = run(
            capsys, "form", "represent", "Q", "--gram", "1;2;1", "--squares", "4"
        )
        assert code == 1 and "not totally positive semidefinite" in out

    def test_bad_triangle(self, capsys):
        code, _, err = run(
            capsys, "form", "length", "Q", "--gram", "1;2", "--max-squares", "4"
        )
        assert code == 2


class TestDescendVerify:
    def test_descend_pipeline(self, capsys, tmp_path):
        path = tmp_path / "in.json"
        path.write_text(
            '{"field":"Q(sqrt 2)","format_version":1,"gram":["10 + 0*sqrt(2)"],'
            '"rows":[["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],'
            '["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],'
            '["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],["1 + 0*sqrt(2)"],'
            '["1 + 0*sqrt(2)"]]}\n'
        )
        code, out, _ = run(capsys, "descend", "--cert-in", str(path))
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) <= 5
        out_path = tmp_path / "out.json"
        out_path.write_text(out)
        code2, out2, _ = run(capsys, "verify", "--cert-in", str(out_path))
        assert code2 == 0

    def test_descend_rejects_bad_certificate(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"field":"Q","format_version":1,"gram":["2"],"rows":[["3"]]}\n'
        )
        code, out, _ = run(capsys, "descend", "--cert-in", str(path))
        assert code == 1 and "does not verify" in out

    def test_verify_schema_error(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{}")
        code, _, err = run(capsys, "verify", "--cert-in", str(path))
        assert code == 2

    def test_verify_missing_file(self, capsys):
        code, _, err = run(capsys, "verify", "--cert-in", "/nonexistent.json")
        assert code == 2


class TestSuiteCli:
    def test_single_case_with_report(self, capsys, tmp_path):
        report = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "suite", "run", "--case", "peters", "--n", "17",
            "--report", str(report),
        )
        assert code == 0
        assert "PASS" in out and "peters" in out
        payload = json.loads(report.read_text())
        assert payload["reports"][0]["verdict"] == "pass"

    def test_unknown_case_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["suite", "run", "--case", "nonsense"])

    def test_threads_match_serial(self, capsys, tmp_path):
        kwargs = ["suite", "run", "--case", "peters", "--case", "lemma52"]
        code1, out1, _ = run(capsys, *kwargs)
        code2, out2, _ = run(capsys, *kwargs, "--threads", "2")
        assert code1 == code2 == 0

        def strip_times(text):
            return [line.split("(")[0] for line in text.splitlines()]

        assert strip_times(out1) == strip_times(out2)


class TestGTableCli:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "gtable", "2")
        assert code == 0 and "g(2) = 5" in out
        code, out, _ = run(capsys, "gtable", "8")
        assert "g(8) <= 37" in out
        code, out, _ = run(capsys, "gtable", "9")
        assert "unknown" in out
