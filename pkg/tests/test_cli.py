import json

import pytest

from itsec.cli import main
from itsec.keyagree import public_reveal
from itsec.specio import to_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_synth_then_analyze_otp(tmp_path, capsys):
    doc = tmp_path / "otp.json"
    assert run(capsys, "synth", "otp", "--n", "16", "-o", str(doc))[0] == 0
    code, out, _ = run(capsys, "analyze", str(doc), "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert all(m["lo"] == "0" and m["hi"] == "0" for m in rep["metrics"].values())


def test_counterexample_pipeline(tmp_path, capsys):
    doc = tmp_path / "ce.json"
    run(capsys, "synth", "counterexample", "--n", "4", "--eps", "1/2", "-o", str(doc))
    text = doc.read_text()
    assert '"5/8"' in text and '"1/8"' in text
    code, out, _ = run(capsys, "analyze", str(doc), "--format", "json")
    assert code == 0
    assert json.loads(out)["metrics"]["eps5"]["lo"] == "1/2"


def test_synth_is_byte_reproducible(capsys):
    a = run(capsys, "synth", "random-ds", "--n", "5", "--terms", "4", "--seed", "11")[1]
    b = run(capsys, "synth", "random-ds", "--n", "5", "--terms", "4", "--seed", "11")[1]
    assert a == b


def test_analyze_is_deterministic(tmp_path, capsys):
    doc = tmp_path / "d.json"
    run(capsys, "synth", "dodis", "--n", "8", "--param", "1/4", "-o", str(doc))
    a = run(capsys, "analyze", str(doc), "--format", "json")[1]
    b = run(capsys, "analyze", str(doc), "--format", "json")[1]
    assert a == b


def test_malformed_document_exit_one(tmp_path, capsys):
    doc = tmp_path / "bad.json"
    doc.write_text('{"type": "cipher",\n "p_k": [1/2]}')
    code, _, err = run(capsys, "analyze", str(doc))
    assert code == 1
    assert "line 2, column" in err


def test_from_matrix_rejects_non_doubly_stochastic(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text('[["1/2", "1/3"], ["1/2", "2/3"]]')
    assert run(capsys, "synth", "from-matrix", "--matrix", str(m))[0] == 1


def test_from_matrix_accepts_doubly_stochastic(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text('[["1/3", "2/3"], ["2/3", "1/3"]]')
    code, out, _ = run(capsys, "synth", "from-matrix", "--matrix", str(m))
    assert code == 0 and '"type": "cipher"' in out


def test_ka_analyze(tmp_path, capsys):
    doc = tmp_path / "ka.json"
    doc.write_text(to_text(public_reveal(4)))
    code, out, _ = run(capsys, "ka-analyze", str(doc), "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["simulator"] == {"lo": "1/4", "hi": "3/4"}


def test_ka_cap_exceeded_is_input_error(tmp_path, capsys):
    doc = tmp_path / "ka.json"
    doc.write_text(to_text(public_reveal(4)))
    code, _, err = run(capsys, "ka-analyze", str(doc), "--cap", "2")
    assert code == 1 and "cap" in err


def test_text_report_is_a_table(tmp_path, capsys):
    doc = tmp_path / "otp.json"
    run(capsys, "synth", "otp", "--n", "3", "-o", str(doc))
    out = run(capsys, "analyze", str(doc))[1]
    assert "metric" in out and "eps10" in out and "satisfied" in out


def test_fuzz_clean_and_corrupted(capsys):
    assert run(capsys, "fuzz", "--trials", "8", "--jobs", "1")[0] == 0
    code, out, _ = run(capsys, "fuzz", "--trials", "3", "--jobs", "1", "--corrupt", "eps9")
    assert code == 2 and "eps9 = eps10" in out
    code, _, _ = run(capsys, "fuzz", "--kind", "keyagreement", "--trials", "3", "--jobs", "1",
                     "--corrupt", "eps3")
    assert code == 2


def test_fuzz_report_lists_seeds(capsys):
    code, out, _ = run(capsys, "fuzz", "--trials", "4", "--jobs", "1", "--format", "json", "--seed", "5")
    rep = json.loads(out)
    assert [t["index"] for t in rep["results"]] == [0, 1, 2, 3]
    assert all(isinstance(t["seed"], int) for t in rep["results"])


def test_bad_rational_parameter(capsys):
    assert run(capsys, "synth", "counterexample", "--eps", "half")[0] == 1


@pytest.mark.parametrize("verb", ["analyze", "ka-analyze"])
def test_missing_file(verb, capsys):
    assert run(capsys, verb, "/nonexistent/x.json")[0] == 1
