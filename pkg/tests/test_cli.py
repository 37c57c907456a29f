import io
import json

import pytest

from shufcong.cli import SCHEMA, run_command

FILES = {
    "comm": "alphabet a b\nsemiring Z\nrelator a b = b a\n",
    "ex1": "alphabet a b\nsemiring Z/2\nrelator a a = b b b b\n",
    "sq": "alphabet a b\nsemiring Z\nrelator a a = b b\n",
    "pli": "alphabet a b\nsemiring Z/2\nrelator a a = b b b b\nrelator a a a a = b b b b b b b b\n",
    "noncanc": "alphabet a b\nsemiring Z/2\nrelator a a = b b\nrelator a a a a = b b\n",
    "cube": "alphabet a b\nsemiring Z\nrelator a a a = 1\n",
    "free3": "alphabet a b c\n",
    "bad": "alphabet a b\nrelator a c = c a\n",
}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in FILES.items():
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        out[name] = str(path)
    return out


def run(*argv):
    buf = io.StringIO()
    code = run_command(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


def test_check_compatible(files):
    code, doc = run_json("check", files["comm"])
    assert code == 0
    assert doc["schema"] == SCHEMA and doc["command"] == "check"
    assert doc["result"] == {"verdict": "Compatible"}
    assert doc["input_digest"].startswith("sha256:")


def test_classify_prime_decomposition(files):
    code, doc = run_json("classify", files["ex1"])
    assert code == 0
    assert doc["result"]["kind"] == "PrimeDecomposition"
    assert doc["result"]["partition"]["depth"] == 1


def test_inconclusive_exit_code(files):
    code, doc = run_json("check", files["cube"], "--cap", "2")
    assert code == 2
    assert doc["result"]["inconclusive"] and doc["result"]["cap"] == 2
    code, text = run("check", files["cube"])
    assert code == 0


def test_usage_and_parse_errors(files, capsys):
    assert run("nonsense", files["comm"])[0] == 1
    assert run("check", files["bad"])[0] == 1
    assert run("check", files["free3"])[0] == 1  # no semiring anywhere
    assert run("magnus", files["comm"])[0] == 1  # --word missing
    assert run("check", "/nonexistent/file")[0] == 1
    assert "usage" in capsys.readouterr().err


def test_json_deterministic(files):
    docs = []
    for _ in range(2):
        _, doc = run_json("classify", files["ex1"], "--seed", "3")
        doc.pop("timing_seconds")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_verify_witness_roundtrip(files, tmp_path):
    code, text = run("check", files["sq"], "--json")
    assert code == 0
    report = tmp_path / "report.json"
    report.write_text(text)
    code, doc = run_json("verify-witness", files["sq"], "--report", str(report))
    assert code == 0 and doc["result"]["verified"] is True
    # tamper with a coefficient: the recount rejects it
    tampered = json.loads(text)
    tampered["result"]["witness"]["coefficients"] = [1, 1]
    report.write_text(json.dumps(tampered))
    _, doc = run_json("verify-witness", files["sq"], "--report", str(report))
    assert doc["result"]["verified"] is False


def test_classify_incompatible_witness_is_checkable(files, tmp_path):
    _, text = run("classify", files["sq"], "--semiring", "Z/6", "--json")
    report = tmp_path / "r.json"
    report.write_text(text)
    _, doc = run_json("verify-witness", files["sq"], "--report", str(report))
    assert doc["result"]["verified"] is True
    assert doc["parameters"]["semiring"] == "Z/6"


def test_weight_and_pli(files):
    _, doc = run_json("weight", files["pli"])
    assert doc["result"]["weight"] == {"a": 2, "b": 1}
    assert doc["result"]["pLI"]["weight"] == {"a": 4, "b": 2}
    _, doc = run_json("weight", files["noncanc"])
    assert doc["result"]["weight"] is None
    assert doc["result"]["pLI"]["ok"] is False


def test_magnus_and_qroot(files):
    _, doc = run_json("magnus", files["comm"], "--word", "ba", "--max-weight", "3")
    terms = {t for g in doc["result"]["series"] for t, _ in g["terms"]}
    assert terms == {"1", "a", "b", "ab"}
    code, doc = run_json("qroot", files["ex1"], "--word", "a", "--q", "3", "--max-weight", "4")
    assert code == 0 and doc["result"]["verified"] is True
    code, doc = run_json("qroot", files["comm"], "--series", "1 + 2*a + aa", "--q", "2", "--max-weight", "2")
    assert doc["result"]["root"] == [
        {"grade": 0, "terms": [["1", 1]]},
        {"grade": 1, "terms": [["a", 1]]},
    ]


def test_lyndon_and_binomials(files):
    _, doc = run_json("lyndon", files["free3"], "--theta", "a:c", "--maxlen", "3")
    rows = doc["result"]["lyndon_traces"]
    assert all(r["triangular"] for r in rows)
    assert {"trace": "ab", "std": "ab", "lambda": "ab - ba", "triangular": True} in rows
    _, doc = run_json("primitive-binomials", files["free3"], "--p", "2", "--theta", "", "--maxlen", "2")
    assert ["ab", "ba"] in doc["result"]["pairs"]


def test_cancel_search(files):
    _, doc = run_json("cancel-search", files["noncanc"], "--bound", "4")
    assert doc["result"]["witness"]["x"] == "aa"
    _, doc = run_json("cancel-search", files["comm"], "--bound", "3")
    assert doc["result"]["witness"] is None


def test_text_output(files):
    code, text = run("partition", files["ex1"])
    assert code == 0 and text.startswith("primitive partition of length 1")
