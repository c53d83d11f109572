import io
import json
import subprocess
import sys

import numpy as np
import pytest

from scriptbridge.cli import main, read_group_file


def run(args, stdin=""):
    return subprocess.run(
        [sys.executable, "-m", "scriptbridge", *args],
        input=stdin.encode("utf-8"),
        capture_output=True,
    )


def test_translit_stdin_stdout():
    proc = run(["translit", "--script", "deva"], "क\n")
    assert proc.returncode == 0
    assert proc.stdout.decode("utf-8") == "ka\n"


def test_no_arguments_is_usage_error():
    proc = run([])
    assert proc.returncode == 1
    assert b"usage:" in proc.stderr and proc.stdout == b""


def test_unknown_subcommand_and_bad_option():
    assert run(["frobnicate"]).returncode == 1
    assert run(["translit", "--script", "latn"]).returncode == 1


def test_version():
    proc = run(["--version"])
    assert proc.returncode == 0
    assert b"Unicode tables 13.0.0" in proc.stdout


def test_translit_report_and_danda(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("राम। த\nসোনার॥\n"))
    report = tmp_path / "r.json"
    assert main(["translit", "--report", str(report)]) == 0
    assert capsys.readouterr().out == "rāma. த\nsōnāra..\n"
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["unmapped"] == [{"codepoint": "U+0BA4", "char": "த", "count": 1}]
    assert data["config"]["unicode_version"] == "13.0.0"

    monkeypatch.setattr(sys, "stdin", io.StringIO("राम।\n"))
    assert main(["translit", "--keep-danda"]) == 0
    assert capsys.readouterr().out == "rāma।\n"


def test_detect(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("नमस्ते\n123\n"))
    assert main(["detect"]) == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert lines[0]["dominant"] == "Devanagari"
    assert lines[1]["dominant"] is None and lines[1]["total_scriptful"] == 0


def _jsonl(records):
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def test_filter_end_to_end(tmp_path):
    records = [
        {"id": "1", "lang": "hi", "text": "नमस्ते  दुनिया"},
        {"id": "2", "lang": "hi", "text": "আমার সোনার বাংলা"},
        {"id": "3", "lang": "bn", "text": "আমার সোনার বাংলা"},
    ]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"languages": {"hi": ["Devanagari"], "bn": ["BengaliAssamese"]}, "transliterate": True}))
    rep, rej = tmp_path / "rep.json", tmp_path / "rej.jsonl"
    proc = run(["filter", "--config", str(cfg), "--report", str(rep), "--rejects", str(rej)], _jsonl(records))
    assert proc.returncode == 0, proc.stderr
    out = [json.loads(x) for x in proc.stdout.decode("utf-8").splitlines()]
    assert [d["id"] for d in out] == ["1", "3"]
    assert out[0]["text"] == "namastē duniyā"
    report = json.loads(rep.read_text(encoding="utf-8"))
    assert report["per_language"]["hi"] == {
        "ingested": 2, "dropped_script_mismatch": 1, "dropped_empty": 0, "emitted": 1,
    }
    assert "IndicNLP" in report["normalizer"]
    rejects = [json.loads(x) for x in rej.read_text(encoding="utf-8").splitlines()]
    assert rejects == [{"index": 1, "id": "2", "lang": "hi", "reason": "script_mismatch"}]


def test_filter_exit_2_on_many_malformed():
    good = _jsonl([{"id": str(i), "lang": "hi", "text": "क"} for i in range(8)])
    proc = run(["filter"], good + "oops\n{\"id\": 1}\n")
    assert proc.returncode == 2
    assert b"malformed" in proc.stderr
    # exactly at the limit is still fine
    good = _jsonl([{"id": str(i), "lang": "hi", "text": "क"} for i in range(9)])
    assert run(["filter"], good + "oops\n").returncode == 0


def test_bpe_train_and_metrics(tmp_path):
    vocab = tmp_path / "vocab.json"
    corpus = "low lower lowest\nlow low lower\n"
    assert run(["bpe-train", "--vocab-size", "20", "--out", str(vocab)], corpus).returncode == 0
    data = json.loads(vocab.read_text(encoding="utf-8"))
    assert data["continuation_marker"] == "##" and 12 < len(data["pieces"]) <= 20
    proc = run(["tok-metrics", "--vocab", str(vocab)], corpus)
    assert proc.returncode == 0
    m = json.loads(proc.stdout)
    assert {"fertility", "unbroken_ratio", "words", "pieces", "unk_words"} <= set(m)
    assert m["words"] == 6
    assert run(["bpe-train", "--vocab-size", "2", "--out", str(vocab)], corpus).returncode == 1
    assert run(["tok-metrics", "--vocab", str(vocab)], "").returncode == 1


def test_mwu_files(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("\n".join(str(v) for v in range(10, 19)) + "\n")
    b.write_text("value\n" + "\n".join(str(v) for v in range(1, 10)) + "\n")
    proc = run(["mwu", "--group1", str(a), "--group2", str(b)])
    assert proc.returncode == 0
    res = json.loads(proc.stdout)
    assert res["p_normal"] == pytest.approx(0.000412, abs=2e-5)
    assert res["rho"] == 1.0 and res["reject_h0"] is True
    assert run(["mwu", "--group1", str(a)]).returncode == 1
    b.write_text("x\n")
    assert run(["mwu", "--group1", str(a), "--group2", str(b)]).returncode == 1


def test_group_file_formats(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("seed\tmetric\n0\t1.5\n# note\n1\t2.5\n")
    assert read_group_file(str(p)) == [1.5, 2.5]
    p.write_text("1\n\n2\n")
    assert read_group_file(str(p)) == [1.0, 2.0]


def test_mwu_batch(tmp_path):
    rows = ["task\tlanguage\tseed\tmodel\tmetric"]
    for s in range(9):
        rows.append(f"ner\tpa\t{s}\tuni-script\t{0.9 + s / 1000}")
        rows.append(f"ner\tpa\t{s}\tmulti-script\t{0.8 + s / 1000}")
    p = tmp_path / "batch.tsv"
    p.write_text("\n".join(rows) + "\n")
    proc = run(["mwu", "--batch", str(p), "--format", "tsv"])
    assert proc.returncode == 0
    lines = proc.stdout.decode().splitlines()
    assert lines[0].split("\t")[:3] == ["task", "language", "n1"]
    assert lines[1].split("\t")[:4] == ["ner", "pa", "9", "9"]
    proc = run(["mwu", "--batch", str(p)])
    assert json.loads(proc.stdout)["results"][0]["rho"] == 1.0


def test_cka_command(tmp_path):
    rng = np.random.default_rng(1)
    for lang in ("bn", "hi", "pa"):
        for layer in (0, 1):
            np.savetxt(tmp_path / f"{lang}_layer{layer}.csv", rng.normal(size=(8, 4)), delimiter=",")
    man = tmp_path / "m.json"
    man.write_text(json.dumps({
        "languages": ["bn", "hi", "pa"], "layers": [0, 1], "n_sentences": 8,
        "sentence_ids": list(range(8)),
    }))
    out, tsv = tmp_path / "t.json", tmp_path / "t.tsv"
    proc = run(["cka", "--manifest", str(man), "--out", str(out), "--tsv", str(tsv)])
    assert proc.returncode == 0, proc.stderr
    table = json.loads(out.read_text())
    assert len(table["scores"]) == 6
    assert table["config"]["arguments"]["pooling"] == "mean"
    assert tsv.read_text().splitlines()[0] == "language\tlayer\tmean_cka\tpartners"
    assert len(tsv.read_text().splitlines()) == 7


def test_byte_identical_reruns():
    text = "हिंदी भाषा\nবাংলা\n"
    assert run(["translit"], text).stdout == run(["translit"], text).stdout
