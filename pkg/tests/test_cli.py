import json
import subprocess
import sys

import pytest

from harakat.cli import main
from harakat.compiler import from_bytes

from conftest import FIXTURES

GOLDEN = str(FIXTURES / "golden.dic")
DET = str(FIXTURES / "det.grm")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 1


def test_missing_dictionary_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "--dict", str(tmp_path / "none.dic"), str(FIXTURES / "golden.dic"))
    assert code == 2 and "harakat:" in err
    bad = tmp_path / "bad.dic"
    bad.write_text("kataba ktb V\n")
    code, _, _ = run(capsys, "compile", str(bad), "-o", str(tmp_path / "x.bin"))
    assert code == 2


def test_compile_then_analyze(capsys, tmp_path):
    binary = tmp_path / "t41.bin"
    code, report, _ = run(capsys, "compile", GOLDEN, "-o", str(binary))
    assert code == 0
    for label in ("Entries", "INF codes", "States", "Transitions", "Compiled (bytes)"):
        assert label in report
    assert from_bytes(binary.read_bytes()).entry_count > 0
    text = tmp_path / "in.txt"
    text.write_text("katb Alqmru\nOErAbN kitAbAF\n\n")
    code, out, _ = run(capsys, "analyze", "--dict", str(binary), "--grammar", DET, str(text))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[1] == "Alqmru\t{Al.Al.Al.DET}{qmru.qamaru.qamar.N:msDN}"
    assert lines[2] == "OErAbN\t?"
    code, out, _ = run(capsys, "analyze", "--dict", GOLDEN, "--grammar", DET, "--format", "json", str(text))
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["known"] for r in records] == [True, True, False, True]


def test_jobs_keep_token_order(capsys, tmp_path):
    words = ["katb", "xyz", "Alqmru", "kitAbAF", "ktb"] * 40
    text = tmp_path / "in.txt"
    text.write_text("\n".join(" ".join(words[i:i + 7]) for i in range(0, len(words), 7)))
    _, serial, _ = run(capsys, "analyze", "--dict", GOLDEN, "--grammar", DET, str(text))
    _, parallel, _ = run(capsys, "analyze", "--dict", GOLDEN, "--grammar", DET, "--jobs", "3", str(text))
    assert serial == parallel
    assert [line.split("\t")[0] for line in serial.splitlines()] == words


def test_restore_and_spellcheck(capsys, tmp_path):
    text = tmp_path / "in.txt"
    text.write_text("Alqmru ktb xyz\n")
    _, out, _ = run(capsys, "restore", "--dict", GOLDEN, "--grammar", DET, str(text))
    assert out == "Alqamaru {katGaba|kataba|kutiba} xyz\n"
    _, out, _ = run(capsys, "spellcheck", "--dict", GOLDEN, "--grammar", DET, str(text))
    assert out == "2\txyz\tUNKNOWN_WORD\n"


def test_count(capsys, tmp_path):
    one = tmp_path / "one.dic"
    one.write_text("katabatu,ktb.V:aP3fs\n")
    code, out, _ = run(capsys, "count", "--dict", str(one))
    assert code == 0 and out.strip() == "16"


def test_translit_round_trip(capsys, tmp_path):
    src = tmp_path / "tb.txt"
    src.write_text("kataba Alqamaru\n")
    _, arabic, _ = run(capsys, "translit", "--to", "arabic", str(src))
    back = tmp_path / "ar.txt"
    back.write_text(arabic)
    _, tb, _ = run(capsys, "translit", "--to", "tbpp", str(back))
    assert tb == "kataba Alqamaru\n"


def test_generate_and_flatten(capsys, tmp_path):
    lemmas = tmp_path / "lemmas.txt"
    lemmas.write_text("nufaAyap,$N0_i_0ap-f-At\n")
    out_file = tmp_path / "forms.dic"
    code, _, err = run(capsys, "generate", str(lemmas), "--grammar", "nouns.grm", "-o", str(out_file))
    assert code == 0 and err.startswith("54 forms")
    lines = out_file.read_text().splitlines()
    assert len(lines) == 54 and lines == sorted(lines)
    code, out, err = run(capsys, "flatten", "--grammar", "clitics.grm", "--agglutination")
    assert code == 0 and "1 graph" in err and out


def test_bench_on_empty_corpus(capsys, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    code, out, _ = run(capsys, "bench", "--dict", GOLDEN, "--grammar", DET, "--format", "json", str(empty))
    report = json.loads(out)
    assert code == 0 and report["tokens"] == 0 and report["cache_speedup"] == 0.0


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "harakat.cli", "translit", "--to", "tbpp"],
        input="كتب\n", capture_output=True, text=True, check=True,
    )
    assert proc.stdout == "ktb\n"
