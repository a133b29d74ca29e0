import csv

import pytest

from lexseg.cli import main

from conftest import make_corpus
from lexseg.corpus import serialize_corpus


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text(serialize_corpus(make_corpus(seed=1, n_utterances=40)))
    return path


def run_cli(*args):
    return main([str(a) for a in args])


def test_baseline_writes_expected_files(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "baseline", "--corpus", corpus_file,
                   "--out", out, "--runs", 2, "--order", 1, "--block-size", 10)
    assert code == 0
    assert (out / "runs_order1.csv").exists()
    assert (out / "blocks_order1.csv").exists()
    rows = list(csv.reader((out / "summary.csv").open()))
    assert rows[0][0] == "order"
    assert rows[1][0] == "1"


def test_baseline_multiple_orders(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "baseline", "--corpus", corpus_file,
                   "--out", out, "--runs", 1, "--order", 1, "--order", 2)
    assert code == 0
    assert (out / "runs_order1.csv").exists()
    assert (out / "runs_order2.csv").exists()
    rows = list(csv.reader((out / "summary.csv").open()))
    assert [r[0] for r in rows[1:]] == ["1", "2"]


def test_repeat_invocation_is_byte_identical(tmp_path, corpus_file):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        code = run_cli("--experiment", "baseline", "--corpus", corpus_file,
                       "--out", out, "--runs", 2, "--block-size", 10,
                       "--seed", 7, "--manifest")
        assert code == 0
    for name in ("runs_order1.csv", "blocks_order1.csv", "summary.csv",
                 "manifest.txt"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_train_sweep_csv(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "train-sweep", "--corpus", corpus_file,
                   "--out", out, "--runs", 1, "--train-cap", 10,
                   "--sweep-step", 5)
    assert code == 0
    rows = list(csv.reader((out / "train_sweep_order1.csv").open()))
    assert [r[0] for r in rows[1:]] == ["0", "5", "10"]


def test_fully_trained_outputs(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "fully-trained", "--corpus", corpus_file,
                   "--out", out, "--order", 3)
    assert code == 0
    assert (out / "fully_trained_order3.csv").exists()
    assert (out / "errors_order3.txt").exists()


def test_phoneme_matrix_grid(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "phoneme-matrix", "--corpus", corpus_file,
                   "--out", out, "--runs", 1, "--order", 1)
    assert code == 0
    rows = list(csv.reader((out / "phoneme_matrix.csv").open()))
    assert [r[0] for r in rows[1:]] == ["uniform", "lexicon", "corpus"]


def test_lexicon_growth_csv(tmp_path, corpus_file):
    out = tmp_path / "out"
    code = run_cli("--experiment", "lexicon-growth", "--corpus", corpus_file,
                   "--out", out, "--runs", 1, "--order", 1)
    assert code == 0
    rows = list(csv.reader((out / "lexicon_growth.csv").open()))
    curves = {r[0] for r in rows[1:]}
    assert curves == {"gold", "order-1"}


def test_manifest_contents(tmp_path, corpus_file):
    out = tmp_path / "out"
    run_cli("--experiment", "baseline", "--corpus", corpus_file,
            "--out", out, "--runs", 1, "--manifest")
    text = (out / "manifest.txt").read_text()
    assert "corpus-sha256:" in text
    assert "experiment: baseline" in text
    assert "base-seed: 0" in text


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--experiment", "nonsense"])
    assert exc.value.code == 1
    assert "error" in capsys.readouterr().err


def test_bad_runs_value_exits_1(tmp_path, corpus_file):
    with pytest.raises(SystemExit) as exc:
        run_cli("--experiment", "baseline", "--corpus", corpus_file,
                "--out", tmp_path / "o", "--runs", 0)
    assert exc.value.code == 1


def test_bad_train_fraction_exits_1(tmp_path, corpus_file):
    with pytest.raises(SystemExit) as exc:
        run_cli("--experiment", "baseline", "--corpus", corpus_file,
                "--out", tmp_path / "o", "--train-fraction", "1.5")
    assert exc.value.code == 1


def test_missing_corpus_exits_2(tmp_path, capsys):
    code = run_cli("--experiment", "baseline", "--corpus",
                   tmp_path / "nope.txt", "--out", tmp_path / "o")
    assert code == 2


def test_unparseable_corpus_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("lUk !z\n")
    code = run_cli("--experiment", "baseline", "--corpus", bad,
                   "--out", tmp_path / "o", "--runs", 1)
    assert code == 2
    err = capsys.readouterr().err
    assert "line 1" in err


def test_custom_inventory_flag(tmp_path):
    inv = tmp_path / "inv.txt"
    inv.write_text("a\nb\n")
    corpus = tmp_path / "c.txt"
    corpus.write_text("ab a\nb ab\n")
    out = tmp_path / "out"
    code = run_cli("--experiment", "baseline", "--corpus", corpus,
                   "--out", out, "--runs", 1, "--inventory", inv)
    assert code == 0


def test_inventory_symbol_mismatch_exits_2(tmp_path):
    inv = tmp_path / "inv.txt"
    inv.write_text("a\nb\n")
    corpus = tmp_path / "c.txt"
    corpus.write_text("xy\n")
    code = run_cli("--experiment", "baseline", "--corpus", corpus,
                   "--out", tmp_path / "o", "--runs", 1, "--inventory", inv)
    assert code == 2
