import json
import subprocess
import sys

import pytest

from analogyspace.cli import EXIT_DOMAIN, EXIT_INPUT, EXIT_OK, run

from conftest import planted_docs

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

REF_COORDS = [
    "4.133,1.226,1.528",
    "3.876,0.868,2.734",
    "0.924,3.136,1.760",
    "0.556,2.642,3.019",
]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """A built space plus corpus and test-set files, shared per module."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.txt"
    corpus.write_text("\n".join(planted_docs()) + "\n", encoding="utf-8")
    testset = root / "testset.txt"
    testset.write_text(
        ": planted\n"
        "one first two second\n"
        "two second three third\n"
        "three third four fourth\n"
        "one first missingword second\n",
        encoding="utf-8",
    )
    space = root / "planted.space"
    code = run(
        [
            "build",
            str(corpus),
            "--out",
            str(space),
            "--window",
            "7",
            "--smoothing-a",
            "0",
        ]
    )
    assert code == EXIT_OK
    return root


def _space(workdir):
    return str(workdir / "planted.space")


class TestBuild:
    def test_reports_corpus_stats(self, workdir, tmp_path, capsys):
        corpus = workdir / "corpus.txt"
        out = tmp_path / "again.space"
        assert run(["build", str(corpus), "--out", str(out), "--window", "7"]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert "target vocabulary:" in stdout
        assert "pmi entries:" in stdout
        assert out.exists()

    def test_rebuild_is_bit_identical(self, workdir, tmp_path):
        corpus = workdir / "corpus.txt"
        a, b = tmp_path / "a.space", tmp_path / "b.space"
        for out in (a, b):
            args = ["build", str(corpus), "--out", str(out), "--window", "7"]
            assert run(args) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_directory_corpus(self, tmp_path):
        d = tmp_path / "docs"
        d.mkdir()
        (d / "one.txt").write_text("alpha beta gamma\n")
        (d / "two.txt").write_text("beta gamma delta\n")
        out = tmp_path / "dir.space"
        assert run(["build", str(d), "--out", str(out)]) == EXIT_OK
        assert out.exists()

    def test_missing_corpus_path(self, tmp_path, capsys):
        out = tmp_path / "x.space"
        code = run(["build", str(tmp_path / "nope.txt"), "--out", str(out)])
        assert code == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error: input:")

    def test_bad_smoothing(self, workdir, tmp_path, capsys):
        code = run(
            [
                "build",
                str(workdir / "corpus.txt"),
                "--out",
                str(tmp_path / "x.space"),
                "--smoothing-a",
                "lots",
            ]
        )
        assert code == EXIT_INPUT

    def test_missing_output_directory(self, workdir, capsys):
        code = run(
            [
                "build",
                str(workdir / "corpus.txt"),
                "--out",
                str(workdir / "no" / "dir" / "x.space"),
            ]
        )
        assert code == EXIT_INPUT


class TestSolve:
    def test_four_words(self, workdir, capsys):
        code = run(["solve", "one", "first", "two", "second", "--space", _space(workdir)])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "predicted: second" in out
        assert "matched: yes" in out

    def test_uppercase_input_is_lowercased(self, workdir, capsys):
        code = run(["solve", "One", "FIRST", "two", "second", "--space", _space(workdir)])
        assert code == EXIT_OK
        assert "predicted: second" in capsys.readouterr().out

    def test_three_words_is_labeled_exploratory(self, workdir, capsys):
        code = run(["solve", "one", "first", "two", "--space", _space(workdir)])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "exploratory" in out
        assert "predicted: second" in out

    def test_json_output(self, workdir, tmp_path, capsys):
        out = tmp_path / "solve.json"
        code = run(
            [
                "solve",
                "one",
                "first",
                "two",
                "second",
                "--space",
                _space(workdir),
                "--json",
                str(out),
                "--top",
                "3",
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["predicted"] == "second"
        assert doc["matched"] is True
        assert len(doc["candidates"]) == 3
        assert doc["params"]["k1"] == 200
        assert doc["dims"] and len(doc["dims"]) == len(doc["dim_labels"])

    def test_determinism(self, workdir, capsys):
        args = ["solve", "one", "first", "three", "third", "--space", _space(workdir)]
        assert run(args) == EXIT_OK
        first = capsys.readouterr().out
        assert run(args) == EXIT_OK
        assert capsys.readouterr().out == first

    def test_wrong_word_count(self, workdir, capsys):
        code = run(["solve", "a", "b", "--space", _space(workdir)])
        assert code == EXIT_INPUT

    def test_oov_word(self, workdir, capsys):
        code = run(["solve", "one", "first", "zzz", "ward", "--space", _space(workdir)])
        assert code == EXIT_DOMAIN
        assert capsys.readouterr().err.startswith("error: oov:")

    def test_missing_space_file(self, workdir, capsys):
        code = run(["solve", "a", "b", "c", "--space", str(workdir / "ghost.space")])
        assert code == EXIT_INPUT

    def test_corrupt_space_file(self, workdir, tmp_path, capsys):
        raw = bytearray((workdir / "planted.space").read_bytes())
        raw[len(raw) // 2] ^= 0xFF
        bad = tmp_path / "bad.space"
        bad.write_bytes(bytes(raw))
        code = run(["solve", "one", "first", "two", "second", "--space", str(bad)])
        assert code == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error: integrity:")

    def test_cosine_metric_flag(self, workdir, capsys):
        code = run(
            [
                "solve",
                "one",
                "first",
                "two",
                "second",
                "--space",
                _space(workdir),
                "--metric",
                "cosine",
            ]
        )
        assert code == EXIT_OK


class TestEval:
    def test_report(self, workdir, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = run(
            [
                "eval",
                str(workdir / "testset.txt"),
                "--space",
                _space(workdir),
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "accuracy: 1.0000 (3/3 attempted, 1 oov-skipped of 4 total)" in stdout
        doc = json.loads(out.read_text())
        assert doc["total"] == 4
        assert doc["oov_skipped"] == 1
        assert doc["correct"] == 3
        assert doc["per_section"]["planted"]["total"] == 4
        assert doc["oov"][0]["missing"] == ["missingword"]

    def test_sampling_records_lines(self, workdir, tmp_path):
        out = tmp_path / "s.json"
        code = run(
            [
                "eval",
                str(workdir / "testset.txt"),
                "--space",
                _space(workdir),
                "--sample-size",
                "2",
                "--seed",
                "5",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["total"] == 2
        assert len(doc["sampled_lines"]) == 2
        assert doc["sampled_lines"] == sorted(doc["sampled_lines"])

    def test_limit(self, workdir, tmp_path):
        out = tmp_path / "l.json"
        code = run(
            [
                "eval",
                str(workdir / "testset.txt"),
                "--space",
                _space(workdir),
                "--limit",
                "1",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        assert json.loads(out.read_text())["total"] == 1

    def test_figure(self, workdir, tmp_path):
        fig = tmp_path / "eval.png"
        code = run(
            [
                "eval",
                str(workdir / "testset.txt"),
                "--space",
                _space(workdir),
                "--figure",
                str(fig),
            ]
        )
        assert code == EXIT_OK
        assert fig.read_bytes().startswith(PNG_MAGIC)

    def test_malformed_testset(self, workdir, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("one first two\n")
        code = run(["eval", str(bad), "--space", _space(workdir)])
        assert code == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error: testset-parse:")


class TestInspectDim:
    def test_writes_tsv_and_json(self, workdir, tmp_path, capsys):
        prefix = tmp_path / "cardinal"
        code = run(
            [
                "inspect-dim",
                "cardinal",
                "--space",
                _space(workdir),
                "--highlight",
                "one",
                "first",
                "ghostword",
                "--out",
                str(prefix),
            ]
        )
        assert code == EXIT_OK
        tsv = (tmp_path / "cardinal.tsv").read_text().splitlines()
        assert tsv[0] == "rank\tword\tpmi"
        assert len(tsv) > 1
        doc = json.loads((tmp_path / "cardinal.json").read_text())
        assert doc["dim_label"] == "cardinal"
        assert doc["highlights"]["one"]["present"] is True
        assert doc["highlights"]["ghostword"]["present"] is False
        stdout = capsys.readouterr().out
        assert "ghostword: absent" in stdout

    def test_figure(self, workdir, tmp_path):
        prefix = tmp_path / "ordinal"
        fig = tmp_path / "ordinal.png"
        code = run(
            [
                "inspect-dim",
                "ordinal",
                "--space",
                _space(workdir),
                "--highlight",
                "first",
                "--out",
                str(prefix),
                "--figure",
                str(fig),
            ]
        )
        assert code == EXIT_OK
        assert fig.read_bytes().startswith(PNG_MAGIC)

    def test_unknown_dimension_word(self, workdir, tmp_path, capsys):
        code = run(
            [
                "inspect-dim",
                "nosuchword",
                "--space",
                _space(workdir),
                "--out",
                str(tmp_path / "x"),
            ]
        )
        assert code == EXIT_DOMAIN
        assert capsys.readouterr().err.startswith("error: unknown-dimension:")


class TestGeometry:
    def test_from_space(self, workdir, tmp_path, capsys):
        out = tmp_path / "geom.json"
        code = run(
            [
                "geometry",
                "one",
                "first",
                "two",
                "second",
                "--space",
                _space(workdir),
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["source"] == "selected-subspace"
        assert len(doc["coords"]) == 4
        assert doc["closure_abs"] == pytest.approx(0.0, abs=1e-9)
        assert "definitions" in doc
        assert "closure_abs:" in capsys.readouterr().out

    def test_coords_override(self, tmp_path, capsys):
        out = tmp_path / "ref.json"
        code = run(
            [
                "geometry",
                "picture",
                "paint",
                "story",
                "words",
                "--coords",
                *REF_COORDS,
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["source"] == "override"
        assert doc["closure_abs"] == pytest.approx(0.183, abs=1e-3)
        assert 0.0 <= doc["flatness"] <= 1.0
        assert 0.0 <= doc["centrality"] <= 90.0
        assert 0.0 <= doc["obliqueness"] <= 90.0

    def test_figure(self, workdir, tmp_path):
        fig = tmp_path / "geom.png"
        code = run(
            [
                "geometry",
                "one",
                "first",
                "two",
                "second",
                "--space",
                _space(workdir),
                "--figure",
                str(fig),
            ]
        )
        assert code == EXIT_OK
        assert fig.read_bytes().startswith(PNG_MAGIC)

    def test_coords_figure(self, tmp_path):
        fig = tmp_path / "ref.png"
        code = run(
            [
                "geometry",
                "picture",
                "paint",
                "story",
                "words",
                "--coords",
                *REF_COORDS,
                "--figure",
                str(fig),
            ]
        )
        assert code == EXIT_OK
        assert fig.read_bytes().startswith(PNG_MAGIC)

    def test_needs_space_or_coords(self, capsys):
        code = run(["geometry", "a", "b", "c", "d"])
        assert code == EXIT_INPUT

    def test_bad_coords(self, capsys):
        code = run(["geometry", "a", "b", "c", "d", "--coords", "1,2", "3,x", "5,6", "7,8"])
        assert code == EXIT_INPUT

    def test_degenerate_coords(self, capsys):
        code = run(
            ["geometry", "a", "b", "c", "d", "--coords", "1,1", "1,1", "1,1", "1,1"]
        )
        assert code == EXIT_DOMAIN
        assert capsys.readouterr().err.startswith("error: degenerate-figure:")


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "analogyspace.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "analogyspace" in proc.stdout
