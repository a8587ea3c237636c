import json

import pytest
from click.testing import CliRunner

from raredx import save_corpus
from raredx.cli import main

from test_service import fixture_docs


@pytest.fixture
def workdir(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    mapping = tmp_path / "mapping.tsv"
    save_corpus(fixture_docs(), str(corpus))
    mapping.write_text(
        "omim-1\tC0268579\tKetotic Hyperglycinemia\n"
        "orpha-2\tC0268583\tMethylmalonic Acidemia\n",
        encoding="utf-8",
    )
    return tmp_path


def _index(runner, workdir):
    out = workdir / "index.rdx"
    result = runner.invoke(
        main,
        ["index", "--corpus", str(workdir / "corpus.jsonl"), "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    return out


class TestIndexCommand:
    def test_index_reports_counts(self, workdir):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "index",
                "--corpus",
                str(workdir / "corpus.jsonl"),
                "--mapping",
                str(workdir / "mapping.tsv"),
                "--out",
                str(workdir / "index.rdx"),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "indexed 3 documents" in result.output

    def test_bad_corpus_fails_nonzero(self, workdir):
        bad = workdir / "bad.jsonl"
        bad.write_text("not json\n", encoding="utf-8")
        runner = CliRunner()
        result = runner.invoke(
            main, ["index", "--corpus", str(bad), "--out", str(workdir / "x.rdx")]
        )
        assert result.exit_code != 0
        assert "line 1" in result.output


class TestSearchCommand:
    def test_index_then_search_prints_rank_one_doc(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        result = runner.invoke(
            main,
            ["search", "--index", str(index_path), "--query", "ketotic hyperglycinemia"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["results"][0]["doc_id"] == "omim-1"
        assert payload["results"][0]["rank"] == 1

    def test_table_format(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        result = runner.invoke(
            main,
            [
                "search",
                "--index",
                str(index_path),
                "--query",
                "acidemia",
                "--format",
                "table",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "omim-1" in result.output

    def test_concepts_mode_with_top_j_alias(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        result = runner.invoke(
            main,
            [
                "search",
                "--index",
                str(index_path),
                "--mapping",
                str(workdir / "mapping.tsv"),
                "--query",
                "acidemia metabolic acidosis",
                "--mode",
                "concepts",
                "--top-j",
                "50",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        scores = [c["score"] for c in payload["results"]]
        assert scores == sorted(scores, reverse=True)

    def test_by_concept_uses_mapping(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        result = runner.invoke(
            main,
            [
                "search",
                "--index",
                str(index_path),
                "--mapping",
                str(workdir / "mapping.tsv"),
                "--query",
                "C0268579",
                "--by",
                "concept",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert [h["doc_id"] for h in payload["results"]] == ["omim-1"]

    def test_empty_query_fails(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        result = runner.invoke(
            main, ["search", "--index", str(index_path), "--query", "???"]
        )
        assert result.exit_code != 0
        assert "empty query" in result.output

    def test_unknown_flag_shows_usage(self, workdir):
        runner = CliRunner()
        result = runner.invoke(main, ["search", "--bogus"])
        assert result.exit_code != 0
        assert "Usage" in result.output or "no such option" in result.output.lower()


class TestEvalCommand:
    def _fixture_run(self, workdir):
        run = workdir / "run.tsv"
        lines = []
        for rank, doc in enumerate(["x1", "x2", "x3", "rel1"], 1):
            lines.append(f"q1\t{doc}\t{rank}\t{10 - rank}\tsys")
        lines.append("q2\trel2\t1\t9\tsys")
        lines.append("q3\tz1\t1\t9\tsys")
        run.write_text("\n".join(lines) + "\n", encoding="utf-8")
        queries = workdir / "queries.tsv"
        queries.write_text(
            "q1\tHLJ\talpha\nq2\tOJRD\tbeta\nq3\tBMJ\tgamma\n", encoding="utf-8"
        )
        qrels = workdir / "qrels.tsv"
        qrels.write_text(
            "q1\trel1\t1\nq2\trel2\t1\nq3\tnever-found\t1\n", encoding="utf-8"
        )
        return run, queries, qrels

    def test_eval_run_file_shows_mrr(self, workdir):
        runner = CliRunner()
        run, queries, qrels = self._fixture_run(workdir)
        report_path = workdir / "report.json"
        result = runner.invoke(
            main,
            [
                "eval",
                "--run",
                str(run),
                "--queries",
                str(queries),
                "--qrels",
                str(qrels),
                "--out",
                str(report_path),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "0.4167" in result.output
        payload = json.loads(report_path.read_text())
        assert payload["systems"][0]["mrr"] == pytest.approx(0.41666666, rel=1e-6)
        assert payload["answered_matrix"]["matrix"] == [[1], [1], [0]]

    def test_eval_index_mode_end_to_end(self, workdir):
        runner = CliRunner()
        index_path = _index(runner, workdir)
        queries = workdir / "queries.tsv"
        queries.write_text("q1\tHLJ\tketotic hyperglycinemia\n", encoding="utf-8")
        qrels = workdir / "qrels.tsv"
        qrels.write_text("q1\tomim-1\t1\n", encoding="utf-8")
        run_out = workdir / "generated-run.tsv"
        result = runner.invoke(
            main,
            [
                "eval",
                "--index",
                str(index_path),
                "--queries",
                str(queries),
                "--qrels",
                str(qrels),
                "--run-out",
                str(run_out),
                "--format",
                "json",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload[0]["mrr"] == 1.0
        assert run_out.exists()
        assert "omim-1" in run_out.read_text()

    def test_requires_exactly_one_input(self, workdir):
        runner = CliRunner()
        run, queries, qrels = self._fixture_run(workdir)
        result = runner.invoke(
            main, ["eval", "--queries", str(queries), "--qrels", str(qrels)]
        )
        assert result.exit_code != 0
        assert "exactly one" in result.output


class TestServeCommand:
    def test_corrupt_index_exits_nonzero(self, workdir):
        bad = workdir / "bad.rdx"
        bad.write_bytes(b"JUNK")
        mapping = workdir / "mapping.tsv"
        runner = CliRunner()
        result = runner.invoke(
            main, ["serve", "--index", str(bad), "--mapping", str(mapping)]
        )
        assert result.exit_code != 0
        assert "magic" in result.output
