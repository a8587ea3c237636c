import json
import random

import pytest

from raredx import Document, build_index
from raredx.evaluation import (
    EvalReport,
    Judgment,
    RunEntry,
    answered_matrix,
    evaluate,
    format_report_table,
    load_qrels,
    load_queries,
    load_run,
    precision_at_k,
    reciprocal_rank,
    run_queries,
    save_report,
    save_run,
)
from raredx.ranking import Query, RankingParams

from oracles import evaluate_brute, precision_at_k_brute, reciprocal_rank_brute
from synth import random_run_and_qrels


class TestPrecisionAtK:
    def test_two_relevant_in_top_ten(self):
        ranked = [f"d{i}" for i in range(1, 11)]
        assert precision_at_k(ranked, {"d1", "d3"}, 10) == 0.2

    def test_nothing_relevant(self):
        ranked = [f"d{i}" for i in range(1, 21)]
        assert precision_at_k(ranked, set(), 20) == 0.0

    def test_short_result_list_keeps_denominator_k(self):
        ranked = [f"d{i}" for i in range(1, 8)]  # 7 retrieved
        relevant = {"d2", "d5"}
        assert precision_at_k(ranked, relevant, 10) == 0.2
        assert precision_at_k(ranked, relevant, 10) == precision_at_k_brute(ranked, relevant, 10)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            precision_at_k(["d1"], {"d1"}, 0)

    def test_invariant_under_permutation_within_top_k(self):
        rng = random.Random(0)
        ranked = [f"d{i}" for i in range(20)]
        relevant = {"d3", "d8", "d15"}
        base = precision_at_k(ranked, relevant, 10)
        for _ in range(20):
            head = ranked[:10]
            rng.shuffle(head)
            assert precision_at_k(head + ranked[10:], relevant, 10) == base


class TestReciprocalRank:
    def test_first_relevant_at_rank_four(self):
        assert reciprocal_rank(["a", "b", "c", "rel", "e"], {"rel"}) == 0.25

    def test_first_relevant_at_rank_one(self):
        assert reciprocal_rank(["rel", "b"], {"rel"}) == 1.0

    def test_no_relevant_retrieved(self):
        assert reciprocal_rank(["a", "b"], {"rel"}) == 0.0

    def test_permuting_below_first_relevant_never_changes_rr(self):
        rng = random.Random(1)
        ranked = ["a", "b", "rel", "c", "d", "e", "f"]
        base = reciprocal_rank(ranked, {"rel"})
        for _ in range(20):
            tail = ranked[3:]
            rng.shuffle(tail)
            assert reciprocal_rank(ranked[:3] + tail, {"rel"}) == base


def _run(qid, doc_ranks, system="sys"):
    return [RunEntry(qid, d, r, 50.0 - r, system) for r, d in sorted((r, d) for d, r in doc_ranks.items())]


class TestEvaluate:
    def test_three_query_mrr(self):
        run = (
            _run("q1", {"x1": 1, "x2": 2, "x3": 3, "rel1": 4})
            + _run("q2", {"rel2": 1, "y2": 2})
            + _run("q3", {"z1": 1, "z2": 2})
        )
        judgments = [
            Judgment("q1", "rel1", True),
            Judgment("q2", "rel2", True),
            Judgment("q3", "somewhere-else", True),
        ]
        report = evaluate(run, judgments, ks=(10, 20))
        assert report.n_queries == 3
        assert report.mrr == (0.25 + 1.0 + 0.0) / 3
        assert report.per_query[0].first_relevant_rank == 4
        assert report.per_query[2].first_relevant_rank is None

    def test_fifty_six_queries_thirty_eight_answered(self):
        run = []
        judgments = []
        for i in range(56):
            qid = f"q{i:02d}"
            run += _run(qid, {f"{qid}-d{r}": r for r in range(1, 21)})
            if i < 38:
                judgments.append(Judgment(qid, f"{qid}-d{(i % 20) + 1}", True))
            else:
                judgments.append(Judgment(qid, f"{qid}-missing", True))
        report = evaluate(run, judgments, ks=(10, 20))
        assert report.n_queries == 56
        assert report.answered_at[20] == 38
        assert report.answered_pct(20) == 67.9

    def test_saturated_run(self):
        run = _run("q1", {f"d{r}": r for r in range(1, 11)})
        judgments = [Judgment("q1", f"d{r}", True) for r in range(1, 11)]
        report = evaluate(run, judgments, ks=(10,))
        assert report.p_at[10] == 1.0
        assert report.mrr == 1.0

    def test_query_with_no_entries_still_counts_in_n(self):
        run = _run("q1", {"rel": 1})
        judgments = [Judgment("q1", "rel", True), Judgment("q2", "other", True)]
        report = evaluate(run, judgments, ks=(10,), query_ids=["q1", "q2"])
        assert report.n_queries == 2
        assert report.mrr == 0.5
        assert report.per_query[1].first_relevant_rank is None

    def test_unjudged_retrieved_are_nonrelevant_and_counted(self):
        run = _run("q1", {"a": 1, "b": 2})
        judgments = [Judgment("q1", "b", True)]
        report = evaluate(run, judgments, ks=(10,))
        assert report.unjudged_retrieved == 1
        assert report.p_at[10] == 0.1

    def test_duplicate_judgment_rejected(self):
        run = _run("q1", {"a": 1})
        judgments = [Judgment("q1", "a", True), Judgment("q1", "a", False)]
        with pytest.raises(ValueError, match="duplicate judgment"):
            evaluate(run, judgments)

    def test_non_contiguous_ranks_rejected(self):
        run = [RunEntry("q1", "a", 1, 2.0, "s"), RunEntry("q1", "b", 3, 1.0, "s")]
        with pytest.raises(ValueError, match="contiguous"):
            evaluate(run, [])

    def test_increasing_scores_rejected(self):
        run = [RunEntry("q1", "a", 1, 1.0, "s"), RunEntry("q1", "b", 2, 2.0, "s")]
        with pytest.raises(ValueError, match="increase"):
            evaluate(run, [])

    def test_mixed_systems_rejected(self):
        run = [RunEntry("q1", "a", 1, 1.0, "s1"), RunEntry("q2", "a", 1, 1.0, "s2")]
        with pytest.raises(ValueError, match="mixes systems"):
            evaluate(run, [])

    def test_run_outside_universe_rejected(self):
        run = _run("q9", {"a": 1})
        with pytest.raises(ValueError, match="outside"):
            evaluate(run, [], query_ids=["q1"])

    def test_metric_bounds_and_answered_monotonicity(self):
        rng = random.Random(12)
        for _ in range(50):
            universe, run, judgments = random_run_and_qrels(rng)
            report = evaluate(run, judgments, ks=(10, 20), query_ids=universe)
            assert 0.0 <= report.mrr <= 1.0
            assert all(0.0 <= v <= 1.0 for v in report.p_at.values())
            assert report.answered_at[10] <= report.answered_at[20] <= report.n_queries

    def test_matches_brute_force_oracle(self):
        rng = random.Random(99)
        for _ in range(100):
            universe, run, judgments = random_run_and_qrels(rng)
            report = evaluate(run, judgments, ks=(5, 10, 20), query_ids=universe)
            ranked_by_query = {}
            for e in run:
                ranked_by_query.setdefault(e.query_id, []).append((e.rank, e.doc_id))
            ranked_by_query = {
                q: [d for _r, d in sorted(v)] for q, v in ranked_by_query.items()
            }
            relevant_by_query = {}
            for j in judgments:
                if j.relevant:
                    relevant_by_query.setdefault(j.query_id, set()).add(j.doc_id)
            brute = evaluate_brute(ranked_by_query, relevant_by_query, (5, 10, 20), universe)
            assert abs(report.mrr - brute["mrr"]) < 1e-12
            for k in (5, 10, 20):
                assert abs(report.p_at[k] - brute["p_at"][k]) < 1e-12
                assert report.answered_at[k] == brute["answered_at"][k]


class TestRunQueries:
    def test_two_doc_run(self, zebra_index):
        queries = [Query("zebra stripes", query_id="q1")]
        entries = run_queries(zebra_index, queries, RankingParams(), "sys")
        assert [(e.query_id, e.doc_id, e.rank) for e in entries] == [("q1", "d1", 1)]

    def test_query_without_matches_leaves_no_entries_but_counts_in_n(self, zebra_index):
        queries = [Query("zebra", query_id="q1"), Query("unicorn", query_id="q2")]
        entries = run_queries(zebra_index, queries, RankingParams(), "sys")
        assert {e.query_id for e in entries} == {"q1"}
        report = evaluate(
            entries, [Judgment("q1", "d1", True)], ks=(10,), query_ids=["q1", "q2"]
        )
        assert report.n_queries == 2

    def test_query_id_required(self, zebra_index):
        with pytest.raises(ValueError, match="query_id"):
            run_queries(zebra_index, [Query("zebra")], RankingParams(), "sys")

    def test_fifty_six_synthetic_queries_end_to_end(self):
        docs = [Document(f"doc{i:02d}", f"term{i} filler words") for i in range(60)]
        index = build_index(docs)
        queries = [Query(f"term{i}", query_id=f"q{i:02d}") for i in range(56)]
        entries = run_queries(index, queries, RankingParams(), "sys")
        assert len(entries) == 56
        judgments = [Judgment(f"q{i:02d}", f"doc{i:02d}", True) for i in range(56)]
        report = evaluate(entries, judgments, ks=(10, 20), query_ids=[q.query_id for q in queries])
        assert report.n_queries == 56
        assert report.answered_at[20] == 56


class TestFiles:
    def test_queries_round_trip_and_tag_normalization(self, tmp_path):
        path = tmp_path / "queries.tsv"
        path.write_text(
            "q1\tHLJ\tsome symptoms here\nq2\tojrd\tmore text\nq3\tweird\ttail\twith\ttabs\n",
            encoding="utf-8",
        )
        queries = load_queries(str(path))
        assert [q.query_id for q in queries] == ["q1", "q2", "q3"]
        assert [q.source_tag for q in queries] == ["HLJ", "OJRD", "other"]
        assert queries[2].text == "tail\twith\ttabs"

    def test_queries_malformed_line(self, tmp_path):
        path = tmp_path / "queries.tsv"
        path.write_text("q1 only\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 1"):
            load_queries(str(path))

    def test_qrels_round_trip_and_validation(self, tmp_path):
        path = tmp_path / "qrels.tsv"
        path.write_text("q1\td1\t1\nq1\td2\t0\n", encoding="utf-8")
        judgments = load_qrels(str(path))
        assert judgments == [Judgment("q1", "d1", True), Judgment("q1", "d2", False)]
        path.write_text("q1\td1\t2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 1"):
            load_qrels(str(path))
        path.write_text("q1\td1\t1\nq1\td1\t0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            load_qrels(str(path))

    def test_run_file_round_trip(self, tmp_path):
        entries = [
            RunEntry("q1", "d1", 1, -1.5, "sys"),
            RunEntry("q1", "d2", 2, float("-inf"), "sys"),
        ]
        path = tmp_path / "run.tsv"
        save_run(entries, str(path))
        assert load_run(str(path)) == entries

    def test_report_json_and_matrix(self, tmp_path):
        run_a = _run("q1", {"rel": 1}, system="A") + _run("q2", {"x": 1}, system="A")
        run_b = _run("q1", {"x": 1}, system="B") + _run("q2", {"rel2": 1}, system="B")
        judgments = [Judgment("q1", "rel", True), Judgment("q2", "rel2", True)]
        reports = [
            evaluate(run_a, judgments, ks=(10, 20), query_ids=["q1", "q2"]),
            evaluate(run_b, judgments, ks=(10, 20), query_ids=["q1", "q2"]),
        ]
        path = tmp_path / "report.json"
        save_report(reports, str(path), ks=(10, 20))
        payload = json.loads(path.read_text())
        assert payload["ks"] == [10, 20]
        assert [s["system_name"] for s in payload["systems"]] == ["A", "B"]
        assert payload["systems"][0]["answered_at_20"] == 1
        matrix = payload["answered_matrix"]
        assert matrix["k"] == 20
        assert matrix["query_ids"] == ["q1", "q2"]
        assert matrix["matrix"] == [[1, 0], [0, 1]]
        table = format_report_table(reports)
        assert "MRR" in table and "A" in table and "B" in table

    def test_matrix_requires_common_universe(self):
        run_a = _run("q1", {"a": 1}, system="A")
        run_b = _run("q2", {"b": 1}, system="B")
        reports = [evaluate(run_a, []), evaluate(run_b, [])]
        with pytest.raises(ValueError, match="missing query"):
            answered_matrix(reports, 10)
