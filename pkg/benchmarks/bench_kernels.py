"""Benchmark the compiled scoring kernel against the pure-Python fallback.

Builds a synthetic corpus, runs the same query set through every available
kernel, checks the rankings agree, and prints per-kernel latency statistics.

    python3 benchmarks/bench_kernels.py --docs 33144 --queries 200
"""

import argparse
import random
import statistics
import time

from raredx import Document, build_index
from raredx import _kernels
from raredx.ranking import DIRICHLET, JELINEK_MERCER, Query, RankingParams, search


def build_corpus(rng, n_docs, vocab_size):
    words = [f"term{i}" for i in range(vocab_size)]
    cum = []
    total = 0.0
    for i in range(vocab_size):
        total += 1.0 / (i + 1) ** 1.05
        cum.append(total)
    docs = []
    for i in range(n_docs):
        title = " ".join(rng.choices(words, cum_weights=cum, k=4))
        body = " ".join(rng.choices(words, cum_weights=cum, k=rng.randint(60, 140)))
        docs.append(Document(f"doc{i:06d}", title, body, source="synthetic"))
    return docs, words


def make_queries(rng, words, n_queries, terms_per_query):
    # Mix head terms (huge postings) with mid-frequency terms.
    queries = []
    for _ in range(n_queries):
        head = rng.choices(words[:200], k=max(1, terms_per_query // 2))
        mid = rng.choices(words[200:5000], k=terms_per_query - len(head))
        queries.append(Query(" ".join(head + mid)))
    return queries


def time_kernel(kernel, index, queries, params):
    timings = []
    results = []
    for query in queries:
        started = time.perf_counter()
        ranked = search(index, query, params, kernel=kernel)
        timings.append((time.perf_counter() - started) * 1000.0)
        results.append([(e.doc_id, e.score) for e in ranked.entries])
    return timings, results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=33_144)
    parser.add_argument("--vocab", type=int, default=30_000)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--terms", type=int, default=5)
    parser.add_argument("--model", choices=["jm", "dirichlet"], default="dirichlet")
    parser.add_argument("--seed", type=int, default=33144)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"building corpus: {args.docs} docs, vocab {args.vocab} ...")
    started = time.perf_counter()
    docs, words = build_corpus(rng, args.docs, args.vocab)
    index = build_index(docs)
    print(
        f"built in {time.perf_counter() - started:.1f}s "
        f"({index.collection_term_count} tokens, {len(list(index.terms()))} terms)"
    )

    queries = make_queries(rng, words, args.queries, args.terms)
    params = RankingParams(
        model=JELINEK_MERCER if args.model == "jm" else DIRICHLET, top_n=20
    )

    kernels = _kernels.available()
    if len(kernels) < 2:
        print("note: compiled kernel not built; benchmarking the pure-Python kernel only")

    baseline_results = None
    medians = {}
    for name in sorted(kernels):
        kernel = kernels[name]
        # Warm-up pass keeps one-time costs out of the timings.
        time_kernel(kernel, index, queries[:5], params)
        timings, results = time_kernel(kernel, index, queries, params)
        if baseline_results is None:
            baseline_results = results
        elif results != baseline_results:
            raise SystemExit(f"kernel {name!r} disagrees with the baseline ranking")
        medians[name] = statistics.median(timings)
        p90 = sorted(timings)[int(len(timings) * 0.9) - 1]
        print(
            f"kernel {name:<7} median {medians[name]:7.2f} ms   "
            f"mean {statistics.mean(timings):7.2f} ms   p90 {p90:7.2f} ms"
        )
    if len(medians) > 1:
        print("rankings identical across kernels")
        print(f"speedup: compiled kernel is {medians['python'] / medians['c']:.1f}x faster (median)")


if __name__ == "__main__":
    main()
