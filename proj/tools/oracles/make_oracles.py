#!/usr/bin/env python3
"""Independent reference values frozen into tests/golden/.

Nothing here imports or runs the C++ code. Inputs use lowercase letters only,
so normalization is the identity on them.
"""
import itertools
import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[2] / "tests" / "golden"


def bm25_rank(docs, query, k, k1=1.2, b=0.75):
    n_docs = len(docs)
    avgdl = sum(len(t) for _, t in docs) / n_docs
    seen = []
    for q in query:
        if q not in seen:
            seen.append(q)
    scored = []
    for doc_id, toks in docs:
        s = 0.0
        for term in seen:
            n_t = sum(1 for _, d in docs if term in d)
            tf = toks.count(term)
            if tf == 0:
                continue
            idf = math.log((n_docs - n_t + 0.5) / (n_t + 0.5) + 1.0)
            s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(toks) / avgdl))
        if s > 0:
            scored.append((doc_id, s))
    scored.sort(key=lambda p: (-p[1], p[0]))
    return scored[:k]


def bm25_cases(rng):
    cases = []
    hand = [("d1", "card lost yesterday".split()),
            ("d2", "card blocked card".split()),
            ("d3", "balance of my account".split()),
            ("d4", "lost phone".split()),
            ("d5", "transfer money to card of friend".split())]
    for q in (["card"], ["lost"], ["card", "lost"], ["zzz"]):
        cases.append({"docs": [{"doc_id": d, "tokens": t} for d, t in hand],
                      "query": q, "k": 5, "expected": bm25_rank(hand, q, 5)})
    vocab = ["a", "b", "c", "d", "e", "f", "g", "h"]
    for _ in range(10):
        n = rng.randint(1, 30)
        docs = [(f"doc{rng.randrange(1000):03d}x{i}", [rng.choice(vocab) for _ in range(rng.randint(1, 9))])
                for i in range(n)]
        q = [rng.choice(vocab) for _ in range(rng.randint(1, 4))]
        k = rng.randint(1, 8)
        cases.append({"docs": [{"doc_id": d, "tokens": t} for d, t in docs],
                      "query": q, "k": k, "expected": bm25_rank(docs, q, k)})
    return cases


def classify(taxonomy, tokens):
    toks = set(tokens)
    scores = []
    for c in taxonomy:
        kw = set(c["keywords"])
        scores.append((c["class_id"], len(toks & kw) / len(kw)))
    scores.sort(key=lambda p: (-p[1], p[0]))
    top = sum(s for _, s in scores[:3])
    conf = scores[0][1] / top if top > 0 else 0.0
    return scores[0][0], conf


def classifier_cases(rng):
    pool = [f"w{i}" for i in range(24)]
    taxonomy = []
    for i in range(10):
        taxonomy.append({"class_id": f"k{(i * 7) % 10}",
                         "keywords": rng.sample(pool, rng.randint(1, 4))})
    utterances = []
    for _ in range(50):
        toks = [rng.choice(pool + ["x", "y"]) for _ in range(rng.randint(1, 6))]
        cid, conf = classify(taxonomy, toks)
        utterances.append({"tokens": toks, "class_id": cid, "confidence": conf})
    return {"taxonomy": taxonomy, "utterances": utterances}


def min_alignment_cost(ref, hyp):
    """Exhaustive search over every alignment (no dynamic programming)."""
    best = None

    def go(i, j, cost):
        nonlocal best
        if best is not None and cost >= best:
            return
        if i == len(ref) and j == len(hyp):
            best = cost
            return
        if i < len(ref) and j < len(hyp):
            go(i + 1, j + 1, cost + (0 if ref[i] == hyp[j] else 1))
        if i < len(ref):
            go(i + 1, j, cost + 1)
        if j < len(hyp):
            go(i, j + 1, cost + 1)

    go(0, 0, 0)
    return best


def wer_cases(rng):
    cases = []
    for _ in range(40):
        ref = [rng.choice("abcd") for _ in range(rng.randint(0, 6))]
        hyp = [rng.choice("abcd") for _ in range(rng.randint(0, 6))]
        cases.append({"ref": ref, "hyp": hyp, "cost": min_alignment_cost(ref, hyp)})
    return cases


def main():
    rng = random.Random(5150)
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in (("bm25_oracle.json", bm25_cases(rng)),
                       ("classifier_oracle.json", classifier_cases(rng)),
                       ("wer_oracle.json", wer_cases(rng))):
        (OUT / name).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
