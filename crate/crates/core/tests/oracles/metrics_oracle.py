"""Independent scorer for data/eval/pairs.jsonl.

Brute-force versions of the metrics: n-grams counted with Counter, LCS by
enumerating subsequences for short inputs and memoized recursion
otherwise, METEOR alignment re-derived from its definition. Writes
data/eval/expected_scores.json. Needs snowballstemmer 2.2.0, the
Porter2 revision that predates the 3.x changes to -ing/-ed handling.

    python3 tests/oracles/metrics_oracle.py            # corpus fixture
    python3 tests/oracles/metrics_oracle.py --worked   # BLEU worked examples
"""

import functools
import json
import math
import sys
import unicodedata
from collections import Counter
from itertools import combinations
from pathlib import Path

import snowballstemmer

STEM = snowballstemmer.stemmer("english")


def tokenize(text):
    out, word = [], ""
    for ch in text:
        if ch.isspace():
            if word:
                out.append(word)
            word = ""
        elif ch.isalnum() or ch == "_":
            word += ch.lower()
        else:
            if word:
                out.append(word)
            word = ""
            out.append(ch.lower())
    if word:
        out.append(word)
    return out


def ngrams(toks, n):
    return Counter(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))


def bleu(cands, refs):
    match, total = [0] * 4, [0] * 4
    c_len = sum(len(c) for c in cands)
    r_len = sum(len(r) for r in refs)
    for c, r in zip(cands, refs):
        for n in range(1, 5):
            cc, rc = ngrams(c, n), ngrams(r, n)
            total[n - 1] += sum(cc.values())
            match[n - 1] += sum(min(v, rc[g]) for g, v in cc.items())
    if match[0] == 0:
        return 0.0
    logs = []
    for m, t in zip(match, total):
        if t == 0:
            break
        logs.append(math.log(m / t if m else 1 / (2 * t)))
    bp = 1.0 if c_len >= r_len else math.exp(1 - r_len / c_len)
    return 100 * bp * math.exp(sum(logs) / len(logs))


def lcs(a, b):
    if len(a) <= 8 and len(b) <= 8:
        best = 0
        for k in range(1, len(a) + 1):
            subs = set(combinations(a, k))
            if any(is_subseq(s, b) for s in subs):
                best = k
        return best

    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def is_subseq(s, b):
    it = iter(b)
    return all(x in it for x in s)


def rouge_l(c, r):
    l = lcs(tuple(c), tuple(r))
    if l == 0:
        return 0.0
    p, rec = l / len(c), l / len(r)
    return 100 * 2 * p * rec / (p + rec)


def meteor(c, r):
    used_c, used_r, pairs = set(), set(), []
    for keyf in (lambda t: t, STEM.stemWord):
        ck = [keyf(t) for t in c]
        rk = [keyf(t) for t in r]
        for i in range(len(c)):
            if i in used_c:
                continue
            for j in range(len(r)):
                if j not in used_r and ck[i] == rk[j]:
                    used_c.add(i)
                    used_r.add(j)
                    pairs.append((i, j))
                    break
    m = len(pairs)
    if m == 0:
        return 0.0
    pairs.sort()
    chunks = 1 + sum(
        1 for (a, b), (x, y) in zip(pairs, pairs[1:]) if not (x == a + 1 and y == b + 1)
    )
    p, rec = m / len(c), m / len(r)
    fmean = 10 * p * rec / (rec + 9 * p)
    return 100 * fmean * (1 - 0.5 * (chunks / m) ** 3)


def column(pairs, key):
    rows = [(tokenize(p["candidate"]), tokenize(p[key])) for p in pairs if p.get(key) is not None]
    if not rows:
        return None
    return {
        "bleu": bleu([c for c, _ in rows], [r for _, r in rows]),
        "meteor": sum(meteor(c, r) for c, r in rows) / len(rows),
        "rouge_l": sum(rouge_l(c, r) for c, r in rows) / len(rows),
        "pairs": len(rows),
        "skipped": len(pairs) - len(rows),
    }


WORKED_BLEU = [
    (["the the the"], ["the cat sat"]),
    (["fix: guard null pointer in parser"], ["fix: guard against null pointer in the parser"]),
    (["add retry to client", "fix typo"], ["add retry logic to the http client", "fix typo in readme"]),
]


def worked():
    for cands, refs in WORKED_BLEU:
        print(repr(bleu([tokenize(c) for c in cands], [tokenize(r) for r in refs])), cands, refs)


def main():
    if sys.argv[1:] == ["--worked"]:
        worked()
        return
    root = Path(__file__).resolve().parents[2] / "data" / "eval"
    pairs = [json.loads(l) for l in (root / "pairs.jsonl").read_text().splitlines() if l.strip()]
    out = {"reference_omg": column(pairs, "reference_omg"), "reference_human": column(pairs, "reference_human")}
    text = json.dumps(out, indent=2) + "\n"
    (root / "expected_scores.json").write_text(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
