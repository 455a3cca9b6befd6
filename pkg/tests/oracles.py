"""Independent exhaustive scorers used to check the engine implementations.

These deliberately avoid importing engine internals: plain loops over the
chunk texts, re-deriving every statistic from scratch with the documented
formula (lowercased character bigrams within \\w+ segments; Lucene-form idf;
accumulation over distinct query tokens in ascending order).
"""

from __future__ import annotations

import math
import re
from collections import Counter

_SEG = re.compile(r"\w+")


def oracle_tokens(text: str) -> list[str]:
    out: list[str] = []
    for seg in _SEG.findall(text.lower()):
        if len(seg) == 1:
            out.append(seg)
        else:
            for i in range(len(seg) - 1):
                out.append(seg[i : i + 2])
    return out


def oracle_bm25_rank(
    chunks: list[tuple[str, str, int, str]],
    query: str,
    k: int,
    k1: float = 1.5,
    b: float = 0.75,
) -> list[tuple[str, float]]:
    """Exhaustively score every chunk and return the top-k (id, score).

    `chunks` rows are (doc_id, chunk_id, chunk_index, text). Ties are broken
    by (doc_id, chunk_index) ascending.
    """
    token_lists = [oracle_tokens(text) for _, _, _, text in chunks]
    n = len(chunks)
    df: Counter[str] = Counter()
    for tokens in token_lists:
        for term in set(tokens):
            df[term] += 1
    avgdl = sum(len(t) for t in token_lists) / n if n else 0.0
    qtf = Counter(oracle_tokens(query))

    scored = []
    for (doc_id, chunk_id, chunk_index, _), tokens in zip(chunks, token_lists):
        tf = Counter(tokens)
        dl = len(tokens)
        score = 0.0
        for term in sorted(qtf):
            if term not in tf:
                continue
            idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
            score += (
                qtf[term]
                * idf
                * (tf[term] * (k1 + 1.0))
                / (tf[term] + k1 * (1.0 - b + b * dl / avgdl))
            )
        scored.append((score, doc_id, chunk_index, chunk_id))
    scored.sort(key=lambda row: (-row[0], row[1], row[2]))
    return [(chunk_id, score) for score, _, _, chunk_id in scored[: min(k, n)]]


def oracle_micro_average(cells: list[tuple[float, int]]) -> float:
    """Independent recomputation of the count-weighted accuracy average."""
    total = sum(n for _, n in cells)
    return sum(acc * n for acc, n in cells) / total
