"""Top-K retrieval over active statute chunks.

Default backend is lexical BM25 (k1=1.5, b=0.75) over character-bigram
tokens; Chinese text has no whitespace tokenization, so bigrams make the
index self-contained and exactly testable. Scoring formula (documented so
the independent oracle can mirror it):

    idf(t)   = ln(1 + (N - df(t) + 0.5) / (df(t) + 0.5))
    score(c) = sum over distinct query tokens t, in ascending token order, of
               qtf(t) * idf(t) * tf(t,c)*(k1+1) / (tf(t,c) + k1*(1 - b + b*len(c)/avgdl))

Hits are the min(k, #chunks) best chunks, score descending; equal scores are
ordered by (doc_id, chunk_index) ascending. Only the highest version per
lineage is searchable; superseded versions stay in the store. An optional
vector backend ranks by cosine similarity of embeddings fetched from an
external embedding service through the llm gateway.
"""

from __future__ import annotations

import json
import math
import re
import threading
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ..errors import (
    EmptyQuery,
    IndexEmpty,
    UnknownDocument,
    ValidationError,
)
from ..gateway import Gateway, ProviderProfile, user_request
from .chunking import ChunkPolicy, DocChunk, chunk_document
from .store import DocumentStore, LegalDocument

TIE_BREAK = "(doc_id, chunk_index) ascending"

_SEGMENT_RE = re.compile(r"\w+")


def tokenize(text: str) -> list[str]:
    """Lowercased character bigrams within \\w+ segments; a one-character
    segment yields itself."""
    tokens: list[str] = []
    for seg in _SEGMENT_RE.findall(text.lower()):
        if len(seg) == 1:
            tokens.append(seg)
        else:
            tokens.extend(seg[i : i + 2] for i in range(len(seg) - 1))
    return tokens


@dataclass(frozen=True)
class RetrievalConfig:
    k: int = 3
    backend: str = "lexical"  # lexical | vector
    k1: float = 1.5
    b: float = 0.75
    tie_break: str = TIE_BREAK

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValidationError("k must be >= 1")
        if self.backend not in ("lexical", "vector"):
            raise ValidationError(f"unknown backend: {self.backend!r}")
        if self.k1 <= 0 or not (0.0 <= self.b <= 1.0):
            raise ValidationError("lexical params require k1 > 0 and 0 <= b <= 1")

    @property
    def lexical_params(self) -> tuple[float, float]:
        return (self.k1, self.b)


@dataclass(frozen=True)
class RetrievalHit:
    chunk_id: str
    score: float
    rank: int


class _Snapshot:
    """Immutable searchable state; swapped wholesale on every index change
    so readers never observe a mixed state."""

    def __init__(self, chunks: Sequence[DocChunk]) -> None:
        self.chunks = sorted(chunks, key=lambda c: (c.doc_id, c.chunk_index))
        self.by_id = {c.chunk_id: c for c in self.chunks}
        self.doc_lens: list[int] = []
        self.postings: dict[str, list[tuple[int, int]]] = {}
        for ordinal, chunk in enumerate(self.chunks):
            tokens = tokenize(chunk.text)
            self.doc_lens.append(len(tokens))
            for term, tf in sorted(Counter(tokens).items()):
                self.postings.setdefault(term, []).append((ordinal, tf))
        n = len(self.chunks)
        self.avgdl = (sum(self.doc_lens) / n) if n else 0.0
        self.idf = {
            term: math.log(1.0 + (n - len(plist) + 0.5) / (len(plist) + 0.5))
            for term, plist in self.postings.items()
        }

    def search(self, query: str, config: RetrievalConfig) -> list[RetrievalHit]:
        scores = [0.0] * len(self.chunks)
        qtf = Counter(tokenize(query))
        k1, b = config.k1, config.b
        for term in sorted(qtf):
            idf = self.idf.get(term)
            if idf is None:
                continue
            weight = qtf[term]
            for ordinal, tf in self.postings[term]:
                dl = self.doc_lens[ordinal]
                scores[ordinal] += (
                    weight
                    * idf
                    * (tf * (k1 + 1.0))
                    / (tf + k1 * (1.0 - b + b * dl / self.avgdl))
                )
        order = sorted(range(len(self.chunks)), key=lambda o: -scores[o])
        top = order[: min(config.k, len(self.chunks))]
        return [
            RetrievalHit(chunk_id=self.chunks[o].chunk_id, score=scores[o], rank=r)
            for r, o in enumerate(top, start=1)
        ]


class EmbeddingService:
    """Cosine-similarity backend over vectors served by an external
    embedding endpoint, reached through the llm gateway (and therefore
    record/replay-able). The service must answer with a JSON float array."""

    def __init__(self, gateway: Gateway, profile: ProviderProfile, model_id: str) -> None:
        self.gateway = gateway
        self.profile = profile
        self.model_id = model_id
        self._cache: dict[str, list[float]] = {}

    def embed(self, text: str, cache_key: str | None = None) -> list[float]:
        if cache_key and cache_key in self._cache:
            return self._cache[cache_key]
        req = user_request(self.profile.provider_id, self.model_id, f"embed: {text}")
        resp = self.gateway.complete(req, self.profile)
        try:
            vec = [float(x) for x in json.loads(resp.text)]
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise ValidationError(f"embedding service returned non-vector: {exc}") from exc
        if cache_key:
            self._cache[cache_key] = vec
        return vec


def _cosine(a: Sequence[float], b: Sequence[float]) -> float:
    num = sum(x * y for x, y in zip(a, b))
    den = math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b))
    return num / den if den else 0.0


class KnowledgeBase:
    """Versioned store plus the searchable index over active versions."""

    def __init__(
        self,
        store: DocumentStore | None = None,
        policy: ChunkPolicy | None = None,
        embedding: EmbeddingService | None = None,
    ) -> None:
        self.store = store or DocumentStore()
        self.policy = policy or ChunkPolicy()
        self.embedding = embedding
        self._write_lock = threading.Lock()
        self._snapshot = _Snapshot([])
        self._indexed: dict[str, list[DocChunk]] = {}  # doc_id -> active chunks

    # --- ingestion and index maintenance ---

    def ingest_document(self, raw_text: str, metadata: Mapping[str, str]) -> LegalDocument:
        return self.store.ingest_document(raw_text, metadata)

    def chunk(self, doc: LegalDocument) -> list[DocChunk]:
        return chunk_document(doc, self.policy)

    def index_upsert(self, chunks: Sequence[DocChunk]) -> None:
        """Make `chunks` the searchable content for their documents. All
        chunks of one call must belong to stored documents."""
        by_doc: dict[str, list[DocChunk]] = {}
        for chunk in chunks:
            self.store.get(chunk.doc_id)  # raises UnknownDocument
            by_doc.setdefault(chunk.doc_id, []).append(chunk)
        with self._write_lock:
            self._indexed.update(by_doc)
            self._swap()

    def update_document(self, doc_id: str) -> None:
        """Re-chunk the highest version of `doc_id` and atomically swap it
        into the index; superseded versions stop being searchable."""
        doc = self.store.get(doc_id)  # raises UnknownDocument
        chunks = self.chunk(doc)
        with self._write_lock:
            self._indexed[doc_id] = chunks
            self._swap()

    def upsert(self, raw_text: str, metadata: Mapping[str, str]) -> LegalDocument:
        """Ingest (version bump when the lineage exists) and index."""
        doc = self.ingest_document(raw_text, metadata)
        self.update_document(doc.doc_id)
        return doc

    def rebuild_index(self) -> None:
        """Rebuild from the store: chunk the active version of every lineage."""
        with self._write_lock:
            self._indexed = {
                doc.doc_id: chunk_document(doc, self.policy)
                for doc in self.store.active_documents()
            }
            self._swap()

    def _swap(self) -> None:
        self._snapshot = _Snapshot(
            [c for chunks in self._indexed.values() for c in chunks]
        )

    # --- lookups ---

    @property
    def index_size(self) -> int:
        return len(self._snapshot.chunks)

    def resolve_chunk(self, chunk_id: str) -> DocChunk:
        chunk = self._snapshot.by_id.get(chunk_id)
        if chunk is None:
            raise UnknownDocument(f"chunk not indexed: {chunk_id}")
        return chunk

    def find_article(self, title: str, article_no: int) -> DocChunk | None:
        doc = self.store.find_by_title(title)
        if doc is None:
            return None
        for chunk in self._indexed.get(doc.doc_id, []):
            if chunk.article_no == article_no:
                return chunk
        return None

    # --- search ---

    def search(self, query: str, config: RetrievalConfig | None = None) -> list[RetrievalHit]:
        config = config or RetrievalConfig()
        if not query or not query.strip():
            raise EmptyQuery("query is empty")
        snapshot = self._snapshot
        if not snapshot.chunks:
            raise IndexEmpty("no chunks indexed")
        if config.backend == "vector":
            return self._vector_search(query, config, snapshot)
        return snapshot.search(query, config)

    def _vector_search(
        self, query: str, config: RetrievalConfig, snapshot: _Snapshot
    ) -> list[RetrievalHit]:
        if self.embedding is None:
            raise ValidationError("vector backend requires an embedding service profile")
        qvec = self.embedding.embed(query)
        scored = [
            (self.embedding.embed(c.text, cache_key=c.chunk_id), c)
            for c in snapshot.chunks
        ]
        sims = [(_cosine(qvec, vec), c) for vec, c in scored]
        sims.sort(key=lambda pair: (-pair[0], pair[1].doc_id, pair[1].chunk_index))
        top = sims[: min(config.k, len(sims))]
        return [
            RetrievalHit(chunk_id=c.chunk_id, score=s, rank=r)
            for r, (s, c) in enumerate(top, start=1)
        ]

    # --- persistence (documented layout, rebuildable from the store) ---

    def save(self, directory: str | Path) -> None:
        """Write documents.jsonl (all versions) and index.json (active
        chunks; postings are rebuilt on load)."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        self.store.save(directory / "documents.jsonl")
        chunks = [
            {
                "chunk_id": c.chunk_id,
                "doc_id": c.doc_id,
                "text": c.text,
                "char_span": list(c.char_span),
                "chunk_index": c.chunk_index,
                "article_no": c.article_no,
                "version": c.version,
            }
            for chunks in sorted(self._indexed.items())
            for c in chunks[1]
        ]
        (directory / "index.json").write_text(
            json.dumps({"format": 1, "chunks": chunks}, ensure_ascii=False),
            encoding="utf-8",
        )

    @classmethod
    def load(cls, directory: str | Path, policy: ChunkPolicy | None = None) -> "KnowledgeBase":
        directory = Path(directory)
        kb = cls(DocumentStore.load(directory / "documents.jsonl"), policy=policy)
        index_file = directory / "index.json"
        if index_file.exists():
            data = json.loads(index_file.read_text(encoding="utf-8"))
            chunks = [
                DocChunk(
                    chunk_id=o["chunk_id"],
                    doc_id=o["doc_id"],
                    text=o["text"],
                    char_span=tuple(o["char_span"]),
                    chunk_index=o["chunk_index"],
                    article_no=o["article_no"],
                    version=o["version"],
                )
                for o in data["chunks"]
            ]
            kb.index_upsert(chunks)
        else:
            kb.rebuild_index()
        return kb
