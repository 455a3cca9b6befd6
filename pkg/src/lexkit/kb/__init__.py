from .chunking import ARTICLE_MARKER, ChunkPolicy, DocChunk, chunk_document
from .index import (
    TIE_BREAK,
    EmbeddingService,
    KnowledgeBase,
    RetrievalConfig,
    RetrievalHit,
    tokenize,
)
from .store import DocumentStore, LegalDocument, read_ingest_lines

__all__ = [
    "ARTICLE_MARKER",
    "ChunkPolicy",
    "DocChunk",
    "DocumentStore",
    "EmbeddingService",
    "KnowledgeBase",
    "LegalDocument",
    "RetrievalConfig",
    "RetrievalHit",
    "TIE_BREAK",
    "chunk_document",
    "read_ingest_lines",
    "tokenize",
]
