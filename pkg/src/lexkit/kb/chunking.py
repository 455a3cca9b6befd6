"""Article-level document chunking.

Statute bodies are split at article markers ("第一条", "第1064条") found at
line starts; in-article cross references never split a chunk. Bodies without
markers fall back to fixed 512-character windows with no overlap. Every body
character is covered by exactly one chunk except whitespace-only preambles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..textnorm import parse_cn_number
from .store import LegalDocument

ARTICLE_MARKER = r"第[〇零一二三四五六七八九十百千万0-9０-９]+条"
DEFAULT_ARTICLE_RE = re.compile(rf"(?m)^[ \t　]*({ARTICLE_MARKER})")

WINDOW_CHARS = 512


@dataclass(frozen=True)
class DocChunk:
    chunk_id: str
    doc_id: str
    text: str
    char_span: tuple[int, int]
    chunk_index: int
    article_no: int | None = None
    version: int = 1


@dataclass(frozen=True)
class ChunkPolicy:
    article_pattern: re.Pattern = field(default=DEFAULT_ARTICLE_RE)
    window: int = WINDOW_CHARS


def _chunk_id(doc: LegalDocument, index: int) -> str:
    return f"{doc.doc_id}:v{doc.version}:c{index:03d}"


def chunk_document(doc: LegalDocument, policy: ChunkPolicy | None = None) -> list[DocChunk]:
    policy = policy or ChunkPolicy()
    body = doc.body
    marks = list(policy.article_pattern.finditer(body))
    chunks: list[DocChunk] = []
    if marks:
        index = 0
        preamble_end = marks[0].start()
        if body[:preamble_end].strip():
            chunks.append(
                DocChunk(
                    chunk_id=_chunk_id(doc, index),
                    doc_id=doc.doc_id,
                    text=body[:preamble_end],
                    char_span=(0, preamble_end),
                    chunk_index=index,
                    article_no=None,
                    version=doc.version,
                )
            )
            index += 1
        for i, m in enumerate(marks):
            start = m.start()
            end = marks[i + 1].start() if i + 1 < len(marks) else len(body)
            number = parse_cn_number(m.group(1)[1:-1])
            chunks.append(
                DocChunk(
                    chunk_id=_chunk_id(doc, index),
                    doc_id=doc.doc_id,
                    text=body[start:end],
                    char_span=(start, end),
                    chunk_index=index,
                    article_no=number if number is not None else i + 1,
                    version=doc.version,
                )
            )
            index += 1
        return chunks
    window = policy.window
    for index, start in enumerate(range(0, len(body), window)):
        end = min(start + window, len(body))
        chunks.append(
            DocChunk(
                chunk_id=_chunk_id(doc, index),
                doc_id=doc.doc_id,
                text=body[start:end],
                char_span=(start, end),
                chunk_index=index,
                article_no=None,
                version=doc.version,
            )
        )
    return chunks
