"""Heuristic statute-citation extraction.

The default rule targets bracketed statute titles followed by one or more
article markers: 《民法典》第1064条, 《著作权法》第十条、第十一条. The rule
set is configuration; callers may extend it with additional compiled
patterns carrying `title` and `articles` named groups.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from ..kb.chunking import ARTICLE_MARKER
from ..textnorm import parse_cn_number

if TYPE_CHECKING:
    from ..kb import KnowledgeBase

_MARKER_RE = re.compile(ARTICLE_MARKER)

DEFAULT_PATTERNS: tuple[re.Pattern, ...] = (
    re.compile(
        r"《(?P<title>[^《》]{1,60})》\s*"
        rf"(?P<articles>(?:{ARTICLE_MARKER}[、，,和及与\s]*)+)"
    ),
)


@dataclass(frozen=True)
class StatuteReference:
    title: str
    article_no: int
    article_text: str | None = None

    def render(self) -> str:
        base = f"《{self.title}》第{self.article_no}条"
        if self.article_text:
            return f"{base}：{self.article_text}"
        return base


def extract_citations(
    raw_text: str,
    pattern_set: Sequence[re.Pattern] = DEFAULT_PATTERNS,
    kb: "KnowledgeBase | None" = None,
) -> list[StatuteReference]:
    """Citations in first-occurrence order, deduplicated on
    (title, article number). Article text is attached when the cited
    article resolves against the knowledge base."""
    found: list[tuple[int, StatuteReference]] = []
    seen: set[tuple[str, int]] = set()
    for pattern in pattern_set:
        for m in pattern.finditer(raw_text):
            title = m.group("title").strip()
            for marker in _MARKER_RE.finditer(m.group("articles")):
                number = parse_cn_number(marker.group(0)[1:-1])
                if number is None:
                    continue
                key = (title, number)
                if key in seen:
                    continue
                seen.add(key)
                text = None
                if kb is not None:
                    chunk = kb.find_article(title, number)
                    if chunk is not None:
                        text = chunk.text.strip()
                found.append(
                    (m.start() + marker.start(), StatuteReference(title, number, text))
                )
    found.sort(key=lambda pair: pair[0])
    return [ref for _, ref in found]


def extract_references(
    raw_text: str,
    pattern_set: Sequence[re.Pattern] = DEFAULT_PATTERNS,
    kb: "KnowledgeBase | None" = None,
) -> list[str]:
    """Rendered reference strings (empty list is a valid result)."""
    return [ref.render() for ref in extract_citations(raw_text, pattern_set, kb)]
