"""Detection and parsing of three-part legal reasoning in model output.

Validation is purely structural: the three labeled segments (major premise /
minor premise / conclusion) must be present, in order, each with non-empty
text. The label lexicon covers Chinese and English variants and is
configurable; semantic checking is out of scope.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class SyllogismStructure:
    major_premise: str
    minor_premise: str
    conclusion: str


@dataclass(frozen=True)
class LabelLexicon:
    major: tuple[str, ...] = ("大前提", "Major premise", "major premise")
    minor: tuple[str, ...] = ("小前提", "Minor premise", "minor premise")
    conclusion: tuple[str, ...] = ("结论", "Conclusion", "conclusion")


DEFAULT_LEXICON = LabelLexicon()

_SEPARATORS = "：:，, 、\t"


def _first_label(text: str, labels: tuple[str, ...]) -> tuple[int, int] | None:
    """(start, end) of the earliest occurrence of any label variant."""
    best: tuple[int, int] | None = None
    for label in labels:
        pos = text.find(label)
        if pos >= 0 and (best is None or pos < best[0]):
            best = (pos, pos + len(label))
    return best


def parse_syllogism(
    text: str, lexicon: LabelLexicon = DEFAULT_LEXICON
) -> SyllogismStructure | None:
    """Extract the three labeled segments, or None when the structure is
    absent. Labels must appear in major -> minor -> conclusion order and
    every segment must contain non-label text."""
    spans = [
        _first_label(text, lexicon.major),
        _first_label(text, lexicon.minor),
        _first_label(text, lexicon.conclusion),
    ]
    if any(s is None for s in spans):
        return None
    (ma_s, ma_e), (mi_s, mi_e), (co_s, co_e) = spans  # type: ignore[misc]
    if not (ma_s < mi_s < co_s):
        return None
    segments = [
        text[ma_e:mi_s],
        text[mi_e:co_s],
        text[co_e:],
    ]
    cleaned = [seg.strip(_SEPARATORS + "\n") for seg in segments]
    cleaned = [re.sub(r"\s+", " ", seg).strip() for seg in cleaned]
    if not all(cleaned):
        return None
    return SyllogismStructure(*cleaned)


def validate_syllogism(text: str, lexicon: LabelLexicon = DEFAULT_LEXICON) -> bool:
    """Pure predicate: same text, same verdict."""
    return parse_syllogism(text, lexicon) is not None
