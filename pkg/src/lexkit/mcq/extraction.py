"""Answer extraction from free-form model output.

Three rules applied in priority order over the whole response:

1. explicit_answer — a marker phrase 答案是/答案为/答案:/答案： or
   "answer is"/"Answer:" followed by option letters; the letters immediately
   after the first marker that yields any are taken. Separator characters
   (whitespace, commas, 、, colons, brackets) and connector words
   (和/及/与/and/or) may sit between letters; anything else ends the capture.
   Lowercase letters count only as single-letter words.
2. standalone_letters — the first line consisting solely of option letters
   (case-insensitive) optionally separated by spaces/commas/、.
3. fallback_scan — the first maximal run of consecutive uppercase option
   letters anywhere in the text, provided the run is not embedded in a
   longer ASCII word (the A of "Answer" is not an answer).

Captured letters are uppercased, deduplicated, and restricted to the item's
option letters; when no rule fires the outcome is the empty set, which
simply scores incorrect. Extraction never raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Collection

_MARKER_RE = re.compile(r"答案\s*(?:是|为|:|：)|answer\s+is|answer\s*[:：]", re.IGNORECASE)

_SEP_CHARS = set(" \t\r\n,，、:：;；()（）[]【】")
_SEP_WORDS_CJK = ("和", "及", "与")
_SEP_WORDS_ASCII = ("and", "or")

_LINE_SEP_CHARS = set(" \t,，、")

RULES = ("explicit_answer", "standalone_letters", "fallback_scan", "none")


@dataclass(frozen=True)
class ExtractionOutcome:
    letters: frozenset[str]
    rule_used: str
    raw_response: str


def _is_single_letter_word(text: str, i: int) -> bool:
    nxt = text[i + 1] if i + 1 < len(text) else ""
    return not (nxt.isascii() and nxt.isalpha())


def _capture_after(text: str, start: int, valid: frozenset[str]) -> list[str]:
    letters: list[str] = []
    i = start
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _SEP_CHARS:
            i += 1
            continue
        if ch in _SEP_WORDS_CJK:
            i += 1
            continue
        lowered = text[i : i + 3].lower()
        skipped = False
        for word in _SEP_WORDS_ASCII:
            if lowered.startswith(word):
                after = i + len(word)
                if after >= n or not (text[after].isascii() and text[after].isalpha()):
                    i = after
                    skipped = True
                    break
        if skipped:
            continue
        if ch.isascii() and ch.isalpha():
            upper = ch.upper()
            if upper in valid and (ch.isupper() or _is_single_letter_word(text, i)):
                letters.append(upper)
                i += 1
                continue
        break
    return letters


def _rule_explicit(text: str, valid: frozenset[str]) -> list[str]:
    for m in _MARKER_RE.finditer(text):
        letters = _capture_after(text, m.end(), valid)
        if letters:
            return letters
    return []


def _rule_standalone(text: str, valid: frozenset[str]) -> list[str]:
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        letters: list[str] = []
        qualifies = True
        for ch in stripped:
            if ch in _LINE_SEP_CHARS:
                continue
            if ch.isascii() and ch.isalpha() and ch.upper() in valid:
                letters.append(ch.upper())
            else:
                qualifies = False
                break
        if qualifies and letters:
            return letters
    return []


def _rule_fallback(text: str, valid: frozenset[str]) -> list[str]:
    i = 0
    n = len(text)
    while i < n:
        if text[i] in valid:  # uppercase members only
            j = i
            while j < n and text[j] in valid:
                j += 1
            before = text[i - 1] if i > 0 else ""
            after = text[j] if j < n else ""
            embedded = (before.isascii() and before.isalpha()) or (
                after.isascii() and after.isalpha()
            )
            if not embedded:
                return list(text[i:j])
            i = j
        else:
            i += 1
    return []


def extract_answer(response_text: str, option_letters: Collection[str]) -> ExtractionOutcome:
    valid = frozenset(letter.upper() for letter in option_letters)
    for rule, fn in (
        ("explicit_answer", _rule_explicit),
        ("standalone_letters", _rule_standalone),
        ("fallback_scan", _rule_fallback),
    ):
        letters = fn(response_text, valid)
        if letters:
            return ExtractionOutcome(
                letters=frozenset(letters), rule_used=rule, raw_response=response_text
            )
    return ExtractionOutcome(
        letters=frozenset(), rule_used="none", raw_response=response_text
    )


def score_item(extracted: Collection[str], gold: Collection[str]) -> bool:
    """Exact set equality; partial overlap is incorrect."""
    return frozenset(extracted) == frozenset(gold)
