"""Text normalization and numeral helpers used across modules."""

from __future__ import annotations

import re
import unicodedata
from decimal import ROUND_HALF_UP, Decimal

_CRLF_RE = re.compile(r"\r\n?")
_HSPACE_RE = re.compile(r"[ \t　]+")
_BLANKS_RE = re.compile(r"\n{3,}")

_CN_DIGITS = {"零": 0, "〇": 0, "一": 1, "二": 2, "两": 2, "三": 3, "四": 4,
              "五": 5, "六": 6, "七": 7, "八": 8, "九": 9}
_CN_UNITS = {"十": 10, "百": 100, "千": 1000, "万": 10000}
_FULLWIDTH_DIGITS = str.maketrans("０１２３４５６７８９", "0123456789")


def normalize_text(text: str) -> str:
    """Canonical cleanup for dataset fields.

    Newlines unified to \\n, control characters (other than newline) removed,
    horizontal whitespace runs collapsed to one space, at most one blank line
    kept, ends stripped. Idempotent.
    """
    text = _CRLF_RE.sub("\n", text)
    text = "".join(
        ch for ch in text if ch == "\n" or unicodedata.category(ch) != "Cc"
    )
    text = _HSPACE_RE.sub(" ", text)
    text = "\n".join(line.strip() for line in text.split("\n"))
    text = _BLANKS_RE.sub("\n\n", text)
    return text.strip()


def parse_cn_number(token: str) -> int | None:
    """Parse a Chinese or Arabic numeral token ("一千零六十四", "1064", "１０").

    Returns None when the token is not a recognizable number. Supports values
    up to the 万 range, which covers statute article numbering.
    """
    token = token.strip().translate(_FULLWIDTH_DIGITS)
    if not token:
        return None
    if token.isdigit():
        return int(token)
    total = 0
    section = 0  # value accumulated below the current 万 multiplier
    digit = None
    for ch in token:
        if ch in ("零", "〇"):
            if digit is not None:
                return None
            continue  # placeholder: skipped magnitudes ("一百零三")
        if ch in _CN_DIGITS:
            if digit is not None:
                return None
            digit = _CN_DIGITS[ch]
        elif ch in _CN_UNITS:
            unit = _CN_UNITS[ch]
            if unit == 10000:
                section = (section + (digit or 0)) * unit
                total += section
                section = 0
            else:
                # bare 十 means 10 ("十五" = 15)
                section += (digit if digit is not None else 1) * unit
            digit = None
        else:
            return None
    total += section + (digit or 0)
    return total if total > 0 or token in ("零", "〇", "0") else None


def round_half_up(value: float, places: int = 2) -> float:
    """Round with ties away from zero, the convention used by every report."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def format_half_up(value: float, places: int = 2) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))
