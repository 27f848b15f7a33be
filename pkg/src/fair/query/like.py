"""SQL LIKE matching over field values.

Pattern language: `%` matches any (possibly empty) character sequence,
`_` matches exactly one character, everything else is literal. Matching
is case-sensitive. Only Text values can match; Number and Missing
values match no pattern at all, `%` included.

The reference evaluator in the test suite implements these same rules
with a separate two-pointer matcher; behavioral changes here must stay
in lockstep with it.
"""
from __future__ import annotations

import re
from functools import lru_cache

from ..records import FieldValue


@lru_cache(maxsize=512)
def _compile(pattern: str) -> re.Pattern[str]:
    pieces = []
    for ch in pattern:
        if ch == "%":
            pieces.append(".*")
        elif ch == "_":
            pieces.append(".")
        else:
            pieces.append(re.escape(ch))
    # DOTALL so wildcards cross embedded newlines in field values
    return re.compile("(?s)" + "".join(pieces) + r"\Z")


def like_match(value: FieldValue, pattern: str) -> bool:
    if not isinstance(value, str):
        return False
    return _compile(pattern).match(value) is not None
