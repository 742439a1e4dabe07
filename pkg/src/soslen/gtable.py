"""Known bounds for the largest finite sums-of-squares length over Z.

Exact values exist for ranks 1 through 6; ranks 8 and 10 carry published
upper bounds.  Nothing is ever extrapolated: other ranks report Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Exact:
    value: int


@dataclass(frozen=True)
class UpperBound:
    value: int


@dataclass(frozen=True)
class Unknown:
    pass


GEntry = Exact | UpperBound | Unknown

_EXACT = {1: 4, 2: 5, 3: 6, 4: 7, 5: 8, 6: 10}
_UPPER = {8: 37, 10: 68}


def g_table(r: int) -> GEntry:
    """The largest finite length among rank-r integer forms that are sums
    of squares of linear forms, as far as it is known."""
    if r < 1:
        raise ValueError("rank must be at least 1")
    if r in _EXACT:
        return Exact(_EXACT[r])
    if r in _UPPER:
        return UpperBound(_UPPER[r])
    return Unknown()
