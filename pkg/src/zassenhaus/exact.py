"""Checked integer arithmetic bounded to signed 128 bits.

Python ints never wrap, so the bound is enforced explicitly: any
intermediate leaving the range raises instead of silently growing.
"""

from __future__ import annotations

from typing import Iterable

INT128_MAX = (1 << 127) - 1
INT128_MIN = -(1 << 127)


def _check(v: int) -> int:
    if not INT128_MIN <= v <= INT128_MAX:
        raise OverflowError(f"integer {v} leaves the signed 128-bit range")
    return v


def checked_add(a: int, b: int) -> int:
    return _check(_check(a) + _check(b))


def checked_sub(a: int, b: int) -> int:
    return _check(_check(a) - _check(b))


def checked_mul(*factors: int) -> int:
    out = 1
    for f in factors:
        out = _check(out * _check(f))
    return out


def checked_div(a: int, b: int) -> int:
    """Exact division; a remainder is a logic error, not something to round."""
    q, r = divmod(_check(a), _check(b))
    if r:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return q


def checked_sum(values: Iterable[int]) -> int:
    total = 0
    for v in values:
        total = checked_add(total, v)
    return total
