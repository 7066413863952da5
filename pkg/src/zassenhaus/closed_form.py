"""Conjugacy class sizes of PSL(2,q) and Sz(q) from closed formulas.

Each table entry records which subgroup the classes come from (the
``origin``), so the class equation can be audited piece by piece.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from .exact import checked_div, checked_mul, checked_sub, checked_sum
from .finite_field import prime_power

PSL2 = "PSL2"
SZ = "Sz"
FAMILIES = (PSL2, SZ)

IDENTITY = "Identity"
ORIGINS = (
    IDENTITY,
    "H",
    "H-involution",
    "K",
    "K-involution",
    "K-center",
    "K-noncenter",
    "L",
    "L-involution",
    "A1",
    "A2",
)

# Beyond these the class sizes stop being comfortably 128-bit.
PSL2_MAX_Q = 1 << 20
SZ_MAX_Q = 1 << 15


class InvalidGroupError(ValueError):
    pass


def normalize_family(family: str) -> str:
    for f in FAMILIES:
        if family.lower() == f.lower():
            return f
    raise InvalidGroupError(f"unknown family {family!r}; expected psl2 or sz")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    q: int
    p: int
    k: int
    n: int
    e: int
    group_order: int
    L_order: Optional[int] = None
    r: Optional[int] = None
    a1_order: Optional[int] = None
    a2_order: Optional[int] = None

    @property
    def name(self) -> str:
        return f"PSL(2,{self.q})" if self.family == PSL2 else f"Sz({self.q})"


def group_spec(family: str, q: int) -> GroupSpec:
    """Validate ``q`` for ``family`` and derive the Zassenhaus parameters."""
    family = normalize_family(family)
    pk = prime_power(q)
    if family == PSL2:
        if q <= 3:
            raise InvalidGroupError("q must exceed 3")
        if pk is None:
            raise InvalidGroupError(f"q must be a prime power, got {q}")
        if q >= PSL2_MAX_Q:
            raise InvalidGroupError(f"q must be below {PSL2_MAX_Q} for PSL2")
        p, k = pk
        e = q - 1 if p == 2 else (q - 1) // 2
        order = checked_div(checked_mul(q, q * q - 1), gcd(2, q - 1))
        if order != checked_mul(e, q, q + 1):
            raise AssertionError("|G| != e*n*(n+1)")
        return GroupSpec(PSL2, q, p, k, n=q, e=e, group_order=order,
                         L_order=(q + 1) // gcd(2, q + 1))

    if pk is None or pk[0] != 2 or pk[1] < 3 or pk[1] % 2 == 0:
        raise InvalidGroupError(f"Sz requires q = 2^m with m odd >= 3, got {q}")
    if q >= SZ_MAX_Q:
        raise InvalidGroupError(f"q must be below {SZ_MAX_Q} for Sz")
    m = pk[1]
    r = 1 << ((m + 1) // 2)
    order = checked_mul(q, q, q - 1, q * q + 1)
    # the Sylow 2-subgroup K has order q^2, which is the degree parameter n
    spec = GroupSpec(SZ, q, 2, m, n=q * q, e=q - 1, group_order=order,
                     r=r, a1_order=q + r + 1, a2_order=q - r + 1)
    if r * r != 2 * q or spec.a1_order * spec.a2_order != q * q + 1:
        raise AssertionError("Suzuki parameters inconsistent")
    if order != checked_mul(spec.e, spec.n, spec.n + 1):
        raise AssertionError("|G| != e*n*(n+1)")
    return spec


@dataclass(frozen=True)
class ClassEntry:
    size: int
    mult: int
    origin: str


@dataclass(frozen=True)
class ClassSizeTable:
    spec: GroupSpec
    entries: Tuple[ClassEntry, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.entries, key=lambda t: (t.size, t.origin)))
        object.__setattr__(self, "entries", ordered)

    @property
    def order(self) -> int:
        return self.spec.group_order

    @property
    def class_count(self) -> int:
        return sum(t.mult for t in self.entries)

    def sizes(self) -> List[int]:
        """All class sizes with multiplicity, ascending."""
        return sorted(t.size for t in self.entries for _ in range(t.mult))

    def distinct_sizes(self) -> List[int]:
        """cs(G) minus 1."""
        return sorted({t.size for t in self.entries if t.size != 1})

    def by_origin(self, origin: str) -> ClassEntry:
        for t in self.entries:
            if t.origin == origin:
                return t
        raise KeyError(origin)

    def to_dict(self) -> Dict:
        return {
            "family": self.spec.family,
            "q": self.spec.q,
            "order": self.spec.group_order,
            "entries": [{"size": t.size, "mult": t.mult, "origin": t.origin}
                        for t in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Dict) -> "ClassSizeTable":
        spec = group_spec(data["family"], data["q"])
        if spec.group_order != data["order"]:
            raise ValueError(f"order {data['order']} does not match {spec.name}")
        entries = tuple(ClassEntry(e["size"], e["mult"], e["origin"]) for e in data["entries"])
        return cls(spec, entries)

    @classmethod
    def from_json(cls, text: str) -> "ClassSizeTable":
        return cls.from_dict(json.loads(text))


def _table(spec: GroupSpec, rows: List[Tuple[int, int, str]]) -> ClassSizeTable:
    entries = [ClassEntry(1, 1, IDENTITY)]
    for size, mult, origin in rows:
        if mult < 0:
            raise AssertionError(f"negative multiplicity for {origin}")
        if mult:
            entries.append(ClassEntry(size, mult, origin))
    table = ClassSizeTable(spec, tuple(entries))
    if not check_class_equation(table):
        raise AssertionError(f"class equation fails for {spec.name}")
    return table


def psl2_table(q: int) -> ClassSizeTable:
    spec = group_spec(PSL2, q)
    e, L = spec.e, spec.L_order
    if spec.p == 2:
        rows = [
            (checked_mul(e, q), checked_div(L - 1, 2), "L"),
            (checked_sub(q * q, 1), 1, "K-involution"),
            (checked_mul(q, q + 1), checked_div(e - 1, 2), "H"),
        ]
    elif e % 2:
        rows = [
            (checked_mul(2, e, q), checked_div(L - 2, 2), "L"),
            (checked_mul(e, q), 1, "L-involution"),
            (checked_mul(e, q + 1), 2, "K"),
            (checked_mul(q, q + 1), checked_div(e - 1, 2), "H"),
        ]
    else:
        rows = [
            (checked_mul(2, e, q), checked_div(L - 1, 2), "L"),
            (checked_mul(e, q + 1), 2, "K"),
            (checked_mul(q, q + 1), checked_div(e - 2, 2), "H"),
            (checked_div(checked_mul(q, q + 1), 2), 1, "H-involution"),
        ]
    return _table(spec, rows)


def sz_table(q: int) -> ClassSizeTable:
    spec = group_spec(SZ, q)
    r = spec.r
    rows = [
        (checked_mul(q, q, q * q + 1), checked_div(q - 2, 2), "H"),
        (checked_mul(q - 1, q * q + 1), 1, "K-involution"),
        (checked_div(checked_mul(q, q - 1, q * q + 1), 2), 2, "K-noncenter"),
        (checked_mul(q, q, q - 1, q - r + 1), checked_div(q + r, 4), "A1"),
        (checked_mul(q, q, q - 1, q + r + 1), checked_div(q - r, 4), "A2"),
    ]
    return _table(spec, rows)


def class_table(family: str, q: int) -> ClassSizeTable:
    return psl2_table(q) if normalize_family(family) == PSL2 else sz_table(q)


def check_class_equation(table: ClassSizeTable, order: Optional[int] = None) -> bool:
    """Whether the sizes times multiplicities add up to the group order.

    ``order`` overrides the order implied by ``table.spec``.  Overflow of
    the 128-bit range raises OverflowError.
    """
    target = table.spec.group_order if order is None else order
    return checked_sum(checked_mul(t.size, t.mult) for t in table.entries) == target
