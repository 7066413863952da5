"""Exact arithmetic in GF(p^k) with a dense polynomial basis.

Elements are stored as their base-p packing ``sum(c_i * p**i)`` of the
coefficient vector, which doubles as the serialization format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

# Largest accepted field order. The irreducibility scan and the q*q lookup
# tables built by the brute-force layer are only cheap well below this.
MAX_FIELD_ORDER = 1 << 20


class FieldError(ValueError):
    """Raised for invalid field parameters or mixed-field arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> Tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        return None
    return p, k


# -- polynomial helpers over GF(p); coefficient lists, low degree first --

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p) if p > 2 else 1
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _unpack(v: int, p: int, k: int) -> List[int]:
    out = []
    for _ in range(k):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _pack(coeffs: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _monic_polys(p: int, d: int) -> Iterator[List[int]]:
    for low in range(p**d):
        yield _unpack(low, p, d) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The field GF(p^k) modulo a fixed monic irreducible ``modulus``."""

    p: int
    k: int
    modulus: Tuple[int, ...]
    _mod_bits: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.k < 1 or len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.k}")
        if self.p**self.k > MAX_FIELD_ORDER:
            raise FieldError(
                f"field order {self.p}^{self.k} exceeds supported bound {MAX_FIELD_ORDER}")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({self.p})")
        object.__setattr__(self, "_mod_bits", _pack(self.modulus, 2) if self.p == 2 else 0)

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def is_binary(self) -> bool:
        return self.p == 2

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise FieldError(f"{value} is not a packed element of GF({self.order})")
            return FieldElement(value, self)
        coeffs = list(value)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"bad coefficient vector {coeffs!r} for GF({self.order})")
        return FieldElement(_pack(coeffs, self.p), self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def gen(self) -> "FieldElement":
        """The class of x (the prime-field element 1 when k == 1)."""
        return FieldElement(self.p if self.k > 1 else 1, self)

    def elements(self) -> List["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.order)]

    def primitive_element(self) -> "FieldElement":
        """Least (by packing) generator of the multiplicative group."""
        n = self.order - 1
        prime_factors = [d for d in range(2, n + 1) if n % d == 0 and is_prime(d)]
        for v in range(1, self.order):
            a = FieldElement(v, self)
            if all(a ** (n // f) != self.one() for f in prime_factors):
                return a
        raise AssertionError("multiplicative group is cyclic")

    def __str__(self) -> str:
        return f"GF({self.p}^{self.k})"


@lru_cache(maxsize=None)
def field_make(p: int, k: int) -> FieldCtx:
    """Build GF(p^k) with the least monic irreducible modulus.

    "Least" means smallest base-p packing ``sum(c_i p^i)``, i.e. coefficient
    vectors compared from the highest non-leading degree down.  Results are
    deterministic, so packed elements are reproducible between runs.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p**k > MAX_FIELD_ORDER:
        raise FieldError(f"field order {p}^{k} exceeds supported bound {MAX_FIELD_ORDER}")
    for poly in _monic_polys(p, k):
        if is_irreducible(poly, p):
            return FieldCtx(p, k, tuple(poly))
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


def field_of_order(q: int) -> FieldCtx:
    pk = prime_power(q)
    if pk is None:
        raise FieldError(f"{q} is not a prime power")
    return field_make(*pk)


class FieldElement:
    """Immutable element of a :class:`FieldCtx`."""

    __slots__ = ("value", "ctx")

    def __init__(self, value: int, ctx: FieldCtx):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(_unpack(self.value, self.ctx.p, self.ctx.k))

    def to_int(self) -> int:
        return self.value

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise FieldError(f"field mismatch: {self.ctx} vs {other.ctx}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx == other.ctx and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.k, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, {self.ctx})"

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        ctx = self.ctx
        if ctx.is_binary:
            return FieldElement(self.value ^ other.value, ctx)
        a = _unpack(self.value, ctx.p, ctx.k)
        b = _unpack(other.value, ctx.p, ctx.k)
        return FieldElement(_pack([(x + y) % ctx.p for x, y in zip(a, b)], ctx.p), ctx)

    def __neg__(self) -> "FieldElement":
        ctx = self.ctx
        if ctx.is_binary:
            return self
        a = _unpack(self.value, ctx.p, ctx.k)
        return FieldElement(_pack([-x % ctx.p for x in a], ctx.p), ctx)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        ctx = self.ctx
        if ctx.is_binary:
            a, b, r = self.value, other.value, 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
            mod = ctx._mod_bits
            for shift in range(r.bit_length() - 1 - ctx.k, -1, -1):
                if r >> (shift + ctx.k) & 1:
                    r ^= mod << shift
            return FieldElement(r, ctx)
        p = ctx.p
        a = _unpack(self.value, p, ctx.k)
        b = _unpack(other.value, p, ctx.k)
        prod = [0] * (2 * ctx.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = _poly_mod([c % p for c in prod], ctx.modulus, p)
        return FieldElement(_pack(red + [0] * (ctx.k - len(red)), p), ctx)

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inv() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inv(self) -> "FieldElement":
        if not self.value:
            raise ZeroDivisionError("inverse of zero in " + str(self.ctx))
        return self ** (self.ctx.order - 2)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inv()


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch one of ``add``, ``sub``, ``mul``, ``div``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def suzuki_twist_exponent(ctx: FieldCtx) -> int:
    """r = 2^((m+1)/2) for GF(2^m), m odd >= 3, so that r^2 = 2q."""
    if ctx.p != 2 or ctx.k < 3 or ctx.k % 2 == 0:
        raise FieldError(f"Suzuki twist needs GF(2^m) with m odd >= 3, got {ctx}")
    return 1 << ((ctx.k + 1) // 2)


def frobenius_r(a: FieldElement) -> FieldElement:
    """a -> a^r by (m+1)/2 successive squarings."""
    suzuki_twist_exponent(a.ctx)
    for _ in range((a.ctx.k + 1) // 2):
        a = a * a
    return a
