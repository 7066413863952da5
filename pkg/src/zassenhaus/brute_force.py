"""Explicit matrix groups PSL(2,q) (q <= 13) and Sz(8), used as an oracle.

Field entries are held as packed integers in numpy arrays and multiplied
through q*q lookup tables built from :mod:`zassenhaus.finite_field`.
Element keys are the raw entry bytes in row-major order, so sorting keys
orders matrices by their row-major packed entries.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .closed_form import PSL2, SZ, GroupSpec, group_spec
from .finite_field import FieldCtx, FieldElement, field_make, frobenius_r, suzuki_twist_exponent

PSL2_MAX_BRUTE_Q = 13
SZ32_ENV = "ZASSENHAUS_ALLOW_SZ32"
# Sz(32): 32,537,600 elements * 16 bytes, plus keys and closure temporaries,
# needs roughly 2-3 GB of memory and a long closure run.
SZ32_MEMORY_ESTIMATE = "about 3 GB"


class BruteForceError(RuntimeError):
    pass


class NotSubgroupError(BruteForceError):
    pass


class NotTIError(BruteForceError):
    pass


def _det(rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    if len(rows) == 1:
        return rows[0][0]
    total = None
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = a * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0].ctx.zero()


@dataclass(frozen=True)
class MatrixElement:
    entries: Tuple[Tuple[FieldElement, ...], ...]
    canonical: bool = field(default=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def ctx(self) -> FieldCtx:
        return self.entries[0][0].ctx

    def __matmul__(self, other: "MatrixElement") -> "MatrixElement":
        d = self.dim
        zero = self.ctx.zero()
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = zero
                for k in range(d):
                    a = self.entries[i][k]
                    if a:
                        acc = acc + a * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return MatrixElement(tuple(rows))

    def det(self) -> FieldElement:
        return _det([list(r) for r in self.entries])

    def packed(self) -> Tuple[int, ...]:
        return tuple(x.value for row in self.entries for x in row)

    @classmethod
    def from_packed(cls, ctx: FieldCtx, values: Sequence[int], canonical: bool = False):
        d = int(round(len(values) ** 0.5))
        vals = [ctx(int(v)) for v in values]
        return cls(tuple(tuple(vals[i * d:(i + 1) * d]) for i in range(d)), canonical)


def suzuki_unipotent(a: FieldElement, b: FieldElement) -> MatrixElement:
    """The lower unitriangular Sylow 2-element (a, b) of Sz(q)."""
    ctx = a.ctx
    suzuki_twist_exponent(ctx)
    if b.ctx != ctx:
        raise BruteForceError("alpha and beta must lie in the same field")
    one, zero = ctx.one(), ctx.zero()
    ar, br = frobenius_r(a), frobenius_r(b)
    rows = (
        (one, zero, zero, zero),
        (a, one, zero, zero),
        (a * ar + b, ar, one, zero),
        (a * a * ar + a * b + br, b, a, one),
    )
    return MatrixElement(rows)


class FieldTables:
    """add/mul/neg lookup tables over packed elements of ``ctx``."""

    def __init__(self, ctx: FieldCtx):
        if ctx.order > 256:
            raise BruteForceError(f"{ctx} too large for byte-packed matrices")
        self.ctx = ctx
        self.q = ctx.order
        els = ctx.elements()
        self.add = np.array([[(a + b).value for b in els] for a in els], dtype=np.uint8)
        self.mul = np.array([[(a * b).value for b in els] for a in els], dtype=np.uint8)
        self.neg = np.array([(-a).value for a in els], dtype=np.uint8)
        self.add_flat = self.add.ravel()
        self.mul_flat = self.mul.ravel()

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched matrix product; A and B broadcast over leading axes."""
        # q <= 256, so a*q + b always fits in uint16
        A = A.astype(np.uint16) * np.uint16(self.q)
        acc = None
        for k in range(A.shape[-1]):
            term = self.mul_flat[A[..., :, k, None] + B[..., k, None, :]]
            if acc is None:
                acc = term
            elif self.ctx.is_binary:
                acc ^= term
            else:
                acc = self.add_flat[acc.astype(np.uint16) * np.uint16(self.q) + term]
        return acc


def _keys(arr: np.ndarray) -> np.ndarray:
    d = arr.shape[-1]
    flat = np.ascontiguousarray(arr, dtype=np.uint8).reshape(-1, d * d)
    return flat.view(f"V{flat.shape[1]}").ravel()


class BruteForceGroup:
    """A fully enumerated matrix group, elements sorted by packed entries."""

    def __init__(self, spec: GroupSpec, tables: FieldTables, elements: np.ndarray,
                 generators: Sequence[int], projective: bool):
        self.spec = spec
        self.tables = tables
        self.projective = projective
        self.elements = elements
        self.keys = _keys(elements)
        uniq = np.unique(self.keys)
        if len(uniq) != len(self.keys) or not np.array_equal(uniq, self.keys):
            raise BruteForceError("elements must be sorted and distinct")
        self.generators = list(generators)
        d = elements.shape[1]
        self.identity = int(self.index_of(np.eye(d, dtype=np.uint8)[None])[0])

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def ctx(self) -> FieldCtx:
        return self.tables.ctx

    def element(self, i: int) -> MatrixElement:
        return MatrixElement.from_packed(self.ctx, self.elements[i].ravel().tolist(), True)

    def canonicalize(self, arr: np.ndarray) -> np.ndarray:
        return canonicalize(arr, self.tables, self.projective)

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.canonicalize(self.tables.matmul(A, B))

    def index_of(self, arr: np.ndarray) -> np.ndarray:
        """Indices of already-canonical matrices; KeyError if any is absent."""
        k = _keys(arr)
        pos = np.searchsorted(self.keys, k)
        pos[pos == len(self.keys)] = 0
        if not np.all(self.keys[pos] == k):
            raise KeyError("matrix not in group")
        return pos

    def lookup(self, m: MatrixElement) -> int:
        arr = np.array(m.packed(), dtype=np.uint8).reshape(1, self.dim, self.dim)
        return int(self.index_of(self.canonicalize(arr))[0])

    @cached_property
    def _orders_and_inverses(self) -> Tuple[np.ndarray, np.ndarray]:
        n = len(self)
        orders = np.zeros(n, dtype=np.int64)
        inverses = np.zeros(n, dtype=np.int64)
        todo = np.arange(n)
        prev = np.broadcast_to(self.elements[self.identity], self.elements.shape).copy()
        cur = self.elements.copy()
        k = 1
        while len(todo):
            hit = self.index_of(cur) == self.identity
            orders[todo[hit]] = k
            inverses[todo[hit]] = self.index_of(prev[hit])
            keep = ~hit
            todo, prev, cur = todo[keep], cur[keep], cur[keep]
            cur = self.mul(cur, self.elements[todo])
            k += 1
            if k > n + 1:
                raise BruteForceError("element order exceeds group order")
        return orders, inverses

    @property
    def orders(self) -> np.ndarray:
        return self._orders_and_inverses[0]

    @property
    def inverses(self) -> np.ndarray:
        return self._orders_and_inverses[1]

    def conjugate_all(self, x: np.ndarray, by: Optional[np.ndarray] = None) -> np.ndarray:
        """Indices of g^-1 x g for every g (or for the indices in ``by``)."""
        g = np.arange(len(self)) if by is None else np.asarray(by)
        ginv = self.elements[self.inverses[g]]
        return self.index_of(self.mul(self.tables.matmul(ginv, x), self.elements[g]))

    @cached_property
    def classes(self) -> List[List[int]]:
        return conjugacy_classes(self)

    @cached_property
    def class_index(self) -> np.ndarray:
        out = np.empty(len(self), dtype=np.int64)
        for c, members in enumerate(self.classes):
            out[members] = c
        return out

    def class_sizes(self) -> List[int]:
        return sorted(len(c) for c in self.classes)

    def involutions(self) -> np.ndarray:
        return np.flatnonzero(self.orders == 2)


def canonicalize(arr: np.ndarray, tables: FieldTables, projective: bool) -> np.ndarray:
    """Pick min(M, -M) by row-major packed entries when working mod {+-I}."""
    if not projective:
        return arr
    d = arr.shape[-1]
    flat = arr.reshape(-1, d * d)
    first = np.argmax(flat != 0, axis=1)
    lead = flat[np.arange(len(flat)), first]
    flip = tables.neg[lead] < lead
    out = flat.copy()
    out[flip] = tables.neg[flat[flip]]
    return out.reshape(arr.shape)


def closure(gens: np.ndarray, tables: FieldTables, projective: bool,
            limit: int) -> np.ndarray:
    """All products of ``gens``, breadth first; aborts once ``limit`` is exceeded."""
    d = gens.shape[1]
    gens = canonicalize(gens, tables, projective)
    ident = np.eye(d, dtype=np.uint8)[None]
    known = _keys(ident)
    blocks = [ident]
    frontier = ident
    while len(frontier):
        prods = np.concatenate([tables.matmul(frontier, g) for g in gens])
        prods = canonicalize(prods, tables, projective)
        k, first = np.unique(_keys(prods), return_index=True)
        fresh = ~np.isin(k, known)
        frontier = prods[first[fresh]]
        known = np.union1d(known, k[fresh])
        blocks.append(frontier)
        if len(known) > limit:
            raise BruteForceError(f"closure exceeded {limit} elements")
    allm = np.concatenate(blocks)
    return allm[np.argsort(_keys(allm))]


def _load_or_build(spec: GroupSpec, cache: Optional[Path],
                   build) -> Tuple[np.ndarray, np.ndarray]:
    """``build()`` returns (elements, generator matrices); cached when asked."""
    if cache is not None and Path(cache).exists():
        return load_elements(cache, spec)
    elements, gens = build()
    if cache is not None:
        save_elements(cache, spec, elements, gens)
    return elements, gens


def _psl2_generators(tables: FieldTables) -> np.ndarray:
    ctx = tables.ctx
    gens = []
    for x in sorted({1, ctx.gen().value}):
        gens.append([[1, x], [0, 1]])
        gens.append([[1, 0], [x, 1]])
    return np.array(gens, dtype=np.uint8)


def enumerate_psl2(q: int, cache: Optional[Path] = None) -> BruteForceGroup:
    """All of SL(2,q) by determinant filter, reduced mod {+-I}."""
    spec = group_spec(PSL2, q)
    if q > PSL2_MAX_BRUTE_Q:
        raise BruteForceError(f"brute force unsupported for q={q}")
    tables = FieldTables(field_make(spec.p, spec.k))
    projective = spec.p != 2

    def build():
        a, b, c, d = (x.ravel() for x in np.indices((q,) * 4, dtype=np.intp))
        ad = tables.mul[a, d]
        bc = tables.mul[b, c]
        det = tables.add[ad, tables.neg[bc]]
        keep = det == 1
        mats = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1).astype(np.uint8)
        mats = canonicalize(mats.reshape(-1, 2, 2), tables, projective)
        _, first = np.unique(_keys(mats), return_index=True)
        gens = canonicalize(_psl2_generators(tables), tables, projective)
        if len(closure(gens, tables, projective, spec.group_order)) != spec.group_order:
            raise BruteForceError("PSL2 generators do not generate the group")
        return mats[first], gens

    elements, gens = _load_or_build(spec, cache, build)
    if len(elements) != spec.group_order:
        raise BruteForceError(f"PSL(2,{q}) enumeration gave {len(elements)} elements, "
                              f"expected {spec.group_order}")
    G = BruteForceGroup(spec, tables, elements, [], projective)
    G.generators = sorted(set(G.index_of(gens).tolist()))
    return G


def _antidiagonal(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.uint8)[::-1].copy()


def _to_array(m: MatrixElement) -> np.ndarray:
    return np.array(m.packed(), dtype=np.uint8).reshape(m.dim, m.dim)


def sz_generators(ctx: FieldCtx) -> np.ndarray:
    """Two Sylow-2 unipotents and the antidiagonal involution."""
    zero = ctx.zero()
    return np.stack([
        _to_array(suzuki_unipotent(ctx.one(), zero)),
        _to_array(suzuki_unipotent(ctx.primitive_element(), zero)),
        _antidiagonal(4),
    ])


def sz_torus(ctx: FieldCtx) -> np.ndarray:
    """diag(l^(1+r/2), l^(r/2), l^(-r/2), l^(-1-r/2)) for a primitive l."""
    half = suzuki_twist_exponent(ctx) // 2
    lam = ctx.primitive_element()
    diag = [lam ** (1 + half), lam ** half, lam ** (-half), lam ** (-1 - half)]
    out = np.zeros((4, 4), dtype=np.uint8)
    for i, x in enumerate(diag):
        out[i, i] = x.value
    return out


def generate_sz(q: int = 8, cache: Optional[Path] = None,
                allow_large: Optional[bool] = None) -> BruteForceGroup:
    spec = group_spec(SZ, q)
    if allow_large is None:
        allow_large = os.environ.get(SZ32_ENV, "") not in ("", "0")
    if q == 32 and not allow_large:
        raise BruteForceError(f"Sz(32) needs {SZ32_MEMORY_ESTIMATE}; "
                              f"set {SZ32_ENV}=1 to enable it")
    if q not in (8, 32):
        raise BruteForceError(f"brute force unsupported for q={q}")
    tables = FieldTables(field_make(2, spec.k))
    gens = sz_generators(tables.ctx)

    def attempt(gens):
        try:
            elements = closure(gens, tables, False, spec.group_order)
        except BruteForceError as exc:
            return None, str(exc)
        if len(elements) != spec.group_order:
            return None, f"closed to {len(elements)} elements"
        return elements, ""

    def build():
        elements, why = attempt(gens)
        if elements is not None:
            return elements, gens
        with_torus = np.concatenate([gens, sz_torus(tables.ctx)[None]])
        elements, why2 = attempt(with_torus)
        if elements is None:
            raise BruteForceError(
                f"Sz({q}) generators failed ({why}); with torus element ({why2}); "
                f"expected order {spec.group_order}")
        return elements, with_torus

    elements, gens = _load_or_build(spec, cache, build)
    G = BruteForceGroup(spec, tables, elements, [], False)
    G.generators = G.index_of(gens).tolist()
    return G


def brute_force_group(family: str, q: int, cache: Optional[Path] = None) -> BruteForceGroup:
    spec = group_spec(family, q)
    if spec.family == PSL2:
        return enumerate_psl2(q, cache)
    return generate_sz(q, cache)


def brute_force_supported(family: str, q: int) -> bool:
    spec = group_spec(family, q)
    if spec.family == PSL2:
        return q <= PSL2_MAX_BRUTE_Q
    return q == 8 or (q == 32 and os.environ.get(SZ32_ENV, "") not in ("", "0"))


# -- binary cache --

_MAGIC = b"ZGRP1\n"


def save_elements(path: Path, spec: GroupSpec, elements: np.ndarray,
                  generators: np.ndarray) -> None:
    """Header line (family, q, order, dim, generators) then raw entry bytes."""
    header = {"family": spec.family, "q": spec.q, "order": len(elements),
              "dim": int(elements.shape[1]),
              "generators": [g.ravel().tolist() for g in generators]}
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(json.dumps(header).encode() + b"\n")
        fh.write(np.ascontiguousarray(elements, dtype=np.uint8).tobytes())


def load_elements(path: Path, spec: GroupSpec) -> Tuple[np.ndarray, np.ndarray]:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise BruteForceError(f"{path} is not a group cache")
        header = json.loads(fh.readline())
        if (header["family"], header["q"], header["order"]) != (
                spec.family, spec.q, spec.group_order):
            raise BruteForceError(f"cache {path} holds {header['family']} "
                                  f"q={header['q']}, not {spec.name}")
        d = header["dim"]
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    if data.size != header["order"] * d * d:
        raise BruteForceError(f"cache {path} is truncated")
    gens = np.array(header["generators"], dtype=np.uint8).reshape(-1, d, d)
    return data.reshape(-1, d, d).copy(), gens


# -- queries --

def conjugacy_classes(G: BruteForceGroup) -> List[List[int]]:
    """Orbits under conjugation by the generators, listed by least index."""
    gens = np.array(G.generators)
    perms = [G.conjugate_all(G.elements, by=np.full(len(G), g)) for g in gens]
    seen = np.zeros(len(G), dtype=bool)
    classes = []
    for start in range(len(G)):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for perm in perms:
                y = int(perm[x])
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    queue.append(y)
        classes.append(sorted(orbit))
    return classes


def centralizer(G: BruteForceGroup, x: int) -> np.ndarray:
    """Indices of all g with gx = xg (as elements of G)."""
    m = G.elements[x]
    left = G.mul(G.elements, m)
    right = G.mul(np.broadcast_to(m, G.elements.shape), G.elements)
    return np.flatnonzero(_keys(left) == _keys(right))


def centralizer_order(G: BruteForceGroup, x: int) -> int:
    return len(centralizer(G, x))


def cyclic_closure(G: BruteForceGroup, x: int) -> np.ndarray:
    out = [G.identity]
    cur = x
    while cur != G.identity:
        out.append(cur)
        cur = int(G.index_of(G.mul(G.elements[cur][None], G.elements[x]))[0])
    return np.array(sorted(out))


def find_cyclic_subgroup(G: BruteForceGroup, order: int) -> np.ndarray:
    """<x> for the least-indexed x of exactly ``order``."""
    hits = np.flatnonzero(G.orders == order)
    if not len(hits):
        raise BruteForceError(f"no element of order {order} in {G.spec.name}")
    return cyclic_closure(G, int(hits[0]))


def subgroup_from_matrices(G: BruteForceGroup, mats: Sequence[MatrixElement]) -> np.ndarray:
    return np.array(sorted({G.lookup(m) for m in mats}))


def is_subgroup(G: BruteForceGroup, H: np.ndarray) -> bool:
    H = np.asarray(H)
    if G.identity not in H:
        return False
    prods = G.mul(G.elements[H][:, None], G.elements[H][None, :]).reshape(-1, G.dim, G.dim)
    return bool(np.all(np.isin(G.index_of(prods), H)))


@dataclass
class TILemmaReport:
    subgroup_order: int
    normalizer_order: int
    # per non-identity h: (h, |h^G cap H|, |C_G(h)|)
    rows: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def normalizer_index(self) -> int:
        return self.normalizer_order // self.subgroup_order

    @property
    def passed(self) -> bool:
        return all(self.normalizer_order == meet * cent for _, meet, cent in self.rows)


def ti_lemma_report(G: BruteForceGroup, H: Sequence[int]) -> TILemmaReport:
    """Check H is TI, then |N_G(H)| = |h^G cap H| * |C_G(h)| for each h != 1.

    Raises NotSubgroupError or NotTIError before any counting identity is
    evaluated; an identity failure shows up as ``passed == False``.
    """
    H = np.unique(np.asarray(H))
    if not is_subgroup(G, H):
        raise NotSubgroupError("index set is not closed under multiplication")
    nontrivial = [int(h) for h in H if h != G.identity]
    meets = np.zeros(len(G), dtype=np.int64)
    rows = []
    for h in nontrivial:
        conj = G.conjugate_all(G.elements[h])
        inside = np.isin(conj, H)
        meets += inside
        rows.append((h, len(np.unique(conj[inside])), int(np.sum(conj == h))))
    if not np.all((meets == 0) | (meets == len(nontrivial))):
        raise NotTIError("H meets some conjugate in a proper nontrivial subgroup")
    normalizer = int(np.sum(meets == len(nontrivial)))
    return TILemmaReport(len(H), normalizer, rows)


def verify_ti_lemma(G: BruteForceGroup, H: Sequence[int]) -> bool:
    return ti_lemma_report(G, H).passed


def psl2_subgroups(G: BruteForceGroup) -> Dict[str, np.ndarray]:
    """H (split torus), K (upper unipotents) and L (order (q+1)/gcd(2,q+1))."""
    ctx = G.ctx
    one, zero = ctx.one(), ctx.zero()
    units = [a for a in ctx.elements() if a]
    H = [MatrixElement(((a, zero), (zero, a.inv()))) for a in units]
    K = [MatrixElement(((one, b), (zero, one))) for b in ctx.elements()]
    return {
        "H": subgroup_from_matrices(G, H),
        "K": subgroup_from_matrices(G, K),
        "L": find_cyclic_subgroup(G, G.spec.L_order),
    }


def sz_subgroups(G: BruteForceGroup) -> Dict[str, np.ndarray]:
    spec = G.spec
    els = G.ctx.elements()
    K = [suzuki_unipotent(a, b) for a, b in product(els, els)]
    return {
        "A0": find_cyclic_subgroup(G, spec.q - 1),
        "A1": find_cyclic_subgroup(G, spec.a1_order),
        "A2": find_cyclic_subgroup(G, spec.a2_order),
        "K": subgroup_from_matrices(G, K),
    }


def named_subgroups(G: BruteForceGroup) -> Dict[str, np.ndarray]:
    return psl2_subgroups(G) if G.spec.family == PSL2 else sz_subgroups(G)


def suzuki_product_law_holds(ctx: FieldCtx) -> bool:
    """(a,b)(c,d) = (a+c, a c^r + b + d) for every pair, as 4x4 products."""
    els = ctx.elements()
    pairs = list(product(els, els))
    tables = FieldTables(ctx)
    mats = np.stack([_to_array(suzuki_unipotent(a, b)) for a, b in pairs])
    where = {(a.value, b.value): i for i, (a, b) in enumerate(pairs)}
    n = len(pairs)
    lhs = tables.matmul(mats[:, None], mats[None, :]).reshape(n * n, 4, 4)
    twisted = [frobenius_r(c) for c in els]
    expect = np.empty(n * n, dtype=np.intp)
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            expect[i * n + j] = where[((a + c).value, (a * twisted[c.value] + b + d).value)]
    return bool(np.array_equal(lhs, mats[expect]))
