"""Divisibility graphs on sets of positive integers.

Vertices are the distinct values above 1; ``a`` and ``b`` are adjacent when
one divides the other.  Only the undirected graph is modelled.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Tuple


@dataclass(frozen=True)
class DivisibilityGraph:
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "DivisibilityGraph":
        return cls(tuple(data["vertices"]), tuple(tuple(e) for e in data["edges"]))


def build_divgraph(sizes: Iterable[int]) -> DivisibilityGraph:
    verts = sorted({int(s) for s in sizes if s > 1})
    edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:] if b % a == 0]
    return DivisibilityGraph(tuple(verts), tuple(edges))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def components(g: DivisibilityGraph) -> List[List[int]]:
    """Connected components, each sorted, listed by least vertex."""
    uf = _UnionFind(g.vertices)
    for a, b in g.edges:
        uf.union(a, b)
    groups = {}
    for v in g.vertices:
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


@dataclass(frozen=True, order=True)
class Component:
    """One component as (vertex count, edge count)."""

    order: int
    size: int

    @property
    def label(self) -> str:
        if self.order == 1:
            return "K1"
        if self.size == self.order * (self.order - 1) // 2:
            return f"K{self.order}"
        return f"G({self.order},{self.size})"


@dataclass(frozen=True)
class ComponentShape:
    parts: Tuple[Component, ...]

    def __str__(self) -> str:
        counts = Counter(self.parts)
        terms = []
        for comp in sorted(counts, reverse=True):
            n = counts[comp]
            terms.append(comp.label if n == 1 else f"{n}{comp.label}")
        return "+".join(terms)

    @property
    def vertex_count(self) -> int:
        return sum(c.order for c in self.parts)


def classify_shape(g: DivisibilityGraph) -> ComponentShape:
    comps = components(g)
    where = {v: i for i, c in enumerate(comps) for v in c}
    edge_counts = [0] * len(comps)
    for a, _ in g.edges:
        edge_counts[where[a]] += 1
    return ComponentShape(tuple(Component(len(c), m) for c, m in zip(comps, edge_counts)))


def export_graph(g: DivisibilityGraph, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(g.to_dict(), separators=(",", ":"))
    if fmt == "dot":
        lines = ["graph D {"]
        lines += [f"  {v};" for v in g.vertices]
        lines += [f"  {a} -- {b};" for a, b in g.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")
