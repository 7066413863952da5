"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is echoed in the terminal summary.
Tolerances are exact (integer equality); runtime limits are wall clock.
"""

import itertools
import time
from math import gcd

import numpy as np

from zassenhaus import brute_force as bf
from zassenhaus.closed_form import check_class_equation, psl2_table, sz_table
from zassenhaus.divgraph import build_divgraph, classify_shape
from zassenhaus.finite_field import field_make, frobenius_r, prime_power

PSL2_QS = [q for q in range(4, 1001) if prime_power(q)]
SZ_QS = (8, 32, 128, 512, 2048, 8192)
ORACLE_QS = (4, 5, 7, 8, 9, 11, 13)


def record(log, n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title} -- {detail}"
    log.append(line)
    print(line)
    assert ok, line


def test_c1_class_equation(acceptance_log):
    start = time.perf_counter()
    bad = []
    for q in PSL2_QS:
        t = psl2_table(q)
        total = sum(e.size * e.mult for e in t.entries)
        if total != q * (q * q - 1) // gcd(2, q - 1) or not check_class_equation(t):
            bad.append(("psl2", q))
    for q in SZ_QS:
        t = sz_table(q)
        total = sum(e.size * e.mult for e in t.entries)
        if total != q * q * (q - 1) * (q * q + 1) or not check_class_equation(t):
            bad.append(("sz", q))
    elapsed = time.perf_counter() - start
    record(acceptance_log, 1, "class equation", not bad and elapsed < 1.0,
           f"{len(PSL2_QS)} PSL2 + {len(SZ_QS)} Sz tables, failures {bad}, {elapsed:.3f}s < 1s")


def test_c2_psl2_oracle(acceptance_log):
    start = time.perf_counter()
    mismatches = []
    observed = {}
    for q in ORACLE_QS:
        G = bf.enumerate_psl2(q)
        observed[q] = G.class_sizes()
        if observed[q] != psl2_table(q).sizes():
            mismatches.append(q)
    elapsed = time.perf_counter() - start
    ok = (not mismatches and elapsed < 10.0
          and observed[7] == [1, 21, 24, 24, 42, 56]
          and observed[9] == [1, 40, 40, 45, 72, 72, 90])
    record(acceptance_log, 2, "PSL(2,q) brute force = closed form", ok,
           f"q in {ORACLE_QS}, mismatches {mismatches}, q=7 {observed[7]}, "
           f"q=9 {observed[9]}, {elapsed:.2f}s < 10s")


def test_c3_sz8_oracle(acceptance_log):
    start = time.perf_counter()
    G = bf.generate_sz(8)
    sizes = G.class_sizes()
    elapsed = time.perf_counter() - start
    expected = [1, 455, 1820, 1820, 2240, 2240, 2240, 4160, 4160, 4160, 5824]
    ok = (len(G) == 29120 and len(G.classes) == 11 and sizes == expected
          and sizes == sz_table(8).sizes() and elapsed < 60.0)
    record(acceptance_log, 3, "Sz(8) brute force = closed form", ok,
           f"|G| = {len(G)}, {len(G.classes)} classes {sizes}, {elapsed:.2f}s < 60s")


def test_c4_psl2_shapes(acceptance_log):
    wrong = []
    for q in PSL2_QS:
        shape = str(classify_shape(build_divgraph(psl2_table(q).sizes())))
        want = "3K1" if q % 2 == 0 or q == 5 else "K2+2K1"
        if shape != want:
            wrong.append((q, shape))
    record(acceptance_log, 4, "D(PSL(2,q)) shapes", not wrong,
           f"K2+2K1 for odd q >= 7, 3K1 for even q and q = 5 over {len(PSL2_QS)} q; "
           f"wrong {wrong}")


def test_c5_sz_shapes(acceptance_log):
    wrong = []
    for q in SZ_QS:
        g = build_divgraph(sz_table(q).sizes())
        edge = ((q - 1) * (q * q + 1), q * (q - 1) * (q * q + 1) // 2)
        if str(classify_shape(g)) != "K2+3K1" or g.edges != (edge,):
            wrong.append(q)
    record(acceptance_log, 5, "D(Sz(q)) = K2+3K1", not wrong,
           f"q in {SZ_QS}, unique edge {{(q-1)(q^2+1), q(q-1)(q^2+1)/2}}, wrong {wrong}")


def test_c6_sz8_unipotent_centralizers(acceptance_log, sz8):
    F = sz8.ctx
    q = sz8.spec.q
    bad = []
    checked = 0
    for a, b in itertools.product(F.elements(), repeat=2):
        if not a:
            continue
        x = sz8.lookup(bf.suzuki_unipotent(a, b))
        expected = bf.subgroup_from_matrices(
            sz8, [bf.suzuki_unipotent(u, v) for u in (F.zero(), a) for v in F.elements()])
        cent = bf.centralizer(sz8, x)
        checked += 1
        if len(cent) != 2 * q or not np.array_equal(cent, expected):
            bad.append((a.value, b.value))
    record(acceptance_log, 6, "C((a,b)) = <(a,0), Z(K)> in Sz(8)",
           not bad and checked == q * (q - 1),
           f"{checked} elements with a != 0, |C| = {2 * q}, failures {bad}")


def test_c7_ti_counting_identity(acceptance_log, psl2_groups, sz8):
    failures = []
    details = []
    for q in (5, 7, 9, 11, 13):
        G = psl2_groups[q]
        for name, H in bf.psl2_subgroups(G).items():
            r = bf.ti_lemma_report(G, H)
            if not r.passed:
                failures.append((q, name))
            if name == "H" and r.normalizer_index != 2:
                failures.append((q, "[N:H]", r.normalizer_index))
    want = {"A0": (7, 2), "A1": (13, 4), "A2": (5, 4), "K": (64, 7)}
    for name, H in bf.sz_subgroups(sz8).items():
        r = bf.ti_lemma_report(sz8, H)
        details.append(f"{name}: |H|={r.subgroup_order} [N:H]={r.normalizer_index}")
        if not r.passed or (r.subgroup_order, r.normalizer_index) != want[name]:
            failures.append(("Sz8", name))
    record(acceptance_log, 7, "|N| = |h^G cap H| |C(h)| on TI subgroups", not failures,
           f"PSL2 H,K,L for q in 5..13; Sz(8) {'; '.join(details)}; failures {failures}")


def test_c8_involution_census(acceptance_log, psl2_groups, sz8):
    inv = sz8.involutions()
    sz_classes = {int(sz8.class_index[i]) for i in inv}
    ok = len(inv) == 455 and len(sz_classes) == 1
    parts = [f"Sz(8): {len(inv)} involutions in {len(sz_classes)} class"]
    for q in (5, 9, 13):
        G = psl2_groups[q]
        table = psl2_table(q)
        origin = "H-involution" if table.spec.e % 2 == 0 else "L-involution"
        predicted = table.by_origin(origin).size
        classes = {int(G.class_index[i]) for i in G.involutions()}
        sizes = [len(G.classes[c]) for c in classes]
        ok &= sizes == [predicted]
        parts.append(f"PSL(2,{q}): classes {sizes}, predicted {predicted}")
    record(acceptance_log, 8, "involution census", ok, "; ".join(parts))


def test_c9_field_layer(acceptance_log):
    start = time.perf_counter()
    ok = True
    for m in (3, 5):
        F = field_make(2, m)
        els = F.elements()
        ok &= all(frobenius_r(frobenius_r(a)) == a * a for a in els)
        for a, b in itertools.product(els, repeat=2):
            ok &= frobenius_r(a + b) == frobenius_r(a) + frobenius_r(b)
            ok &= frobenius_r(a * b) == frobenius_r(a) * frobenius_r(b)
    ok &= bf.suzuki_product_law_holds(field_make(2, 3))
    elapsed = time.perf_counter() - start
    record(acceptance_log, 9, "field automorphism and Suzuki product law",
           ok and elapsed < 1.0,
           f"GF(8), GF(32) exhaustive; 4096 pairs over GF(8); {elapsed:.3f}s < 1s")
