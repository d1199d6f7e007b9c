"""Identity checks run by ``permcycle verify``; each yields one ledger line."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator

from permcycle import affine, bijection, compositions as comp, overlap_graph as og
from permcycle.perm_core import (
    P312, avoiders, binomial, catalan, central_binomial, indecomposable_avoiders,
)

Check = Callable[[bool], tuple[bool, str]]


def _small_graph(quick: bool) -> tuple[bool, str]:
    g = og.build_overlap_graph(3, [P312])
    rows = []
    for d in (1, 2, 3):
        rows.append((og.predicted_cycles_312(d), og.count_d_cycles(g, d),
                     og.count_d_cycles(g, d, "enumerate")))
    ok = (len(g.vertices), len(g.edges)) == (5, 14) and rows == [(2,) * 3, (2,) * 3, (6,) * 3]
    return ok, f"|V|={len(g.vertices)} |E|={len(g.edges)} cycles={rows}"


def _closed_walks(quick: bool) -> tuple[bool, str]:
    n_max = 5 if quick else 7
    bad = []
    for n in range(1, n_max + 1):
        traces = og.trace_sequence(og.build_overlap_graph(n, [P312]), n)
        bad += [(n, d) for d, t in enumerate(traces, 1) if t != central_binomial(d)]
    return not bad, f"1<=d<=n<={n_max} mismatches={bad}"


def _cycles(quick: bool) -> tuple[bool, str]:
    n_max = 5 if quick else 6
    bad = []
    for n in range(1, n_max + 1):
        g = og.build_overlap_graph(n, [P312])
        for d in range(1, n + 1):
            a = og.count_d_cycles(g, d)
            b = og.count_d_cycles(g, d, "enumerate")
            if not a == b == og.predicted_cycles_312(d):
                bad.append((n, d, a, b))
    seq = [og.predicted_cycles_312(d) for d in range(1, 7)]
    ok = not bad and seq == [2, 2, 6, 16, 50, 150]
    return ok, f"1<=d<=n<={n_max} mismatches={bad} formula={seq}"


def _walk_list(quick: bool) -> tuple[bool, str]:
    g = og.build_overlap_graph(3, [P312])
    walks = og.enumerate_closed_walks(g, 2)
    got = sorted(tuple("".join(map(str, e)) for e in w.edges) for w in walks)
    want = sorted([("1234", "1234"), ("4321", "4321"), ("1324", "2143"),
                   ("2143", "1324"), ("2314", "3241"), ("3241", "2314")])
    classes = og.group_rotation_classes(walks)
    periods = sorted(c.period for c in classes)
    return got == want and periods == [1, 1, 2, 2], f"walks={len(walks)} periods={periods}"


EXAMPLE_BLOCKS = [(-1, (2, 3, 1)), (2, (1,)), (3, "D"), (4, (1,)), (5, "D"), (6, "D")]
EXAMPLE_WIDTH8 = ["45362178", "43521786", "34216758", "43267581",
                  "32564718", "35647281", "56473821", "54637218"]
EXAMPLE_WIDTH9 = ["453621897", "435217869", "453278691"]


def _example(quick: bool) -> tuple[bool, str]:
    ecc = comp.EnrichedCyclicComposition.from_blocks(8, EXAMPLE_BLOCKS)
    w8 = bijection.phi(ecc, 7, allow_short_window=True)
    w9 = bijection.phi(ecc, 8)
    s8 = ["".join(map(str, e)) for e in w8.edges]
    s9 = ["".join(map(str, e)) for e in w9.edges[:3]]
    back = bijection.phi_inverse(w9)
    ok = s8 == EXAMPLE_WIDTH8 and s9 == EXAMPLE_WIDTH9 and back == ecc
    return ok, f"width8={'ok' if s8 == EXAMPLE_WIDTH8 else s8} width9={s9} inverse={back == ecc}"


def _round_trips(quick: bool) -> tuple[bool, str]:
    d_max = 3 if quick else 5
    count_a = bad_a = 0
    for d in range(1, d_max + 1):
        for ecc in comp.iter_enriched(d):
            for n in (d, d + 1):
                count_a += 1
                bad_a += bijection.phi_inverse(bijection.phi(ecc, n)) != ecc
    count_b = bad_b = 0
    for n in (4, 5):
        g = og.build_overlap_graph(n, [P312])
        for d in range(1, (3 if quick else 4) + 1):
            for w in og.enumerate_closed_walks(g, d):
                count_b += 1
                bad_b += bijection.phi(bijection.phi_inverse(w), n) != w
    return bad_a == bad_b == 0, f"A: {count_a} cases {bad_a} bad; B: {count_b} cases {bad_b} bad"


def _affine(quick: bool) -> tuple[bool, str]:
    d_max = 4 if quick else 6
    bad = []
    for d in range(1, d_max + 1):
        built = set()
        for k in range(1, d + 1):
            layer = {p.window for p in affine.construct_affine_312(d, k)}
            if len(layer) != affine.count_affine_by_cut_points(d, k):
                bad.append((d, k))
            built |= layer
        oracle = affine.enumerate_affine_312(d, 2 * d)
        oracle_set = {p.window for p in oracle}
        if built != oracle_set or len(built) != binomial(2 * d - 1, d):
            bad.append((d, "oracle"))
        if any(not affine.affine_cut_points(p) for p in oracle):
            bad.append((d, "no-cut"))
    return not bad, f"d<={d_max} mismatches={bad}"


def _compositions(quick: bool) -> tuple[bool, str]:
    d_max = 6 if quick else 8
    rng = random.Random(20240601)
    w = comp.WeightSequence.from_function(lambda i: Fraction(rng.randint(-9, 9), rng.randint(1, 9)), d_max)
    bad = []
    cat = comp.catalan_weights(d_max)
    enr = comp.enriched_weights(d_max)
    total = comp.series_gamma_total(enr, d_max)
    for d in range(1, d_max + 1):
        for k in range(1, d + 1):
            if comp.gamma(d, k, w) != Fraction(d, k) * comp.beta(d, k, w):
                bad.append(("cor", d, k))
            if comp.beta(d, k, cat) != Fraction(k, d) * binomial(2 * d - k - 1, d - 1):
                bad.append(("catalan-triangle", d, k))
            if comp.catalan_cyclic_sum(d, k) != binomial(2 * d - k - 1, d - 1):
                bad.append(("cyclic-catalan", d, k))
            if comp.series_beta(k, w, d_max)[d] != comp.beta(d, k, w):
                bad.append(("series-beta", d, k))
            if comp.series_gamma(k, w, d_max)[d] != comp.gamma(d, k, w):
                bad.append(("series-gamma", d, k))
        if total[d] != central_binomial(d):
            bad.append(("central-binomial", d))
    for d in range(1, (5 if quick else 7) + 1):
        if len(comp.enumerate_enriched(d)) != central_binomial(d):
            bad.append(("E_d", d))
    return not bad, f"d<={d_max} mismatches={bad}"


def _de_bruijn(quick: bool) -> tuple[bool, str]:
    bad = []
    for q in (2, 3):
        for n in range(1, 5):
            g = og.build_de_bruijn(q, n)
            for d in range(1, n + 1):
                if og.count_d_cycles(g, d, "enumerate") != og.predicted_cycles_de_bruijn(q, d):
                    bad.append((q, n, d))
    euler = [og.euler_report(2, n) for n in (1, 2, 3)]
    if not all(r["matches_order_plus_one"] for r in euler):
        bad.append("euler")
    for n in range(1, 5):
        if og.check_degree_balance(og.build_overlap_graph(n)):
            bad.append(("G(n) unbalanced", n))
    for n in range(2, 5):
        if not og.check_degree_balance(og.build_overlap_graph(n, [P312])):
            bad.append(("G(n,312) balanced", n))
    return not bad, f"mismatches={bad} best={[r['best'] for r in euler]}"


def _catalan(quick: bool) -> tuple[bool, str]:
    bad = [n for n in range(1, 9) if sum(1 for _ in avoiders(n, [P312])) != catalan(n)
           or len(indecomposable_avoiders(n)) != catalan(n - 1)]
    return not bad, f"n<=8 mismatches={bad}"


CHECKS: list[tuple[str, Check]] = [
    ("catalan-avoiders", _catalan),
    ("g3-312-graph", _small_graph),
    ("closed-walks-central-binomial", _closed_walks),
    ("d-cycles-formula", _cycles),
    ("walk-list-G3", _walk_list),
    ("eight-cycle-golden", _example),
    ("bijection-round-trips", _round_trips),
    ("affine-cut-points", _affine),
    ("composition-identities", _compositions),
    ("de-bruijn-and-euler", _de_bruijn),
]


def run_checks(quick: bool = False) -> Iterator[tuple[str, bool, str]]:
    for name, fn in CHECKS:
        ok, detail = fn(quick)
        yield name, ok, detail
