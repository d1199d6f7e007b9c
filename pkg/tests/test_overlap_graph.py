import itertools
import math

import numpy as np
import pytest

from permcycle.errors import CapacityError, InvalidInputError, PreconditionError
from permcycle.overlap_graph import (
    ClosedWalk, bareiss_determinant, build_de_bruijn, build_overlap_graph,
    canonical_rotation, check_degree_balance, count_closed_walks, count_d_cycles,
    count_eulerian_circuits, cycle_class, de_bruijn_complete_cycle_formula,
    enumerate_closed_walks, euler_report, export_dot, group_rotation_classes,
    matrix_power, parse_dot, predicted_cycles_312, predicted_cycles_de_bruijn,
    trace_sequence,
)
from permcycle.perm_core import central_binomial, divisors, parse_perm, standardize

P312 = (3, 1, 2)

G3_312_LABELS = {"2134", "3214", "3241", "2314", "1324", "2143", "1243", "3421",
                 "1432", "2431", "1342", "2341", "1234", "4321"}


def labels(g):
    return {"".join(map(str, lab)) for _, _, lab in g.edges}


def brute_eulerian_circuits(g):
    """Count Eulerian circuits as cyclic sequences: fix the first edge, DFS the rest."""
    m = len(g.edges)
    used = [False] * m
    out = {}
    for i, (t, _, _) in enumerate(g.edges):
        out.setdefault(t, []).append(i)
    start_tail = g.edges[0][0]
    used[0] = True

    def rec(v, count):
        if count == m:
            return int(v == start_tail)
        total = 0
        for i in out.get(v, []):
            if not used[i]:
                used[i] = True
                total += rec(g.edges[i][1], count + 1)
                used[i] = False
        return total

    return rec(g.edges[0][1], 1)


def primitive_necklaces(q, d):
    """Aperiodic necklaces of length d over q letters, by brute force over words."""
    seen = set()
    for w in itertools.product(range(q), repeat=d):
        rots = {w[r:] + w[:r] for r in range(d)}
        if len(rots) == d:
            seen.add(min(rots))
    return len(seen)


def test_g2_graph():
    g = build_overlap_graph(2)
    assert g.vertices == ((1, 2), (2, 1))
    assert len(g.edges) == 6
    loops = {(g.vertices[t], lab) for t, h, lab in g.edges if t == h}
    assert loops == {((1, 2), (1, 2, 3)), ((2, 1), (3, 2, 1))}


def test_g3_312_graph():
    g = build_overlap_graph(3, ["312"])
    assert len(g.vertices) == 5 and len(g.edges) == 14
    assert labels(g) == G3_312_LABELS
    loops = {"".join(map(str, lab)) for t, h, lab in g.edges if t == h}
    assert loops == {"1234", "4321"}


def test_edges_wired_by_standardization():
    for n, avoid in [(3, []), (4, ["312"]), (4, ["321"])]:
        g = build_overlap_graph(n, avoid)
        for t, h, lab in g.edges:
            assert g.vertices[t] == standardize(lab[:-1])
            assert g.vertices[h] == standardize(lab[1:])


def test_parallel_edges_in_g4():
    g = build_overlap_graph(4)
    between = sorted("".join(map(str, lab)) for t, h, lab in g.edges
                     if g.vertices[t] == (2, 3, 4, 1) and g.vertices[h] == (3, 4, 1, 2))
    assert between == ["24513", "34512"]


def test_build_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        build_overlap_graph(0)
    with pytest.raises(InvalidInputError):
        build_overlap_graph(3, ["12"])
    with pytest.raises(CapacityError):
        build_overlap_graph(9)
    with pytest.raises(CapacityError):
        build_overlap_graph(6, ["312"], max_edges=100)


def test_de_bruijn_structure():
    g = build_de_bruijn(2, 2)
    assert (len(g.vertices), len(g.edges)) == (4, 8)
    g = build_de_bruijn(2, 1)
    assert (len(g.vertices), len(g.edges)) == (2, 4)
    assert {g.vertices[t] for t, h, _ in g.edges if t == h} == {(0,), (1,)}
    for q, n in [(2, 3), (3, 2), (4, 2)]:
        g = build_de_bruijn(q, n)
        assert set(g.in_degree()) == {q} and set(g.out_degree()) == {q}


def test_matrix_power_matches_numpy():
    a = build_overlap_graph(4, ["312"]).adjacency()
    for d in range(0, 7):
        assert np.array_equal(matrix_power(a, d), np.linalg.matrix_power(a, d))


def test_count_closed_walks_examples():
    g3 = build_overlap_graph(3, ["312"])
    assert count_closed_walks(g3, 2) == 6
    for n in range(1, 8):
        assert count_closed_walks(build_overlap_graph(n, ["312"]), 1) == 2
    assert count_closed_walks(build_overlap_graph(5, ["312"]), 4) == 70


def test_closed_walks_object_fallback_matches():
    # force big-integer arithmetic and compare with the int64 path
    g = build_overlap_graph(4, ["312"])
    a = g.adjacency(dtype=object)
    for d in range(1, 6):
        assert sum(np.diagonal(matrix_power(a, d))) == count_closed_walks(g, d)
    # large d overflows int64, so the exact path must kick in
    big = count_closed_walks(build_de_bruijn(2, 1), 80)
    assert big == 2 ** 80


def test_closed_walks_are_central_binomials():
    for n in range(1, 8):
        g = build_overlap_graph(n, ["312"])
        assert trace_sequence(g, n) == [central_binomial(d) for d in range(1, n + 1)]


def test_enumerate_length_two_walks_in_g3():
    g = build_overlap_graph(3, ["312"])
    walks = enumerate_closed_walks(g, 2)
    got = [tuple("".join(map(str, e)) for e in w.edges) for w in walks]
    assert got == [("1234", "1234"), ("1324", "2143"), ("2143", "1324"),
                   ("2314", "3241"), ("3241", "2314"), ("4321", "4321")]
    assert [str(w) for w in enumerate_closed_walks(g, 1)] == ["(1234)", "(4321)"]


def test_d1_walks_are_loops():
    for g in (build_overlap_graph(3), build_de_bruijn(3, 2)):
        for w in enumerate_closed_walks(g, 1):
            lab = w.edges[0]
            assert g.tail_of(lab) == g.head_of(lab)


def test_enumeration_budget():
    g = build_overlap_graph(5, ["312"])
    with pytest.raises(CapacityError):
        enumerate_closed_walks(g, 5, budget=10)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("PERMCYCLE_BUDGET", "5")
    with pytest.raises(CapacityError):
        enumerate_closed_walks(build_overlap_graph(3, ["312"]), 2)


def test_closed_walk_validation():
    with pytest.raises(InvalidInputError):
        ClosedWalk(3, ((1, 2, 3, 4), (4, 3, 2, 1)))
    with pytest.raises(InvalidInputError):
        ClosedWalk(3, ())
    w = ClosedWalk(3, ((1, 3, 2, 4), (2, 1, 4, 3)))
    assert ClosedWalk.from_json(w.to_json()) == w
    assert w.to_json() == {"n": 3, "d": 2, "edges": [[1, 3, 2, 4], [2, 1, 4, 3]]}


def test_rotation_classes():
    g = build_overlap_graph(4, ["312"])
    walks = enumerate_closed_walks(g, 4)
    for w in walks[:40]:
        c = cycle_class(w)
        assert 4 % c.period == 0
        for r in range(4):
            assert cycle_class(w.rotate(r)) == c
    classes = group_rotation_classes(walks)
    sizes = {}
    for w in walks:
        sizes[cycle_class(w).representative] = sizes.get(cycle_class(w).representative, 0) + 1
    for c in classes:
        assert sizes[c.representative] == c.period
    assert canonical_rotation(((2,), (1,), (2,), (1,))) == (((1,), (2,), (1,), (2,)), 2)


def test_g3_312_cycle_counts():
    g = build_overlap_graph(3, ["312"])
    for d, want in [(1, 2), (2, 2), (3, 6)]:
        assert count_d_cycles(g, d) == want
        assert count_d_cycles(g, d, "enumerate") == want
        assert predicted_cycles_312(d) == want


def test_cycles_g4_d4():
    g = build_overlap_graph(4, ["312"])
    assert count_d_cycles(g, 4) == count_d_cycles(g, 4, "enumerate") == 16
    assert (70 - 6) // 4 == 16


def test_predicted_cycles_312():
    assert [predicted_cycles_312(d) for d in range(1, 7)] == [2, 2, 6, 16, 50, 150]
    for d in range(1, 11):
        assert sum(e * predicted_cycles_312(e) for e in divisors(d)) == central_binomial(d)


def test_cycle_counts_match_formula_for_all_n():
    for n in range(1, 7):
        g = build_overlap_graph(n, ["312"])
        for d in range(1, n + 1):
            a = count_d_cycles(g, d)
            assert a == count_d_cycles(g, d, "enumerate") == predicted_cycles_312(d)


def test_de_bruijn_cycles():
    assert [predicted_cycles_de_bruijn(2, d) for d in range(1, 5)] == [2, 1, 2, 3]
    assert predicted_cycles_de_bruijn(3, 2) == 3
    assert all(predicted_cycles_de_bruijn(q, 1) == q for q in range(2, 8))
    assert count_d_cycles(build_de_bruijn(2, 4), 3, "enumerate") == 2
    for q in (2, 3):
        for n in range(1, 5):
            g = build_de_bruijn(q, n)
            for d in range(1, n + 1):
                want = primitive_necklaces(q, d)
                assert predicted_cycles_de_bruijn(q, d) == want
                assert count_d_cycles(g, d, "enumerate") == want
                assert count_d_cycles(g, d) == want


def test_unknown_method():
    with pytest.raises(InvalidInputError):
        count_d_cycles(build_overlap_graph(2), 1, "magic")


def test_degree_balance():
    for n in range(1, 5):
        g = build_overlap_graph(n)
        assert check_degree_balance(g) == []
        assert set(g.out_degree()) == {n + 1}
    report = check_degree_balance(build_overlap_graph(3, ["312"]))
    assert report and all(i != o for _, i, o in report)
    assert check_degree_balance(build_de_bruijn(3, 2)) == []


def test_bareiss_determinant():
    import random
    rng = random.Random(5)
    for size in range(1, 6):
        m = [[rng.randint(-5, 5) for _ in range(size)] for _ in range(size)]
        expect = sum(
            math.prod(m[i][p[i]] for i in range(size))
            * (-1) ** sum(p[i] > p[j] for i in range(size) for j in range(i + 1, size))
            for p in itertools.permutations(range(size)))
        assert bareiss_determinant(m) == expect


def test_eulerian_circuits_against_brute_force():
    cases = [build_de_bruijn(2, 1), build_de_bruijn(2, 2), build_de_bruijn(2, 3),
             build_de_bruijn(3, 1), build_overlap_graph(2)]
    for g in cases:
        assert count_eulerian_circuits(g) == brute_eulerian_circuits(g)
    assert count_eulerian_circuits(build_de_bruijn(2, 2)) == 2
    assert count_eulerian_circuits(build_de_bruijn(2, 1)) == 1
    assert count_eulerian_circuits(build_overlap_graph(2)) == 8


def test_eulerian_preconditions():
    with pytest.raises(PreconditionError):
        count_eulerian_circuits(build_overlap_graph(3, ["312"]))


def test_de_bruijn_formula_and_indexing():
    assert de_bruijn_complete_cycle_formula(2, 3) == 2
    assert de_bruijn_complete_cycle_formula(2, 4) == 16
    assert de_bruijn_complete_cycle_formula(2, 1) == 1
    for n in (1, 2, 3):
        r = euler_report(2, n)
        assert r["best"] == de_bruijn_complete_cycle_formula(2, n + 1)
        assert r["matches_order_plus_one"]


def test_dot_export():
    g = build_overlap_graph(2)
    text = export_dot(g)
    assert text.count(" -> ") == 6
    assert text == export_dot(build_overlap_graph(2))
    assert export_dot(parse_dot(text)) == text
    assert parse_dot(text) == g
    one = export_dot(build_overlap_graph(1))
    assert one.count(";\n") - one.count(" -> ") == 2   # attribute line plus one node
    g3 = build_overlap_graph(3, ["312"])
    text3 = export_dot(g3)
    assert text3.count(" -> ") == 14
    for lab in G3_312_LABELS:
        assert f'[label="{lab}"]' in text3
    assert parse_dot(text3) == g3
    db = build_de_bruijn(2, 2)
    assert parse_dot(export_dot(db)) == db


def test_parse_perm_in_avoid():
    assert build_overlap_graph(3, [parse_perm("312")]).avoid == (P312,)
