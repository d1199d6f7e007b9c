"""
Graphs of overlapping permutations G(n, S) and De Bruijn graphs, closed
walks and d-cycles on them, and Eulerian-circuit counting.

Both graph kinds share :class:`OverlapGraph`: vertices and edge labels are
tuples of ints.  In ``"perm"`` mode a label ``s`` in S_{n+1} runs from the
standardization of ``s[:-1]`` to that of ``s[1:]``; in ``"word"`` mode (De
Bruijn) labels are length-(n+1) words over ``0..q-1`` and overlap literally.

Closed walks are counted three ways: the trace of a power of the adjacency
matrix, Moebius inversion of those traces, and explicit depth-first
enumeration grouped into rotation classes.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from permcycle.errors import (
    CapacityError, InternalConsistencyError, InvalidInputError, PreconditionError,
)
from permcycle.perm_core import (
    Perm, avoiders, central_binomial, divisors, is_permutation, mobius,
    parse_perm, perm_str, standardize,
)

DEFAULT_MAX_EDGES = 500_000
DEFAULT_WALK_BUDGET = 200_000

Label = tuple[int, ...]


def walk_budget() -> int:
    """Enumeration budget, overridable through ``PERMCYCLE_BUDGET``."""
    raw = os.environ.get("PERMCYCLE_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise InvalidInputError(f"PERMCYCLE_BUDGET={raw!r} is not an integer")
    return DEFAULT_WALK_BUDGET


def _label_str(x: Sequence[int]) -> str:
    return perm_str(x)


@dataclass(frozen=True)
class OverlapGraph:
    mode: str                      # "perm" or "word"
    n: int
    vertices: tuple[Label, ...]
    edges: tuple[tuple[int, int, Label], ...]   # (tail index, head index, label)
    avoid: tuple[Perm, ...] = ()
    q: int | None = None

    @cached_property
    def index(self) -> dict[Label, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def out_edges(self) -> list[list[tuple[Label, int]]]:
        """Per vertex, sorted ``(label, head)`` pairs."""
        out: list[list[tuple[Label, int]]] = [[] for _ in self.vertices]
        for t, h, lab in self.edges:
            out[t].append((lab, h))
        for lst in out:
            lst.sort()
        return out

    def out_degree(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for t, _, _ in self.edges:
            deg[t] += 1
        return deg

    def in_degree(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for _, h, _ in self.edges:
            deg[h] += 1
        return deg

    def tail_of(self, label: Label) -> Label:
        return standardize(label[:-1]) if self.mode == "perm" else tuple(label[:-1])

    def head_of(self, label: Label) -> Label:
        return standardize(label[1:]) if self.mode == "perm" else tuple(label[1:])

    @property
    def name(self) -> str:
        if self.mode == "word":
            return f"B({self.q},{self.n})"
        if not self.avoid:
            return f"G({self.n})"
        return f"G({self.n},{'|'.join(perm_str(p) for p in self.avoid)})"

    def adjacency(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((len(self.vertices),) * 2, dtype=dtype)
        for t, h, _ in self.edges:
            a[t, h] += 1
        return a


def _normalize_patterns(avoid: Iterable) -> tuple[Perm, ...]:
    pats = sorted({parse_perm(p) for p in avoid})
    for p in pats:
        if len(p) < 3:
            raise InvalidInputError(f"pattern {perm_str(p)} is shorter than 3")
    return tuple(pats)


def build_overlap_graph(n: int, avoid: Iterable = (), max_edges: int = DEFAULT_MAX_EDGES
                        ) -> OverlapGraph:
    """
    G(n, S): vertices S_n(S), one edge per label in S_{n+1}(S).

    >>> g = build_overlap_graph(2)
    >>> len(g.vertices), len(g.edges)
    (2, 6)
    """
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    pats = _normalize_patterns(avoid)
    if not pats and math.factorial(n + 1) > max_edges:
        raise CapacityError(
            f"G({n}) has {math.factorial(n + 1)} edges and {math.factorial(n)} "
            f"vertices; budget is {max_edges} edges")
    vertices = tuple(avoiders(n, pats))
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    for lab in avoiders(n + 1, pats):
        edges.append((index[standardize(lab[:-1])], index[standardize(lab[1:])], lab))
        if len(edges) > max_edges:
            raise CapacityError(
                f"G({n},S) exceeds the budget of {max_edges} edges "
                f"({len(vertices)} vertices)")
    return OverlapGraph("perm", n, vertices, tuple(edges), avoid=pats)


def build_de_bruijn(q: int, n: int, max_edges: int = DEFAULT_MAX_EDGES) -> OverlapGraph:
    """De Bruijn graph on words of length `n` over ``0..q-1``."""
    if q < 2 or n < 1:
        raise InvalidInputError("need q >= 2 and n >= 1")
    if q ** (n + 1) > max_edges:
        raise CapacityError(
            f"B({q},{n}) has {q ** (n + 1)} edges and {q ** n} vertices; "
            f"budget is {max_edges} edges")
    vertices = tuple(itertools.product(range(q), repeat=n))
    index = {v: i for i, v in enumerate(vertices)}
    edges = tuple((index[w[:-1]], index[w[1:]], w)
                  for w in itertools.product(range(q), repeat=n + 1))
    return OverlapGraph("word", n, vertices, edges, q=q)


# ---------------------------------------------------------------- counting

def _power_fits_int64(a: np.ndarray, d: int) -> bool:
    # every entry of A^e is at most maxdeg^e, and the trace at most V times that
    maxdeg = int(a.sum(axis=1).max()) if a.size else 0
    return len(a) * max(maxdeg, 1) ** d < 2 ** 62


def matrix_power(a: np.ndarray, d: int) -> np.ndarray:
    """A^d by repeated squaring, in the dtype of `a`."""
    result = np.identity(len(a), dtype=a.dtype)
    base = a
    while d:
        if d & 1:
            result = result @ base
        d >>= 1
        if d:
            base = base @ base
    return result


def _exact_adjacency(g: OverlapGraph, d: int) -> np.ndarray:
    a = g.adjacency()
    if not _power_fits_int64(a, d):
        a = g.adjacency(dtype=object)
    return a


def count_closed_walks(g: OverlapGraph, d: int) -> int:
    """Number of closed walks of length `d`: the trace of A^d."""
    if d < 1:
        raise InvalidInputError("d must be positive")
    a = _exact_adjacency(g, d)
    return int(sum(int(x) for x in np.diagonal(matrix_power(a, d))))


def trace_sequence(g: OverlapGraph, d_max: int) -> list[int]:
    """``[tr A, tr A^2, ..., tr A^d_max]``."""
    a = _exact_adjacency(g, d_max)
    out = []
    p = a
    for e in range(1, d_max + 1):
        if e > 1:
            p = p @ a
        out.append(int(sum(int(x) for x in np.diagonal(p))))
    return out


def primitive_count(closed_counts, d: int) -> int:
    """
    Number of primitive cycles of length `d` from closed-walk counts:
    ``(1/d) * sum_{e | d} mu(d/e) * closed_counts(e)``.
    """
    total = sum(mobius(d // e) * closed_counts(e) for e in divisors(d))
    if total % d:
        raise InternalConsistencyError(
            f"Moebius sum {total} is not divisible by d={d}")
    return total // d


def predicted_cycles_312(d: int) -> int:
    """Number of d-cycles in G(n, 312) for n >= d."""
    if d < 1:
        raise InvalidInputError("d must be positive")
    return primitive_count(central_binomial, d)


def predicted_cycles_de_bruijn(q: int, d: int) -> int:
    """Number of d-cycles in the De Bruijn graph over q letters, n >= d."""
    if q < 2 or d < 1:
        raise InvalidInputError("need q >= 2 and d >= 1")
    return primitive_count(lambda e: q ** e, d)


# ------------------------------------------------------------------- walks

@dataclass(frozen=True)
class ClosedWalk:
    """A closed walk as its list of edge labels; word mode for De Bruijn graphs."""
    n: int
    edges: tuple[Label, ...]
    word: bool = False

    def __post_init__(self):
        if not self.edges:
            raise InvalidInputError("a closed walk has at least one edge")
        for lab in self.edges:
            if len(lab) != self.n + 1:
                raise InvalidInputError(f"edge {lab!r} has length != n+1 = {self.n + 1}")
            if not self.word and not is_permutation(lab):
                raise InvalidInputError(f"edge {lab!r} is not a permutation")
        head = (lambda s: tuple(s[1:])) if self.word else (lambda s: standardize(s[1:]))
        tail = (lambda s: tuple(s[:-1])) if self.word else (lambda s: standardize(s[:-1]))
        d = len(self.edges)
        for i in range(d):
            if head(self.edges[i]) != tail(self.edges[(i + 1) % d]):
                raise InvalidInputError(
                    f"edges {i} and {(i + 1) % d} do not meet at a common vertex")

    @property
    def d(self) -> int:
        return len(self.edges)

    def rotate(self, r: int) -> ClosedWalk:
        r %= self.d
        return ClosedWalk(self.n, self.edges[r:] + self.edges[:r], self.word)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> ClosedWalk:
        edges = tuple(tuple(int(x) for x in e) for e in obj["edges"])
        walk = cls(int(obj["n"]), edges)
        if "d" in obj and int(obj["d"]) != walk.d:
            raise InvalidInputError("'d' disagrees with the number of edges")
        return walk

    def __str__(self) -> str:
        return "(" + ", ".join(_label_str(e) for e in self.edges) + ")"


@dataclass(frozen=True)
class CycleClass:
    """Rotation class of closed walks: least rotation plus its period."""
    representative: ClosedWalk
    period: int


def canonical_rotation(labels: Sequence[Label]) -> tuple[tuple[Label, ...], int]:
    """Return the lexicographically least rotation and the primitive period."""
    d = len(labels)
    labels = tuple(labels)
    rotations = [labels[r:] + labels[:r] for r in range(d)]
    period = next(p for p in range(1, d + 1)
                  if d % p == 0 and rotations[p % d] == labels)
    return min(rotations), period


def cycle_class(walk: ClosedWalk) -> CycleClass:
    rep, period = canonical_rotation(walk.edges)
    return CycleClass(ClosedWalk(walk.n, rep, walk.word), period)


def group_rotation_classes(walks: Iterable[ClosedWalk]) -> list[CycleClass]:
    """Distinct rotation classes among `walks`, sorted by representative."""
    seen = {}
    for w in walks:
        c = cycle_class(w)
        seen.setdefault(c.representative.edges, c)
    return [seen[k] for k in sorted(seen)]


def enumerate_closed_walks(g: OverlapGraph, d: int, budget: int | None = None
                           ) -> list[ClosedWalk]:
    """All closed walks of length `d`, sorted by label sequence."""
    if d < 1:
        raise InvalidInputError("d must be positive")
    budget = walk_budget() if budget is None else budget
    expected = count_closed_walks(g, d)
    if expected > budget:
        raise CapacityError(
            f"{g.name} has {expected} closed walks of length {d}; budget is {budget}")

    nv = len(g.vertices)
    rev: list[list[int]] = [[] for _ in range(nv)]
    for t, h, _ in g.edges:
        rev[h].append(t)
    out_edges = g.out_edges
    found: list[tuple[Label, ...]] = []

    for start in range(nv):
        # distance from each vertex back to `start`, for pruning
        dist = [-1] * nv
        dist[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in rev[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        path: list[Label] = []

        def rec(v: int, remaining: int) -> None:
            if remaining == 0:
                if v == start:
                    found.append(tuple(path))
                return
            for lab, h in out_edges[v]:
                if 0 <= dist[h] <= remaining - 1:
                    path.append(lab)
                    rec(h, remaining - 1)
                    path.pop()

        rec(start, d)

    found.sort()
    if len(found) != expected:
        raise InternalConsistencyError(
            f"enumerated {len(found)} closed walks but the trace gives {expected}")
    word = g.mode == "word"
    return [ClosedWalk(g.n, w, word) for w in found]


def enumerate_d_cycles(g: OverlapGraph, d: int, budget: int | None = None) -> list[CycleClass]:
    return [c for c in group_rotation_classes(enumerate_closed_walks(g, d, budget))
            if c.period == d]


def count_d_cycles(g: OverlapGraph, d: int, method: str = "trace_mobius",
                   budget: int | None = None) -> int:
    """Number of d-cycles, by Moebius-inverted traces or by enumeration."""
    if method == "trace_mobius":
        traces = trace_sequence(g, d)
        return primitive_count(lambda e: traces[e - 1], d)
    if method == "enumerate":
        return len(enumerate_d_cycles(g, d, budget))
    raise InvalidInputError(f"unknown method {method!r}")


# ------------------------------------------------------------ Euler / BEST

def check_degree_balance(g: OverlapGraph) -> list[tuple[Label, int, int]]:
    """``(vertex, in-degree, out-degree)`` for every unbalanced vertex."""
    ins, outs = g.in_degree(), g.out_degree()
    return [(v, i, o) for v, i, o in zip(g.vertices, ins, outs) if i != o]


def bareiss_determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _disconnected_components(g: OverlapGraph, active: list[int]) -> list[list[Label]]:
    """Return the weak components of the active vertices when there is more than one."""
    fwd: dict[int, set[int]] = {v: set() for v in active}
    bwd: dict[int, set[int]] = {v: set() for v in active}
    for t, h, _ in g.edges:
        fwd[t].add(h)
        bwd[h].add(t)

    def reach(root: int, adj) -> set[int]:
        seen = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    root = active[0]
    if reach(root, fwd) == set(active) == reach(root, bwd):
        return []
    undirected = {v: fwd[v] | bwd[v] for v in active}
    comps, left = [], set(active)
    while left:
        c = reach(min(left), undirected)
        comps.append(sorted(g.vertices[v] for v in c))
        left -= c
    return comps


def count_arborescences(g: OverlapGraph, root: int, active: list[int]) -> int:
    """Spanning arborescences oriented towards `root`, by the matrix-tree theorem."""
    pos = {v: i for i, v in enumerate(active)}
    size = len(active)
    lap = [[0] * size for _ in range(size)]
    for t, h, _ in g.edges:
        if t != h:
            lap[pos[t]][pos[t]] += 1
            lap[pos[t]][pos[h]] -= 1
    r = pos[root]
    minor = [row[:r] + row[r + 1:] for i, row in enumerate(lap) if i != r]
    return bareiss_determinant(minor)


def count_eulerian_circuits(g: OverlapGraph) -> int:
    """
    Eulerian circuits (as cyclic edge sequences) by the BEST theorem:
    arborescences at any root times prod_v (outdeg(v) - 1)!.
    """
    bad = check_degree_balance(g)
    if bad:
        shown = ", ".join(f"{_label_str(v)} (in {i}, out {o})" for v, i, o in bad[:8])
        raise PreconditionError(f"{g.name} is not degree-balanced: {shown}")
    outs = g.out_degree()
    active = [v for v in range(len(g.vertices)) if outs[v] > 0]
    if not active:
        raise PreconditionError(f"{g.name} has no edges")
    comps = _disconnected_components(g, active)
    if comps:
        shown = "; ".join(",".join(_label_str(v) for v in c[:4]) for c in comps)
        raise PreconditionError(f"{g.name} is disconnected: components {shown}")
    result = count_arborescences(g, active[0], active)
    for v in active:
        result *= math.factorial(outs[v] - 1)
    return result


def de_bruijn_complete_cycle_formula(q: int, n: int) -> int:
    """(q!)^(q^(n-1)) / q^n, evaluated exactly."""
    if q < 2 or n < 1:
        raise InvalidInputError("need q >= 2 and n >= 1")
    num = math.factorial(q) ** (q ** (n - 1))
    if num % q ** n:
        raise InternalConsistencyError(f"formula is not an integer at q={q}, n={n}")
    return num // q ** n


def euler_report(q: int, n: int) -> dict:
    """
    Compare BEST on the De Bruijn graph of order `n` with the complete-cycle
    formula under both indexings (formula order n and n + 1).
    """
    g = build_de_bruijn(q, n)
    best = count_eulerian_circuits(g)
    same = de_bruijn_complete_cycle_formula(q, n)
    shifted = de_bruijn_complete_cycle_formula(q, n + 1)
    return {
        "q": q, "graph_order": n, "best": best,
        "formula_same_order": same, "formula_order_plus_one": shifted,
        "matches_same_order": best == same, "matches_order_plus_one": best == shifted,
    }


# --------------------------------------------------------------------- DOT

def _quote(v: Sequence[int]) -> str:
    return '"' + _label_str(v) + '"'


def export_dot(g: OverlapGraph) -> str:
    """Deterministic Graphviz text; :func:`parse_dot` inverts it."""
    attrs = [f'mode="{g.mode}"', f"n={g.n}"]
    if g.avoid:
        attrs.append('avoid="' + ",".join(perm_str(p) for p in g.avoid) + '"')
    if g.q is not None:
        attrs.append(f"q={g.q}")
    lines = [f'digraph "{g.name}" {{', f"  graph [{', '.join(attrs)}];"]
    for v in g.vertices:
        lines.append(f"  {_quote(v)};")
    for t, h, lab in g.edges:
        lines.append(f"  {_quote(g.vertices[t])} -> {_quote(g.vertices[h])} "
                     f"[label={_quote(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _parse_label(text: str) -> Label:
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return tuple(int(c) for c in text)


_GRAPH_RE = re.compile(r"^\s*graph \[(.*)\];\s*$")
_NODE_RE = re.compile(r'^\s*"([^"]*)";\s*$')
_EDGE_RE = re.compile(r'^\s*"([^"]*)" -> "([^"]*)" \[label="([^"]*)"\];\s*$')


def parse_dot(text: str) -> OverlapGraph:
    """Read back the output of :func:`export_dot`."""
    attrs: dict[str, str] = {}
    vertices: list[Label] = []
    raw_edges: list[tuple[Label, Label, Label]] = []
    for line in text.splitlines():
        if m := _GRAPH_RE.match(line):
            for key, val in re.findall(r'(\w+)=("[^"]*"|\w+)', m.group(1)):
                attrs[key] = val.strip('"')
        elif m := _EDGE_RE.match(line):
            raw_edges.append(tuple(_parse_label(x) for x in m.groups()))
        elif m := _NODE_RE.match(line):
            vertices.append(_parse_label(m.group(1)))
    if "mode" not in attrs or "n" not in attrs:
        raise InvalidInputError("DOT text lacks the graph attribute line")
    index = {v: i for i, v in enumerate(vertices)}
    edges = tuple((index[t], index[h], lab) for t, h, lab in raw_edges)
    avoid = tuple(parse_perm(p) for p in attrs["avoid"].split(",")) if attrs.get("avoid") else ()
    q = int(attrs["q"]) if "q" in attrs else None
    return OverlapGraph(attrs["mode"], int(attrs["n"]), tuple(vertices), edges, avoid, q)
