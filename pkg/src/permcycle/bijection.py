"""
The bijection between enriched cyclic compositions of ``d`` and closed walks
of length ``d`` in G(n, 312), in both directions.

Forward: an enriched cyclic composition defines a d-periodic sequence whose
length-(n+1) windows, standardized, are the edges of the walk.  Positions in
permutation-enriched blocks get the value of the block permutation acting on
the block's integer interval; positions in ``D`` blocks get values below
every other value, decreasing from left to right.  On a finite window this
is order-isomorphic to using ``exp(pi(j))`` and ``-exp(j)``, because both
assignments put all ``D`` values below all others, order the ``D`` values by
decreasing index, and order the rest by ``pi``.

Backward: the walk is lifted greedily to a sequence (each new value is
placed as far from the existing values as the local window allows, so no
unforced inversion is created), the residues are split into decreasing
(``D``) and increasing (``U``) classes, and one period is cut into blocks.

Indices are absolute on both sides: edge ``i`` of the walk is the window
starting at index ``i``, and block starts are residues of those indices, so
the two maps invert each other exactly, not only up to rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from permcycle.compositions import DOWN, EnrichedCyclicComposition
from permcycle.errors import (
    InternalConsistencyError, InvalidSequenceError, PreconditionError,
)
from permcycle.overlap_graph import ClosedWalk
from permcycle.perm_core import components, has_312, standardize


@dataclass(frozen=True)
class PeriodicSequence:
    """Exact values on the index range ``lo..hi`` of a d-periodic sequence."""
    d: int
    lo: int
    values: tuple

    def __post_init__(self):
        if len(set(self.values)) != len(self.values):
            raise InvalidSequenceError("sequence values must be pairwise distinct")

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def __getitem__(self, i: int):
        if not self.lo <= i <= self.hi:
            raise IndexError(f"index {i} outside {self.lo}..{self.hi}")
        return self.values[i - self.lo]

    def segment(self, a: int, b: int) -> list:
        """Values at indices ``a..b`` inclusive."""
        return [self[i] for i in range(a, b + 1)]

    def standardized(self, a: int, length: int):
        return standardize(self.segment(a, a + length - 1))

    def is_pattern_periodic(self, max_dist: int | None = None) -> bool:
        """Order between i and j is preserved by shifting both by d, on the window."""
        d, lo, hi = self.d, self.lo, self.hi
        for i in range(lo, hi - d + 1):
            top = hi - d if max_dist is None else min(hi - d, i + max_dist)
            for j in range(i + 1, top + 1):
                if (self[i] < self[j]) != (self[i + d] < self[j + d]):
                    return False
        return True

    def is_locally_312_avoiding(self, span: int) -> bool:
        """No 312 inside any `span` consecutive entries."""
        length = len(self.values)
        if length <= span:
            return not has_312(self.values)
        return not any(has_312(self.values[a:a + span]) for a in range(length - span + 1))

    def is_312_avoiding(self) -> bool:
        return not has_312(self.values)


def build_sequence(ecc: EnrichedCyclicComposition, lo: int, hi: int) -> PeriodicSequence:
    """Integer surrogate of the forward sequence on indices ``lo..hi``."""
    d = ecc.d
    owner = {}
    for (start, length), e in zip(ecc.base.blocks, ecc.enrichments):
        for t in range(length):
            owner[(start + t) % d] = (t, e)
    up_values: dict[int, int] = {}
    downs: list[int] = []
    for j in range(lo, hi + 1):
        t, e = owner[j % d]
        if e == DOWN:
            downs.append(j)
        else:
            block_start = j - t
            up_values[j] = block_start + e[t] - 1
    floor = min(up_values.values(), default=0)
    for rank, j in enumerate(downs, 1):
        up_values[j] = floor - rank
    return PeriodicSequence(d, lo, tuple(up_values[j] for j in range(lo, hi + 1)))


def sequence_walk(seq: PeriodicSequence, n: int, first: int = 1) -> ClosedWalk:
    """Standardized width-(n+1) windows starting at ``first .. first + d - 1``."""
    edges = tuple(seq.standardized(i, n + 1) for i in range(first, first + seq.d))
    return ClosedWalk(n, edges)


def phi(ecc: EnrichedCyclicComposition, n: int, allow_short_window: bool = False) -> ClosedWalk:
    """
    The closed walk in G(n, 312) encoded by `ecc`.

    The bijection needs ``d <= n``; ``allow_short_window`` lifts that check so
    the windows of a longer cycle can still be read off.
    """
    d = ecc.d
    if n < 1:
        raise PreconditionError("n must be positive")
    if d > n and not allow_short_window:
        raise PreconditionError(f"the bijection requires d <= n, got d={d}, n={n}")
    seq = build_sequence(ecc, 1, d + n)
    return sequence_walk(seq, n)


def lift_walk(walk: ClosedWalk, pre_ext: int | None = None, post_ext: int | None = None
              ) -> PeriodicSequence:
    """
    Greedy lift of the periodic extension of `walk` to a sequence g with
    ``standardize(g(i..i+n)) == sigma_i``.

    Starts from ``g(1..n+1) = sigma_1`` and alternates one step to the right
    and one to the left until ``pre_ext`` indices are added on the left and
    ``post_ext`` on the right (default ``n + 2d`` each).
    """
    n, d = walk.n, walk.d
    pre_ext = n + 2 * d if pre_ext is None else pre_ext
    post_ext = n + 2 * d if post_ext is None else post_ext
    sigmas = walk.edges
    inverses = []
    for s in sigmas:
        inv = [0] * (n + 2)
        for pos, v in enumerate(s, 1):
            inv[v] = pos
        inverses.append(inv)

    g: dict[int, Fraction] = {k: Fraction(v) for k, v in enumerate(sigmas[0], 1)}
    left, right = 1, n + 1
    target_left, target_right = 1 - pre_ext, n + 1 + post_ext

    def neighbours(i0: int, pos: int):
        # values of g at the positions holding sigma(pos) - 1 and sigma(pos) + 1
        idx = (i0 - 1) % d
        sigma, inv = sigmas[idx], inverses[idx]
        v = sigma[pos - 1]
        s = i0 - 1
        a = g[inv[v - 1] + s] if v > 1 else None
        b = g[inv[v + 1] + s] if v < n + 1 else None
        return a, b

    while right < target_right or left > target_left:
        if right < target_right:
            j = right + 1
            a, b = neighbours(j - n, n + 1)
            below = [x for x in g.values() if b is None or x < b]
            low = max(below) if below else None
            if low is None:
                x = b - 1
            elif b is None:
                x = low + 1
            else:
                x = (low + b) / 2
            g[j] = x
            right = j
        if left > target_left:
            i = left - 1
            a, b = neighbours(i, 1)
            above = [x for x in g.values() if a is None or x > a]
            high = min(above) if above else None
            if high is None:
                x = a + 1
            elif a is None:
                x = high - 1
            else:
                x = (a + high) / 2
            g[i] = x
            left = i

    seq = PeriodicSequence(d, left, tuple(g[k] for k in range(left, right + 1)))
    for i in range(left, right - n + 1):
        if seq.standardized(i, n + 1) != sigmas[(i - 1) % d]:
            raise InternalConsistencyError(f"lifted window at {i} disagrees with the walk")
    return seq


def classify_DU(seq: PeriodicSequence, check: bool = True
                ) -> tuple[frozenset[int], frozenset[int]]:
    """
    Split residues mod d into D (``g(i) > g(i+d)``) and U (``g(i) < g(i+d)``).

    With ``check`` the structural claims are verified on the window: each
    residue is classified consistently, the D values decrease, and every D
    value lies below every U value.
    """
    d = seq.d
    if len(seq.values) < 2 * d:
        raise InvalidSequenceError("window must span at least two periods")
    verdict: dict[int, bool] = {}
    for i in range(seq.lo, seq.hi - d + 1):
        x, y = seq[i], seq[i + d]
        if x == y:
            raise InvalidSequenceError(f"g({i}) == g({i + d})")
        down = x > y
        r = i % d
        if verdict.setdefault(r, down) != down:
            raise InvalidSequenceError(f"residue {r} is neither increasing nor decreasing")
    D = frozenset(r for r, v in verdict.items() if v)
    U = frozenset(range(d)) - D
    if check:
        idx = range(seq.lo, seq.hi + 1)
        dvals = [seq[i] for i in idx if i % d in D]
        uvals = [seq[i] for i in idx if i % d in U]
        if any(a <= b for a, b in zip(dvals, dvals[1:])):
            raise InvalidSequenceError("D values are not decreasing")
        if dvals and uvals and max(dvals) > min(uvals):
            raise InvalidSequenceError("some D value exceeds some U value")
    return D, U


def _split_run(seq: PeriodicSequence, a: int, b: int) -> list[tuple[int, tuple]]:
    """Blocks ``(start, component)`` of the standardized run ``a..b``."""
    blocks = []
    start = a
    for comp in components(seq.segment(a, b)):
        blocks.append((start, comp))
        start += len(comp)
    return blocks


def find_cut_point(seq: PeriodicSequence, candidates) -> int | None:
    """
    First ``c`` in `candidates` that is a cut point of a sequence whose residue
    classes all increase: then checking ``i`` in ``c-d+1..c`` against ``k`` in
    ``c+1..c+d`` suffices.
    """
    d = seq.d
    for c in candidates:
        if c - d + 1 < seq.lo or c + d > seq.hi:
            continue
        if max(seq.segment(c - d + 1, c)) < min(seq.segment(c + 1, c + d)):
            return c
    return None


def decompose(seq: PeriodicSequence, D: frozenset[int]) -> EnrichedCyclicComposition:
    """Cut one period of a lifted sequence into enriched blocks."""
    d = seq.d
    blocks: list[tuple[int, object]] = []
    if D:
        p1 = next(i for i in range(1, d + 1) if i % d in D)
        i, end = p1, p1 + d - 1
        while i <= end:
            if i % d in D:
                blocks.append((i, DOWN))
                i += 1
                continue
            j = i
            while j + 1 <= end and (j + 1) % d not in D:
                j += 1
            blocks.extend(_split_run(seq, i, j))
            i = j + 1
    else:
        c = find_cut_point(seq, range(1, d + 1))
        if c is None:
            c = find_cut_point(seq, range(seq.lo, seq.hi + 1))
        if c is None:
            raise InternalConsistencyError("no cut point found in the lifted window")
        blocks.extend(_split_run(seq, c + 1, c + d))
    return EnrichedCyclicComposition.from_blocks(d, blocks)


def phi_inverse(walk: ClosedWalk, debug_extend: bool = False) -> EnrichedCyclicComposition:
    """
    The enriched cyclic composition encoded by a closed walk of G(n, 312).

    With ``debug_extend`` the lift is repeated with doubled extensions and
    the two answers must agree.
    """
    n, d = walk.n, walk.d
    if d > n:
        raise PreconditionError(f"the bijection requires d <= n, got d={d}, n={n}")
    if any(has_312(e) for e in walk.edges):
        raise PreconditionError("walk is not in G(n, 312)")
    seq = lift_walk(walk)
    D, _ = classify_DU(seq)
    result = decompose(seq, D)
    if debug_extend:
        ext = 2 * (n + 2 * d)
        wide = lift_walk(walk, ext, ext)
        D_wide, _ = classify_DU(wide)
        if D_wide != D or decompose(wide, D_wide) != result:
            raise InternalConsistencyError("result changed when the lift was widened")
    return result

