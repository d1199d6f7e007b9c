"""
Affine permutations in window notation, 312-avoidance and cut points on
them, and the construction from permutation-enriched cyclic compositions.

An affine permutation of period ``d`` is stored as its window
``(pi(0), ..., pi(d-1))``; all other values follow from
``pi(i + d) = pi(i) + d``.

Both the avoidance test and the cut-point test scan a finite range.  With
``D = max |pi(i) - i|`` over one window we have ``pi(i) <= i + D`` and
``pi(k) >= k - D``, so ``pi(k) < pi(i)`` forces ``k - i < 2D``.  An
occurrence of 312 at ``i < j < k`` can be translated to ``0 <= i < d``, so it
lies inside ``[0, d + 2D)``; a violation ``pi(i) > pi(k)`` of a cut at ``j``
has ``j - 2D < i <= j < k < i + 2D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from permcycle.compositions import (
    CyclicComposition, EnrichedCyclicComposition, iter_enriched,
)
from permcycle.errors import InvalidInputError
from permcycle.perm_core import binomial, has_312, standardize


@dataclass(frozen=True)
class AffinePermutation:
    d: int
    window: tuple[int, ...]

    def __post_init__(self):
        d, w = self.d, self.window
        if d < 1 or len(w) != d:
            raise InvalidInputError(f"window of length {len(w)} for period {d}")
        if len({x % d for x in w}) != d:
            raise InvalidInputError(f"window {w} repeats a residue mod {d}")
        if sum(x - i for i, x in enumerate(w)) != 0:
            raise InvalidInputError(f"window {w} has nonzero displacement sum")

    def __call__(self, i: int) -> int:
        q, r = divmod(i, self.d)
        return self.window[r] + q * self.d

    @property
    def displacement(self) -> int:
        return max(abs(x - i) for i, x in enumerate(self.window))

    def values(self, lo: int, hi: int) -> list[int]:
        """``[pi(lo), ..., pi(hi - 1)]``."""
        return [self(i) for i in range(lo, hi)]

    def to_json(self) -> dict:
        return {"d": self.d, "window": list(self.window)}

    @classmethod
    def from_json(cls, obj: dict) -> AffinePermutation:
        return cls(int(obj["d"]), tuple(int(x) for x in obj["window"]))


def identity(d: int) -> AffinePermutation:
    return AffinePermutation(d, tuple(range(d)))


def apply(p: AffinePermutation, i: int) -> int:
    return p(i)


def is_affine_312_avoiding(p: AffinePermutation, radius_factor: int = 2) -> bool:
    """
    Decide 312-avoidance by scanning ``[0, d + radius_factor * D)``;
    ``radius_factor = 2`` is the certified radius, larger values re-check it.
    """
    span = p.d + radius_factor * p.displacement
    return not has_312(p.values(0, span))


def affine_cut_points(p: AffinePermutation, radius_factor: int = 2) -> frozenset[int]:
    """Residues ``j`` in ``[0, d)`` such that ``pi(i) < pi(k)`` whenever ``i <= j < k``."""
    r = radius_factor * p.displacement
    out = set()
    for j in range(p.d):
        left = max((p(i) for i in range(j - r, j + 1)), default=None)
        right = min(p(k) for k in range(j + 1, j + r + 2))
        if left < right:
            out.add(j)
    return frozenset(out)


def from_enriched_cyclic(ecc: EnrichedCyclicComposition) -> AffinePermutation:
    """
    Let each block's permutation act on the block's integer interval,
    concatenate, and extend periodically.
    """
    if ecc.has_down:
        raise InvalidInputError("the symbol D cannot enrich an affine permutation")
    d = ecc.d
    window = [0] * d
    for (start, length), perm in zip(ecc.base.blocks, ecc.enrichments):
        for t in range(length):
            x = start + t
            y = start + perm[t] - 1
            q, r = divmod(x, d)
            window[r] = y - q * d
    return AffinePermutation(d, tuple(window))


def to_enriched_cyclic(p: AffinePermutation) -> EnrichedCyclicComposition:
    """
    Read off the blocks between consecutive cut points; the inverse of
    :func:`from_enriched_cyclic` on 312-avoiders.
    """
    cuts = sorted(affine_cut_points(p))
    if not cuts:
        raise InvalidInputError("affine permutation has no cut point")
    d = p.d
    starts = [(c + 1) % d for c in cuts]
    base = CyclicComposition.from_starts(d, starts)
    enrich = tuple(standardize(p.values(s, s + a)) for s, a in base.blocks)
    return EnrichedCyclicComposition(base, enrich)


def count_affine_by_cut_points(d: int, k: int) -> int:
    """Closed form for 312-avoiding affine permutations with k cut points mod d."""
    if not 1 <= k <= d:
        raise InvalidInputError(f"need 1 <= k <= d, got d={d}, k={k}")
    return binomial(2 * d - k - 1, d - 1)


def construct_affine_312(d: int, k: int | None = None) -> list[AffinePermutation]:
    """Images of all permutation-enriched cyclic compositions with k parts."""
    return [from_enriched_cyclic(e) for e in iter_enriched(d, k, allow_down=False)]


def _has_312_batch(seg: np.ndarray) -> np.ndarray:
    # rows of `seg` are finite sequences; vectorized form of has_312
    n_rows, length = seg.shape
    prefix_max = np.maximum.accumulate(seg, axis=1)
    found = np.zeros(n_rows, dtype=bool)
    for k in range(2, length):
        vk = seg[:, k:k + 1]
        hit = (seg[:, 1:k] < vk) & (vk < prefix_max[:, 0:k - 1])
        found |= hit.any(axis=1)
    return found


def enumerate_affine_312(d: int, bound: int | None = None) -> list[AffinePermutation]:
    """
    Brute-force oracle: every window with entries in ``[-bound, d - 1 + bound]``
    that is an affine permutation avoiding 312, sorted by window.

    Windows are generated as ``rho(i) + d * m_i`` with ``rho`` a permutation
    of residues and ``sum m_i = 0``, then filtered by a vectorized scan of
    ``[0, d + 2 * Dmax)`` where ``Dmax`` bounds every candidate's displacement.
    """
    if d < 1:
        raise InvalidInputError("d must be positive")
    bound = 2 * d if bound is None else bound
    if bound < d:
        raise InvalidInputError("bound must be at least d")
    lo, hi = -bound, d - 1 + bound
    dmax = hi
    span = d + 2 * dmax
    idx = np.arange(span)
    q_idx, r_idx = np.divmod(idx, d)
    results = []
    shift_cache: dict[tuple, list] = {}
    for rho in itertools.permutations(range(d)):
        ranges = tuple((-((r - lo) // d), (hi - r) // d + 1) for r in rho)
        if ranges not in shift_cache:
            shift_cache[ranges] = [m for m in itertools.product(*(range(*x) for x in ranges))
                                   if sum(m) == 0]
        shifts = shift_cache[ranges]
        if not shifts:
            continue
        windows = np.array(rho, dtype=np.int64) + d * np.array(shifts, dtype=np.int64)
        seg = windows[:, r_idx] + d * q_idx
        keep = ~_has_312_batch(seg)
        results.extend(tuple(int(x) for x in w) for w in windows[keep])
    results.sort()
    return [AffinePermutation(d, w) for w in results]
