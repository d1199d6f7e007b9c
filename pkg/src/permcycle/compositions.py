"""
Compositions, cyclic compositions and their enriched versions, together with
the weighted sums over them and truncated power series used to check the
generating-function identities.

A cyclic composition of ``d`` into ``k`` parts cuts ``k`` of the ``d`` edges
of the cycle ``Z_d``; the surviving paths are the blocks.  It is determined
by the set of block starts, so there are ``binomial(d, k)`` of them, and the
``k = 1`` case comes in ``d`` rotations.

All arithmetic is exact (ints and :class:`~fractions.Fraction`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

from permcycle.errors import InvalidInputError
from permcycle.perm_core import (
    P312, Perm, avoids, catalan, indecomposable_avoiders, is_indecomposable,
    is_permutation,
)

DOWN = "D"

# either the symbol D or an indecomposable 312-avoiding permutation
Enrichment = Union[str, Perm]

Composition = tuple[int, ...]


@dataclass(frozen=True)
class CyclicComposition:
    """
    Blocks are ``(start, length)`` pairs with ``0 <= start < d``, listed by
    increasing start.  Block ``i`` covers the residues
    ``start, start + 1, ..., start + length - 1`` mod ``d``.
    """
    d: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        d = self.d
        if d < 1:
            raise InvalidInputError("d must be positive")
        if not self.blocks:
            raise InvalidInputError("a cyclic composition needs at least one block")
        starts = [s for s, _ in self.blocks]
        if starts != sorted(starts) or any(not 0 <= s < d for s in starts):
            raise InvalidInputError("block starts must be increasing residues")
        for i, (s, a) in enumerate(self.blocks):
            nxt = starts[(i + 1) % len(starts)]
            expected = (nxt - s) % d or d
            if a != expected:
                raise InvalidInputError(
                    f"block starting at {s} has length {a}, expected {expected}")

    @classmethod
    def from_starts(cls, d: int, starts) -> CyclicComposition:
        starts = sorted({s % d for s in starts})
        k = len(starts)
        blocks = tuple(
            (s, (starts[(i + 1) % k] - s) % d or d) for i, s in enumerate(starts))
        return cls(d, blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.blocks)

    def residues(self, i: int) -> list[int]:
        s, a = self.blocks[i]
        return [(s + t) % self.d for t in range(a)]

    def to_json(self) -> dict:
        return {"d": self.d, "blocks": [{"start": s, "len": a} for s, a in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict) -> CyclicComposition:
        d = int(obj["d"])
        pairs = sorted(((int(b["start"]) % d, int(b["len"])) for b in obj["blocks"]))
        return cls(d, tuple(pairs))


def check_enrichment(length: int, e: Enrichment) -> None:
    if e == DOWN:
        if length != 1:
            raise InvalidInputError("symbol D only enriches blocks of length 1")
        return
    if isinstance(e, str) or len(e) != length or not is_permutation(e):
        raise InvalidInputError(f"bad enrichment {e!r} for a block of length {length}")
    if not (is_indecomposable(e) and avoids(e, P312)):
        raise InvalidInputError(f"{e!r} is not an indecomposable 312-avoider")


@dataclass(frozen=True)
class EnrichedCyclicComposition:
    base: CyclicComposition
    enrichments: tuple[Enrichment, ...]

    def __post_init__(self):
        if len(self.enrichments) != self.base.k:
            raise InvalidInputError("need exactly one enrichment per block")
        for (_, a), e in zip(self.base.blocks, self.enrichments):
            check_enrichment(a, e)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def has_down(self) -> bool:
        return DOWN in self.enrichments

    def down_residues(self) -> frozenset[int]:
        return frozenset(s for (s, _), e in zip(self.base.blocks, self.enrichments) if e == DOWN)

    @classmethod
    def from_blocks(cls, d: int, blocks) -> EnrichedCyclicComposition:
        """Build from ``(start, enrichment)`` pairs; starts may be any integers."""
        items = sorted(((s % d, e if e == DOWN else tuple(e)) for s, e in blocks),
                       key=lambda item: item[0])
        lengths = [1 if e == DOWN else len(e) for _, e in items]
        base = CyclicComposition.from_starts(d, [s for s, _ in items])
        if len(base.blocks) != len(items) or list(base.lengths) != lengths:
            raise InvalidInputError("blocks do not partition Z_d")
        return cls(base, tuple(e for _, e in items))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "blocks": [
                {"start": s, "len": a, "enrich": e if e == DOWN else list(e)}
                for (s, a), e in zip(self.base.blocks, self.enrichments)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> EnrichedCyclicComposition:
        d = int(obj["d"])
        blocks = []
        for b in obj["blocks"]:
            e = b["enrich"]
            e = DOWN if e == DOWN else tuple(int(x) for x in e)
            if int(b["len"]) != (1 if e == DOWN else len(e)):
                raise InvalidInputError(f"block {b!r}: len disagrees with enrichment")
            blocks.append((int(b["start"]), e))
        return cls.from_blocks(d, blocks)


def _check_dk(d: int, k: int) -> None:
    if d < 1:
        raise InvalidInputError(f"d must be positive, got {d}")
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")


def enumerate_compositions(d: int, k: int) -> list[Composition]:
    """All compositions of `d` into `k` parts, lexicographic."""
    _check_dk(d, k)
    out = []
    for cuts in itertools.combinations(range(1, d), k - 1):
        bounds = (0, *cuts, d)
        out.append(tuple(b - a for a, b in zip(bounds, bounds[1:])))
    out.sort()
    return out


def enumerate_cyclic_compositions(d: int, k: int) -> list[CyclicComposition]:
    """All cyclic compositions of `d` into `k` parts, ordered by sorted starts."""
    _check_dk(d, k)
    return [CyclicComposition.from_starts(d, starts)
            for starts in itertools.combinations(range(d), k)]


@dataclass(frozen=True)
class WeightSequence:
    """Weights ``alpha_1..alpha_order`` stored as exact rationals."""
    alpha: tuple[Fraction, ...]

    @classmethod
    def from_function(cls, fn: Callable[[int], object], order: int) -> WeightSequence:
        return cls(tuple(Fraction(fn(i)) for i in range(1, order + 1)))

    @property
    def order(self) -> int:
        return len(self.alpha)

    def __call__(self, i: int) -> Fraction:
        if not 1 <= i <= self.order:
            raise InvalidInputError(f"weight index {i} outside 1..{self.order}")
        return self.alpha[i - 1]

    def series(self) -> list[Fraction]:
        """Coefficients of f(t) = sum alpha_i t^i, constant term included."""
        return [Fraction(0), *self.alpha]


UNIT = WeightSequence.from_function(lambda i: 1, 64)


def catalan_weights(order: int) -> WeightSequence:
    """alpha_i = C_{i-1}: indecomposable 312-avoiders of length i."""
    return WeightSequence.from_function(lambda i: catalan(i - 1), order)


def enriched_weights(order: int) -> WeightSequence:
    """alpha_i = C_{i-1} + [i == 1]: the enrichments allowing symbol D."""
    return WeightSequence.from_function(lambda i: catalan(i - 1) + (i == 1), order)


def _product(w: WeightSequence, parts) -> Fraction:
    out = Fraction(1)
    for a in parts:
        out *= w(a)
    return out


def beta(d: int, k: int, w: WeightSequence) -> Fraction:
    """Sum over compositions of d into k parts of the product of part weights."""
    if d < 0 or k < 0:
        raise InvalidInputError("d and k must be nonnegative")
    if d > w.order:
        raise InvalidInputError(f"d={d} beyond weight truncation {w.order}")
    if d == 0:
        return Fraction(int(k == 0))
    if k == 0 or k > d:
        return Fraction(0)
    return sum((_product(w, c) for c in enumerate_compositions(d, k)), Fraction(0))


def gamma(d: int, k: int, w: WeightSequence) -> Fraction:
    """Sum over cyclic compositions of d into k parts, by direct enumeration."""
    _check_dk(d, k)
    if d > w.order:
        raise InvalidInputError(f"d={d} beyond weight truncation {w.order}")
    if k > d:
        return Fraction(0)
    return sum((_product(w, p.lengths) for p in enumerate_cyclic_compositions(d, k)),
               Fraction(0))


# truncated power series: coefficient lists indexed by degree

def series_mul(a: Sequence, b: Sequence, order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x:
            for j, y in enumerate(b[:order + 1 - i]):
                out[i + j] += x * y
    return out


def series_pow(a: Sequence, k: int, order: int) -> list[Fraction]:
    out = [Fraction(1)] + [Fraction(0)] * order
    for _ in range(k):
        out = series_mul(out, a, order)
    return out


def series_inverse(a: Sequence, order: int) -> list[Fraction]:
    """1/a(t) up to `order`; requires a nonzero constant term."""
    if not a or a[0] == 0:
        raise InvalidInputError("series has no inverse: zero constant term")
    a = [Fraction(x) for x in a] + [Fraction(0)] * (order + 1 - len(a))
    out = [1 / a[0]]
    for m in range(1, order + 1):
        s = sum((a[i] * out[m - i] for i in range(1, m + 1)), Fraction(0))
        out.append(-s / a[0])
    return out


def t_derivative(a: Sequence) -> list[Fraction]:
    """t * a'(t), termwise."""
    return [Fraction(i) * x for i, x in enumerate(a)]


def _check_order(w: WeightSequence, order: int) -> None:
    if order < 1:
        raise InvalidInputError("order must be positive")
    if order > w.order:
        raise InvalidInputError(f"order {order} beyond weight truncation {w.order}")


def series_beta(k: int, w: WeightSequence, order: int) -> list[Fraction]:
    """Coefficients of f(t)^k through t^order."""
    _check_order(w, order)
    return series_pow(w.series()[:order + 1], k, order)


def series_gamma(k: int, w: WeightSequence, order: int) -> list[Fraction]:
    """Coefficients of t f'(t) f(t)^(k-1) through t^order."""
    _check_order(w, order)
    if k < 1:
        raise InvalidInputError("k must be positive")
    f = w.series()[:order + 1]
    return series_mul(t_derivative(f), series_pow(f, k - 1, order), order)


def series_gamma_total(w: WeightSequence, order: int) -> list[Fraction]:
    """Coefficients of t f'(t) / (1 - f(t)) through t^order."""
    _check_order(w, order)
    f = w.series()[:order + 1]
    one_minus_f = [1 - f[0], *(-x for x in f[1:])]
    return series_mul(t_derivative(f), series_inverse(one_minus_f, order), order)


def catalan_series(order: int) -> list[int]:
    """C_0..C_order from C(t) = 1 + t C(t)^2, without the closed form."""
    c = [1]
    for m in range(order):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def central_binomial_series(order: int) -> list[int]:
    """binom(2d, d) for d = 0..order, from CB(t)^2 = 1 / (1 - 4t)."""
    cb = [1]
    for m in range(1, order + 1):
        rest = sum(cb[i] * cb[m - i] for i in range(1, m))
        cb.append((4 ** m - rest) // 2)
    return cb


def catalan_cyclic_sum(d: int, k: int) -> int:
    """Sum over cyclic compositions of d into k parts of prod C_{a_i - 1}."""
    total = 0
    for p in enumerate_cyclic_compositions(d, k):
        term = 1
        for a in p.lengths:
            term *= catalan(a - 1)
        total += term
    return total


def enrichment_options(length: int, allow_down: bool = True) -> list[Enrichment]:
    opts: list[Enrichment] = list(indecomposable_avoiders(length))
    if allow_down and length == 1:
        opts.append(DOWN)
    return opts


def iter_enriched(d: int, k: int | None = None, allow_down: bool = True
                  ) -> Iterator[EnrichedCyclicComposition]:
    """
    Enriched cyclic compositions of `d`, by number of parts, then by base
    composition, then by enrichment tuple.
    """
    if d < 1:
        raise InvalidInputError("d must be positive")
    ks = range(1, d + 1) if k is None else [k]
    for kk in ks:
        for base in enumerate_cyclic_compositions(d, kk):
            choices = [enrichment_options(a, allow_down) for a in base.lengths]
            for combo in itertools.product(*choices):
                yield EnrichedCyclicComposition(base, combo)


def enumerate_enriched(d: int, k: int | None = None, allow_down: bool = True
                       ) -> list[EnrichedCyclicComposition]:
    """The set E_d (or its permutation-only part when ``allow_down=False``)."""
    return list(iter_enriched(d, k, allow_down))
