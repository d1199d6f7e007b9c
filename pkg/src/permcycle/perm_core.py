"""
Finite permutations in one-line notation, standardization, classical pattern
containment, cut points, and the integer helpers used by the counting
formulas.

Permutations are plain tuples of the values ``1..n``.  Words handed to
:func:`standardize` may hold any mutually comparable exact numbers (ints or
:class:`fractions.Fraction`).

>>> standardize((3, -2, 0, 2))
(4, 1, 2, 3)
>>> sorted(cut_points((3, 1, 2, 4, 6, 7, 5, 8)))
[3, 4, 7]
>>> components((3, 1, 2, 4, 6, 7, 5, 8))
[(3, 1, 2), (1,), (2, 3, 1), (1,)]
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from permcycle.errors import InvalidInputError

__all__ = [
    "Perm", "parse_perm", "perm_str", "is_permutation", "standardize",
    "contains", "avoids", "avoids_all", "has_312", "avoiders", "cut_points",
    "components", "is_indecomposable", "indecomposable_avoiders",
    "catalan", "central_binomial", "binomial", "mobius", "divisors",
]

# a permutation of 1..n in one-line notation
Perm = tuple[int, ...]

P312: Perm = (3, 1, 2)


def parse_perm(obj: str | Sequence[int]) -> Perm:
    """
    Accept ``"312"``, ``"3,1,2"``, ``[3, 1, 2]`` and return ``(3, 1, 2)``.

    Compact digit strings are only unambiguous for n <= 9.
    """
    if isinstance(obj, str):
        text = obj.strip().strip("[]()")
        if "," in text:
            values = tuple(int(x) for x in text.split(",") if x.strip())
        elif text.isdigit():
            values = tuple(int(c) for c in text)
        else:
            raise InvalidInputError(f"cannot parse permutation {obj!r}")
    else:
        values = tuple(int(x) for x in obj)
    if not is_permutation(values):
        raise InvalidInputError(f"{obj!r} is not a permutation of 1..n")
    return values


def perm_str(p: Sequence[int]) -> str:
    if all(0 <= x <= 9 for x in p):
        return "".join(str(x) for x in p)
    return ",".join(str(x) for x in p)


def is_permutation(values: Sequence[int]) -> bool:
    return len(values) >= 1 and sorted(values) == list(range(1, len(values) + 1))


def standardize(word: Sequence) -> Perm:
    """Return the permutation of ``1..len(word)`` order-isomorphic to `word`."""
    n = len(word)
    if n == 0:
        raise InvalidInputError("cannot standardize an empty word")
    order = sorted(range(n), key=word.__getitem__)
    out = [0] * n
    for rank, idx in enumerate(order, 1):
        out[idx] = rank
    for a, b in zip(order, order[1:]):
        if word[a] == word[b]:
            raise InvalidInputError(f"word has repeated entry {word[a]!r}")
    return tuple(out)


def _occurs(word: Sequence, pattern: Sequence[int], fix_last: bool = False) -> bool:
    # depth-first subsequence search, pruning on relative order as we go
    k, n = len(pattern), len(word)
    if k > n:
        return False

    def extend(start: int, chosen: list[int]) -> bool:
        t = len(chosen)
        if t == k:
            return True
        if fix_last and t == k - 1:
            candidates: Iterable[int] = (n - 1,) if start <= n - 1 else ()
        else:
            stop = n - (k - t) + 1
            candidates = range(start, stop)
        for idx in candidates:
            v = word[idx]
            if all((v < word[c]) == (pattern[t] < pattern[s])
                   for s, c in enumerate(chosen)):
                chosen.append(idx)
                if extend(idx + 1, chosen):
                    return True
                chosen.pop()
        return False

    return extend(0, [])


def contains(perm: Sequence, pattern: Sequence[int]) -> bool:
    return _occurs(perm, pattern)


def avoids(perm: Sequence, pattern: Sequence[int]) -> bool:
    """True iff no subsequence of `perm` standardizes to `pattern`."""
    return not _occurs(perm, pattern)


def avoids_all(perm: Sequence, patterns: Iterable[Sequence[int]]) -> bool:
    return all(avoids(perm, p) for p in patterns)


def has_312(values: Sequence) -> bool:
    """
    True iff the finite sequence contains 312: some ``j < k`` with
    ``v[j] < v[k] < max(v[:j])``.
    """
    prefix_max = None
    maxes = []
    for x in values:
        maxes.append(prefix_max)
        prefix_max = x if prefix_max is None else max(prefix_max, x)
    for k in range(2, len(values)):
        vk = values[k]
        for j in range(1, k):
            if values[j] < vk < maxes[j]:
                return True
    return False


def avoiders(n: int, patterns: Iterable[Sequence[int]] = ()) -> Iterator[Perm]:
    """
    Yield the permutations of length `n` avoiding every pattern, in
    lexicographic order.

    Containment is hereditary, so a prefix containing a pattern is pruned
    immediately; only occurrences ending at the newest letter need checking.
    """
    if n < 0:
        raise InvalidInputError("n must be nonnegative")
    patterns = [tuple(p) for p in patterns]
    if n == 0:
        return
    word: list[int] = []
    used = [False] * (n + 1)

    def rec() -> Iterator[Perm]:
        if len(word) == n:
            yield tuple(word)
            return
        for v in range(1, n + 1):
            if used[v]:
                continue
            word.append(v)
            if not any(_occurs(word, p, fix_last=True) for p in patterns):
                used[v] = True
                yield from rec()
                used[v] = False
            word.pop()

    yield from rec()


def cut_points(perm: Sequence[int]) -> frozenset[int]:
    """
    Positions ``j`` in ``1..n-1`` where every earlier entry is smaller than
    every later one.
    """
    out = set()
    running_max = None
    suffix_min = [None] * (len(perm) + 1)
    for i in range(len(perm) - 1, -1, -1):
        nxt = suffix_min[i + 1]
        suffix_min[i] = perm[i] if nxt is None else min(perm[i], nxt)
    for j in range(1, len(perm)):
        x = perm[j - 1]
        running_max = x if running_max is None else max(running_max, x)
        if running_max < suffix_min[j]:
            out.add(j)
    return frozenset(out)


def components(perm: Sequence) -> list[Perm]:
    cuts = sorted(cut_points(perm))
    bounds = [0, *cuts, len(perm)]
    return [standardize(perm[a:b]) for a, b in zip(bounds, bounds[1:])]


def is_indecomposable(perm: Sequence) -> bool:
    return not cut_points(perm)


@lru_cache(maxsize=None)
def _indecomposable_avoiders(n: int, patterns: tuple[Perm, ...]) -> tuple[Perm, ...]:
    return tuple(p for p in avoiders(n, patterns) if is_indecomposable(p))


def indecomposable_avoiders(n: int, patterns: Iterable[Sequence[int]] = (P312,)) -> tuple[Perm, ...]:
    """Indecomposable permutations of length `n` avoiding `patterns`, lex order."""
    return _indecomposable_avoiders(n, tuple(sorted(tuple(p) for p in patterns)))


def _check_nonneg(name: str, x: int) -> None:
    if x < 0:
        raise InvalidInputError(f"{name} must be nonnegative, got {x}")


def binomial(a: int, b: int) -> int:
    """Binomial coefficient; zero when ``b < 0`` or ``b > a``."""
    _check_nonneg("a", a)
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def catalan(n: int) -> int:
    _check_nonneg("n", n)
    return math.comb(2 * n, n) // (n + 1)


def central_binomial(d: int) -> int:
    _check_nonneg("d", d)
    return math.comb(2 * d, d)


def mobius(n: int) -> int:
    """Number-theoretic Moebius function by trial division."""
    if n < 1:
        raise InvalidInputError(f"mobius needs a positive integer, got {n}")
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    if n > 1:
        sign = -sign
    return sign


def divisors(n: int) -> list[int]:
    if n < 1:
        raise InvalidInputError(f"divisors needs a positive integer, got {n}")
    small = [e for e in range(1, math.isqrt(n) + 1) if n % e == 0]
    return sorted(set(small) | {n // e for e in small})
