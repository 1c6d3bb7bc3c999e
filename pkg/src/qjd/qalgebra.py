"""Exact scalars, partitions, and q/(q,t)-Pochhammer building blocks.

Every scalar in the package is a ``fractions.Fraction``.  The complex
parameter pair (c, d) with d = conj(c) is never materialized: all formulas
in scope depend on it only through the elementary symmetric values
s1 = c + d and s2 = c*d, which are real rationals.  ``ConjugatePair``
stores exactly those two numbers and enforces that they come from a
genuinely non-real conjugate pair (s2 > 0 and s1^2 < 4*s2).

Partitions are tuples of weakly decreasing positive integers with no
trailing zeros; the empty partition is ``()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Tuple, Union

Scalar = Fraction
Partition = Tuple[int, ...]

ScalarLike = Union[Fraction, int, str]


def frac(value: ScalarLike) -> Fraction:
    """Coerce an int, string, or Fraction to a Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


def as_partition(parts: Iterable[int]) -> Partition:
    """Canonicalize to a partition tuple; rejects non-monotone input.

    Trailing zeros are trimmed, so ``as_partition([2, 1, 0])`` is ``(2, 1)``.
    """
    seq = tuple(int(p) for p in parts)
    for i in range(len(seq) - 1):
        if seq[i] < seq[i + 1]:
            raise ValueError(f"partition parts must be weakly decreasing, got {seq}")
    if seq and seq[-1] < 0:
        raise ValueError(f"partition parts must be nonnegative, got {seq}")
    while seq and seq[-1] == 0:
        seq = seq[:-1]
    return seq


def boxes(lam: Partition) -> Iterator[Tuple[int, int]]:
    """Yield the cells (i, j) of the Young diagram, 1-based, row by row."""
    for i, part in enumerate(lam, start=1):
        for j in range(1, part + 1):
            yield i, j


def conjugate(lam: Partition) -> Partition:
    """Transpose of the Young diagram: lam'[j] = #{i : lam[i] >= j}."""
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part >= j) for j in range(1, lam[0] + 1))


class PartitionStats(NamedTuple):
    conjugate: Partition
    n_lam: int
    double_union: Partition
    size: int


def partition_stats(lam: Partition) -> PartitionStats:
    """Return (conjugate, n(lam), 2*lam union 2*lam, |lam|).

    n(lam) = sum_i (i-1)*lam_i; the double union is the partition whose
    parts are each doubled part of lam listed twice, e.g. (2,1) gives
    (4, 4, 2, 2).
    """
    lam = as_partition(lam)
    n_lam = sum(i * part for i, part in enumerate(lam))
    double_union = tuple(2 * part for part in lam for _ in (0, 1))
    return PartitionStats(conjugate(lam), n_lam, double_union, sum(lam))


@dataclass(frozen=True)
class ConjugatePair:
    """Symmetric values s1 = c + d, s2 = c*d of a non-real conjugate pair."""

    s1: Fraction
    s2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "s1", frac(self.s1))
        object.__setattr__(self, "s2", frac(self.s2))
        if not self.s2 > 0:
            raise ValueError(f"conjugate pair requires s2 > 0, got s2 = {self.s2}")
        if not self.s1 * self.s1 < 4 * self.s2:
            raise ValueError(
                f"conjugate pair requires s1^2 < 4*s2, got s1 = {self.s1}, s2 = {self.s2}"
            )


@dataclass(frozen=True)
class Params:
    """Parameter tuple (q, t; a, b; c, d) with (c, d) held as a ConjugatePair."""

    q: Fraction
    t: Fraction
    a: Fraction
    b: Fraction
    cd: ConjugatePair

    def __post_init__(self) -> None:
        for name in ("q", "t", "a", "b"):
            object.__setattr__(self, name, frac(getattr(self, name)))
        if not 0 < self.q < 1:
            raise ValueError(f"constraint 0 < q < 1 violated: q = {self.q}")
        if not 0 < self.t < 1:
            raise ValueError(f"constraint 0 < t < 1 violated: t = {self.t}")
        if not (self.b < 0 < self.a):
            raise ValueError(f"constraint b < 0 < a violated: a = {self.a}, b = {self.b}")

    @property
    def s1(self) -> Fraction:
        return self.cd.s1

    @property
    def s2(self) -> Fraction:
        return self.cd.s2


def make_params(
    q: ScalarLike,
    t: ScalarLike,
    a: ScalarLike,
    b: ScalarLike,
    s1: ScalarLike,
    s2: ScalarLike,
) -> Params:
    """Convenience constructor from six scalars."""
    return Params(frac(q), frac(t), frac(a), frac(b), ConjugatePair(frac(s1), frac(s2)))


def shift_level(p: Params, N: int) -> Params:
    """Level-N parameter shift: (s1, s2) -> (s1*t^(1-N), s2*t^(2(1-N))).

    q, t, a, b are unchanged; the shifted pair stays a valid conjugate pair
    because both constraint sides scale by t^(2(1-N)).
    """
    if N < 1:
        raise ValueError(f"level must satisfy N >= 1, got {N}")
    scale = p.t ** (1 - N)
    return Params(p.q, p.t, p.a, p.b, ConjugatePair(p.cd.s1 * scale, p.cd.s2 * scale * scale))


def gen_pochhammer(z: ScalarLike, lam: Partition, q: ScalarLike, t: ScalarLike) -> Fraction:
    """Generalized Pochhammer symbol (z; q, t)_lam.

    Product over boxes (i, j) of lam of (1 - z * t^(1-i) * q^(j-1)).
    """
    z, q, t = frac(z), frac(q), frac(t)
    result = Fraction(1)
    for i, j in boxes(as_partition(lam)):
        result *= 1 - z * t ** (1 - i) * q ** (j - 1)
    return result


def gen_pochhammer_conjpair(
    u: ScalarLike, pair: ConjugatePair, lam: Partition, q: ScalarLike, t: ScalarLike
) -> Fraction:
    """Paired product (u*c; q, t)_lam * (u*d; q, t)_lam for a conjugate pair.

    Each box contributes (1 - u*c*v)(1 - u*d*v) = 1 - s1*u*v + s2*u^2*v^2
    with v = t^(1-i) * q^(j-1), so the value is an exact rational.
    """
    u, q, t = frac(u), frac(q), frac(t)
    result = Fraction(1)
    for i, j in boxes(as_partition(lam)):
        v = t ** (1 - i) * q ** (j - 1)
        uv = u * v
        result *= 1 - pair.s1 * uv + pair.s2 * uv * uv
    return result


def c_plus(x: ScalarLike, lam: Partition, q: ScalarLike, t: ScalarLike) -> Fraction:
    """C+_lam(x; q, t) = prod over boxes (1 - q^(lam_i + j - 1) * t^(2 - lam'_j - i) * x)."""
    x, q, t = frac(x), frac(q), frac(t)
    lam = as_partition(lam)
    lam_conj = conjugate(lam)
    result = Fraction(1)
    for i, j in boxes(lam):
        result *= 1 - q ** (lam[i - 1] + j - 1) * t ** (2 - lam_conj[j - 1] - i) * x
    return result


def c_minus(x: ScalarLike, lam: Partition, q: ScalarLike, t: ScalarLike) -> Fraction:
    """C-_lam(x; q, t) = prod over boxes (1 - q^(lam_i - j) * t^(lam'_j - i) * x)."""
    x, q, t = frac(x), frac(q), frac(t)
    lam = as_partition(lam)
    lam_conj = conjugate(lam)
    result = Fraction(1)
    for i, j in boxes(lam):
        result *= 1 - q ** (lam[i - 1] - j) * t ** (lam_conj[j - 1] - i) * x
    return result


def partitions_of(size: int, max_length: int) -> list[Partition]:
    """All partitions of ``size`` with at most ``max_length`` parts."""
    if size == 0:
        return [()]
    if max_length == 0:
        return []
    out: list[Partition] = []

    def build(remaining: int, largest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if len(prefix) == max_length:
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            build(remaining - part, part, prefix)
            prefix.pop()

    build(size, size, [])
    return out


def partitions_up_to(size: int, max_length: int) -> list[Partition]:
    """All partitions of size <= ``size`` with at most ``max_length`` parts."""
    out: list[Partition] = []
    for d in range(size + 1):
        out.extend(partitions_of(d, max_length))
    return out
