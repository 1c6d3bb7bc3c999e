"""Symmetric polynomials in N variables and finite symmetric-function expansions.

The canonical internal representation is the monomial basis: a SymPoly is a
finite map from partitions (with at most N parts) to rational coefficients,
where the partition lam stands for the monomial symmetric polynomial
m_lam(x_1, ..., x_N).  A SymFuncExpansion is the level-free analogue, a
finite coefficient map tagged with the basis it expands in (monomial,
macdonald, or bigqjacobi).

This module also owns the partition orders shared by the triangular solvers
(dominance, containment, and a total order extending dominance degree by
degree) and the power-sum conversion used for fast exact evaluation and for
certified truncation-tail bounds.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from . import _linalg
from .qalgebra import Partition, Scalar, as_partition, frac, partitions_of
from .statespace import Coordinates

BASIS_TAGS = ("monomial", "macdonald", "bigqjacobi")

CoordsLike = Union[Coordinates, Sequence[Fraction]]


@dataclass(frozen=True, eq=True)
class SymPoly:
    """Symmetric polynomial in N variables, monomial basis, exact coefficients."""

    N: int
    coeffs: Mapping[Partition, Fraction]

    def __post_init__(self) -> None:
        if self.N < 0:
            raise ValueError(f"variable count must be >= 0, got {self.N}")
        clean: Dict[Partition, Fraction] = {}
        for key, value in self.coeffs.items():
            lam = as_partition(key)
            if len(lam) > self.N:
                raise ValueError(f"partition {lam} has more than N = {self.N} parts")
            value = frac(value)
            if value != 0:
                clean[lam] = value
        object.__setattr__(self, "coeffs", clean)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def degree(self) -> int:
        """Total degree (0 for the zero polynomial)."""
        return max((sum(lam) for lam in self.coeffs), default=0)

    def coeff(self, lam: Iterable[int]) -> Fraction:
        return self.coeffs.get(as_partition(lam), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class SymFuncExpansion:
    """Finite expansion of a symmetric function in a tagged basis.

    Values are exact rationals, except in the bigqjacobi basis where
    semigroup output carries float coefficients (the only float-valued
    coefficients in the package).
    """

    basis: str
    coeffs: Mapping[Partition, Union[Fraction, float]]

    def __post_init__(self) -> None:
        if self.basis not in BASIS_TAGS:
            raise ValueError(f"unknown basis tag {self.basis!r}, expected one of {BASIS_TAGS}")
        clean: Dict[Partition, Union[Fraction, float]] = {}
        for key, value in self.coeffs.items():
            lam = as_partition(key)
            if not isinstance(value, float):
                value = frac(value)
            if value != 0:
                clean[lam] = value
        object.__setattr__(self, "coeffs", clean)

    def degree(self) -> int:
        return max((sum(lam) for lam in self.coeffs), default=0)

    def coeff(self, lam: Iterable[int]) -> Union[Fraction, float]:
        return self.coeffs.get(as_partition(lam), Fraction(0))


def sympoly(N: int, coeffs: Mapping[Partition, Scalar]) -> SymPoly:
    return SymPoly(N, dict(coeffs))


def zero_poly(N: int) -> SymPoly:
    return SymPoly(N, {})


def one_poly(N: int) -> SymPoly:
    return SymPoly(N, {(): Fraction(1)})


def m_poly(lam: Iterable[int], N: int) -> SymPoly:
    """Monomial symmetric polynomial m_lam in N variables."""
    return SymPoly(N, {as_partition(lam): Fraction(1)})


def e_poly(n: int, N: int) -> SymPoly:
    """Elementary symmetric polynomial e_n = m_(1^n); zero when n > N."""
    if n > N:
        return zero_poly(N)
    return m_poly((1,) * n, N)


def p_poly(m: int, N: int) -> SymPoly:
    """Power sum p_m = m_(m) (p_0 is the constant N)."""
    if m == 0:
        return SymPoly(N, {(): Fraction(N)})
    return m_poly((m,), N)


def add(f: SymPoly, g: SymPoly) -> SymPoly:
    if f.N != g.N:
        raise ValueError(f"variable counts differ: {f.N} vs {g.N}")
    out = dict(f.coeffs)
    for lam, c in g.coeffs.items():
        out[lam] = out.get(lam, Fraction(0)) + c
    return SymPoly(f.N, out)


def scale(f: SymPoly, c: Scalar) -> SymPoly:
    c = frac(c)
    return SymPoly(f.N, {lam: c * v for lam, v in f.coeffs.items()})


def sub(f: SymPoly, g: SymPoly) -> SymPoly:
    return add(f, scale(g, Fraction(-1)))


# Distinct exponent arrangements of a padded partition, cached per (lam, N).
_ORBIT_CACHE: Dict[Tuple[Partition, int], Tuple[Tuple[int, ...], ...]] = {}


def _distinct_permutations(values: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """All distinct orderings of a multiset, without generating duplicates."""
    counts = Counter(values)
    keys = sorted(counts)
    n = len(values)
    slot: List[int] = [0] * n
    out: List[Tuple[int, ...]] = []

    def fill(pos: int) -> None:
        if pos == n:
            out.append(tuple(slot))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                slot[pos] = k
                fill(pos + 1)
                counts[k] += 1

    fill(0)
    return out


def _orbit(lam: Partition, N: int) -> Tuple[Tuple[int, ...], ...]:
    key = (lam, N)
    cached = _ORBIT_CACHE.get(key)
    if cached is None:
        padded = tuple(lam) + (0,) * (N - len(lam))
        cached = tuple(_distinct_permutations(padded))
        _ORBIT_CACHE[key] = cached
    return cached


def multiply(f: SymPoly, g: SymPoly) -> SymPoly:
    """Exact product in the monomial basis."""
    if f.N != g.N:
        raise ValueError(f"variable counts differ: {f.N} vs {g.N}")
    N = f.N
    if N == 0:
        c = f.coeffs.get((), Fraction(0)) * g.coeffs.get((), Fraction(0))
        return SymPoly(0, {(): c} if c else {})
    f_terms: Dict[Tuple[int, ...], Fraction] = {}
    for lam, c in f.coeffs.items():
        for exps in _orbit(lam, N):
            f_terms[exps] = f_terms.get(exps, Fraction(0)) + c
    g_terms: Dict[Tuple[int, ...], Fraction] = {}
    for lam, c in g.coeffs.items():
        for exps in _orbit(lam, N):
            g_terms[exps] = g_terms.get(exps, Fraction(0)) + c
    prod: Dict[Tuple[int, ...], Fraction] = {}
    for e1, c1 in f_terms.items():
        for e2, c2 in g_terms.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            prod[key] = prod.get(key, Fraction(0)) + c1 * c2
    # The product of symmetric polynomials is symmetric, so reading the
    # coefficients at sorted-decreasing exponent representatives suffices.
    out: Dict[Partition, Fraction] = {}
    for exps, c in prod.items():
        if c != 0 and all(exps[i] >= exps[i + 1] for i in range(N - 1)):
            while exps and exps[-1] == 0:
                exps = exps[:-1]
            out[exps] = c
    return SymPoly(N, out)


def _coerce_vector(f_vars: int, c: CoordsLike) -> Tuple[Fraction, ...]:
    if isinstance(c, Coordinates):
        return c.as_vector(f_vars)
    vec = tuple(frac(v) for v in c)
    if len(vec) > f_vars:
        raise ValueError(f"{len(vec)} coordinates do not fit in {f_vars} variables")
    return vec + (Fraction(0),) * (f_vars - len(vec))


def evaluate(f: SymPoly, c: CoordsLike) -> Fraction:
    """Exact value of f at the given coordinates, padded with zeros."""
    vec = _coerce_vector(f.N, c)
    total = Fraction(0)
    for lam, coeff in f.coeffs.items():
        acc = Fraction(0)
        for exps in _orbit(lam, f.N):
            term = Fraction(1)
            for x, e in zip(vec, exps):
                if e:
                    if x == 0:
                        term = Fraction(0)
                        break
                    term *= x**e
            acc += term
        total += coeff * acc
    return total


def project(f: SymFuncExpansion, N: int) -> SymPoly:
    """Canonical projection to N variables: drop terms with more than N parts."""
    if f.basis != "monomial":
        raise ValueError(f"project needs the monomial basis, got {f.basis!r}")
    return SymPoly(N, {lam: c for lam, c in f.coeffs.items() if len(lam) <= N})


def lift(f: SymPoly, d: int) -> SymFuncExpansion:
    """The unique symmetric function of degree <= d projecting to f.

    Requires deg f <= d <= N; in the monomial basis the coefficient map is
    unchanged (monomial stability).
    """
    if d > f.N:
        raise ValueError(f"lift needs d <= N, got d = {d}, N = {f.N}")
    if f.degree() > d:
        raise ValueError(f"lift needs deg f <= d, got deg = {f.degree()}, d = {d}")
    return SymFuncExpansion("monomial", dict(f.coeffs))


# ---------------------------------------------------------------------------
# Partition orders (shared by the triangular solvers).


def dominates(lam: Partition, mu: Partition) -> bool:
    """Dominance order on equal-size partitions: lam >= mu."""
    lam, mu = as_partition(lam), as_partition(mu)
    if sum(lam) != sum(mu):
        return False
    acc_l = acc_m = 0
    for i in range(max(len(lam), len(mu))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_l < acc_m:
            return False
    return True


def contains(nu: Partition, lam: Partition) -> bool:
    """Containment of Young diagrams: nu sits inside lam."""
    nu, lam = as_partition(nu), as_partition(lam)
    if len(nu) > len(lam):
        return False
    return all(n <= l for n, l in zip(nu, lam))


def partition_sort_key(lam: Partition) -> Tuple[int, Tuple[int, ...]]:
    """Total order: by size, then reverse-lexicographic within each size.

    Within a size class this refines dominance downward, so sorting with
    this key lists each degree block from dominance-largest to smallest.
    """
    lam = as_partition(lam)
    return (sum(lam), tuple(-p for p in lam))


def cone_partitions(max_size: int, max_length: int) -> List[Partition]:
    """Partitions of size <= max_size with <= max_length parts, in sort order."""
    out: List[Partition] = []
    for d in range(max_size + 1):
        out.extend(sorted(partitions_of(d, max_length), key=partition_sort_key))
    return out


# ---------------------------------------------------------------------------
# Power-sum conversion: exact degree-stable tables, fast evaluation, bounds.

_M_TO_P_CACHE: Dict[int, Tuple[List[Partition], _linalg.Matrix]] = {}


def _m_to_p_table(d: int) -> Tuple[List[Partition], _linalg.Matrix]:
    """Partitions of d and the matrix converting m-coefficients to p-coefficients.

    Computed at level N = d, where the coefficients are stable for all
    higher levels.
    """
    if d not in _M_TO_P_CACHE:
        parts = sorted(partitions_of(d, d), key=partition_sort_key)
        index = {lam: i for i, lam in enumerate(parts)}
        rows: _linalg.Matrix = []
        for nu in parts:
            prod = one_poly(d)
            for part in nu:
                prod = multiply(prod, p_poly(part, d))
            row = [Fraction(0)] * len(parts)
            for mu, c in prod.coeffs.items():
                row[index[mu]] = c
            rows.append(row)
        # rows[i][j] = coefficient of m_(parts[j]) in p_(parts[i]); converting a
        # monomial coefficient vector to power-sum coordinates inverts the
        # transpose of this matrix.
        transpose = [[rows[i][j] for i in range(len(parts))] for j in range(len(parts))]
        _M_TO_P_CACHE[d] = (parts, _linalg.invert(transpose))
    return _M_TO_P_CACHE[d]


def to_power_basis(f: SymPoly) -> Dict[Partition, Fraction]:
    """Power-sum coefficients of f, valid as an identity of functions on N variables."""
    by_degree: Dict[int, Dict[Partition, Fraction]] = {}
    for lam, c in f.coeffs.items():
        by_degree.setdefault(sum(lam), {})[lam] = c
    out: Dict[Partition, Fraction] = {}
    for d, slice_coeffs in by_degree.items():
        if d == 0:
            out[()] = out.get((), Fraction(0)) + slice_coeffs[()]
            continue
        parts, table = _m_to_p_table(d)
        vec = [slice_coeffs.get(lam, Fraction(0)) for lam in parts]
        pc = _linalg.mat_vec(table, vec)
        for lam, c in zip(parts, pc):
            if c != 0:
                out[lam] = c
    return out


def power_values(vec: Sequence[Fraction], max_degree: int) -> List[Fraction]:
    """[p_0, p_1, ..., p_max_degree] evaluated at the coordinate vector."""
    out = [Fraction(len(vec))]
    current = list(vec)
    for _ in range(max_degree):
        out.append(sum(current, Fraction(0)))
        current = [c * x for c, x in zip(current, vec)]
    return out


def evaluate_in_power_basis(
    pcoeffs: Mapping[Partition, Fraction], pvals: Sequence[Fraction]
) -> Fraction:
    total = Fraction(0)
    for nu, c in pcoeffs.items():
        term = c
        for part in nu:
            term *= pvals[part]
        total += term
    return total


def power_sum_tail_bound(m: int, x_cut: Fraction, t: Fraction) -> Fraction:
    """Geometric bound |tail of p_m| <= |x_cut|^m / (1 - t^m).

    Valid when the omitted coordinates have magnitudes <= |x_cut| decaying
    with ratio <= t on each side; the factor for two sides is absorbed by
    applying the bound per side and adding.
    """
    return abs(x_cut) ** m / (1 - t**m)


def _product_perturbation_bound(
    pcoeffs: Mapping[Partition, Fraction],
    p_bound: Sequence[Fraction],
    p_delta: Sequence[Fraction],
) -> Fraction:
    """Bound |sum_nu c_nu (prod p - prod p')| given |p_m| <= p_bound[m] and
    |p_m - p'_m| <= p_delta[m]."""
    total = Fraction(0)
    for nu, c in pcoeffs.items():
        for k in range(len(nu)):
            term = abs(c) * p_delta[nu[k]]
            for j, part in enumerate(nu):
                if j != k:
                    term *= p_bound[part]
            total += term
    return total


def clip_variation_bound(
    f: SymPoly, x_max: Fraction, x_cut: Fraction, n_clip: int, n_total: int
) -> Fraction:
    """Exact bound on |f(X) - f(X')| where X' zeroes out up to n_clip
    coordinates of magnitude <= x_cut, all coordinates having magnitude <= x_max."""
    d = f.degree()
    pcoeffs = to_power_basis(f)
    p_bound = [Fraction(n_total) * x_max**m for m in range(d + 1)]
    p_delta = [Fraction(n_clip) * x_cut**m for m in range(d + 1)]
    return _product_perturbation_bound(pcoeffs, p_bound, p_delta)


def sup_abs_bound(f: SymPoly, x_max: Fraction) -> Fraction:
    """Bound on sup |f| over coordinate vectors with all |x_i| <= x_max.

    Uses |p_m| <= N x_max^m termwise in the power-sum expansion.
    """
    pcoeffs = to_power_basis(f)
    total = Fraction(0)
    for nu, c in pcoeffs.items():
        term = abs(c)
        for part in nu:
            term *= f.N * x_max**part
        total += term
    return total


def evaluate_truncated(
    F: SymFuncExpansion,
    stored: Sequence[Fraction],
    t: Fraction,
    x_max: Fraction,
    x_cut: Fraction,
) -> Tuple[Fraction, Fraction]:
    """Value of a monomial-basis symmetric function on the stored coordinates,
    plus a certified bound on the contribution of the omitted tail.

    The omitted coordinates are assumed bounded by x_cut in magnitude and
    geometrically decaying with ratio <= t on each of the two sign sides;
    every coordinate is bounded by x_max.
    """
    if F.basis != "monomial":
        raise ValueError(f"evaluate_truncated needs the monomial basis, got {F.basis!r}")
    d = F.degree()
    f = project(F, max(d, len(stored), 1))
    value = evaluate(f, stored)
    pcoeffs = to_power_basis(f)
    p_bound = [2 * x_max**m / (1 - t**m) if m else Fraction(1) for m in range(d + 1)]
    p_delta = [2 * power_sum_tail_bound(m, x_cut, t) if m else Fraction(0) for m in range(d + 1)]
    return value, _product_perturbation_bound(pcoeffs, p_bound, p_delta)


# ---------------------------------------------------------------------------
# JSON serialization.


def sympoly_to_json(f: SymPoly) -> dict:
    terms = [
        {"partition": list(lam), "num": c.numerator, "den": c.denominator}
        for lam, c in sorted(f.coeffs.items(), key=lambda kv: partition_sort_key(kv[0]))
    ]
    return {"N": f.N, "basis": "monomial", "terms": terms}


def sympoly_from_json(data: Mapping) -> SymPoly:
    coeffs = {
        tuple(term["partition"]): Fraction(term["num"], term["den"]) for term in data["terms"]
    }
    return SymPoly(int(data["N"]), coeffs)


def symfunc_to_json(F: SymFuncExpansion) -> dict:
    terms = []
    for lam, c in sorted(F.coeffs.items(), key=lambda kv: partition_sort_key(kv[0])):
        if isinstance(c, float):
            raise ValueError("float-valued expansions are not serialized in num/den form")
        terms.append({"partition": list(lam), "num": c.numerator, "den": c.denominator})
    return {"N": None, "basis": F.basis, "terms": terms}


def symfunc_from_json(data: Mapping) -> SymFuncExpansion:
    coeffs = {
        tuple(term["partition"]): Fraction(term["num"], term["den"]) for term in data["terms"]
    }
    return SymFuncExpansion(data["basis"], coeffs)
