"""N-variate Macdonald polynomials P_{lam|N}(x; q, t) as triangular eigenfunctions.

The basis is constructed from the first Macdonald q-difference operator

    E = sum_i prod_{j != i} (t x_i - x_j)/(x_i - x_j) * S_{q,i}

where S_{q,i} substitutes x_i -> q x_i.  E preserves each homogeneous degree
and acts triangularly in dominance order on monomial symmetric polynomials,
with eigenvalue sum_i q^(lam_i) t^(N-i) on P_{lam|N}.  Polynomials are
obtained by an exact kernel solve inside the homogeneous degree block and
certified by their eigenvalue relation, monicity, and dominance
triangularity.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from . import _linalg
from ._interp import expand_point_operator
from .qalgebra import Partition, Scalar, as_partition, frac, partitions_of
from .symfunc import (
    SymPoly,
    add,
    dominates,
    evaluate_in_power_basis,
    m_poly,
    partition_sort_key,
    power_values,
    scale,
    sub,
    to_power_basis,
    zero_poly,
)


class EigenvalueCollisionError(Exception):
    """Two partitions share an operator eigenvalue, so the eigen-solve is ambiguous."""


def macdonald_eigenvalue(lam: Partition, N: int, q: Fraction, t: Fraction) -> Fraction:
    """Eigenvalue of E on P_{lam|N}: sum_{i=1..N} q^(lam_i) t^(N-i)."""
    lam = as_partition(lam)
    if len(lam) > N:
        raise ValueError(f"partition {lam} has more than N = {N} parts")
    padded = lam + (0,) * (N - len(lam))
    return sum((q**part * t ** (N - i) for i, part in enumerate(padded, start=1)), Fraction(0))


def macdonald_operator_apply(f: SymPoly, q: Scalar, t: Scalar) -> SymPoly:
    """Exact image of f under E, re-expanded in the monomial basis."""
    q, t = frac(q), frac(t)
    N, d = f.N, f.degree()
    if N == 0:
        return zero_poly(0)
    pcoeffs = to_power_basis(f)

    def op(point: Tuple[Fraction, ...]) -> Fraction:
        pvals = power_values(point, d)
        total = Fraction(0)
        for i, x in enumerate(point):
            ratio = Fraction(1)
            for j, y in enumerate(point):
                if j != i:
                    ratio *= (t * x - y) / (x - y)
            xpow = x
            shifted = list(pvals)
            for m in range(1, d + 1):
                shifted[m] += (q**m - 1) * xpow
                xpow *= x
            total += ratio * evaluate_in_power_basis(pcoeffs, shifted)
        return total

    return expand_point_operator(op, N, d)


@dataclass
class MacdonaldBasisCache:
    """Per-(N, q, t) store of Macdonald polynomials and their certifying eigenvalues."""

    N: int
    q: Fraction
    t: Fraction
    polys: Dict[Partition, SymPoly] = field(default_factory=dict)
    eigenvalues: Dict[Partition, Fraction] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def poly(self, lam: Partition) -> SymPoly:
        lam = as_partition(lam)
        with self._lock:
            if lam not in self.polys:
                self._compute_degree_block(sum(lam))
            return self.polys[lam]

    def eigenvalue(self, lam: Partition) -> Fraction:
        lam = as_partition(lam)
        if lam not in self.eigenvalues:
            self.eigenvalues[lam] = macdonald_eigenvalue(lam, self.N, self.q, self.t)
        return self.eigenvalues[lam]

    def _compute_degree_block(self, d: int) -> None:
        block = sorted(partitions_of(d, self.N), key=partition_sort_key)
        if not block:
            return
        index = {lam: i for i, lam in enumerate(block)}
        eigs = [self.eigenvalue(lam) for lam in block]
        for i, lam in enumerate(block):
            for j in range(i + 1, len(block)):
                if eigs[i] == eigs[j]:
                    raise EigenvalueCollisionError(
                        f"E-eigenvalue collision at N={self.N}, q={self.q}, t={self.t}: "
                        f"{lam} and {block[j]} both give {eigs[i]}; "
                        "retry with generic rational parameters"
                    )
        # Matrix of E on the homogeneous degree-d block, columns indexed by block.
        columns: List[List[Fraction]] = []
        for lam in block:
            image = macdonald_operator_apply(m_poly(lam, self.N), self.q, self.t)
            col = [Fraction(0)] * len(block)
            for mu, c in image.coeffs.items():
                if sum(mu) != d:
                    raise AssertionError("E must preserve homogeneous degree")
                col[index[mu]] = c
            columns.append(col)
        matrix = [[columns[j][i] for j in range(len(block))] for i in range(len(block))]
        for target_i, lam in enumerate(block):
            if lam in self.polys:
                continue
            shifted = [
                [matrix[r][c] - (eigs[target_i] if r == c else 0) for c in range(len(block))]
                for r in range(len(block))
            ]
            kernel = _linalg.nullspace(shifted)
            if len(kernel) != 1:
                raise EigenvalueCollisionError(
                    f"eigenspace of {lam} at N={self.N} has dimension {len(kernel)}, expected 1"
                )
            vec = kernel[0]
            if vec[target_i] == 0:
                raise AssertionError(f"eigenvector of {lam} has zero leading coefficient")
            norm = 1 / vec[target_i]
            poly = SymPoly(self.N, {mu: norm * v for mu, v in zip(block, vec)})
            self._certify(lam, poly)
            self.polys[lam] = poly

    def _certify(self, lam: Partition, poly: SymPoly) -> None:
        if poly.coeff(lam) != 1:
            raise AssertionError(f"P_{lam} is not monic in m_{lam}")
        for mu in poly.coeffs:
            if mu != lam and not dominates(lam, mu):
                raise AssertionError(f"P_{lam} has support {mu} outside the dominance cone")
            if sum(mu) != sum(lam):
                raise AssertionError(f"P_{lam} is not homogeneous")


_CACHE: Dict[Tuple[int, Fraction, Fraction], MacdonaldBasisCache] = {}
_CACHE_LOCK = threading.Lock()


def basis_cache(N: int, q: Scalar, t: Scalar) -> MacdonaldBasisCache:
    """Atomic get-or-create of the shared per-(N, q, t) basis cache."""
    key = (N, frac(q), frac(t))
    with _CACHE_LOCK:
        if key not in _CACHE:
            _CACHE[key] = MacdonaldBasisCache(*key)
        return _CACHE[key]


def macdonald_poly(lam: Partition, N: int, q: Scalar, t: Scalar) -> SymPoly:
    """The unique E-eigenfunction of the form m_lam + dominance-lower terms."""
    lam = as_partition(lam)
    if len(lam) > N:
        raise ValueError(f"partition {lam} has more than N = {N} parts")
    return basis_cache(N, q, t).poly(lam)


def macdonald_stability_check(lam: Partition, N: int, q: Scalar, t: Scalar) -> bool:
    """True iff P_{lam|N} and P_{lam|N+1} have identical monomial coefficients.

    Requires N >= |lam| so that no partition of that size is truncated away.
    """
    lam = as_partition(lam)
    if N < sum(lam):
        raise ValueError(f"stability needs N >= |lam|, got N = {N}, |lam| = {sum(lam)}")
    p_n = macdonald_poly(lam, N, q, t)
    p_n1 = macdonald_poly(lam, N + 1, q, t)
    return dict(p_n.coeffs) == dict(p_n1.coeffs)


def to_macdonald_basis(f: SymPoly, cache: MacdonaldBasisCache) -> Dict[Partition, Fraction]:
    """Coefficients of f in the Macdonald basis of its level.

    Unitriangular within each homogeneous degree: repeatedly strip the
    dominance-largest remaining monomial of the lowest remaining degree with
    its Macdonald polynomial.  Each strip only introduces strictly
    dominance-lower terms of the same degree, so the loop terminates with
    every partition visited at most once.
    """
    if f.N != cache.N:
        raise ValueError(f"variable counts differ: {f.N} vs {cache.N}")
    work = f
    out: Dict[Partition, Fraction] = {}
    while work.coeffs:
        lam = min(work.coeffs, key=partition_sort_key)
        c = work.coeffs[lam]
        out[lam] = c
        work = sub(work, scale(cache.poly(lam), c))
        if lam in work.coeffs:
            raise AssertionError("triangular strip failed to remove the leading term")
    return out


def from_macdonald_coeffs(
    coeffs: Dict[Partition, Fraction], cache: MacdonaldBasisCache
) -> SymPoly:
    out = zero_poly(cache.N)
    for lam, c in coeffs.items():
        out = add(out, scale(cache.poly(lam), c))
    return out
