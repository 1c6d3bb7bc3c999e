"""Multivariate big q-Jacobi polynomials as eigenfunctions of q-difference operators.

The univariate operator D acts on polynomials in one variable by a closed-form
monomial action; its N-variate extension D_N combines one-variable q-shifts
S_{q,i} with interaction ratios and the coefficient functions sigma_N^+/-.
Both operators preserve symmetric polynomials and never raise degree, so D_N
is recovered exactly from point evaluations by interpolation.

The polynomials phi_{lam|N} are the unique eigenfunctions of D_N of the form
P_{lam|N} + (lower-degree Macdonald terms); the eigenvalues mu_{lam|N} are
distinct for generic rational parameters, and every solve is certified by an
exact residual check.  Renormalized expansion coefficients pi(lam, nu) are
stable across the level shift N -> N+1, which defines the symmetric functions
Phi_lam and their closed-form squared norms h_lam.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, Tuple

from .macdonald import MacdonaldBasisCache, basis_cache, from_macdonald_coeffs, to_macdonald_basis
from .qalgebra import (
    Params,
    Partition,
    Scalar,
    as_partition,
    c_minus,
    c_plus,
    frac,
    gen_pochhammer,
    gen_pochhammer_conjpair,
    partition_stats,
    partitions_of,
    shift_level,
)
from .symfunc import (
    SymFuncExpansion,
    SymPoly,
    cone_partitions,
    contains,
    evaluate_in_power_basis,
    power_values,
    scale,
    to_power_basis,
)
from ._interp import expand_point_operator


class EigenvalueCollisionError(Exception):
    """Two partitions in the solve cone share an eigenvalue of D_N."""


class StabilityError(Exception):
    """Expansion coefficients failed to agree across consecutive levels."""


def sigma(params: Params, N: int, x: Scalar, sign: int) -> Fraction:
    """Coefficient function sigma_N^+(x) (sign=+1) or sigma_N^-(x) (sign=-1).

    sigma_N^+(x) = -(q t^(N-1)/ab) (s2 - s1/x + 1/x^2)
    sigma_N^-(x) = -(q^2 t^(N-1)/ab) (ab/q^2 - (a+b)/(qx) + 1/x^2)
    """
    x = frac(x)
    if x == 0:
        raise ValueError("sigma is undefined at x = 0")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    q, t, a, b = params.q, params.t, params.a, params.b
    ab = a * b
    if sign == 1:
        return -(q * t ** (N - 1) / ab) * (params.s2 - params.s1 / x + 1 / x**2)
    return -(q**2 * t ** (N - 1) / ab) * (ab / q**2 - (a + b) / (q * x) + 1 / x**2)


def apply_D1(f: SymPoly, params: Params) -> SymPoly:
    """Exact image of a one-variable polynomial under D, monomial by monomial.

    D x^n = -(q^-n - 1)(1 - s2 q^(n+1)/ab) x^n
            + (q/ab)(s1 (q^n - 1) + (a+b)(q^-n - 1)) x^(n-1)
            - (q/ab)((q^n - 1) + q (q^-n - 1)) x^(n-2)

    The x^(n-2) coefficient vanishes identically at n = 1, so no negative
    powers appear; constants map to zero.
    """
    if f.N != 1:
        raise ValueError(f"apply_D1 needs a polynomial in one variable, got N = {f.N}")
    q, a, b = params.q, params.a, params.b
    s1, s2 = params.s1, params.s2
    ab = a * b
    out: Dict[Partition, Fraction] = {}

    def accumulate(n: int, value: Fraction) -> None:
        lam = (n,) if n else ()
        out[lam] = out.get(lam, Fraction(0)) + value

    for lam, c in f.coeffs.items():
        if not lam:
            continue
        n = lam[0]
        qn = q**n
        qmn = q**-n
        accumulate(n, -c * (qmn - 1) * (1 - s2 * q ** (n + 1) / ab))
        accumulate(n - 1, c * (q / ab) * (s1 * (qn - 1) + (a + b) * (qmn - 1)))
        if n >= 2:
            accumulate(n - 2, -c * (q / ab) * ((qn - 1) + q * (qmn - 1)))
    return SymPoly(1, out)


def apply_DN(f: SymPoly, params: Params, N: int) -> SymPoly:
    """Exact image of a symmetric polynomial under D_N, monomial basis.

    D_N = sum_i [ prod_{j!=i} (t x_i - x_j)/(x_i - x_j) * sigma_N^+(x_i) * (S_{q,i} - 1)
                + prod_{j!=i} (x_i/t - x_j)/(x_i - x_j) * sigma_N^-(x_i) * (S_{q,i}^-1 - 1) ]

    Computed by exact evaluation at generic rational points followed by
    interpolation; the image is a polynomial of degree <= deg f.
    """
    if f.N != N:
        raise ValueError(f"variable counts differ: {f.N} vs {N}")
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    d = f.degree()
    if d == 0:
        return SymPoly(N, {})
    q, t = params.q, params.t
    qinv = 1 / q
    pcoeffs = to_power_basis(f)

    def op(point: Tuple[Fraction, ...]) -> Fraction:
        pvals = power_values(point, d)
        value_here = evaluate_in_power_basis(pcoeffs, pvals)
        total = Fraction(0)
        for i, x in enumerate(point):
            ratio_up = Fraction(1)
            ratio_dn = Fraction(1)
            for j, y in enumerate(point):
                if j != i:
                    gap = x - y
                    ratio_up *= (t * x - y) / gap
                    ratio_dn *= (x / t - y) / gap
            up_vals = list(pvals)
            dn_vals = list(pvals)
            xpow_up = x * q
            xpow_dn = x * qinv
            xpow = x
            for m in range(1, d + 1):
                up_vals[m] += xpow_up - xpow
                dn_vals[m] += xpow_dn - xpow
                xpow_up *= x * q
                xpow_dn *= x * qinv
                xpow *= x
            f_up = evaluate_in_power_basis(pcoeffs, up_vals)
            f_dn = evaluate_in_power_basis(pcoeffs, dn_vals)
            total += ratio_up * sigma(params, N, x, 1) * (f_up - value_here)
            total += ratio_dn * sigma(params, N, x, -1) * (f_dn - value_here)
        return total

    return expand_point_operator(op, N, d)


def mu_N(lam: Partition, params: Params, N: int) -> Fraction:
    """Eigenvalue of D_N on phi_{lam|N}.

    mu_{lam|N} = -sum_{i=1}^{len(lam)} [ (s2 q/ab) t^(2N-i-1) (q^lam_i - 1)
                                         + t^(i-1) (q^-lam_i - 1) ]

    Summands with lam_i = 0 vanish, so the sum stops at the length of lam.
    """
    lam = as_partition(lam)
    if len(lam) > N:
        raise ValueError(f"partition {lam} has more than N = {N} parts")
    q, t = params.q, params.t
    lead = params.s2 * q / (params.a * params.b)
    total = Fraction(0)
    for i, part in enumerate(lam, start=1):
        total += lead * t ** (2 * N - i - 1) * (q**part - 1)
        total += t ** (i - 1) * (q**-part - 1)
    return -total


def mu_infinity(lam: Partition, base: Params) -> Fraction:
    """Level-free eigenvalue: mu_N(lam) at shift_level(base, N) for every N >= len(lam).

    mu_lam = -sum_{i=1}^{len(lam)} [ (s2 q/ab) t^(1-i) (q^lam_i - 1)
                                     + t^(i-1) (q^-lam_i - 1) ]
    """
    lam = as_partition(lam)
    q, t = base.q, base.t
    lead = base.s2 * q / (base.a * base.b)
    total = Fraction(0)
    for i, part in enumerate(lam, start=1):
        total += lead * t ** (1 - i) * (q**part - 1)
        total += t ** (i - 1) * (q**-part - 1)
    return -total


@dataclass
class BigQJacobiFamily:
    """Per-(params, N) store of eigenfunctions of D_N with certified solves.

    The matrix of D_N in the Macdonald basis is lower-triangular by degree
    with the eigenvalues mu_{nu|N} on the diagonal (the same-degree action of
    D_N is a combination of the two Macdonald operators, both diagonal on
    P_nu).  Each phi_{lam|N} is found by back-substitution down the degrees
    and certified by an exact apply_DN residual check.
    """

    params: Params
    N: int
    _mac: MacdonaldBasisCache = field(init=False, repr=False)
    _columns: Dict[Partition, Dict[Partition, Fraction]] = field(default_factory=dict, repr=False)
    _phi_coeffs: Dict[Partition, Dict[Partition, Fraction]] = field(
        default_factory=dict, repr=False
    )
    _phi_polys: Dict[Partition, SymPoly] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self) -> None:
        self._mac = basis_cache(self.N, self.params.q, self.params.t)

    def mu(self, lam: Partition) -> Fraction:
        return mu_N(lam, self.params, self.N)

    def _column(self, rho: Partition) -> Dict[Partition, Fraction]:
        if rho in self._columns:
            return self._columns[rho]
        image = apply_DN(self._mac.poly(rho), self.params, self.N)
        col = to_macdonald_basis(image, self._mac)
        d = sum(rho)
        for kappa in col:
            if sum(kappa) > d or (sum(kappa) == d and kappa != rho):
                raise AssertionError(
                    f"D_N P_{rho} has a forbidden component at {kappa}; "
                    "the P-basis matrix must be triangular by degree"
                )
        if col.get(rho, Fraction(0)) != self.mu(rho):
            raise AssertionError(
                f"diagonal entry of D_N at {rho} disagrees with the eigenvalue formula"
            )
        self._columns[rho] = col
        return col

    def phi_macdonald_coeffs(self, lam: Partition) -> Dict[Partition, Fraction]:
        """Coefficients c_nu of phi_{lam|N} = sum_nu c_nu P_{nu|N}, with c_lam = 1."""
        lam = as_partition(lam)
        if len(lam) > self.N:
            raise ValueError(f"partition {lam} has more than N = {self.N} parts")
        with self._lock:
            if lam not in self._phi_coeffs:
                self._solve(lam)
            return dict(self._phi_coeffs[lam])

    def phi(self, lam: Partition) -> SymPoly:
        lam = as_partition(lam)
        self.phi_macdonald_coeffs(lam)
        return self._phi_polys[lam]

    def _solve(self, lam: Partition) -> None:
        size = sum(lam)
        eig = self.mu(lam)
        for nu in cone_partitions(size, self.N):
            if nu != lam and self.mu(nu) == eig:
                raise EigenvalueCollisionError(
                    f"mu collision at N={self.N}: {lam} and {nu} both give {eig}; "
                    "the triangular solve needs distinct eigenvalues in the cone"
                )
        coeffs: Dict[Partition, Fraction] = {lam: Fraction(1)}
        # Same-degree coefficients other than c_lam vanish because the matrix
        # is diagonal within a degree; walk the strictly lower degrees.
        for d in range(size - 1, -1, -1):
            for nu in partitions_of(d, self.N):
                rhs = Fraction(0)
                for rho, c in coeffs.items():
                    rhs += self._column(rho).get(nu, Fraction(0)) * c
                if rhs:
                    coeffs[nu] = rhs / (eig - self.mu(nu))
        poly = from_macdonald_coeffs(coeffs, self._mac)
        if apply_DN(poly, self.params, self.N) != scale(poly, eig):
            raise AssertionError(f"eigenfunction residual for {lam} is nonzero")
        self._phi_coeffs[lam] = coeffs
        self._phi_polys[lam] = poly

    def pi(self, lam: Partition) -> Dict[Partition, Fraction]:
        """Renormalized coefficients pi(lam, nu) with pi(lam, lam) = 1.

        phi_{lam|N} = sum_{nu contained in lam}
            [(t^N; q, t)_lam / (t^N; q, t)_nu] * pi(lam, nu) * P_{nu|N}
        """
        lam = as_partition(lam)
        coeffs = self.phi_macdonald_coeffs(lam)
        q, t = self.params.q, self.params.t
        tn = t**self.N
        poch_lam = gen_pochhammer(tn, lam, q, t)
        out: Dict[Partition, Fraction] = {}
        for nu, c in coeffs.items():
            if not contains(nu, lam):
                raise AssertionError(
                    f"phi_{lam} has a Macdonald component at {nu} outside containment"
                )
            out[nu] = c * gen_pochhammer(tn, nu, q, t) / poch_lam
        return out


_FAMILIES: Dict[Tuple[Params, int], BigQJacobiFamily] = {}
_FAMILY_LOCK = threading.Lock()


def family(params: Params, N: int) -> BigQJacobiFamily:
    """Atomic get-or-create of the shared per-(params, N) eigenfunction store."""
    key = (params, N)
    with _FAMILY_LOCK:
        if key not in _FAMILIES:
            _FAMILIES[key] = BigQJacobiFamily(*key)
        return _FAMILIES[key]


def big_qjacobi_poly(lam: Partition, params: Params, N: int) -> SymPoly:
    """The unique D_N-eigenfunction P_{lam|N} + (lower-degree Macdonald terms)."""
    return family(params, N).phi(lam)


def pi_coeffs(lam: Partition, params: Params, N: int) -> Dict[Partition, Fraction]:
    return family(params, N).pi(lam)


def phi_symfunc(lam: Partition, base: Params) -> SymFuncExpansion:
    """The symmetric function Phi_lam = sum_{nu contained in lam} pi(lam, nu) P_nu.

    pi is computed at level N0 = max(len(lam), 1) with shift_level parameters
    and certified by recomputing at level N0 + 1; by stability the result is
    independent of the level.
    """
    lam = as_partition(lam)
    level = max(len(lam), 1)
    table = pi_coeffs(lam, shift_level(base, level), level)
    recheck = pi_coeffs(lam, shift_level(base, level + 1), level + 1)
    if table != recheck:
        raise StabilityError(
            f"pi coefficients of {lam} differ between levels {level} and {level + 1}"
        )
    return SymFuncExpansion("macdonald", table)


def h_norm(lam: Partition, base: Params) -> Fraction:
    """Closed-form squared norm h_lam of Phi_lam, an exact rational.

    h_lam = [C-_lam(q)/C-_lam(t)] * [C+_lam(sq/t)/C+_lam(s)] * (s q^3/(a b t))^|lam|
            * q^(2 n(lam')) / t^(2 n(lam)) * 1/(s q; q, t)_{2lam union 2lam}
            * (cq/a; q, t)_lam (dq/a; q, t)_lam (cq/b; q, t)_lam (dq/b; q, t)_lam

    with s = s2 q/(ab) < 0; the four conjugate-paired Pochhammers combine
    into exact rational products, and no factor vanishes for admissible
    parameters.
    """
    lam = as_partition(lam)
    q, t, a, b = base.q, base.t, base.a, base.b
    s = base.s2 * q / (a * b)
    stats = partition_stats(lam)
    n_conj = sum(p * (p - 1) // 2 for p in lam)
    value = c_minus(q, lam, q, t) / c_minus(t, lam, q, t)
    value *= c_plus(s * q / t, lam, q, t) / c_plus(s, lam, q, t)
    value *= (s * q**3 / (a * b * t)) ** stats.size
    value *= q ** (2 * n_conj) / t ** (2 * stats.n_lam)
    value /= gen_pochhammer(s * q, stats.double_union, q, t)
    value *= gen_pochhammer_conjpair(q / a, base.cd, lam, q, t)
    value *= gen_pochhammer_conjpair(q / b, base.cd, lam, q, t)
    return value


@dataclass(frozen=True)
class CertifiedBound:
    """A real number known to lie in [lo, hi]; exact when lo == hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError(f"bound is an interval [{self.lo}, {self.hi}], not exact")
        return self.lo


def _sqrt_bracket(value: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of sqrt(value) with hi - lo = 2^-bits/denominator."""
    n, d = value.numerator, value.denominator
    r = isqrt(n * d << (2 * bits))
    den = d << bits
    return Fraction(r, den), Fraction(r + 1, den)


def quadratic_form_bounds(q: Scalar, t: Scalar) -> Tuple[CertifiedBound, CertifiedBound]:
    """Lower bounds for the quadratic-form minima behind rate nonnegativity.

    Returns ((1+q)/sqrt(q), max((1+q)/sqrt(q), (1+t^2)/t)).  The first is
    always > 2 for q in (0, 1).  When sqrt(q) is rational both entries are
    exact; otherwise the first is a certified interval, refined until the
    max resolves (a tie would force sqrt(q) rational).
    """
    q, t = frac(q), frac(t)
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got {q}")
    if not 0 < t < 1:
        raise ValueError(f"need 0 < t < 1, got {t}")
    t_bound = (1 + t * t) / t
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        first = (1 + q) / Fraction(rn, rd)
        second = max(first, t_bound)
        return CertifiedBound(first, first), CertifiedBound(second, second)
    for bits in (32, 64, 128, 256, 512, 1024):
        root_lo, root_hi = _sqrt_bracket(q, bits)
        first = CertifiedBound((1 + q) / root_hi, (1 + q) / root_lo)
        if t_bound >= first.hi:
            return first, CertifiedBound(t_bound, t_bound)
        if t_bound <= first.lo:
            return first, first
    raise AssertionError("max of the two bounds did not resolve; sqrt(q) cannot be this close")
