"""Exact evaluation-interpolation of symmetric operators.

The q-difference operators in this package are rational-function
expressions whose action on a symmetric polynomial is again a symmetric
polynomial of no higher degree.  Rather than performing symbolic
cancellation, an operator image is recovered by evaluating it at generic
rational points (distinct, nonzero coordinates, off the diagonals
x_i = x_j) and solving an exact linear system for the monomial
coefficients.

Points come from a deterministic seeded stream; rows are accepted greedily
until the interpolation matrix is exactly invertible, and every recovered
polynomial is verified against the operator on held-out points, so a bad
point set is detected, never silently used.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from . import _linalg
from .qalgebra import Partition
from .symfunc import SymPoly, cone_partitions, evaluate, m_poly

POINT_STREAM_SEED = 715_2026

_N_VERIFY = 2


class InterpolationError(Exception):
    """Internal failure of operator interpolation; signals a bug, not bad input."""


def _point_stream(N: int):
    rng = random.Random(POINT_STREAM_SEED + 1009 * N)
    while True:
        values = rng.sample(range(1, 500), N)
        signs = [rng.choice((1, -1)) for _ in range(N)]
        yield tuple(Fraction(v * s) for v, s in zip(values, signs))


class _InterpPlan:
    def __init__(self, N: int, degree: int) -> None:
        self.N = N
        self.degree = degree
        self.basis: List[Partition] = cone_partitions(degree, N)
        dim = len(self.basis)
        basis_polys = [m_poly(lam, N) for lam in self.basis]
        tracker = _linalg.IncrementalRank(dim)
        points: List[Tuple[Fraction, ...]] = []
        rows: List[List[Fraction]] = []
        stream = _point_stream(N)
        attempts = 0
        while tracker.rank < dim:
            attempts += 1
            if attempts > 40 * dim + 200:
                raise InterpolationError(
                    f"could not find {dim} independent sample points for N={N}, degree={degree}"
                )
            point = next(stream)
            if len(set(point)) < N:
                continue
            row = [evaluate(p, point) for p in basis_polys]
            if tracker.try_add(row):
                points.append(point)
                rows.append(row)
        self.points = points
        self.inverse = _linalg.invert(rows)
        self.check_points = [next(stream) for _ in range(_N_VERIFY)]


_PLAN_CACHE: Dict[Tuple[int, int], _InterpPlan] = {}


def _plan(N: int, degree: int) -> _InterpPlan:
    key = (N, degree)
    if key not in _PLAN_CACHE:
        _PLAN_CACHE[key] = _InterpPlan(N, degree)
    return _PLAN_CACHE[key]


def expand_point_operator(
    op_at_point: Callable[[Tuple[Fraction, ...]], Fraction], N: int, degree: int
) -> SymPoly:
    """Recover the symmetric polynomial of degree <= degree whose values match
    ``op_at_point`` at generic points, and verify the match on held-out points."""
    plan = _plan(N, degree)
    values = [op_at_point(point) for point in plan.points]
    coeffs = _linalg.mat_vec(plan.inverse, values)
    result = SymPoly(N, dict(zip(plan.basis, coeffs)))
    for point in plan.check_points:
        if evaluate(result, point) != op_at_point(point):
            raise InterpolationError(
                f"interpolated polynomial fails verification at N={N}, degree={degree}; "
                "the operator image is not a polynomial of the expected degree"
            )
    return result
