"""Configuration spaces of at most N particles on a two-sided q-lattice.

A state stores, for each sign side, the weakly increasing list of finite
lattice indices of its particles.  Particles sitting at the accumulation
point 0 (infinite index) are represented only by a count, derived as
capacity minus the number of stored particles.  Coordinates are

    x+_i = a^(-1) * q^(k_i) * t^(i-1)   (positive side, decreasing),
    x-_i = b^(-1) * q^(l_i) * t^(i-1)   (negative side, increasing),

so weakly increasing index lists are exactly the configurations whose
consecutive same-side coordinate ratios are bounded by t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterator, List, NamedTuple, Optional, Tuple

from .qalgebra import Params

Side = str  # "+" or "-"
Direction = str  # "up" (index + 1, coordinate * q) or "down" (index - 1, coordinate / q)


@dataclass(frozen=True)
class State:
    """Particle configuration: stored finite indices per side, plus capacity.

    ``capacity`` is the maximum particle count N, or None for unbounded.
    The constructor checks only basic shape (positive integer indices);
    monotonicity and the capacity bound are the job of ``is_admissible``,
    so that rejected candidate states can still be represented.
    """

    plus: Tuple[int, ...]
    minus: Tuple[int, ...]
    capacity: Optional[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "plus", tuple(int(k) for k in self.plus))
        object.__setattr__(self, "minus", tuple(int(k) for k in self.minus))
        for k in self.plus + self.minus:
            if k < 1:
                raise ValueError(f"lattice indices must be >= 1, got {k}")
        if self.capacity is not None and self.capacity < 0:
            raise ValueError(f"capacity must be >= 0 or None, got {self.capacity}")

    @property
    def count(self) -> int:
        """Number of stored (finite-index) particles."""
        return len(self.plus) + len(self.minus)

    @property
    def zeros(self) -> Optional[int]:
        """Number of particles pinned at 0, or None when capacity is unbounded."""
        if self.capacity is None:
            return None
        return self.capacity - self.count


@dataclass(frozen=True)
class Coordinates:
    """Exact coordinates of a configuration.

    ``xs_plus`` is decreasing positive, ``xs_minus`` is increasing negative,
    and ``zeros`` counts coordinates pinned at 0 (None when unbounded).
    """

    xs_plus: Tuple[Fraction, ...]
    xs_minus: Tuple[Fraction, ...]
    zeros: Optional[int]

    def as_vector(self, n_vars: int) -> Tuple[Fraction, ...]:
        """Flatten to an n_vars-tuple, padding with zeros."""
        xs = self.xs_plus + self.xs_minus
        if len(xs) > n_vars:
            raise ValueError(f"{len(xs)} nonzero coordinates do not fit in {n_vars} variables")
        return xs + (Fraction(0),) * (n_vars - len(xs))


def empty_state(capacity: Optional[int]) -> State:
    return State((), (), capacity)


def is_admissible(s: State) -> bool:
    """True iff both index lists are weakly increasing and count <= capacity."""
    for side in (s.plus, s.minus):
        for i in range(len(side) - 1):
            if side[i] > side[i + 1]:
                return False
    if s.capacity is not None and s.count > s.capacity:
        return False
    return True


def coords_of(s: State, p: Params) -> Coordinates:
    """Coordinates of an admissible state under parameters p."""
    if not is_admissible(s):
        raise ValueError(f"state {state_to_str(s)} is not admissible")
    inv_a, inv_b = 1 / p.a, 1 / p.b
    xs_plus = tuple(inv_a * p.q**k * p.t ** (i - 1) for i, k in enumerate(s.plus, start=1))
    xs_minus = tuple(inv_b * p.q**l * p.t ** (i - 1) for i, l in enumerate(s.minus, start=1))
    return Coordinates(xs_plus, xs_minus, s.zeros)


def state_to_str(s: State) -> str:
    """Canonical text form N=<n>;+[k1,...];-[l1,...];z=<zeros>."""
    cap = "inf" if s.capacity is None else str(s.capacity)
    zeros = "inf" if s.zeros is None else str(s.zeros)
    plus = ",".join(str(k) for k in s.plus)
    minus = ",".join(str(l) for l in s.minus)
    return f"N={cap};+[{plus}];-[{minus}];z={zeros}"


def state_from_str(text: str) -> State:
    """Parse the canonical text form produced by ``state_to_str``."""
    try:
        cap_part, plus_part, minus_part, zeros_part = text.split(";")
        cap_str = cap_part.removeprefix("N=")
        capacity = None if cap_str == "inf" else int(cap_str)
        plus_str = plus_part.removeprefix("+[").removesuffix("]")
        minus_str = minus_part.removeprefix("-[").removesuffix("]")
        plus = tuple(int(k) for k in plus_str.split(",")) if plus_str else ()
        minus = tuple(int(l) for l in minus_str.split(",")) if minus_str else ()
        zeros_str = zeros_part.removeprefix("z=")
    except (ValueError, AttributeError) as exc:
        raise ValueError(f"malformed state string {text!r}") from exc
    s = State(plus, minus, capacity)
    declared = None if zeros_str == "inf" else int(zeros_str)
    if declared != s.zeros:
        raise ValueError(f"inconsistent zeros count in state string {text!r}")
    return s


def _weakly_increasing(length: int, K: int) -> Iterator[Tuple[int, ...]]:
    return combinations_with_replacement(range(1, K + 1), length)


def enumerate_truncated(N: int, K: int) -> List[State]:
    """All states with capacity N and every stored index <= K.

    Deterministic canonical order: ascending by (particle count, minus-side
    count, plus indices, minus indices).
    """
    if N < 1 or K < 1:
        raise ValueError(f"need N >= 1 and K >= 1, got N = {N}, K = {K}")
    out: List[State] = []
    for n_plus in range(N + 1):
        for n_minus in range(N + 1 - n_plus):
            for plus in _weakly_increasing(n_plus, K):
                for minus in _weakly_increasing(n_minus, K):
                    out.append(State(plus, minus, N))
    out.sort(key=lambda s: (s.count, len(s.minus), s.plus, s.minus))
    return out


class JumpMove(NamedTuple):
    state: State
    side: Side
    position: int  # 1-based within its side
    direction: Direction


def jump_targets(s: State) -> List[JumpMove]:
    """Admissible one-index moves k_i -> k_i +/- 1 of stored particles.

    Particle count is preserved; particles at 0 never move.  An up move
    multiplies the coordinate by q (index + 1), a down move divides by q;
    moves that would break weak monotonicity or push an index below 1 are
    omitted (their rates also vanish analytically, see dynamics).
    """
    if not is_admissible(s):
        raise ValueError(f"state {state_to_str(s)} is not admissible")
    out: List[JumpMove] = []
    for side_name, indices in (("+", s.plus), ("-", s.minus)):
        n = len(indices)
        for i in range(n):
            k = indices[i]
            if i == n - 1 or indices[i + 1] >= k + 1:
                moved = indices[:i] + (k + 1,) + indices[i + 1 :]
                out.append(JumpMove(_replace_side(s, side_name, moved), side_name, i + 1, "up"))
            if k - 1 >= 1 and (i == 0 or indices[i - 1] <= k - 1):
                moved = indices[:i] + (k - 1,) + indices[i + 1 :]
                out.append(JumpMove(_replace_side(s, side_name, moved), side_name, i + 1, "down"))
    return out


def _replace_side(s: State, side: Side, indices: Tuple[int, ...]) -> State:
    if side == "+":
        return State(indices, s.minus, s.capacity)
    return State(s.plus, indices, s.capacity)


def is_frontier(s: State, K: int) -> bool:
    """True iff some stored index touches the truncation window edge K."""
    return any(k >= K for k in s.plus + s.minus)
