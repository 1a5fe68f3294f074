"""Arithmetic progressions over the naturals.

Every guard restricted to a residue carrier is a finite union of
progressions, and so is its image under an affine piece. Totality, codomain
containment, disjointness and injectivity of piecewise-affine maps all reduce
to the questions answered here.
"""
from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Iterator, Optional

from sympy.ntheory.modular import solve_congruence

from .models import AffinePiece, Guard, ResidueCarrier


def _ceil_div(num: int, den: int) -> int:
    return -(-num // den)


@dataclass(frozen=True)
class Progression:
    """The values start, start + step, ... up to last inclusive (None = unbounded)."""

    start: int
    step: int
    last: Optional[int] = None

    def contains(self, n: int) -> bool:
        if n < self.start or (n - self.start) % self.step:
            return False
        return self.last is None or n <= self.last

    def image(self, piece: AffinePiece) -> "Progression":
        """Image under n -> a*n + b, which is again a progression."""
        last = None if self.last is None else piece(self.last)
        return Progression(piece(self.start), piece.a * self.step, last)

    def values(self, below: int) -> Iterator[int]:
        stop = below if self.last is None else min(below, self.last + 1)
        return iter(range(self.start, max(stop, self.start), self.step))


def guard_segments(guard: Guard, carrier: ResidueCarrier) -> list[Progression]:
    """
    Split the inputs admitted by a guard within a carrier into progressions.

    Args:
        guard: Piece guard
        carrier: Domain carrier of the map

    Returns:
        Progressions with step lcm(guard modulus, carrier modulus), sorted by start
    """
    period = lcm(guard.modulus, carrier.modulus)
    segments = []
    for r in range(period):
        if r % guard.modulus not in guard.residues or not carrier.contains(r):
            continue
        start = r
        if guard.lo is not None and start < guard.lo:
            start = r + period * _ceil_div(guard.lo - r, period)
        if guard.hi is None:
            segments.append(Progression(start, period))
        elif start <= guard.hi:
            last = start + period * ((guard.hi - start) // period)
            segments.append(Progression(start, period, last))
    segments.sort(key=lambda s: s.start)
    return segments


def first_common(a: Progression, b: Progression) -> Optional[int]:
    """
    Find the smallest value shared by two progressions.

    Args:
        a: First progression
        b: Second progression

    Returns:
        Smallest common value, or None if they are disjoint
    """
    solution = solve_congruence((a.start, a.step), (b.start, b.step))
    if solution is None:
        return None
    x, period = int(solution[0]), int(solution[1])
    lower = max(a.start, b.start)
    if x < lower:
        x += period * _ceil_div(lower - x, period)
    uppers = [s.last for s in (a, b) if s.last is not None]
    if uppers and x > min(uppers):
        return None
    return x


def first_outside(segment: Progression, carrier: ResidueCarrier) -> Optional[int]:
    """
    Find the smallest value of a progression that is not in a carrier.

    Residues of the progression modulo the carrier modulus repeat with period
    modulus / gcd(step, modulus), so one period decides containment.
    """
    period = carrier.modulus // gcd(segment.step, carrier.modulus)
    for k in range(period):
        n = segment.start + k * segment.step
        if segment.last is not None and n > segment.last:
            break
        if not carrier.contains(n):
            return n
    return None


def first_uncovered(carrier: ResidueCarrier, guards: Iterable[Guard]) -> Optional[int]:
    """
    Find the smallest carrier value admitted by none of the guards.

    Works class by class modulo the lcm of all moduli: within one class the
    guards that match reduce to ranges, and the class is covered when the
    ranges chain together up to an unbounded one.
    """
    guards = list(guards)
    period = lcm(carrier.modulus, *(g.modulus for g in guards))
    gaps = []
    for r in range(period):
        if not carrier.contains(r):
            continue
        ranges = [
            (g.lo if g.lo is not None else 0, g.hi)
            for g in guards
            if r % g.modulus in g.residues
        ]
        current = r
        while True:
            reaching = [hi for lo, hi in ranges if lo <= current and (hi is None or hi >= current)]
            if not reaching:
                gaps.append(current)
                break
            if None in reaching:
                break
            top = max(reaching)
            current = r + period * ((top - r) // period + 1)
    return min(gaps) if gaps else None


def nondecreasing_threshold(piece: AffinePiece) -> Optional[int]:
    """
    Smallest T with a*n + b >= n for every admitted n >= T.

    Returns None when the piece keeps decreasing values forever.
    """
    hi = piece.guard.hi
    if piece.a == 1:
        if piece.b >= 0:
            return 0
        return None if hi is None else hi + 1
    # (a - 1) * n + b >= 0  <=>  n >= -b / (a - 1)
    threshold = max(0, _ceil_div(-piece.b, piece.a - 1))
    return threshold if hi is None else min(threshold, hi + 1)
