"""Tests for progression arithmetic behind countable validation."""
from sb_engine.core.models import Guard, ResidueCarrier
from sb_engine.core.progressions import (
    Progression,
    first_common,
    first_outside,
    first_uncovered,
    guard_segments,
    nondecreasing_threshold,
)

from .conftest import EVENS, NATURALS, piece


def test_guard_segments_respect_range():
    guard = Guard(3, frozenset({1}), lo=5, hi=20)
    assert guard_segments(guard, NATURALS) == [Progression(7, 3, 19)]


def test_guard_segments_intersect_carrier():
    """A guard mod 3 inside the evens splits by class mod 6."""
    guard = Guard(3, frozenset({0, 1}))
    assert guard_segments(guard, EVENS) == [Progression(0, 6), Progression(4, 6)]


def test_guard_segments_empty_range():
    guard = Guard(4, frozenset({3}), lo=0, hi=2)
    assert guard_segments(guard, NATURALS) == []


def test_first_common():
    assert first_common(Progression(1, 4), Progression(3, 6)) == 9
    assert first_common(Progression(0, 2), Progression(1, 2)) is None
    assert first_common(Progression(1, 4), Progression(3, 6, 8)) is None


def test_first_outside():
    assert first_outside(Progression(0, 4), EVENS) is None
    assert first_outside(Progression(2, 3), EVENS) == 5
    assert first_outside(Progression(2, 3, 4), EVENS) is None


def test_first_uncovered():
    odd_tail = Guard(2, frozenset({1}), lo=3)
    evens = Guard(2, frozenset({0}))
    one = Guard(2, frozenset({1}), lo=1, hi=1)
    assert first_uncovered(NATURALS, [evens, one, odd_tail]) is None
    assert first_uncovered(NATURALS, [evens, odd_tail]) == 1
    assert first_uncovered(ResidueCarrier(2, frozenset({0})), [evens]) is None


def test_first_uncovered_chained_ranges():
    """Adjacent bounded ranges chain into full coverage."""
    guards = [Guard(1, frozenset({0}), 0, 9), Guard(1, frozenset({0}), 10, 19), Guard(1, frozenset({0}), 15)]
    assert first_uncovered(NATURALS, guards) is None
    assert first_uncovered(NATURALS, guards[:2]) == 20


def test_nondecreasing_threshold():
    assert nondecreasing_threshold(piece(1, 0)) == 0
    assert nondecreasing_threshold(piece(1, -2, lo=3)) is None
    assert nondecreasing_threshold(piece(1, -1, lo=1, hi=1)) == 2
    assert nondecreasing_threshold(piece(3, -10)) == 5
    assert nondecreasing_threshold(piece(2, 0)) == 0
