"""Shared instances for the test suite."""
import pytest

from sb_engine.core.models import (
    AffinePiece,
    FiniteCarrier,
    Guard,
    Instance,
    Mode,
    PiecewiseAffineMap,
    ResidueCarrier,
    TableMap,
)

NATURALS = ResidueCarrier.naturals()
EVENS = ResidueCarrier(2, frozenset({0}))


def piece(a: int, b: int, modulus: int = 1, residues=(0,), lo=None, hi=None) -> AffinePiece:
    """Build an affine piece n -> a*n + b on a guard."""
    return AffinePiece(Guard(modulus, frozenset(residues), lo, hi), a, b)


def pieces(*items: AffinePiece) -> PiecewiseAffineMap:
    return PiecewiseAffineMap(tuple(items))


def finite(p, q, f: dict, g: dict) -> Instance:
    return Instance(
        p=FiniteCarrier(frozenset(p)),
        q=FiniteCarrier(frozenset(q)),
        f=TableMap.from_dict(f),
        g=TableMap.from_dict(g),
        mode=Mode.FINITE,
    )


def countable(p, q, f, g, budget: int = 10_000) -> Instance:
    return Instance(p=p, q=q, f=f, g=g, mode=Mode.COUNTABLE, step_budget=budget)


def successor_instance(budget: int = 10_000) -> Instance:
    """f = g = n -> n + 1 on the naturals: one P-stopper and one Q-stopper."""
    return countable(NATURALS, NATURALS, pieces(piece(1, 1)), pieces(piece(1, 1)), budget)


def doubling_instance() -> Instance:
    """f = n -> 2n into the evens, g = inclusion of the evens."""
    return countable(NATURALS, EVENS, pieces(piece(2, 0)), pieces(piece(1, 0)))


def non_stopper_instance() -> Instance:
    """
    f = identity, g a bijection of the naturals threading every value into one chain.

    g: even n -> n + 2, 1 -> 0, odd n >= 3 -> n - 2. The chain through 0 runs
    left through 1, 3, 5, ... forever.
    """
    g = pieces(
        piece(1, 2, modulus=2, residues=(0,)),
        piece(1, -1, modulus=2, residues=(1,), lo=1, hi=1),
        piece(1, -2, modulus=2, residues=(1,), lo=3),
    )
    return countable(NATURALS, NATURALS, pieces(piece(1, 0)), g)


@pytest.fixture(name="two_cycle")
def two_cycle_fixture():
    """Finite instance f = {a -> x}, g = {x -> a}."""
    return finite({"a"}, {"x"}, {"a": "x"}, {"x": "a"})


@pytest.fixture(name="swap_tables")
def swap_tables_fixture():
    """Finite bijective tables on two atoms each."""
    return finite({"a", "b"}, {"x", "y"}, {"a": "x", "b": "y"}, {"x": "a", "y": "b"})


@pytest.fixture(name="successor")
def successor_fixture():
    return successor_instance()


@pytest.fixture(name="doubling")
def doubling_fixture():
    return doubling_instance()


@pytest.fixture(name="non_stopper")
def non_stopper_fixture():
    return non_stopper_instance()
