"""Tests for image membership and inverse lookup."""
import pytest

from sb_engine.core.domain import apply, carrier_values
from sb_engine.core.errors import InvalidInstance, NotInImage
from sb_engine.core.generator import random_finite_instance
from sb_engine.core.inverses import in_image, inverse, inverse_view, is_inverse
from sb_engine.core.models import Direction

from .conftest import doubling_instance, finite, non_stopper_instance, successor_instance

WINDOW = 10_000


def test_doubling_inverse(doubling):
    """Only even values are in the image of n -> 2n."""
    assert inverse(doubling, Direction.F, 6) == 3
    assert not in_image(doubling, Direction.F, 3)
    with pytest.raises(NotInImage):
        inverse(doubling, Direction.F, 3)


def test_successor_zero_not_in_image(successor):
    assert not in_image(successor, Direction.G, 0)
    assert inverse(successor, Direction.G, 1) == 0


def test_out_of_carrier_values_are_never_images(doubling, two_cycle):
    """Values outside the codomain carrier report False, never raise."""
    assert not in_image(doubling, Direction.G, 3)
    assert not in_image(doubling, Direction.F, "x")
    assert not in_image(two_cycle, Direction.F, "y")
    assert not is_inverse(doubling, Direction.F, -1, -2)


def test_is_inverse(two_cycle, doubling):
    assert is_inverse(two_cycle, Direction.F, "a", "x")
    assert not is_inverse(two_cycle, Direction.F, "x", "a")
    assert is_inverse(doubling, Direction.F, 5, 10)
    assert not is_inverse(doubling, Direction.F, 5, 12)


def test_invalid_instance_rejected():
    inst = finite({"a", "b"}, {"x", "y"}, {"a": "x", "b": "x"}, {"x": "a", "y": "b"})
    with pytest.raises(InvalidInstance):
        inverse_view(inst, Direction.F)


def check_inverse_laws(inst, window=None):
    """Both round trips, uniqueness and image membership for f and g."""
    for direction in Direction:
        domain = inst.carrier(direction.source)
        codomain = inst.carrier(direction.target)
        for v in carrier_values(domain, window):
            image = apply(inst, direction, v)
            assert in_image(inst, direction, image)
            assert inverse(inst, direction, image) == v
            assert is_inverse(inst, direction, v, image)
        for x in carrier_values(codomain, window):
            if in_image(inst, direction, x):
                inv = inverse(inst, direction, x)
                assert apply(inst, direction, inv) == x
                assert is_inverse(inst, direction, inv, x)
            else:
                with pytest.raises(NotInImage):
                    inverse(inst, direction, x)


def test_inverse_laws_finite():
    for seed in range(40):
        check_inverse_laws(random_finite_instance(1 + seed, seed))


@pytest.mark.parametrize(
    "build", [successor_instance, doubling_instance, non_stopper_instance], ids=["successor", "doubling", "non-stopper"]
)
def test_inverse_laws_countable(build):
    check_inverse_laws(build(), WINDOW)
