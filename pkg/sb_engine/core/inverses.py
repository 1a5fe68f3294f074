"""Image membership and inverse lookup for f and g.

Injectivity makes every preimage unique, so the inverse of a validated map
is an ordinary deterministic lookup (finite mode) or an exact solve over the
affine pieces (countable mode).
"""
from dataclasses import dataclass
from typing import Optional

from .domain import member, require_valid
from .errors import NotInImage, WrongValueKind
from .models import (
    AffinePiece,
    Carrier,
    Direction,
    Instance,
    PiecewiseAffineMap,
    ResidueCarrier,
    TableMap,
    Value,
)


@dataclass(frozen=True)
class InverseView:
    """Inverse access for one direction: a reverse table or the affine pieces."""

    direction: Direction
    domain: Carrier
    codomain: Carrier
    reverse: Optional[dict[str, str]] = None
    pieces: tuple[AffinePiece, ...] = ()

    def solve(self, x: Value) -> Optional[tuple[Value, Optional[AffinePiece]]]:
        """
        Find the preimage of x together with the piece that produced it.

        Returns:
            (preimage, piece) with piece None in finite mode, or None when x
            is outside the image
        """
        try:
            if not member(self.codomain, x):
                return None
        except WrongValueKind:
            return None
        if self.reverse is not None:
            inv = self.reverse.get(x)
            return None if inv is None else (inv, None)
        assert isinstance(self.domain, ResidueCarrier)
        for piece in self.pieces:
            n = piece.solve(x)
            if n is not None and piece.guard.admits(n) and self.domain.contains(n):
                return n, piece
        return None


def build_inverse_views(inst: Instance) -> dict[Direction, InverseView]:
    """Build the inverse views of f and g for an instance."""
    views = {}
    for direction in Direction:
        m = inst.map_for(direction)
        domain = inst.carrier(direction.source)
        codomain = inst.carrier(direction.target)
        if isinstance(m, TableMap):
            reverse = {image: atom for atom, image in m.lookup.items() if atom in domain.atoms}
            views[direction] = InverseView(direction, domain, codomain, reverse=reverse)
        else:
            assert isinstance(m, PiecewiseAffineMap)
            views[direction] = InverseView(direction, domain, codomain, pieces=m.pieces)
    return views


def inverse_view(inst: Instance, direction: Direction) -> InverseView:
    """Get the inverse view of f or g for a valid instance."""
    require_valid(inst)
    return inst.inverse_views[direction]


def is_inverse(inst: Instance, direction: Direction, inv: Value, x: Value) -> bool:
    """
    Check that inv is a preimage of x.

    Returns:
        True iff inv is in the domain carrier, x in the codomain carrier, and
        the map sends inv to x; False for out-of-carrier values
    """
    view = inverse_view(inst, direction)
    try:
        if not member(view.domain, inv) or not member(view.codomain, x):
            return False
    except WrongValueKind:
        return False
    m = inst.map_for(direction)
    if isinstance(m, TableMap):
        return m.lookup.get(inv) == x
    return any(piece.guard.admits(inv) and piece(inv) == x for piece in m.pieces)


def in_image(inst: Instance, direction: Direction, x: Value) -> bool:
    """Check whether x lies in the image of f or g."""
    return inverse_view(inst, direction).solve(x) is not None


def inverse(inst: Instance, direction: Direction, x: Value) -> Value:
    """
    Get the unique preimage of x.

    Args:
        inst: Valid instance
        direction: f or g
        x: Value in the image of the map

    Returns:
        The inv with is_inverse(inst, direction, inv, x)

    Raises:
        NotInImage: If x has no preimage
    """
    found = inverse_view(inst, direction).solve(x)
    if found is None:
        raise NotInImage(f"{x!r} is not in the image of {direction.value}")
    return found[0]
