"""Seeded random finite instances and the countable encoding of finite instances."""
import random
from dataclasses import dataclass

from .domain import require_valid
from .errors import EncodingError
from .models import (
    AffinePiece,
    FiniteCarrier,
    Guard,
    Instance,
    Mode,
    PiecewiseAffineMap,
    ResidueCarrier,
    TableMap,
)


def random_finite_instance(size: int, seed: int) -> Instance:
    """
    Build a random finite instance from a seeded pair of permutations.

    Args:
        size: |P| = |Q|, at least 1
        seed: Random seed; equal seeds give equal instances

    Returns:
        Valid finite instance with atoms p0.. and q0..
    """
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    rng = random.Random(seed)
    width = len(str(size - 1))
    p_atoms = [f"p{i:0{width}d}" for i in range(size)]
    q_atoms = [f"q{i:0{width}d}" for i in range(size)]
    f_images = rng.sample(q_atoms, size)
    g_images = rng.sample(p_atoms, size)
    return Instance(
        p=FiniteCarrier(frozenset(p_atoms)),
        q=FiniteCarrier(frozenset(q_atoms)),
        f=TableMap(tuple(zip(p_atoms, f_images))),
        g=TableMap(tuple(zip(q_atoms, g_images))),
        mode=Mode.FINITE,
    )


@dataclass(frozen=True)
class EncodedInstance:
    """Countable encoding of a finite instance with the atom numbering used."""

    instance: Instance
    p_index: dict[str, int]
    q_index: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.p_index)


def _periodic_map(table: TableMap, source: dict[str, int], target: dict[str, int]) -> PiecewiseAffineMap:
    n = len(source)
    pieces = []
    for atom, r in sorted(source.items(), key=lambda item: item[1]):
        image = target[table.lookup[atom]]
        pieces.append(AffinePiece(Guard(n, frozenset({r})), 1, image - r))
    return PiecewiseAffineMap(tuple(pieces))


def encode_countable(inst: Instance) -> EncodedInstance:
    """
    Encode a valid finite instance over the naturals.

    Atoms are numbered 0..n-1 in sorted order. Each map becomes the periodic
    extension of its table: the piece for residue r mod n sends r + kn to
    index(image) + kn, so values below n reproduce the finite instance
    exactly and every higher block is an isomorphic copy of it.

    Raises:
        EncodingError: If the instance is not finite or has empty carriers
        InvalidInstance: If the instance fails validation
    """
    if inst.mode is not Mode.FINITE:
        raise EncodingError("only finite instances can be encoded")
    require_valid(inst)
    if not inst.p.atoms:
        raise EncodingError("empty carriers have no countable encoding")
    p_index = {atom: i for i, atom in enumerate(sorted(inst.p.atoms))}
    q_index = {atom: i for i, atom in enumerate(sorted(inst.q.atoms))}
    encoded = Instance(
        p=ResidueCarrier.naturals(),
        q=ResidueCarrier.naturals(),
        f=_periodic_map(inst.f, p_index, q_index),
        g=_periodic_map(inst.g, q_index, p_index),
        mode=Mode.COUNTABLE,
        step_budget=max(inst.step_budget, 2 * len(p_index) + 2),
    )
    return EncodedInstance(encoded, p_index, q_index)
