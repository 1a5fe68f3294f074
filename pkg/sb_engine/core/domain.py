"""Carrier membership, map application and instance validation."""
import logging
from itertools import combinations
from typing import Iterator, Optional

from .errors import InvalidInstance, NotInDomain, WrongValueKind
from .models import (
    Carrier,
    Direction,
    FiniteCarrier,
    InjectionMap,
    Instance,
    Mode,
    PiecewiseAffineMap,
    ResidueCarrier,
    TableMap,
    TaggedElement,
    ValidationReport,
    Value,
    Violation,
    ViolationKind,
)
from .progressions import first_common, first_outside, first_uncovered, guard_segments

logger = logging.getLogger(__name__)


def _is_natural_kind(v: Value) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def member(c: Carrier, v: Value) -> bool:
    """
    Check whether a value belongs to a carrier.

    Args:
        c: Finite or residue carrier
        v: Atom (finite) or natural number (countable)

    Returns:
        True if v is in the carrier

    Raises:
        WrongValueKind: If v is an atom for a residue carrier or vice versa
    """
    if isinstance(c, FiniteCarrier):
        if not isinstance(v, str):
            raise WrongValueKind(f"expected an atom, got {v!r}")
        return v in c.atoms
    if not _is_natural_kind(v):
        raise WrongValueKind(f"expected a natural number, got {v!r}")
    return v >= 0 and c.contains(v)


def apply_map(m: InjectionMap, v: Value, domain: Optional[Carrier] = None) -> Value:
    """
    Apply an injection to a value.

    Args:
        m: Lookup table or piecewise-affine map
        v: Input value
        domain: Domain carrier; when given, v must belong to it

    Returns:
        Table entry, or a*v + b for the unique piece whose guard admits v

    Raises:
        WrongValueKind: If v has the wrong kind for the map
        NotInDomain: If v is outside the domain carrier or no entry/piece covers it
    """
    if domain is not None and not member(domain, v):
        raise NotInDomain(f"{v!r} is outside the domain carrier")
    if isinstance(m, TableMap):
        if not isinstance(v, str):
            raise WrongValueKind(f"expected an atom, got {v!r}")
        try:
            return m.lookup[v]
        except KeyError:
            raise NotInDomain(f"no table entry for {v!r}") from None
    if not _is_natural_kind(v):
        raise WrongValueKind(f"expected a natural number, got {v!r}")
    for piece in m.pieces:
        if piece.guard.admits(v):
            return piece(v)
    raise NotInDomain(f"no piece admits {v}")


def apply(inst: Instance, direction: Direction, v: Value) -> Value:
    """Apply f or g of an instance, checking its domain carrier."""
    return apply_map(inst.map_for(direction), v, inst.carrier(direction.source))


def well_formed(inst: Instance, e: TaggedElement) -> bool:
    """Check that a tagged element's value lies in the carrier its polarity names."""
    try:
        return member(inst.carrier(e.polarity), e.val)
    except WrongValueKind:
        return False


def carrier_values(c: Carrier, below: Optional[int] = None) -> Iterator[Value]:
    """
    Enumerate carrier members in ascending order.

    Args:
        c: Carrier to enumerate
        below: Exclusive bound, required for residue carriers

    Yields:
        Sorted atoms, or the naturals below the bound that belong to the carrier
    """
    if isinstance(c, FiniteCarrier):
        yield from sorted(c.atoms)
        return
    if below is None:
        raise ValueError("a value bound is required to enumerate a residue carrier")
    for n in range(below):
        if c.contains(n):
            yield n


def require_valid(inst: Instance) -> Instance:
    """
    Require the instance to pass validation.

    Raises:
        InvalidInstance: If the validation report lists any violation
    """
    report = inst.report
    if not report.valid:
        raise InvalidInstance(report)
    return inst


# Validation


def validate_instance(inst: Instance) -> ValidationReport:
    """
    Validate an instance, reporting every violation rather than failing fast.

    The report is empty iff f is total on P with image in Q, f is injective
    on P, and the same holds for g from Q to P.

    Args:
        inst: Structurally well-formed instance

    Returns:
        ValidationReport listing all violations
    """
    violations: list[Violation] = []
    for direction in Direction:
        violations.extend(_check_map(inst, direction))
    if violations:
        logger.debug(f"instance has {len(violations)} violation(s)")
    return ValidationReport(violations=violations)


def _violation(kind: ViolationKind, name: str, message: str) -> Violation:
    return Violation(kind=kind, subject=name, message=message)


def _check_map(inst: Instance, direction: Direction) -> list[Violation]:
    name = direction.value
    source = direction.source.label
    target = direction.target.label
    domain = inst.carrier(direction.source)
    codomain = inst.carrier(direction.target)
    m = inst.map_for(direction)

    if inst.mode is Mode.FINITE:
        kinds_ok = (
            isinstance(domain, FiniteCarrier)
            and isinstance(codomain, FiniteCarrier)
            and isinstance(m, TableMap)
        )
    else:
        kinds_ok = (
            isinstance(domain, ResidueCarrier)
            and isinstance(codomain, ResidueCarrier)
            and isinstance(m, PiecewiseAffineMap)
        )
    if not kinds_ok:
        return [
            _violation(
                ViolationKind.KIND_MISMATCH,
                name,
                f"{name} {source}->{target}: carriers and map do not match {inst.mode.value} mode",
            )
        ]
    if isinstance(m, TableMap):
        return _check_table(name, m, domain, codomain, target)
    return _check_pieces(name, m, domain, codomain, target)


def _check_table(
    name: str,
    table: TableMap,
    domain: FiniteCarrier,
    codomain: FiniteCarrier,
    target: str,
) -> list[Violation]:
    violations = []
    seen: set[str] = set()
    for key, _ in table.pairs:
        if key in seen:
            violations.append(
                _violation(ViolationKind.DUPLICATE_KEY, name, f"{name} has duplicate key {key!r}")
            )
        seen.add(key)

    for key in sorted(seen - domain.atoms):
        violations.append(
            _violation(
                ViolationKind.KEY_OUTSIDE_DOMAIN,
                name,
                f"{name} has key {key!r} outside its domain",
            )
        )

    preimages: dict[str, str] = {}
    for atom in sorted(domain.atoms):
        if atom not in table.lookup:
            violations.append(
                _violation(ViolationKind.NOT_TOTAL, name, f"{name} not total: {atom!r} has no image")
            )
            continue
        image = table.lookup[atom]
        if image not in codomain.atoms:
            violations.append(
                _violation(
                    ViolationKind.OUTSIDE_CODOMAIN,
                    name,
                    f"{name} maps {atom!r} to {image!r} outside {target}",
                )
            )
        if image in preimages:
            violations.append(
                _violation(
                    ViolationKind.NOT_INJECTIVE,
                    name,
                    f"{name} not injective: {preimages[image]!r} and {atom!r} both map to {image!r}",
                )
            )
        else:
            preimages[image] = atom
    return violations


def _check_pieces(
    name: str,
    m: PiecewiseAffineMap,
    domain: ResidueCarrier,
    codomain: ResidueCarrier,
    target: str,
) -> list[Violation]:
    violations = []
    segments = [guard_segments(piece.guard, domain) for piece in m.pieces]

    nonnegative = []
    for i, (piece, segs) in enumerate(zip(m.pieces, segments), start=1):
        bad = next((s.start for s in segs if piece(s.start) < 0), None)
        if bad is None:
            nonnegative.append(i - 1)
        else:
            violations.append(
                _violation(
                    ViolationKind.NEGATIVE_OUTPUT,
                    name,
                    f"{name} piece #{i} yields negative output {piece(bad)} at n={bad}",
                )
            )

    for i, j in combinations(range(len(m.pieces)), 2):
        common = _first_shared(segments[i], segments[j])
        if common is not None:
            violations.append(
                _violation(
                    ViolationKind.OVERLAPPING_GUARDS,
                    name,
                    f"{name} pieces #{i + 1} and #{j + 1} both admit n={common}",
                )
            )

    gap = first_uncovered(domain, (piece.guard for piece in m.pieces))
    if gap is not None:
        violations.append(
            _violation(ViolationKind.NOT_TOTAL, name, f"{name} not total: no piece admits n={gap}")
        )

    images = {i: [s.image(m.pieces[i]) for s in segments[i]] for i in nonnegative}
    for i in nonnegative:
        for image in images[i]:
            outside = first_outside(image, codomain)
            if outside is not None:
                n = m.pieces[i].solve(outside)
                violations.append(
                    _violation(
                        ViolationKind.OUTSIDE_CODOMAIN,
                        name,
                        f"{name} maps {n} to {outside} outside {target}",
                    )
                )
                break

    for i, j in combinations(nonnegative, 2):
        common = _first_shared(images[i], images[j])
        if common is not None:
            ni, nj = m.pieces[i].solve(common), m.pieces[j].solve(common)
            violations.append(
                _violation(
                    ViolationKind.NOT_INJECTIVE,
                    name,
                    f"{name} not injective: {ni} and {nj} both map to {common}",
                )
            )
    return violations


def _first_shared(left, right) -> Optional[int]:
    found = [x for a in left for b in right if (x := first_common(a, b)) is not None]
    return min(found) if found else None
