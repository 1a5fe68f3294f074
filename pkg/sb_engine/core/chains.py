"""Chain stepping, the chain order, initial elements and chain classification.

A chain step moves right along a chain (f from P, g from Q); walking left
uses the inverses. Every walk here is deterministic because f and g are
injective, and every walk is bounded: by |P| + |Q| in finite mode, by the
instance step budget in countable mode. Walks that run out of budget return
``Unknown`` instead of guessing.
"""
import logging
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, Optional

from .domain import apply, require_valid, well_formed
from .errors import MalformedElement
from .models import (
    AffinePiece,
    ChainClassification,
    Cyclic,
    Direction,
    DivergenceCertificate,
    Instance,
    Mode,
    NoInitial,
    NonStopper,
    PiecewiseAffineMap,
    Polarity,
    PStopper,
    QStopper,
    ResidueCarrier,
    TaggedElement,
    Unknown,
)
from .progressions import nondecreasing_threshold

logger = logging.getLogger(__name__)

Verdict = bool | Unknown
InitialResult = TaggedElement | NoInitial | Unknown


class ChainWalker:
    """
    Chain operations over one valid instance.

    Classifications found by backward walks are remembered for every element
    the walk passed through, so scanning many elements of the same chain walks
    it once. Unknown results are never remembered.
    """

    def __init__(self, inst: Instance):
        self.inst = require_valid(inst)
        self.views = inst.inverse_views
        self.bound = inst.walk_bound
        # element -> (classification, backward distance to the initial element)
        self._known: dict[TaggedElement, tuple[ChainClassification, Optional[int]]] = {}

    # Stepping

    def require(self, e: TaggedElement) -> TaggedElement:
        if not well_formed(self.inst, e):
            raise MalformedElement(f"{e} is not an element of {e.polarity.label}")
        return e

    def step(self, e: TaggedElement) -> TaggedElement:
        """Take one step right: f from P-side, g from Q-side."""
        self.require(e)
        direction = Direction.leaving(e.polarity)
        return TaggedElement(e.polarity.flip(), apply(self.inst, direction, e.val))

    def steps(self, e: TaggedElement, n: int) -> TaggedElement:
        if n < 0:
            raise ValueError(f"step count must be >= 0, got {n}")
        self.require(e)
        for _ in range(n):
            e = self.step(e)
        return e

    def step_back(self, e: TaggedElement) -> Optional[tuple[TaggedElement, Optional[AffinePiece]]]:
        """
        Take one step left through the inverse of the incoming map.

        Returns:
            (previous element, piece used) or None when e is initial
        """
        found = self.views[Direction.entering(e.polarity)].solve(e.val)
        if found is None:
            return None
        value, piece = found
        return TaggedElement(e.polarity.flip(), value), piece

    def is_initial(self, e: TaggedElement) -> bool:
        self.require(e)
        return self.step_back(e) is None

    # Order

    @cached_property
    def threshold(self) -> Optional[int]:
        """
        Value from which no forward step decreases a value, if one exists.

        Only countable instances have one; once a forward walk is at or above
        it, values never go down again.
        """
        if self.inst.mode is not Mode.COUNTABLE:
            return None
        bounds = []
        for m in (self.inst.f, self.inst.g):
            assert isinstance(m, PiecewiseAffineMap)
            for piece in m.pieces:
                t = nondecreasing_threshold(piece)
                if t is None:
                    return None
                bounds.append(t)
        return max(bounds, default=0)

    def _beyond(self, cur: TaggedElement, y: TaggedElement) -> bool:
        t = self.threshold
        return t is not None and cur.val >= t and cur.val > y.val

    def _le_search(self, x: TaggedElement, y: TaggedElement) -> Iterator[Optional[bool]]:
        # Yields None once per step taken while undecided, then the verdict.
        if x == y:
            yield True
            return
        if self._beyond(x, y):
            yield False
            return
        cur = x
        for _ in range(self.bound):
            cur = self.step(cur)
            if cur == y:
                yield True
                return
            # the forward map is injective, so the first revisit is of x
            if cur == x or self._beyond(cur, y):
                yield False
                return
            yield None

    def le(self, x: TaggedElement, y: TaggedElement) -> Verdict:
        """
        Check x precedes y: some n >= 0 steps right from x reach y.

        Returns:
            True or False when decided, Unknown when the budget runs out
        """
        if not (well_formed(self.inst, x) and well_formed(self.inst, y)):
            return x == y
        spent = 0
        for outcome in self._le_search(x, y):
            if outcome is not None:
                return outcome
            spent += 1
        logger.debug(f"chain_le({x}, {y}) undecided after {spent} steps")
        return Unknown(spent)

    def eq(self, x: TaggedElement, y: TaggedElement) -> Verdict:
        """
        Check x and y lie on the same chain.

        Both directions are searched in lockstep so a short positive answer in
        one direction is not held up by the other exhausting its budget.
        Elements that are not well-formed compare by plain equality.
        """
        if not (well_formed(self.inst, x) and well_formed(self.inst, y)):
            return x == y
        searches = [self._le_search(x, y), self._le_search(y, x)]
        verdicts: list[Verdict | None] = [None, None]
        spent = [0, 0]
        while any(v is None for v in verdicts):
            for i, search in enumerate(searches):
                if verdicts[i] is not None:
                    continue
                outcome = next(search, Unknown(spent[i]))
                if outcome is True:
                    return True
                if outcome is None:
                    spent[i] += 1
                else:
                    verdicts[i] = outcome
        if all(v is False for v in verdicts):
            return False
        return Unknown(sum(spent))

    # Initial elements and classification

    @cached_property
    def state_modulus(self) -> int:
        """Lcm of every modulus in the instance; residues mod it fix which pieces apply."""
        moduli = [
            c.modulus for c in (self.inst.p, self.inst.q) if isinstance(c, ResidueCarrier)
        ]
        for m in (self.inst.f, self.inst.g):
            if isinstance(m, PiecewiseAffineMap):
                moduli.extend(piece.guard.modulus for piece in m.pieces)
        return lcm(*moduli) if moduli else 1

    def trace(self, e: TaggedElement) -> tuple[InitialResult, Optional[int]]:
        """
        Walk left from e until the chain is decided.

        Returns:
            (result, distance) where result is the initial element, NoInitial
            (cycle or certified non-stopper) or Unknown, and distance is the
            number of steps right from the initial element to e
        """
        self.require(e)
        if e in self._known:
            return self._from_known(*self._known[e])

        countable = self.inst.mode is Mode.COUNTABLE
        modulus = self.state_modulus
        path = [e]
        states: dict[tuple[Polarity, int], int] = {}
        cur = e
        for k in range(1, self.bound + 1):
            back = self.step_back(cur)
            if back is None:
                self._remember(path, self._stopper(cur), len(path) - 1)
                return cur, k - 1
            prev, piece = back
            if prev == e:
                self._remember(path, Cyclic(k), None)
                return NoInitial(period=k), None
            if prev in self._known:
                classification, distance = self._known[prev]
                total = None if distance is None else distance + k
                self._remember(path, classification, total)
                return self._from_known(classification, total)

            if countable:
                if piece.is_open_translation:
                    states[(cur.polarity, cur.val % modulus)] = k - 1
                else:
                    states.clear()
                j = states.get((prev.polarity, prev.val % modulus))
                if j is not None and prev.val > path[j].val:
                    certificate = DivergenceCertificate(
                        anchor=path[j], period=k - j, shift=prev.val - path[j].val
                    )
                    logger.debug(f"{e} lies on a non-stopper: {certificate}")
                    path.append(prev)
                    self._remember(path, NonStopper(certificate), None)
                    return NoInitial(certificate=certificate), None
            path.append(prev)
            cur = prev

        logger.debug(f"backward walk from {e} undecided after {self.bound} steps")
        return Unknown(self.bound), None

    def _stopper(self, initial: TaggedElement) -> ChainClassification:
        if initial.polarity is Polarity.P:
            return PStopper(initial)
        return QStopper(initial)

    def _remember(self, path, classification, distance):
        for i, element in enumerate(path):
            self._known[element] = (classification, None if distance is None else distance - i)

    @staticmethod
    def _from_known(classification, distance) -> tuple[InitialResult, Optional[int]]:
        if isinstance(classification, (PStopper, QStopper)):
            return classification.initial, distance
        if isinstance(classification, Cyclic):
            return NoInitial(period=classification.period), None
        return NoInitial(certificate=classification.certificate), None

    def find_initial(self, e: TaggedElement) -> InitialResult:
        return self.trace(e)[0]

    def classify(self, e: TaggedElement) -> ChainClassification:
        result, _ = self.trace(e)
        if isinstance(result, TaggedElement):
            return self._stopper(result)
        if isinstance(result, Unknown):
            return result
        if result.certificate is not None:
            return NonStopper(result.certificate)
        return Cyclic(result.period)

    def in_q_stopper(self, e: TaggedElement) -> Verdict:
        classification = self.classify(e)
        if isinstance(classification, Unknown):
            return classification
        return isinstance(classification, QStopper)

    def is_minimal(self, e: TaggedElement, candidates: Iterable[TaggedElement]) -> Verdict:
        """
        Check e is minimal: no other candidate precedes it.

        Equivalent to is_initial on the candidates given; used to cross-check
        the image-based definition.
        """
        self.require(e)
        undecided = None
        for x in candidates:
            if x == e:
                continue
            verdict = self.le(x, e)
            if verdict is True:
                return False
            if isinstance(verdict, Unknown):
                undecided = verdict
        return undecided if undecided is not None else True


def chain_step(inst: Instance, e: TaggedElement) -> TaggedElement:
    """
    Take one step right along the chain.

    Raises:
        MalformedElement: If e is not well-formed for the instance
    """
    return ChainWalker(inst).step(e)


def chain_steps(inst: Instance, e: TaggedElement, n: int) -> TaggedElement:
    """Take n steps right along the chain; n = 0 returns e."""
    return ChainWalker(inst).steps(e, n)


def chain_le(inst: Instance, x: TaggedElement, y: TaggedElement) -> Verdict:
    """Check whether some number of steps right from x reaches y."""
    return ChainWalker(inst).le(x, y)


def chain_eq(inst: Instance, x: TaggedElement, y: TaggedElement) -> Verdict:
    """Check whether x and y lie on the same chain."""
    return ChainWalker(inst).eq(x, y)


def is_initial(inst: Instance, e: TaggedElement) -> bool:
    """Check whether e is outside the image of the map entering its side."""
    return ChainWalker(inst).is_initial(e)


def find_initial(inst: Instance, e: TaggedElement) -> InitialResult:
    """Find the initial element of e's chain by walking left."""
    return ChainWalker(inst).find_initial(e)


def classify_chain(inst: Instance, e: TaggedElement) -> ChainClassification:
    """Classify e's chain as cyclic, P-stopper, Q-stopper, non-stopper or unknown."""
    return ChainWalker(inst).classify(e)


def in_q_stopper(inst: Instance, e: TaggedElement) -> Verdict:
    """Check whether e's chain has its initial element on the Q side."""
    return ChainWalker(inst).in_q_stopper(e)


def is_minimal(inst: Instance, e: TaggedElement, candidates: Iterable[TaggedElement]) -> Verdict:
    """Check that no candidate other than e precedes e in the chain order."""
    return ChainWalker(inst).is_minimal(e, candidates)
