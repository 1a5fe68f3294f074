"""The bijective witness h, its inverse, and executable bijectivity checks.

With the default bias, h(p) is g-inverse(p) when p's chain is a Q-stopper
and f(p) otherwise. The inverse follows the surjectivity argument directly:
q on a Q-stopper comes from g(q), any other q from f-inverse(q).
"""
import logging
from itertools import combinations
from typing import Optional

from .chains import ChainWalker
from .domain import apply, carrier_values, member
from .errors import BudgetExhausted, NotInCarrier, SBError, WrongValueKind
from .inverses import inverse
from .models import (
    BijectionCheckReport,
    Bias,
    Branch,
    ChainClassification,
    Counterexample,
    CounterexampleKind,
    Direction,
    Instance,
    LemmaReport,
    LemmaResult,
    Mode,
    Polarity,
    PStopper,
    QStopper,
    TaggedElement,
    Unknown,
    Value,
    WitnessResult,
    value_key,
)

logger = logging.getLogger(__name__)

# Lemma names used in LemmaReport
INITIAL_UNIQUE = "initial-unique"
INITIAL_MINIMAL = "initial-minimal"
INITIAL_REPLAY = "initial-replay"
G_IMAGE_WHEN_Q_STOPPER = "g-image-when-q-stopper"
F_IMAGE_WHEN_NOT_Q_STOPPER = "f-image-when-not-q-stopper"
WITNESS_PRESERVES_CHAIN = "witness-preserves-chain"


class Witness:
    """Evaluates h and its inverse over one instance, sharing a chain walker."""

    def __init__(self, inst: Instance, bias: Bias = Bias.F, walker: Optional[ChainWalker] = None):
        self.inst = inst
        self.bias = bias
        self.walker = walker or ChainWalker(inst)

    def _classify(self, e: TaggedElement) -> ChainClassification:
        try:
            if not member(self.inst.carrier(e.polarity), e.val):
                raise NotInCarrier(f"{e.val!r} is not in {e.polarity.label}")
        except WrongValueKind as exc:
            raise NotInCarrier(str(exc)) from None
        classification = self.walker.classify(e)
        if isinstance(classification, Unknown):
            raise BudgetExhausted(str(e), classification.steps_spent)
        return classification

    def _uses_g_inverse(self, classification: ChainClassification) -> bool:
        if self.bias is Bias.F:
            return isinstance(classification, QStopper)
        return not isinstance(classification, PStopper)

    def evaluate(self, p: Value) -> WitnessResult:
        """
        Compute h(p).

        Raises:
            NotInCarrier: If p is not in P
            BudgetExhausted: If p's chain cannot be classified within budget
        """
        classification = self._classify(TaggedElement(Polarity.P, p))
        if self._uses_g_inverse(classification):
            return WitnessResult(p, inverse(self.inst, Direction.G, p), Branch.VIA_G_INVERSE)
        return WitnessResult(p, apply(self.inst, Direction.F, p), Branch.VIA_F)

    def invert(self, q: Value) -> Value:
        """
        Compute the p with h(p) = q.

        Raises:
            NotInCarrier: If q is not in Q
            BudgetExhausted: If q's chain cannot be classified within budget
        """
        classification = self._classify(TaggedElement(Polarity.Q, q))
        if self._uses_g_inverse(classification):
            return apply(self.inst, Direction.G, q)
        return inverse(self.inst, Direction.F, q)


def sb_witness(inst: Instance, p: Value, bias: Bias = Bias.F) -> WitnessResult:
    """
    Evaluate the Schroeder-Bernstein witness at p.

    Args:
        inst: Valid instance
        p: Value in P
        bias: Which map to use on chains where either works

    Returns:
        WitnessResult with the output in Q and the branch taken
    """
    return Witness(inst, bias).evaluate(p)


def sb_witness_inverse(inst: Instance, q: Value, bias: Bias = Bias.F) -> Value:
    """Find the unique p in P with sb_witness(p).output == q."""
    return Witness(inst, bias).invert(q)


def _checked_values(inst: Instance, polarity: Polarity, window: Optional[int]) -> list[Value]:
    return list(carrier_values(inst.carrier(polarity), window))


def _describe_window(inst: Instance, window: Optional[int]) -> str:
    if inst.mode is Mode.FINITE:
        return f"all of P ({len(inst.p)}) and Q ({len(inst.q)})"
    return f"values < {window}"


def _require_window(inst: Instance, window: Optional[int]) -> None:
    if inst.mode is Mode.COUNTABLE and window is None:
        raise ValueError("a value window is required in countable mode")


def _counterexample_key(c: Counterexample) -> tuple:
    return (c.kind.value, [value_key(v) for v in c.values])


def check_bijection(
    inst: Instance,
    window: Optional[int] = None,
    bias: Bias = Bias.F,
) -> BijectionCheckReport:
    """
    Verify that h maps P into Q injectively and onto Q.

    Finite instances are checked exhaustively; countable instances over the
    carrier values below the window. Surjectivity is confirmed constructively
    through the witness inverse. An element whose chain cannot be classified
    is reported as an unknown counterexample without aborting the rest.

    Args:
        inst: Valid instance
        window: Exclusive value bound, required in countable mode
        bias: Which map to use on chains where either works

    Returns:
        BijectionCheckReport with canonically sorted counterexamples
    """
    _require_window(inst, window)
    witness = Witness(inst, bias)
    counterexamples: list[Counterexample] = []
    codomain_ok = injective_ok = surjective_ok = True

    hit: dict[Value, Value] = {}
    for p in _checked_values(inst, Polarity.P, window):
        try:
            result = witness.evaluate(p)
        except BudgetExhausted as exc:
            codomain_ok = False
            counterexamples.append(
                Counterexample(kind=CounterexampleKind.UNKNOWN, values=[p], detail=f"h(P:{p}): {exc}")
            )
            continue
        if not member(inst.q, result.output):
            codomain_ok = False
            counterexamples.append(
                Counterexample(
                    kind=CounterexampleKind.CODOMAIN,
                    values=[p, result.output],
                    detail=f"h({p}) = {result.output} is not in Q",
                )
            )
        if result.output in hit:
            injective_ok = False
            counterexamples.append(
                Counterexample(
                    kind=CounterexampleKind.INJECTIVE,
                    values=[hit[result.output], p, result.output],
                    detail=f"h({hit[result.output]}) = h({p}) = {result.output}",
                )
            )
        else:
            hit[result.output] = p

    for q in _checked_values(inst, Polarity.Q, window):
        try:
            p = witness.invert(q)
            confirmed = member(inst.p, p) and witness.evaluate(p).output == q
        except BudgetExhausted as exc:
            surjective_ok = False
            counterexamples.append(
                Counterexample(kind=CounterexampleKind.UNKNOWN, values=[q], detail=f"h^-1(Q:{q}): {exc}")
            )
            continue
        except SBError as exc:
            p, confirmed = None, False
            logger.warning(f"inverting h at {q!r} failed: {exc}")
        if not confirmed:
            surjective_ok = False
            counterexamples.append(
                Counterexample(
                    kind=CounterexampleKind.SURJECTIVE,
                    values=[q],
                    detail=f"no confirmed preimage of {q} (candidate {p!r})",
                )
            )

    counterexamples.sort(key=_counterexample_key)
    report = BijectionCheckReport(
        codomain_ok=codomain_ok,
        injective_ok=injective_ok,
        surjective_ok=surjective_ok,
        counterexamples=counterexamples,
        checked_window=_describe_window(inst, window),
        bias=bias,
    )
    logger.info(
        f"bijection check over {report.checked_window}: "
        f"{len(counterexamples)} counterexample(s)"
    )
    return report


def _walk_limit(walker: ChainWalker, initials: list[TaggedElement]) -> Optional[int]:
    """Value from which a forward walk can no longer meet any of the initials, if one exists."""
    threshold = walker.threshold
    if threshold is None or not initials:
        return None
    return max(threshold, max(i.val for i in initials) + 1)


def _reached_initials(
    walker: ChainWalker, x: TaggedElement, limit: int, initials: set[TaggedElement]
) -> set[TaggedElement] | Unknown:
    """Initial elements other than x met walking right from x until values reach limit."""
    hits: set[TaggedElement] = set()
    cur = x
    if cur.val >= limit:
        return hits
    for _ in range(walker.bound):
        cur = walker.step(cur)
        if cur in initials:
            hits.add(cur)
        if cur == x or cur.val >= limit:
            return hits
    return Unknown(walker.bound)


def _initials_by_walks(
    walker: ChainWalker,
    initials: list[TaggedElement],
    elements: list[TaggedElement],
    limit: int,
    unique: LemmaResult,
    minimal: LemmaResult,
) -> None:
    # One bounded forward walk per element decides every (element, initial) pair.
    initial_set = set(initials)
    pairs = len(initials) * (len(initials) - 1) // 2
    unique.checked = pairs
    minimal.checked = len(initials) * len(elements)
    undecided_initials = 0
    for x in elements:
        hits = _reached_initials(walker, x, limit, initial_set)
        if isinstance(hits, Unknown):
            minimal.undecided += len(initials)
            if x in initial_set:
                undecided_initials += 1
            continue
        for i in sorted(hits, key=lambda e: e.sort_key):
            minimal.failures.append(f"{x} precedes initial {i}")
            if x in initial_set:
                unique.failures.append(f"distinct initial elements {x} and {i} share a chain")
    decided = len(initials) - undecided_initials
    unique.undecided = pairs - decided * (decided - 1) // 2


def _initials_pairwise(
    walker: ChainWalker,
    initials: list[TaggedElement],
    elements: list[TaggedElement],
    unique: LemmaResult,
    minimal: LemmaResult,
) -> None:
    for i1, i2 in combinations(initials, 2):
        unique.checked += 1
        verdict = walker.eq(i1, i2)
        if verdict is True:
            unique.failures.append(f"distinct initial elements {i1} and {i2} share a chain")
        elif isinstance(verdict, Unknown):
            unique.undecided += 1

    for i in initials:
        for x in elements:
            minimal.checked += 1
            verdict = walker.le(x, i)
            if isinstance(verdict, Unknown):
                minimal.undecided += 1
            elif verdict != (x == i):
                minimal.failures.append(f"{x} precedes initial {i}")


def lemma_suite(inst: Instance, window: Optional[int] = None) -> LemmaReport:
    """
    Run the chain and witness lemmas as universally quantified checks.

    Each lemma is evaluated over every tagged element of the finite carriers,
    or over the carrier values below the window. Every initial element found
    is checked. Undecided cases are counted separately and never reported as
    failures.

    Args:
        inst: Valid instance
        window: Exclusive value bound, required in countable mode

    Returns:
        LemmaReport with one LemmaResult per lemma
    """
    _require_window(inst, window)
    witness = Witness(inst)
    walker = witness.walker
    p_side = [TaggedElement(Polarity.P, v) for v in _checked_values(inst, Polarity.P, window)]
    q_side = [TaggedElement(Polarity.Q, v) for v in _checked_values(inst, Polarity.Q, window)]
    elements = p_side + q_side

    lemmas = {
        name: LemmaResult(name=name)
        for name in (
            INITIAL_UNIQUE,
            INITIAL_MINIMAL,
            INITIAL_REPLAY,
            G_IMAGE_WHEN_Q_STOPPER,
            F_IMAGE_WHEN_NOT_Q_STOPPER,
            WITNESS_PRESERVES_CHAIN,
        )
    }

    initials = sorted((e for e in elements if walker.is_initial(e)), key=lambda e: e.sort_key)
    unique = lemmas[INITIAL_UNIQUE]
    minimal = lemmas[INITIAL_MINIMAL]
    limit = _walk_limit(walker, initials)
    if limit is None:
        _initials_pairwise(walker, initials, elements, unique, minimal)
    else:
        _initials_by_walks(walker, initials, elements, limit, unique, minimal)

    replay = lemmas[INITIAL_REPLAY]
    for e in elements:
        result, distance = walker.trace(e)
        if not isinstance(result, TaggedElement):
            if isinstance(result, Unknown):
                replay.undecided += 1
            continue
        replay.checked += 1
        if not walker.is_initial(result) or walker.steps(result, distance) != e:
            replay.failures.append(f"{result} does not reach {e} in {distance} steps")

    g_image = lemmas[G_IMAGE_WHEN_Q_STOPPER]
    for e in p_side:
        verdict = walker.in_q_stopper(e)
        if isinstance(verdict, Unknown):
            g_image.undecided += 1
        elif verdict:
            g_image.checked += 1
            if walker.is_initial(e):
                g_image.failures.append(f"{e} is on a Q-stopper but not in the image of g")

    f_image = lemmas[F_IMAGE_WHEN_NOT_Q_STOPPER]
    for e in q_side:
        verdict = walker.in_q_stopper(e)
        if isinstance(verdict, Unknown):
            f_image.undecided += 1
        elif not verdict:
            f_image.checked += 1
            if walker.is_initial(e):
                f_image.failures.append(f"{e} is off Q-stoppers but not in the image of f")

    preserves = lemmas[WITNESS_PRESERVES_CHAIN]
    for e in p_side:
        try:
            output = witness.evaluate(e.val).output
        except BudgetExhausted:
            preserves.undecided += 1
            continue
        verdict = walker.eq(e, TaggedElement(Polarity.Q, output))
        if isinstance(verdict, Unknown):
            preserves.undecided += 1
            continue
        preserves.checked += 1
        if not verdict:
            preserves.failures.append(f"h({e.val}) = {output} leaves the chain of {e}")

    report = LemmaReport(checked_window=_describe_window(inst, window), lemmas=list(lemmas.values()))
    logger.info(f"lemma suite over {report.checked_window}: passed={report.passed}")
    return report
