"""Chain decomposition of the checked elements."""
import logging
from typing import Optional

from .chains import ChainWalker
from .config import DEFAULT_DECOMPOSE_WINDOW
from .domain import carrier_values
from .models import (
    ChainEntry,
    ChainKind,
    Cyclic,
    DecompositionReport,
    Instance,
    Mode,
    NonStopper,
    Polarity,
    PStopper,
    QStopper,
    TaggedElement,
    Unknown,
)

logger = logging.getLogger(__name__)


def checked_elements(inst: Instance, window: Optional[int]) -> list[TaggedElement]:
    """All tagged elements in finite mode, else those with values below the window."""
    return [
        TaggedElement(polarity, v)
        for polarity in Polarity
        for v in carrier_values(inst.carrier(polarity), window)
    ]


def cycle_members(walker: ChainWalker, e: TaggedElement, period: int) -> list[TaggedElement]:
    """Members of a cyclic chain in step order, starting from the smallest element."""
    members = [e]
    for _ in range(period - 1):
        members.append(walker.step(members[-1]))
    start = min(range(len(members)), key=lambda i: members[i].sort_key)
    return members[start:] + members[:start]


def decompose(inst: Instance, window: Optional[int] = None) -> DecompositionReport:
    """
    Partition the checked elements into chains.

    In finite mode every chain is listed with all of its members, so the
    member lists partition P and Q exactly. In countable mode only the
    members below the window are listed. Cycle members follow step order
    from the smallest member in both modes.

    Args:
        inst: Valid instance
        window: Exclusive value bound for countable mode (default 64)

    Returns:
        DecompositionReport with chains sorted by their anchor element (the
        initial element, the smallest cycle member, or the first member met)
    """
    finite = inst.mode is Mode.FINITE
    if not finite and window is None:
        window = DEFAULT_DECOMPOSE_WINDOW
    walker = ChainWalker(inst)
    chains: dict[object, ChainEntry] = {}
    cycle_of: dict[TaggedElement, TaggedElement] = {}
    non_stoppers: list[tuple[TaggedElement, ChainEntry]] = []

    for e in checked_elements(inst, window):
        classification = walker.classify(e)
        if isinstance(classification, (PStopper, QStopper)):
            key = ("stopper", classification.initial)
            entry = chains.setdefault(
                key, ChainEntry(kind=classification.kind, initial=str(classification.initial))
            )
        elif isinstance(classification, Cyclic):
            if e not in cycle_of:
                members = cycle_members(walker, e, classification.period)
                for member in members:
                    cycle_of[member] = members[0]
                if not finite:
                    members = [m for m in members if m.val < window]
                chains[("cyclic", cycle_of[e])] = ChainEntry(
                    kind=ChainKind.CYCLIC,
                    period=classification.period,
                    members=[str(m) for m in members],
                )
            continue
        elif isinstance(classification, NonStopper):
            entry = next((en for rep, en in non_stoppers if walker.eq(rep, e) is True), None)
            if entry is None:
                entry = ChainEntry(kind=ChainKind.NON_STOPPER)
                non_stoppers.append((e, entry))
                chains[("non-stopper", e)] = entry
        else:
            assert isinstance(classification, Unknown)
            entry = ChainEntry(kind=ChainKind.UNKNOWN)
            chains[("unknown", e)] = entry
        entry.members.append(str(e))

    entries = [chains[key] for key in sorted(chains, key=lambda key: key[1].sort_key)]
    counts = {kind.value: 0 for kind in ChainKind}
    for entry in entries:
        counts[entry.kind.value] += 1
    report = DecompositionReport(
        mode=inst.mode,
        checked_window="all elements" if finite else f"values < {window}",
        chains=entries,
        counts=counts,
    )
    logger.info(f"decomposition over {report.checked_window}: {counts}")
    return report
