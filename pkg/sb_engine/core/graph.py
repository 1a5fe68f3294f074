"""DOT export of the chain step graph."""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader

from .chains import ChainWalker
from .decomposition import checked_elements
from .errors import SBError
from .models import ChainKind, Direction, Instance, Mode

# Configure templates
templates = Environment(
    loader=FileSystemLoader(str(Path(__file__).parent.parent / "templates")),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

CHAIN_COLORS = {
    ChainKind.CYCLIC: "lightblue",
    ChainKind.P_STOPPER: "palegreen",
    ChainKind.Q_STOPPER: "orange",
    ChainKind.NON_STOPPER: "plum",
    ChainKind.UNKNOWN: "lightgray",
}


@dataclass(frozen=True)
class _Node:
    id: str
    color: str


@dataclass(frozen=True)
class _Edge:
    source: str
    target: str
    map: str


def _quote(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def render_dot(inst: Instance, window: Optional[int] = None) -> str:
    """
    Render the step graph: one node per tagged element, one edge per chain step.

    Nodes are labelled P:v / Q:v and filled by the classification of their
    chain. Countable instances are cut to values below the window, keeping
    only edges whose both ends are drawn.

    Args:
        inst: Valid instance
        window: Exclusive value bound, required in countable mode

    Returns:
        DOT source text
    """
    if inst.mode is Mode.COUNTABLE and window is None:
        raise SBError("a window is required to render a countable instance")
    walker = ChainWalker(inst)
    elements = checked_elements(inst, window)
    drawn = set(elements)
    nodes = []
    edges = []
    for e in elements:
        kind = walker.classify(e).kind
        nodes.append(_Node(_quote(str(e)), CHAIN_COLORS[kind]))
        target = walker.step(e)
        if target in drawn:
            edges.append(_Edge(_quote(str(e)), _quote(str(target)), Direction.leaving(e.polarity).value))
    caption = "all elements" if inst.mode is Mode.FINITE else f"values < {window}"
    return templates.get_template("step_graph.dot.j2").render(
        window=caption,
        legend=[(kind.value, color) for kind, color in CHAIN_COLORS.items()],
        nodes=nodes,
        edges=edges,
    )
