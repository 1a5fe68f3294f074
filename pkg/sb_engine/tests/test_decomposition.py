"""Tests for chain decomposition and DOT rendering."""
import pytest

from sb_engine.core.decomposition import decompose
from sb_engine.core.errors import SBError
from sb_engine.core.generator import random_finite_instance
from sb_engine.core.graph import CHAIN_COLORS, render_dot
from sb_engine.core.models import ChainKind, Mode

from .conftest import NATURALS, countable, piece, pieces, successor_instance


def test_two_cycle_decomposition(two_cycle):
    report = decompose(two_cycle)
    assert report.mode is Mode.FINITE
    assert report.checked_window == "all elements"
    assert len(report.chains) == 1
    chain = report.chains[0]
    assert chain.kind is ChainKind.CYCLIC
    assert chain.period == 2
    assert chain.members == ["P:a", "Q:x"]


def test_finite_decomposition_partitions_carriers():
    """Member lists cover every tagged element exactly once."""
    for seed in range(50):
        inst = random_finite_instance(1 + seed % 30, seed)
        report = decompose(inst)
        members = [m for chain in report.chains for m in chain.members]
        expected = [f"P:{a}" for a in inst.p.atoms] + [f"Q:{a}" for a in inst.q.atoms]
        assert sorted(members) == sorted(expected)
        assert sum(report.counts.values()) == len(report.chains)
        assert report.counts[ChainKind.CYCLIC.value] == len(report.chains)


def test_successor_decomposition(successor):
    report = decompose(successor, 10)
    assert report.checked_window == "values < 10"
    assert [chain.kind for chain in report.chains] == [ChainKind.P_STOPPER, ChainKind.Q_STOPPER]
    assert report.chains[0].initial == "P:0"
    assert report.chains[0].members[:3] == ["P:0", "P:2", "P:4"]
    assert len(report.chains[0].members) == 10


def test_doubling_decomposition(doubling):
    report = decompose(doubling, 8)
    assert report.counts["cyclic"] == 1
    assert report.counts["p-stopper"] == 4
    assert report.counts["q-stopper"] == 0
    cycle = next(chain for chain in report.chains if chain.kind is ChainKind.CYCLIC)
    assert cycle.members == ["P:0", "Q:0"]


def test_countable_cycle_members_in_step_order():
    """Cycles list members along the chain, not in scan order."""
    swap = pieces(piece(1, 1, modulus=2, residues=(0,)), piece(1, -1, modulus=2, residues=(1,)))
    inst = countable(NATURALS, NATURALS, swap, pieces(piece(1, 0)))
    report = decompose(inst, 4)
    assert [chain.members for chain in report.chains] == [
        ["P:0", "Q:1", "P:1", "Q:0"],
        ["P:2", "Q:3", "P:3", "Q:2"],
    ]
    assert [chain.period for chain in report.chains] == [4, 4]
    assert decompose(inst, 1).chains[0].members == ["P:0", "Q:0"]


def test_non_stopper_decomposition(non_stopper):
    """All values below the window fall into the one non-stopper."""
    report = decompose(non_stopper, 12)
    assert report.counts["non-stopper"] == 1
    assert len(report.chains[0].members) == 24


def test_default_window(successor):
    assert decompose(successor).checked_window == "values < 64"


def test_unknown_chains_listed_separately():
    report = decompose(successor_instance(budget=1), 6)
    assert report.counts["unknown"] > 0
    assert all(len(chain.members) == 1 for chain in report.chains if chain.kind is ChainKind.UNKNOWN)


def test_render_dot_finite(two_cycle):
    dot = render_dot(two_cycle)
    assert dot.startswith("digraph chains {")
    assert '"P:a" -> "Q:x" [label="f"];' in dot
    assert '"Q:x" -> "P:a" [label="g"];' in dot
    assert f'fillcolor="{CHAIN_COLORS[ChainKind.CYCLIC]}"' in dot


def test_render_dot_cuts_edges_at_window(successor):
    dot = render_dot(successor, 3)
    assert '"P:2" -> "Q:3"' not in dot
    assert '"P:1" -> "Q:2" [label="f"];' in dot
    assert '"P:2" [label="P:2"' in dot


def test_render_dot_needs_window(successor):
    with pytest.raises(SBError):
        render_dot(successor)
