"""Data models for carriers, injections, instances, chains and reports."""
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from operator import itemgetter
from typing import ClassVar, Optional

from sqlmodel import Field, SQLModel

from .config import DEFAULT_STEP_BUDGET

# A carrier value: an atom in finite mode, a natural number in countable mode
Value = str | int


class Mode(str, Enum):
    """Instance mode enumeration."""

    FINITE = "finite"
    COUNTABLE = "countable"


class Polarity(str, Enum):
    """Side of a tagged element."""

    P = "p"
    Q = "q"

    def flip(self) -> "Polarity":
        """Get the opposite polarity."""
        return Polarity.Q if self is Polarity.P else Polarity.P

    @property
    def label(self) -> str:
        return self.value.upper()


class Direction(str, Enum):
    """Which injection: f maps P to Q, g maps Q to P."""

    F = "f"
    G = "g"

    @property
    def source(self) -> Polarity:
        return Polarity.P if self is Direction.F else Polarity.Q

    @property
    def target(self) -> Polarity:
        return self.source.flip()

    @classmethod
    def leaving(cls, polarity: Polarity) -> "Direction":
        """Map applied by a forward step from an element of this polarity."""
        return cls.F if polarity is Polarity.P else cls.G

    @classmethod
    def entering(cls, polarity: Polarity) -> "Direction":
        """Map whose image an element of this polarity may lie in."""
        return cls.G if polarity is Polarity.P else cls.F


def value_key(value: Value) -> tuple:
    """Total sort key over mixed atoms and naturals (naturals first, numerically)."""
    if isinstance(value, int):
        return (0, value, "")
    return (1, 0, value)


# Carriers


@dataclass(frozen=True)
class FiniteCarrier:
    """Explicit finite set of atoms."""

    atoms: frozenset[str]

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class ResidueCarrier:
    """The naturals n with n mod modulus in residues."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not self.residues:
            raise ValueError("residue set must be non-empty")
        bad = sorted(r for r in self.residues if not 0 <= r < self.modulus)
        if bad:
            raise ValueError(f"residues out of range for modulus {self.modulus}: {bad}")

    @classmethod
    def naturals(cls) -> "ResidueCarrier":
        return cls(1, frozenset({0}))

    def contains(self, n: int) -> bool:
        return n % self.modulus in self.residues


Carrier = FiniteCarrier | ResidueCarrier


# Injections


@dataclass(frozen=True)
class TableMap:
    """Finite lookup table, kept as key-sorted pairs so duplicates stay visible."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=itemgetter(0))))

    @classmethod
    def from_dict(cls, table: dict[str, str]) -> "TableMap":
        return cls(tuple(table.items()))

    @cached_property
    def lookup(self) -> dict[str, str]:
        table: dict[str, str] = {}
        for key, value in self.pairs:
            table.setdefault(key, value)
        return table


@dataclass(frozen=True)
class Guard:
    """Inputs n with n mod modulus in residues and lo <= n <= hi (hi None = unbounded)."""

    modulus: int
    residues: frozenset[int]
    lo: Optional[int] = None
    hi: Optional[int] = None

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"guard modulus must be >= 1, got {self.modulus}")
        if any(not 0 <= r < self.modulus for r in self.residues):
            raise ValueError(f"guard residues out of range for modulus {self.modulus}")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty guard range [{self.lo}, {self.hi}]")
        # a lower bound of 0 admits every natural, so it is dropped
        if self.lo == 0:
            object.__setattr__(self, "lo", None)

    def admits(self, n: int) -> bool:
        if n % self.modulus not in self.residues:
            return False
        if self.lo is not None and n < self.lo:
            return False
        return self.hi is None or n <= self.hi


@dataclass(frozen=True)
class AffinePiece:
    """n -> a*n + b on the inputs admitted by the guard."""

    guard: Guard
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("coefficient must be >= 1")

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def solve(self, x: int) -> int | None:
        """Exact preimage candidate of x under the affine action, ignoring the guard."""
        diff = x - self.b
        if diff < 0 or diff % self.a:
            return None
        return diff // self.a

    @property
    def is_open_translation(self) -> bool:
        return self.a == 1 and self.guard.hi is None


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """Ordered affine pieces with pairwise disjoint guards."""

    pieces: tuple[AffinePiece, ...]


InjectionMap = TableMap | PiecewiseAffineMap


@dataclass(frozen=True)
class Instance:
    """Two carriers with injections f: P -> Q and g: Q -> P."""

    p: Carrier
    q: Carrier
    f: InjectionMap
    g: InjectionMap
    mode: Mode
    step_budget: int = DEFAULT_STEP_BUDGET

    def carrier(self, polarity: Polarity) -> Carrier:
        return self.p if polarity is Polarity.P else self.q

    def map_for(self, direction: Direction) -> InjectionMap:
        return self.f if direction is Direction.F else self.g

    def with_budget(self, step_budget: int) -> "Instance":
        return replace(self, step_budget=step_budget)

    @property
    def walk_bound(self) -> int:
        """
        Maximum number of steps any single walk may take.

        Finite walks revisit within |P| + |Q| steps; countable walks use the budget.
        """
        if self.mode is Mode.FINITE:
            return len(self.p) + len(self.q)
        return self.step_budget

    @cached_property
    def report(self) -> "ValidationReport":
        """Validation report, computed once per instance."""
        from .domain import validate_instance

        return validate_instance(self)

    @cached_property
    def inverse_views(self) -> dict:
        """Inverse views of f and g, built once per instance."""
        from .inverses import build_inverse_views

        return build_inverse_views(self)


# Chains


@dataclass(frozen=True)
class TaggedElement:
    """A carrier value tagged with the side it belongs to."""

    polarity: Polarity
    val: Value

    def __str__(self) -> str:
        return f"{self.polarity.label}:{self.val}"

    @property
    def sort_key(self) -> tuple:
        return (self.polarity.value, value_key(self.val))


class ChainKind(str, Enum):
    """Chain taxonomy."""

    CYCLIC = "cyclic"
    P_STOPPER = "p-stopper"
    Q_STOPPER = "q-stopper"
    NON_STOPPER = "non-stopper"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DivergenceCertificate:
    """
    Evidence that a backward walk never stops.

    From ``anchor`` the walk returns, after ``period`` backward steps, to the
    same polarity and residue state at a value larger by ``shift`` > 0, using
    translation pieces only, so it repeats forever.
    """

    anchor: TaggedElement
    period: int
    shift: int


@dataclass(frozen=True)
class Unknown:
    """Undecided within the step budget."""

    steps_spent: int
    kind: ClassVar[ChainKind] = ChainKind.UNKNOWN


@dataclass(frozen=True)
class NoInitial:
    """The chain has no initial element: either a cycle or a certified non-stopper."""

    period: Optional[int] = None
    certificate: Optional[DivergenceCertificate] = None


@dataclass(frozen=True)
class Cyclic:
    period: int
    kind: ClassVar[ChainKind] = ChainKind.CYCLIC


@dataclass(frozen=True)
class PStopper:
    initial: TaggedElement
    kind: ClassVar[ChainKind] = ChainKind.P_STOPPER


@dataclass(frozen=True)
class QStopper:
    initial: TaggedElement
    kind: ClassVar[ChainKind] = ChainKind.Q_STOPPER


@dataclass(frozen=True)
class NonStopper:
    certificate: DivergenceCertificate
    kind: ClassVar[ChainKind] = ChainKind.NON_STOPPER


ChainClassification = Cyclic | PStopper | QStopper | NonStopper | Unknown


# Witness


class Branch(str, Enum):
    """Which case of the piecewise witness produced the output."""

    VIA_G_INVERSE = "g-inverse"
    VIA_F = "f"


class Bias(str, Enum):
    """
    Map used on chains where either choice works.

    F uses g-inverse on Q-stoppers only; G_INVERSE uses f on P-stoppers only.
    """

    F = "f"
    G_INVERSE = "g-inverse"


@dataclass(frozen=True)
class WitnessResult:
    input: Value
    output: Value
    branch: Branch


# Report Models


class ViolationKind(str, Enum):
    """Validation violation kinds."""

    KIND_MISMATCH = "kind-mismatch"
    DUPLICATE_KEY = "duplicate-key"
    KEY_OUTSIDE_DOMAIN = "key-outside-domain"
    NOT_TOTAL = "not-total"
    OUTSIDE_CODOMAIN = "outside-codomain"
    NOT_INJECTIVE = "not-injective"
    NEGATIVE_OUTPUT = "negative-output"
    OVERLAPPING_GUARDS = "overlapping-guards"


class Violation(SQLModel):
    """A single validation failure."""

    kind: ViolationKind
    subject: Optional[str] = Field(default=None, description="Map name: f or g")
    message: str


class ValidationReport(SQLModel):
    """All violations found in an instance; empty means valid."""

    violations: list[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


class CounterexampleKind(str, Enum):
    CODOMAIN = "codomain"
    INJECTIVE = "injective"
    SURJECTIVE = "surjective"
    UNKNOWN = "unknown"


class Counterexample(SQLModel):
    """A failed or undecided bijectivity check."""

    kind: CounterexampleKind
    values: list[int | str]
    detail: str


class BijectionCheckReport(SQLModel):
    """Result of verifying the witness over a carrier or a value window."""

    codomain_ok: bool
    injective_ok: bool
    surjective_ok: bool
    counterexamples: list[Counterexample] = Field(default_factory=list)
    checked_window: str
    bias: Bias = Bias.F

    @property
    def bijective(self) -> bool:
        return self.codomain_ok and self.injective_ok and self.surjective_ok

    @property
    def undecided(self) -> bool:
        return any(c.kind is CounterexampleKind.UNKNOWN for c in self.counterexamples)

    @property
    def refuted(self) -> bool:
        return any(c.kind is not CounterexampleKind.UNKNOWN for c in self.counterexamples)


class LemmaResult(SQLModel):
    name: str
    checked: int = 0
    undecided: int = 0
    failures: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class LemmaReport(SQLModel):
    checked_window: str
    lemmas: list[LemmaResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(lemma.passed for lemma in self.lemmas)

    def get(self, name: str) -> LemmaResult:
        return next(lemma for lemma in self.lemmas if lemma.name == name)


class ChainEntry(SQLModel):
    """One chain in a decomposition."""

    kind: ChainKind
    initial: Optional[str] = None
    period: Optional[int] = None
    members: list[str] = Field(default_factory=list)


class DecompositionReport(SQLModel):
    """Chains met by the checked elements, with counts by category."""

    mode: Mode
    checked_window: str
    chains: list[ChainEntry] = Field(default_factory=list)
    counts: dict[str, int] = Field(default_factory=dict)
