"""Instance documents: parsing with located errors, and deterministic rendering.

A document is a JSON object with fields ``mode``, ``p``, ``q``, ``f``, ``g``
and, in countable mode, an optional ``budget``. Finite carriers are arrays of
atoms and finite maps are atom-to-atom objects; countable carriers are
``{modulus, residues}`` and countable maps are arrays of
``{guard: {modulus, residues, range?}, affine: {a, b}}`` pieces.
"""
import json
import re
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import StrictInt, StrictStr, ValidationError, field_validator, model_validator
from pydantic import Field as ItemField
from sqlmodel import Field, SQLModel

from .config import DEFAULT_STEP_BUDGET
from .errors import ParseError
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

Natural = Annotated[StrictInt, ItemField(ge=0)]


class CountableCarrierDocument(SQLModel):
    """Residue carrier: naturals n with n mod modulus in residues."""

    modulus: StrictInt = Field(ge=1)
    residues: list[Natural]

    class Config:
        """Pydantic config."""

        extra = "forbid"
        json_schema_extra = {"example": {"modulus": 2, "residues": [0]}}

    @model_validator(mode="after")
    def residues_in_range(self):
        if not self.residues:
            raise ValueError("residue set must be non-empty")
        bad = [r for r in self.residues if r >= self.modulus]
        if bad:
            raise ValueError(f"residues {bad} out of range for modulus {self.modulus}")
        return self


class GuardDocument(SQLModel):
    """Piece guard with an optional inclusive range; the upper bound may be null."""

    modulus: StrictInt = Field(ge=1)
    residues: list[Natural]
    range: Optional[tuple[Natural, Optional[Natural]]] = None

    class Config:
        """Pydantic config."""

        extra = "forbid"

    @model_validator(mode="after")
    def guard_consistent(self):
        bad = [r for r in self.residues if r >= self.modulus]
        if bad:
            raise ValueError(f"residues {bad} out of range for modulus {self.modulus}")
        if self.range is not None:
            lo, hi = self.range
            if hi is not None and lo > hi:
                raise ValueError(f"empty range [{lo}, {hi}]")
        return self


class AffineDocument(SQLModel):
    """Action n -> a*n + b."""

    a: StrictInt
    b: StrictInt

    class Config:
        """Pydantic config."""

        extra = "forbid"

    @field_validator("a")
    @classmethod
    def coefficient_positive(cls, a: int) -> int:
        if a < 1:
            raise ValueError("coefficient must be ≥ 1")
        return a


class PieceDocument(SQLModel):
    guard: GuardDocument
    affine: AffineDocument

    class Config:
        """Pydantic config."""

        extra = "forbid"
        json_schema_extra = {
            "example": {
                "guard": {"modulus": 2, "residues": [1], "range": [3, None]},
                "affine": {"a": 1, "b": -2},
            }
        }


class FiniteDocument(SQLModel):
    """Finite-mode instance document."""

    mode: Literal["finite"]
    p: list[StrictStr]
    q: list[StrictStr]
    f: dict[StrictStr, StrictStr]
    g: dict[StrictStr, StrictStr]
    budget: Optional[Any] = None

    class Config:
        """Pydantic config."""

        extra = "forbid"
        json_schema_extra = {
            "example": {
                "mode": "finite",
                "p": ["a"],
                "q": ["x"],
                "f": {"a": "x"},
                "g": {"x": "a"},
            }
        }

    @field_validator("budget")
    @classmethod
    def no_budget(cls, budget):
        if budget is not None:
            raise ValueError("budget applies to countable mode only")
        return budget


class CountableDocument(SQLModel):
    """Countable-mode instance document."""

    mode: Literal["countable"]
    p: CountableCarrierDocument
    q: CountableCarrierDocument
    f: list[PieceDocument]
    g: list[PieceDocument]
    budget: StrictInt = Field(default=DEFAULT_STEP_BUDGET, ge=1)

    class Config:
        """Pydantic config."""

        extra = "forbid"


class _DuplicateKey(Exception):
    def __init__(self, key: str):
        self.key = key


def _reject_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    result = {}
    for key, value in pairs:
        if key in result:
            raise _DuplicateKey(key)
        result[key] = value
    return result


def _line_column(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _key_pattern(key: str) -> re.Pattern:
    return re.compile(re.escape(json.dumps(key, ensure_ascii=False)) + r"\s*:")


def _locate(text: str, loc: tuple[Union[str, int], ...]) -> tuple[int, int]:
    """
    Find the position of a validation error path in the source text.

    String components are matched as object keys in order; an integer
    component k skips to the (k+1)-th match of the key that follows it.
    """
    pos = 0
    repeat = 1
    for part in loc:
        if isinstance(part, int):
            repeat = part + 1
            continue
        matches = list(_key_pattern(part).finditer(text, pos))
        if len(matches) >= repeat:
            pos = matches[repeat - 1].start()
        repeat = 1
    return _line_column(text, pos)


def _reason(error: dict) -> str:
    message = error["msg"]
    for prefix in ("Value error, ", "Assertion failed, "):
        if message.startswith(prefix):
            message = message[len(prefix):]
    path = ".".join(str(part) for part in error["loc"])
    return f"{path}: {message}" if path else message


def parse_instance(text: str) -> Instance:
    """
    Parse an instance document.

    Args:
        text: JSON document text

    Returns:
        Structurally well-formed Instance (not yet validated)

    Raises:
        ParseError: With line, column and reason for malformed JSON, duplicate
            keys, unknown fields, negative numbers or bad coefficients
    """
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    except _DuplicateKey as e:
        matches = list(_key_pattern(e.key).finditer(text))
        pos = matches[1].start() if len(matches) > 1 else 0
        raise ParseError(f"duplicate key {e.key!r}", *_line_column(text, pos)) from None

    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    mode = data.get("mode")
    if mode not in (Mode.FINITE.value, Mode.COUNTABLE.value):
        raise ParseError(
            f"mode must be 'finite' or 'countable', got {mode!r}",
            *_locate(text, ("mode",)),
        )

    model = FiniteDocument if mode == Mode.FINITE.value else CountableDocument
    try:
        document = model.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        raise ParseError(_reason(error), *_locate(text, tuple(error["loc"]))) from None

    if isinstance(document, FiniteDocument):
        return _finite_instance(document, text)
    return _countable_instance(document)


def _atoms(atoms: list[str], field: str, text: str) -> frozenset[str]:
    seen = set()
    for atom in atoms:
        if atom in seen:
            raise ParseError(f"{field}: duplicate atom {atom!r}", *_locate(text, (field,)))
        seen.add(atom)
    return frozenset(seen)


def _finite_instance(document: FiniteDocument, text: str) -> Instance:
    return Instance(
        p=FiniteCarrier(_atoms(document.p, "p", text)),
        q=FiniteCarrier(_atoms(document.q, "q", text)),
        f=TableMap.from_dict(document.f),
        g=TableMap.from_dict(document.g),
        mode=Mode.FINITE,
    )


def _guard(document: GuardDocument) -> Guard:
    lo, hi = document.range if document.range is not None else (None, None)
    return Guard(document.modulus, frozenset(document.residues), lo, hi)


def _pieces(pieces: list[PieceDocument]) -> PiecewiseAffineMap:
    return PiecewiseAffineMap(
        tuple(AffinePiece(_guard(piece.guard), piece.affine.a, piece.affine.b) for piece in pieces)
    )


def _countable_instance(document: CountableDocument) -> Instance:
    return Instance(
        p=ResidueCarrier(document.p.modulus, frozenset(document.p.residues)),
        q=ResidueCarrier(document.q.modulus, frozenset(document.q.residues)),
        f=_pieces(document.f),
        g=_pieces(document.g),
        mode=Mode.COUNTABLE,
        step_budget=document.budget,
    )


# Rendering


def _render_carrier(carrier) -> Any:
    if isinstance(carrier, FiniteCarrier):
        return sorted(carrier.atoms)
    return {"modulus": carrier.modulus, "residues": sorted(carrier.residues)}


def _render_map(m) -> Any:
    if isinstance(m, TableMap):
        return dict(sorted(m.lookup.items()))
    pieces = []
    for piece in m.pieces:
        guard: dict[str, Any] = {
            "modulus": piece.guard.modulus,
            "residues": sorted(piece.guard.residues),
        }
        if piece.guard.lo is not None or piece.guard.hi is not None:
            guard["range"] = [piece.guard.lo or 0, piece.guard.hi]
        pieces.append({"guard": guard, "affine": {"a": piece.a, "b": piece.b}})
    return pieces


def render_instance(inst: Instance) -> str:
    """
    Render an instance as a document.

    Output is byte-deterministic: atoms, keys and residues are sorted and
    pieces keep their order.
    """
    document: dict[str, Any] = {
        "mode": inst.mode.value,
        "p": _render_carrier(inst.p),
        "q": _render_carrier(inst.q),
        "f": _render_map(inst.f),
        "g": _render_map(inst.g),
    }
    if inst.mode is Mode.COUNTABLE:
        document["budget"] = inst.step_budget
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
