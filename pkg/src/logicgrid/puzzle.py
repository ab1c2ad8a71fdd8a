"""Puzzle domain model: backgrounds, solution grids, clues, and clue semantics.

Houses are numbered 1..N from left to right. A solution grid assigns each
attribute's N values to the N houses as a permutation, and every clue is a
constraint over value placements. ``evaluate_clue`` is the single source of
truth for clue semantics; the solver and the brute-force oracle both defer
to it (directly or via compiled equivalents checked against it in tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator


class PuzzleError(Exception):
    """Base class for domain-model errors."""


class ClueReferenceError(PuzzleError):
    """A clue mentions an unknown attribute/value or an out-of-range house."""


def canonical_value(text: str) -> str:
    """Canonical form used at parse/ingest boundaries: trimmed and case-folded."""
    return text.strip().casefold()


class ClueKind(str, Enum):
    FOUND_AT = "FoundAt"
    NOT_FOUND_AT = "NotFoundAt"
    SAME_HOUSE = "SameHouse"
    NOT_SAME_HOUSE = "NotSameHouse"
    DIRECT_LEFT = "DirectLeft"
    DIRECT_RIGHT = "DirectRight"
    SIDE_BY_SIDE = "SideBySide"
    LEFT_OF = "LeftOf"
    RIGHT_OF = "RightOf"
    ONE_BETWEEN = "OneBetween"
    TWO_BETWEEN = "TwoBetween"


HOUSE_KINDS = frozenset({ClueKind.FOUND_AT, ClueKind.NOT_FOUND_AT})
PAIR_KINDS = frozenset(k for k in ClueKind if k not in HOUSE_KINDS)
# Unordered positional kinds compare |pos1 - pos2| against a fixed gap.
GAP_KINDS = {ClueKind.SIDE_BY_SIDE: 1, ClueKind.ONE_BETWEEN: 2, ClueKind.TWO_BETWEEN: 3}


@dataclass(frozen=True)
class Clue:
    """One typed constraint: a variant tag plus (attribute, value) terms.

    House-kind clues (``FoundAt``/``NotFoundAt``) carry one term and a house
    index; all other kinds carry two terms. The two terms may share an
    attribute (with distinct values) but never repeat the same
    (attribute, value) pair.
    """

    kind: ClueKind
    terms: tuple[tuple[str, str], ...]
    house: int | None = None

    def __post_init__(self) -> None:
        if self.kind in HOUSE_KINDS:
            if len(self.terms) != 1 or self.house is None:
                raise PuzzleError(f"{self.kind.value} takes one term and a house index")
        else:
            if len(self.terms) != 2 or self.house is not None:
                raise PuzzleError(f"{self.kind.value} takes exactly two terms")
            if self.terms[0] == self.terms[1]:
                raise PuzzleError("two-value clue repeats the same (attribute, value) pair")

    @classmethod
    def found_at(cls, attribute: str, value: str, house: int) -> "Clue":
        return cls(ClueKind.FOUND_AT, ((attribute, value),), house)

    @classmethod
    def not_found_at(cls, attribute: str, value: str, house: int) -> "Clue":
        return cls(ClueKind.NOT_FOUND_AT, ((attribute, value),), house)

    @classmethod
    def pair(cls, kind: ClueKind, a1: str, v1: str, a2: str, v2: str) -> "Clue":
        return cls(kind, ((a1, v1), (a2, v2)))

    def to_json_obj(self) -> dict[str, Any]:
        """Structured form: {"type": <variant>, "args": [...]}.

        House indices serialize as integers and (attribute, value) pairs as
        two-element arrays; the key names are part of the wire format.
        """
        args: list[Any] = [list(term) for term in self.terms]
        if self.house is not None:
            args.append(self.house)
        return {"type": self.kind.value, "args": args}

    @classmethod
    def from_json_obj(cls, obj: Any) -> "Clue":
        if not isinstance(obj, dict) or "type" not in obj or "args" not in obj:
            raise PuzzleError(f"malformed clue object: {obj!r}")
        try:
            kind = ClueKind(obj["type"])
        except ValueError:
            raise PuzzleError(f"unknown clue type {obj['type']!r}") from None
        args = obj["args"]
        if not isinstance(args, list):
            raise PuzzleError(f"clue args must be a list: {obj!r}")
        terms = []
        house = None
        for item in args:
            if isinstance(item, int) and not isinstance(item, bool):
                house = item
            elif isinstance(item, list) and len(item) == 2:
                terms.append((str(item[0]), str(item[1])))
            else:
                raise PuzzleError(f"malformed clue argument {item!r}")
        return cls(kind, tuple(terms), house)


@dataclass(frozen=True)
class Background:
    """The public setup of a puzzle: N houses and M attribute value lists."""

    n_houses: int
    attributes: tuple[tuple[str, tuple[str, ...]], ...]
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False, default=None)  # type: ignore[assignment]
    _value_index: dict = field(init=False, repr=False, compare=False, hash=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.n_houses < 1:
            raise PuzzleError("n_houses must be >= 1")
        names = [name for name, _ in self.attributes]
        if len(self.attributes) < 1:
            raise PuzzleError("background needs at least one attribute")
        if len(set(names)) != len(names):
            raise PuzzleError("attribute names must be distinct")
        by_name: dict[str, tuple[str, ...]] = {}
        value_index: dict[tuple[str, str], tuple[int, int]] = {}
        for a, (name, values) in enumerate(self.attributes):
            if len(values) != self.n_houses:
                raise PuzzleError(
                    f"attribute {name!r} has {len(values)} values, expected {self.n_houses}"
                )
            if len(set(values)) != len(values):
                raise PuzzleError(f"attribute {name!r} has duplicate values")
            by_name[name] = values
            for i, value in enumerate(values):
                value_index[(name, value)] = (a, i)
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_value_index", value_index)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(self._by_name)

    def values_of(self, name: str) -> tuple[str, ...]:
        return self._by_name[name]

    def has_value(self, attribute: str, value: str) -> bool:
        return (attribute, value) in self._value_index

    def locate(self, attribute: str, value: str) -> tuple[int, int]:
        """(attribute index, value index) or ClueReferenceError."""
        loc = self._value_index.get((attribute, value))
        if loc is None:
            if attribute not in self._by_name:
                raise ClueReferenceError(f"unknown attribute {attribute!r}")
            raise ClueReferenceError(f"unknown value {value!r} for attribute {attribute!r}")
        return loc

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "n_houses": self.n_houses,
            "attributes": [[name, list(values)] for name, values in self.attributes],
        }

    @classmethod
    def from_json_obj(cls, obj: Any) -> "Background":
        if not isinstance(obj, dict) or "n_houses" not in obj or "attributes" not in obj:
            raise PuzzleError(f"malformed background object: {obj!r}")
        attributes = tuple(
            (str(name), tuple(str(v) for v in values)) for name, values in obj["attributes"]
        )
        return cls(int(obj["n_houses"]), attributes)


@dataclass(frozen=True)
class SolutionGrid:
    """Total assignment: ``rows[a][k-1]`` is attribute ``a``'s value in house ``k``."""

    attributes: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if len(self.attributes) != len(self.rows):
            raise PuzzleError("one row per attribute required")
        pos: dict[tuple[str, str], int] = {}
        for attr, row in zip(self.attributes, self.rows):
            for k, value in enumerate(row, start=1):
                pos[(attr, value)] = k
        object.__setattr__(self, "_pos", pos)

    @property
    def n_houses(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def value_at(self, house: int, attribute: str) -> str:
        try:
            row = self.rows[self.attributes.index(attribute)]
        except ValueError:
            raise KeyError(attribute) from None
        if not 1 <= house <= len(row):
            raise KeyError(house)
        return row[house - 1]

    def house_of(self, attribute: str, value: str) -> int:
        """House holding ``value`` of ``attribute``; unique under the permutation property."""
        try:
            return self._pos[(attribute, value)]
        except KeyError:
            raise ClueReferenceError(f"unknown value {value!r} for attribute {attribute!r}") from None

    def cells(self) -> Iterator[tuple[int, str, str]]:
        for attr, row in zip(self.attributes, self.rows):
            for k, value in enumerate(row, start=1):
                yield k, attr, value

    def to_json_obj(self) -> dict[str, Any]:
        return {
            f"House {k}": {attr: self.rows[a][k - 1] for a, attr in enumerate(self.attributes)}
            for k in range(1, self.n_houses + 1)
        }

    @classmethod
    def from_json_obj(cls, obj: Any, background: Background) -> "SolutionGrid":
        if not isinstance(obj, dict):
            raise PuzzleError(f"malformed solution object: {obj!r}")
        attrs = background.attribute_names
        rows = []
        for attr in attrs:
            row = []
            for k in range(1, background.n_houses + 1):
                house_obj = obj.get(f"House {k}")
                if not isinstance(house_obj, dict) or attr not in house_obj:
                    raise PuzzleError(f"solution is missing cell (House {k}, {attr})")
                row.append(str(house_obj[attr]))
            rows.append(tuple(row))
        return cls(attrs, tuple(rows))


@dataclass(frozen=True)
class Puzzle:
    id: str
    background: Background
    clues: tuple[Clue, ...]
    solution: SolutionGrid
    seed: int


def check_clue_references(clue: Clue, background: Background) -> None:
    """Raise ClueReferenceError unless every term and house index is valid."""
    for attribute, value in clue.terms:
        background.locate(attribute, value)
    if clue.house is not None and not 1 <= clue.house <= background.n_houses:
        raise ClueReferenceError(f"house index {clue.house} out of range 1..{background.n_houses}")


def _relation_holds(kind: ClueKind, p1: int, p2: int) -> bool:
    if kind is ClueKind.SAME_HOUSE:
        return p1 == p2
    if kind is ClueKind.NOT_SAME_HOUSE:
        return p1 != p2
    if kind is ClueKind.DIRECT_LEFT:
        return p1 + 1 == p2
    if kind is ClueKind.DIRECT_RIGHT:
        return p1 == p2 + 1
    if kind is ClueKind.LEFT_OF:
        return p1 < p2
    if kind is ClueKind.RIGHT_OF:
        return p1 > p2
    return abs(p1 - p2) == GAP_KINDS[kind]


def evaluate_clue(clue: Clue, grid: SolutionGrid) -> bool:
    """True iff the total grid satisfies the clue's semantics."""
    if clue.kind in HOUSE_KINDS:
        (attribute, value), = clue.terms
        n = grid.n_houses
        if clue.house is None or not 1 <= clue.house <= n:
            raise ClueReferenceError(f"house index {clue.house} out of range 1..{n}")
        pos = grid.house_of(attribute, value)
        return (pos == clue.house) == (clue.kind is ClueKind.FOUND_AT)
    (a1, v1), (a2, v2) = clue.terms
    return _relation_holds(clue.kind, grid.house_of(a1, v1), grid.house_of(a2, v2))


def validate_puzzle(puzzle: Puzzle) -> list[str]:
    """Structural and semantic checks; returns human-readable defects (empty = valid)."""
    defects: list[str] = []
    bg = puzzle.background
    n = bg.n_houses

    for name, values in bg.attributes:
        if len(values) != n:
            defects.append(f"attribute {name!r}: value count {len(values)} != {n}")

    grid = puzzle.solution
    if grid.attributes != bg.attribute_names:
        defects.append("solution attributes do not match background attributes")
    else:
        for attr, row in zip(grid.attributes, grid.rows):
            if len(row) != n:
                defects.append(f"solution row for {attr!r} has {len(row)} cells, expected {n}")
            elif set(row) != set(bg.values_of(attr)):
                defects.append(f"solution row for {attr!r} is not a permutation of its value set")

    for index, clue in enumerate(puzzle.clues, start=1):
        try:
            check_clue_references(clue, bg)
        except ClueReferenceError as exc:
            defects.append(f"clue {index} has invalid references: {exc}")
            continue
        try:
            if not evaluate_clue(clue, grid):
                defects.append(f"clue {index} is violated by the stored solution")
        except ClueReferenceError as exc:
            defects.append(f"clue {index} cannot be evaluated: {exc}")
    return defects
