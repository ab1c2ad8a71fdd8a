"""Complete finite-domain solver for logic grid puzzles.

The engine keeps one bitmask per (attribute, value): bit ``k-1`` set means
house ``k`` is still a candidate position for that value. Cell-view domains
(candidate values of a house) are the transpose of the same bit matrix, so
the two views can never disagree.

Propagation runs the following rules to a fixpoint:

* alldifferent per attribute: a value fixed in one house is removed from the
  other values' candidates, a value with one remaining candidate house is
  fixed there, and a house whose candidate-value set shrinks to one value
  fixes that value. An empty candidate set on either view is a contradiction.
* per-clue filtering: pairwise arc consistency on the two position variables
  of positional clues, support filtering for SameHouse/NotSameHouse, and
  direct pruning for FoundAt/NotFoundAt.

The fixpoint is computed with a change-driven worklist so that re-propagating
after a single search assignment touches only affected constraints. Search is
chronological backtracking: minimum-remaining-values cell selection with ties
broken by (attribute index, house index), candidate values shuffled per run
seed when randomized ordering is on. One conflict is counted each time
propagation hits a contradiction below at least one decision.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from itertools import permutations, product
from math import factorial
from typing import Iterable, Sequence

from .puzzle import (
    HOUSE_KINDS,
    Background,
    Clue,
    ClueKind,
    ClueReferenceError,
    SolutionGrid,
    check_clue_references,
    evaluate_clue,
)

BRUTE_FORCE_LIMIT = 10**7

_SAME, _NSAME, _SHIFT, _GAP, _LT = range(5)


class ContradictionError(Exception):
    """Propagation emptied a candidate set."""


class SolveConfigError(ValueError):
    pass


class SearchSpaceLimitError(ValueError):
    """Brute-force enumeration refused: (N!)^M exceeds the safety cap."""


class SolveStatus(Enum):
    UNIQUE = "Unique"
    MULTIPLE = "Multiple"
    UNSATISFIABLE = "Unsatisfiable"


class ClueState(Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class SolveConfig:
    seed: int = 0
    cap_solutions: int = 2
    randomize_order: bool = False


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a (possibly capped) enumeration.

    ``status`` is UNIQUE only when the search exhausted the space having
    found exactly one grid. MULTIPLE covers both ">= 2 grids found" and
    "enumeration stopped at the cap before exhausting the space" (the latter
    only arises with ``cap_solutions == 1``).
    """

    status: SolveStatus
    solutions_found: int
    first_solution: SolutionGrid | None
    conflicts: int
    decisions: int
    propagations: int


@dataclass(frozen=True)
class DomainState:
    """Candidate sets for every value and every cell, as one bit matrix."""

    background: Background
    masks: tuple[int, ...]

    @classmethod
    def full_domains(cls, background: Background) -> "DomainState":
        full = (1 << background.n_houses) - 1
        return cls(background, (full,) * (background.n_houses * background.n_attributes))

    def _vid(self, attribute: str, value: str) -> int:
        a, i = self.background.locate(attribute, value)
        return a * self.background.n_houses + i

    def candidate_houses(self, attribute: str, value: str) -> tuple[int, ...]:
        mask = self.masks[self._vid(attribute, value)]
        return tuple(k for k in range(1, self.background.n_houses + 1) if mask >> (k - 1) & 1)

    def candidate_values(self, house: int, attribute: str) -> tuple[str, ...]:
        if not 1 <= house <= self.background.n_houses:
            raise ClueReferenceError(f"house index {house} out of range")
        bit = 1 << (house - 1)
        values = self.background.values_of(attribute)
        base = self.background.attribute_names.index(attribute) * self.background.n_houses
        return tuple(v for i, v in enumerate(values) if self.masks[base + i] & bit)

    def restrict(self, attribute: str, value: str, houses: Iterable[int]) -> "DomainState":
        """New state with the value's candidate houses intersected with ``houses``."""
        vid = self._vid(attribute, value)
        keep = 0
        for k in houses:
            keep |= 1 << (k - 1)
        masks = list(self.masks)
        masks[vid] &= keep
        return DomainState(self.background, tuple(masks))

    def is_total(self) -> bool:
        return all(m and not (m & (m - 1)) for m in self.masks)

    def is_contradictory(self) -> bool:
        if any(m == 0 for m in self.masks):
            return True
        n = self.background.n_houses
        full = (1 << n) - 1
        for a in range(self.background.n_attributes):
            union = 0
            for j in range(a * n, (a + 1) * n):
                union |= self.masks[j]
            if union != full:
                return True
        return False

    def to_grid(self) -> SolutionGrid:
        if not self.is_total():
            raise ContradictionError("state is not total")
        n = self.background.n_houses
        rows = []
        for a, (_, values) in enumerate(self.background.attributes):
            row: list[str] = [""] * n
            for i, value in enumerate(values):
                row[self.masks[a * n + i].bit_length() - 1] = value
            rows.append(tuple(row))
        return SolutionGrid(self.background.attribute_names, tuple(rows))


class _Engine:
    """Clues compiled to bitmask propagators over value ids (attr_index * N + value_index).

    Binary clues become entries in ``props``; per-attribute alldifferent
    pseudo-props get ids ``len(props) + a``. ``watchers[vid]`` lists every
    prop id to re-run when that value's mask changes. Unary clues
    (FoundAt/NotFoundAt) are applied once per search: masks only shrink, so
    they stay enforced.
    """

    __slots__ = ("bg", "n", "m", "full", "unary", "props", "watchers", "nprop", "n_clues")

    def __init__(self, background: Background, clues: Sequence[Clue]):
        self.bg = background
        n = self.n = background.n_houses
        self.m = background.n_attributes
        self.full = (1 << n) - 1

        unary: list[tuple[int, int, int]] = []
        props: list[tuple[int, int, int, int, int]] = []
        for ci, clue in enumerate(clues):
            if clue.house is not None and not 1 <= clue.house <= n:
                raise ClueReferenceError(f"house index {clue.house} out of range 1..{n}")
            located = [background.locate(a, v) for a, v in clue.terms]
            kind = clue.kind
            if kind is ClueKind.FOUND_AT:
                a, i = located[0]
                unary.append((a * n + i, 1 << (clue.house - 1), ci))
                continue
            if kind is ClueKind.NOT_FOUND_AT:
                a, i = located[0]
                unary.append((a * n + i, self.full ^ (1 << (clue.house - 1)), ci))
                continue
            (a1, i1), (a2, i2) = located
            v1 = a1 * n + i1
            v2 = a2 * n + i2
            if kind is ClueKind.SAME_HOUSE:
                props.append((_SAME, v1, v2, 0, ci))
            elif kind is ClueKind.NOT_SAME_HOUSE:
                props.append((_NSAME, v1, v2, 0, ci))
            elif kind is ClueKind.DIRECT_LEFT:
                props.append((_SHIFT, v1, v2, 0, ci))
            elif kind is ClueKind.DIRECT_RIGHT:
                props.append((_SHIFT, v2, v1, 0, ci))
            elif kind is ClueKind.SIDE_BY_SIDE:
                props.append((_GAP, v1, v2, 1, ci))
            elif kind is ClueKind.ONE_BETWEEN:
                props.append((_GAP, v1, v2, 2, ci))
            elif kind is ClueKind.TWO_BETWEEN:
                props.append((_GAP, v1, v2, 3, ci))
            elif kind is ClueKind.LEFT_OF:
                props.append((_LT, v1, v2, 0, ci))
            elif kind is ClueKind.RIGHT_OF:
                props.append((_LT, v2, v1, 0, ci))
        self.unary = unary
        self.props = props
        self.nprop = len(props)
        self.n_clues = len(clues)

        watchers: list[list[int]] = [[] for _ in range(n * self.m)]
        for pid, (_, v1, v2, _, _) in enumerate(props):
            watchers[v1].append(pid)
            watchers[v2].append(pid)
        for vid in range(n * self.m):
            watchers[vid].append(self.nprop + vid // n)
        self.watchers = [tuple(w) for w in watchers]

    def initial_masks(self) -> list[int]:
        return [self.full] * (self.n * self.m)

    def apply_unary(
        self,
        masks: list[int],
        active: bytearray | None = None,
        rec: list[bool] | None = None,
    ) -> tuple[bool, int]:
        nprops = 0
        for vid, keep, ci in self.unary:
            if active is not None and not active[ci]:
                continue
            m = masks[vid]
            nm = m & keep
            if nm != m:
                if not nm:
                    return False, nprops
                masks[vid] = nm
                nprops += 1
                if rec is not None:
                    rec[ci] = True
        return True, nprops

    def propagate(
        self,
        masks: list[int],
        seeds: Sequence[int] | None = None,
        active: bytearray | None = None,
        rec: list[bool] | None = None,
    ) -> tuple[bool, int]:
        """Run the worklist to a fixpoint. Returns (ok, number of prunings).

        ``seeds`` lists the value ids whose masks changed since the state was
        last a fixpoint; None means start from scratch (all constraints).
        """
        n = self.n
        full = self.full
        props = self.props
        watchers = self.watchers
        nprop = self.nprop
        inq = bytearray(nprop + self.m)
        queue: list[int] = []
        push = queue.append
        if seeds is None:
            for pid in range(nprop + self.m):
                inq[pid] = 1
                push(pid)
        else:
            for vid in seeds:
                for w in watchers[vid]:
                    if not inq[w]:
                        inq[w] = 1
                        push(w)
        nchanges = 0
        pop = queue.pop
        while queue:
            pid = pop()
            inq[pid] = 0
            if pid >= nprop:
                # alldifferent for one attribute, iterated to a local fixpoint
                base = (pid - nprop) * n
                end = base + n
                local = True
                while local:
                    local = False
                    sing = 0
                    union = 0
                    for j in range(base, end):
                        mk = masks[j]
                        union |= mk
                        if not (mk & (mk - 1)):
                            if sing & mk:
                                return False, nchanges
                            sing |= mk
                    if union != full:
                        return False, nchanges
                    for j in range(base, end):
                        mk = masks[j]
                        if mk & (mk - 1):
                            nm = mk & ~sing
                            if not nm:
                                return False, nchanges
                            if nm != mk:
                                masks[j] = nm
                                nchanges += 1
                                local = True
                                for w in watchers[j]:
                                    if w != pid and not inq[w]:
                                        inq[w] = 1
                                        push(w)
                    for k in range(n):
                        b = 1 << k
                        cnt = 0
                        lastj = -1
                        for j in range(base, end):
                            if masks[j] & b:
                                cnt += 1
                                if cnt > 1:
                                    break
                                lastj = j
                        if cnt == 1 and masks[lastj] != b:
                            masks[lastj] = b
                            nchanges += 1
                            local = True
                            for w in watchers[lastj]:
                                if w != pid and not inq[w]:
                                    inq[w] = 1
                                    push(w)
                continue

            code, x, y, d, ci = props[pid]
            if active is not None and not active[ci]:
                continue
            mx = masks[x]
            my = masks[y]
            if code == _SAME:
                nx = ny = mx & my
                if not nx:
                    return False, nchanges
            elif code == _NSAME:
                nx = mx
                ny = my
                if not (mx & (mx - 1)):
                    ny = my & ~mx
                    if not ny:
                        return False, nchanges
                if not (ny & (ny - 1)):
                    nx = mx & ~ny
                    if not nx:
                        return False, nchanges
            elif code == _SHIFT:
                nx = mx & (my >> 1)
                if not nx:
                    return False, nchanges
                ny = my & ((nx << 1) & full)
                if not ny:
                    return False, nchanges
            elif code == _GAP:
                nx = mx & (((my << d) | (my >> d)) & full)
                if not nx:
                    return False, nchanges
                ny = my & (((nx << d) | (nx >> d)) & full)
                if not ny:
                    return False, nchanges
            else:  # _LT
                nx = mx & ((1 << (my.bit_length() - 1)) - 1)
                if not nx:
                    return False, nchanges
                low = nx & -nx
                ny = my & (full ^ ((low << 1) - 1))
                if not ny:
                    return False, nchanges
            if nx != mx:
                masks[x] = nx
                nchanges += 1
                for w in watchers[x]:
                    if w != pid and not inq[w]:
                        inq[w] = 1
                        push(w)
                if rec is not None:
                    rec[ci] = True
            if ny != my:
                masks[y] = ny
                nchanges += 1
                for w in watchers[y]:
                    if w != pid and not inq[w]:
                        inq[w] = 1
                        push(w)
                if rec is not None:
                    rec[ci] = True
        return True, nchanges

    def pick_cell(self, masks: list[int]) -> tuple[int, list[int]] | None:
        """MRV cell as (house bit, candidate value ids); None when all cells are fixed."""
        n = self.n
        best_count = n + 1
        best = -1
        best_bit = 0
        for a in range(self.m):
            base = a * n
            for k in range(n):
                b = 1 << k
                cnt = 0
                for j in range(base, base + n):
                    if masks[j] & b:
                        cnt += 1
                        if cnt >= best_count:
                            break
                if 1 < cnt < best_count:
                    best_count = cnt
                    best = base
                    best_bit = b
                    if cnt == 2:
                        break
            if best_count == 2:
                break
        if best < 0:
            return None
        return best_bit, [j for j in range(best, best + n) if masks[j] & best_bit]

    def decode(self, masks: Sequence[int]) -> SolutionGrid:
        n = self.n
        rows = []
        for a, (_, values) in enumerate(self.bg.attributes):
            row: list[str] = [""] * n
            for i, value in enumerate(values):
                row[masks[a * n + i].bit_length() - 1] = value
            rows.append(tuple(row))
        return SolutionGrid(self.bg.attribute_names, tuple(rows))


def _enumerate(
    engine: _Engine,
    cap: int,
    rng: random.Random | None,
    active: bytearray | None = None,
) -> tuple[list[list[int]], int, int, int, bool]:
    """DFS over propagate. Returns (solutions, conflicts, decisions, propagations, exhausted)."""
    solutions: list[list[int]] = []
    stats = [0, 0, 0]  # conflicts, decisions, propagations

    def recurse(masks: list[int], seed_vid: int, depth: int) -> bool:
        ok, nprops = engine.propagate(
            masks, seeds=None if seed_vid < 0 else (seed_vid,), active=active
        )
        stats[2] += nprops
        if not ok:
            if depth > 0:
                stats[0] += 1
            return True
        picked = engine.pick_cell(masks)
        if picked is None:
            solutions.append(masks)
            return True
        bit, vids = picked
        if rng is not None:
            rng.shuffle(vids)
        last = len(vids) - 1
        for i, vid in enumerate(vids):
            child = masks[:]
            child[vid] = bit
            stats[1] += 1
            sub_exhausted = recurse(child, vid, depth + 1)
            if len(solutions) >= cap:
                return sub_exhausted and i == last
        return True

    masks = engine.initial_masks()
    ok, nprops = engine.apply_unary(masks, active=active)
    stats[2] += nprops
    exhausted = recurse(masks, -1, 0) if ok else True
    return solutions, stats[0], stats[1], stats[2], exhausted


def solve(
    clues: Sequence[Clue],
    background: Background,
    cfg: SolveConfig = SolveConfig(),
) -> SolveResult:
    """Complete DFS over propagate; enumerates up to ``cfg.cap_solutions`` grids."""
    if cfg.cap_solutions < 1:
        raise SolveConfigError("cap_solutions must be >= 1")
    engine = _Engine(background, clues)
    rng = random.Random(cfg.seed) if cfg.randomize_order else None
    solutions, conflicts, decisions, propagations, exhausted = _enumerate(
        engine, cfg.cap_solutions, rng
    )
    found = len(solutions)
    if found == 0:
        status = SolveStatus.UNSATISFIABLE
    elif found == 1 and exhausted:
        status = SolveStatus.UNIQUE
    else:
        status = SolveStatus.MULTIPLE
    first = engine.decode(solutions[0]) if solutions else None
    return SolveResult(
        status=status,
        solutions_found=found,
        first_solution=first,
        conflicts=conflicts,
        decisions=decisions,
        propagations=propagations,
    )


def count_solutions(clues: Sequence[Clue], background: Background, cap: int) -> int:
    """min(cap, number of satisfying grids)."""
    return solve(clues, background, SolveConfig(cap_solutions=cap)).solutions_found


def propagate(state: DomainState, clues: Sequence[Clue]) -> DomainState:
    """Greatest fixpoint of the propagation rules, or ContradictionError."""
    engine = _Engine(state.background, clues)
    masks = list(state.masks)
    ok, _ = engine.apply_unary(masks)
    if ok:
        ok, _ = engine.propagate(masks)
    if not ok:
        raise ContradictionError("propagation emptied a candidate set")
    return DomainState(state.background, tuple(masks))


def propagation_fixes(
    clues: Sequence[Clue], background: Background
) -> tuple[SolutionGrid | None, tuple[int, ...]]:
    """Propagate alone from full domains.

    Returns (grid, indices of clues whose filtering pruned something) when
    propagation fully fixes the grid, else (None, ()). The recorded clue
    subset re-derives the same fixpoint on its own, so a fully-fixed result
    certifies that the subset already has a unique solution.
    """
    engine = _Engine(background, clues)
    masks = engine.initial_masks()
    rec = [False] * engine.n_clues
    ok, _ = engine.apply_unary(masks, rec=rec)
    if ok:
        ok, _ = engine.propagate(masks, rec=rec)
    if not ok:
        return None, ()
    if any(m & (m - 1) for m in masks):
        return None, ()
    return engine.decode(masks), tuple(i for i, flag in enumerate(rec) if flag)


def evaluate_clue_partial(clue: Clue, state: DomainState) -> ClueState:
    """Sound three-valued evaluation against a partial assignment.

    VIOLATED when no completion can satisfy the clue, SATISFIED when every
    completion must, UNDETERMINED otherwise; exact whenever the referenced
    values are fixed (in particular on total states).
    """
    check_clue_references(clue, state.background)
    if clue.kind in HOUSE_KINDS:
        (attribute, value), = clue.terms
        mask = state.masks[state._vid(attribute, value)]
        bit = 1 << (clue.house - 1)
        if clue.kind is ClueKind.FOUND_AT:
            if mask == bit:
                return ClueState.SATISFIED
            if not (mask & bit):
                return ClueState.VIOLATED
            return ClueState.UNDETERMINED
        if not (mask & bit):
            return ClueState.SATISFIED
        if mask == bit:
            return ClueState.VIOLATED
        return ClueState.UNDETERMINED

    (a1, v1), (a2, v2) = clue.terms
    m1 = state.masks[state._vid(a1, v1)]
    m2 = state.masks[state._vid(a2, v2)]
    same_attribute = a1 == a2
    relation = _RELATIONS[clue.kind]
    any_true = False
    any_false = False
    for p1 in _positions(m1):
        for p2 in _positions(m2):
            if same_attribute and p1 == p2:
                continue
            if relation(p1, p2):
                any_true = True
            else:
                any_false = True
            if any_true and any_false:
                return ClueState.UNDETERMINED
    if not any_true:
        return ClueState.VIOLATED
    return ClueState.SATISFIED


_RELATIONS = {
    ClueKind.SAME_HOUSE: lambda p1, p2: p1 == p2,
    ClueKind.NOT_SAME_HOUSE: lambda p1, p2: p1 != p2,
    ClueKind.DIRECT_LEFT: lambda p1, p2: p1 + 1 == p2,
    ClueKind.DIRECT_RIGHT: lambda p1, p2: p1 == p2 + 1,
    ClueKind.SIDE_BY_SIDE: lambda p1, p2: abs(p1 - p2) == 1,
    ClueKind.LEFT_OF: lambda p1, p2: p1 < p2,
    ClueKind.RIGHT_OF: lambda p1, p2: p1 > p2,
    ClueKind.ONE_BETWEEN: lambda p1, p2: abs(p1 - p2) == 2,
    ClueKind.TWO_BETWEEN: lambda p1, p2: abs(p1 - p2) == 3,
}


def _positions(mask: int) -> list[int]:
    return [k + 1 for k in range(mask.bit_length()) if mask >> k & 1]


def enumerate_brute_force(
    clues: Sequence[Clue], background: Background, limit: int
) -> list[SolutionGrid]:
    """Independent oracle: filter every per-attribute permutation product by evaluate_clue.

    Shares no code path with propagate/solve beyond ``evaluate_clue`` itself.
    """
    if limit < 1:
        raise SolveConfigError("limit must be >= 1")
    space = factorial(background.n_houses) ** background.n_attributes
    if space > BRUTE_FORCE_LIMIT:
        raise SearchSpaceLimitError(
            f"search space {space} exceeds brute-force cap {BRUTE_FORCE_LIMIT}"
        )
    for clue in clues:
        check_clue_references(clue, background)
    names = background.attribute_names
    survivors: list[SolutionGrid] = []
    all_rows = [list(permutations(values)) for _, values in background.attributes]
    for rows in product(*all_rows):
        grid = SolutionGrid(names, rows)
        if all(evaluate_clue(clue, grid) for clue in clues):
            survivors.append(grid)
            if len(survivors) >= limit:
                break
    return survivors
