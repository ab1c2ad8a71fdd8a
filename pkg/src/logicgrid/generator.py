"""Seeded puzzle synthesis: plant a random grid, enumerate every true clue,
then minimize the clue set under a uniqueness oracle with weighted removal
sampling. The surviving set uniquely determines the planted grid and is
1-minimal (dropping any single clue admits a second solution)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from random import Random
from typing import Mapping, Sequence

from .catalog import DEFAULT_CATALOG, AttributeCatalog
from .puzzle import Background, Clue, ClueKind, Puzzle, SolutionGrid, validate_puzzle
from .seeds import spawn_rng
from .solver import _Engine, _enumerate

DEFAULT_REMOVAL_WEIGHTS: dict[ClueKind, float] = {
    ClueKind.FOUND_AT: 4.0,
    ClueKind.NOT_FOUND_AT: 1.0,
    ClueKind.SAME_HOUSE: 3.0,
    ClueKind.NOT_SAME_HOUSE: 1.0,
    ClueKind.DIRECT_LEFT: 2.0,
    ClueKind.DIRECT_RIGHT: 2.0,
    ClueKind.SIDE_BY_SIDE: 2.0,
    ClueKind.LEFT_OF: 2.0,
    ClueKind.RIGHT_OF: 2.0,
    ClueKind.ONE_BETWEEN: 2.0,
    ClueKind.TWO_BETWEEN: 2.0,
}


class GeneratorConfigError(ValueError):
    pass


class GeneratorError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    n_houses: int
    n_attributes: int
    seed: int
    removal_weights: Mapping[ClueKind, float] = field(
        default_factory=lambda: dict(DEFAULT_REMOVAL_WEIGHTS)
    )
    catalog: AttributeCatalog = DEFAULT_CATALOG

    def __post_init__(self) -> None:
        if self.n_houses < 1 or self.n_attributes < 1:
            raise GeneratorConfigError("n_houses and n_attributes must be >= 1")
        if self.n_attributes > len(self.catalog):
            raise GeneratorConfigError(
                f"n_attributes {self.n_attributes} exceeds catalog size {len(self.catalog)}"
            )
        if self.n_houses > self.catalog.min_values:
            raise GeneratorConfigError(
                f"n_houses {self.n_houses} exceeds the catalog's smallest value list "
                f"({self.catalog.min_values})"
            )
        for kind in ClueKind:
            weight = self.removal_weights.get(kind)
            if weight is None or weight <= 0:
                raise GeneratorConfigError(f"removal weight for {kind.value} must be positive")


def sample_attributes(cfg: GeneratorConfig, rng: Random) -> Background:
    """`Name` plus M-1 sampled attributes, each with N sampled values."""
    pool = [name for name in cfg.catalog.attribute_names if name != "Name"]
    chosen = ["Name"] + rng.sample(pool, cfg.n_attributes - 1)
    attributes = tuple(
        (name, tuple(rng.sample(cfg.catalog.values_of(name), cfg.n_houses))) for name in chosen
    )
    return Background(cfg.n_houses, attributes)


def random_solution(background: Background, rng: Random) -> SolutionGrid:
    rows = []
    for _, values in background.attributes:
        row = list(values)
        rng.shuffle(row)
        rows.append(tuple(row))
    return SolutionGrid(background.attribute_names, tuple(rows))


def generate_candidate_clues(grid: SolutionGrid) -> list[Clue]:
    """Every instance of every clue variant that holds on the grid.

    Two-value variants are emitted for cross-attribute pairs only; the
    unordered kinds (SameHouse, NotSameHouse, SideBySide, One/TwoBetween)
    once per pair, the ordered kinds (Direct*, Left/RightOf) in both
    payload directions.
    """
    attrs = grid.attributes
    n = grid.n_houses
    clues: list[Clue] = []

    for attr, row in zip(attrs, grid.rows):
        for k, value in enumerate(row, start=1):
            clues.append(Clue.found_at(attr, value, k))
    for attr, row in zip(attrs, grid.rows):
        for k, value in enumerate(row, start=1):
            for other in range(1, n + 1):
                if other != k:
                    clues.append(Clue.not_found_at(attr, value, other))

    for a1 in range(len(attrs)):
        row1 = grid.rows[a1]
        for a2 in range(a1 + 1, len(attrs)):
            row2 = grid.rows[a2]
            for p1, v1 in enumerate(row1, start=1):
                for p2, v2 in enumerate(row2, start=1):
                    if p1 == p2:
                        clues.append(Clue.pair(ClueKind.SAME_HOUSE, attrs[a1], v1, attrs[a2], v2))
                    else:
                        clues.append(
                            Clue.pair(ClueKind.NOT_SAME_HOUSE, attrs[a1], v1, attrs[a2], v2)
                        )
                    gap = abs(p1 - p2)
                    if gap == 1:
                        clues.append(Clue.pair(ClueKind.SIDE_BY_SIDE, attrs[a1], v1, attrs[a2], v2))
                    elif gap == 2:
                        clues.append(Clue.pair(ClueKind.ONE_BETWEEN, attrs[a1], v1, attrs[a2], v2))
                    elif gap == 3:
                        clues.append(Clue.pair(ClueKind.TWO_BETWEEN, attrs[a1], v1, attrs[a2], v2))

    for a1 in range(len(attrs)):
        row1 = grid.rows[a1]
        for a2 in range(len(attrs)):
            if a1 == a2:
                continue
            row2 = grid.rows[a2]
            for p1, v1 in enumerate(row1, start=1):
                for p2, v2 in enumerate(row2, start=1):
                    if p1 + 1 == p2:
                        clues.append(Clue.pair(ClueKind.DIRECT_LEFT, attrs[a1], v1, attrs[a2], v2))
                    elif p1 == p2 + 1:
                        clues.append(Clue.pair(ClueKind.DIRECT_RIGHT, attrs[a1], v1, attrs[a2], v2))
                    if p1 < p2:
                        clues.append(Clue.pair(ClueKind.LEFT_OF, attrs[a1], v1, attrs[a2], v2))
                    elif p1 > p2:
                        clues.append(Clue.pair(ClueKind.RIGHT_OF, attrs[a1], v1, attrs[a2], v2))
    return clues


def _weighted_order(
    indices: Sequence[int],
    clues: Sequence[Clue],
    weights: Mapping[ClueKind, float],
    rng: Random,
) -> list[int]:
    """Weighted sampling without replacement (exponential-keys method)."""
    keyed = []
    for idx in indices:
        u = rng.random()
        while u <= 0.0:
            u = rng.random()
        keyed.append((-math.log(u) / weights[clues[idx].kind], idx))
    keyed.sort()
    return [idx for _, idx in keyed]


def _background_from_grid(grid: SolutionGrid) -> Background:
    return Background(grid.n_houses, tuple(zip(grid.attributes, grid.rows)))


def minimize_clues(
    grid: SolutionGrid,
    clues: Sequence[Clue],
    cfg: GeneratorConfig,
    rng: Random,
    background: Background | None = None,
) -> list[Clue]:
    """Weighted removal passes until no single clue can be dropped.

    A clue is removed permanently iff the remainder still has exactly one
    solution (solution count capped at 2). Failed attempts stay locked for
    the pass; passes repeat until one removes nothing. Uniqueness tests are
    short-circuited by a cached "core" subset whose propagation alone fixes
    the grid: dropping a clue outside the core provably keeps the solution
    unique, so only core-touching tests pay for a solver call.
    """
    bg = background if background is not None else _background_from_grid(grid)
    clue_list = list(clues)
    if len(set(clue_list)) != len(clue_list):
        raise GeneratorConfigError("candidate clue list contains duplicates")
    engine = _Engine(bg, clue_list)
    n_clues = len(clue_list)
    active = bytearray([1]) * n_clues

    core: set[int] | None = None

    def propagation_core() -> set[int] | None:
        """Pruner indices when propagation alone fixes the active set, else None."""
        masks = engine.initial_masks()
        rec = [False] * n_clues
        ok, _ = engine.apply_unary(masks, active=active, rec=rec)
        if ok:
            ok, _ = engine.propagate(masks, active=active, rec=rec)
        if not ok or any(m & (m - 1) for m in masks):
            return None
        return {i for i, flag in enumerate(rec) if flag}

    def attempt_remove(idx: int) -> bool:
        nonlocal core
        if core is not None and idx not in core:
            active[idx] = 0
            return True
        active[idx] = 0
        new_core = propagation_core()
        if new_core is not None:
            core = new_core
            return True
        solutions, _, _, _, _ = _enumerate(engine, 2, None, active=active)
        if len(solutions) == 1:
            core = None
            return True
        active[idx] = 1
        return False

    core = propagation_core()
    if core is None:
        solutions, _, _, _, _ = _enumerate(engine, 2, None, active=active)
        if len(solutions) != 1:
            raise GeneratorError("input clue set does not uniquely determine the grid")

    while True:
        removed_any = False
        alive = [i for i in range(n_clues) if active[i]]
        for idx in _weighted_order(alive, clue_list, cfg.removal_weights, rng):
            if attempt_remove(idx):
                removed_any = True
        if not removed_any:
            break
    return [clue_list[i] for i in range(n_clues) if active[i]]


def generate_puzzle(cfg: GeneratorConfig) -> Puzzle:
    """Compose sampling, planting, enumeration, and minimization; pure in cfg."""
    background = sample_attributes(cfg, spawn_rng(cfg.seed, "attributes"))
    grid = random_solution(background, spawn_rng(cfg.seed, "solution"))
    candidates = generate_candidate_clues(grid)
    minimal = minimize_clues(
        grid, candidates, cfg, spawn_rng(cfg.seed, "minimize"), background=background
    )
    spawn_rng(cfg.seed, "clue-order").shuffle(minimal)
    puzzle = Puzzle(
        id=f"lgp-{cfg.n_houses}x{cfg.n_attributes}-{cfg.seed}",
        background=background,
        clues=tuple(minimal),
        solution=grid,
        seed=cfg.seed,
    )
    defects = validate_puzzle(puzzle)
    if defects:
        raise GeneratorError(f"generated puzzle failed validation: {defects}")
    return puzzle
