"""Grid scans over (alpha, beta) producing long-run phase diagrams.

Every grid cell integrates the dynamics from the configured starts,
classifies the tail window and stores the best cooperation fraction across
starts.  Cells are independent pure computations, so results are
deterministic and identical whether evaluated serially or in parallel.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dynamics import (
    ClassifierControls,
    IntegrationControls,
    IntegrationError,
    classify_long_run,
    integrate,
)
from .game import GameParams, SimplexState
from .svo import classify_svo

REGIME_ERROR = "error"

BARYCENTER = (1 / 3, 1 / 3, 1 / 3)


@dataclass(frozen=True)
class SweepConfig:
    """Geometry, base parameters and controls of one grid scan."""

    alpha_range: tuple[float, float] = (-1.0, 1.0)
    beta_range: tuple[float, float] = (-1.0, 1.0)
    grid_n: int = 41
    group_size: int = 5
    enhancement: float = 3.0
    mu: float = 1e-8
    initial_conditions: tuple[tuple[float, float, float], ...] = (BARYCENTER,)
    t_max: float = 2e4
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float | None = None
    max_steps: int = 20_000_000
    classifier: ClassifierControls = ClassifierControls()
    survival_threshold: float = 0.01

    def __post_init__(self) -> None:
        if self.grid_n < 2:
            raise ValueError("grid_n must be at least 2")
        for name, (lo, hi) in (("alpha_range", self.alpha_range), ("beta_range", self.beta_range)):
            if not (-1.0 <= lo < hi <= 1.0):
                raise ValueError(f"{name} must be an interval within [-1, 1], got ({lo}, {hi})")
        if not self.initial_conditions:
            raise ValueError("at least one initial condition is required")
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")

    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_range[0], self.alpha_range[1], self.grid_n)

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_range[0], self.beta_range[1], self.grid_n)

    def resolved_max_step(self) -> float:
        # Cap so the tail window always holds a handful of samples.
        if self.max_step is not None:
            return self.max_step
        return self.t_max * self.classifier.tail_fraction / 8.0

    def integration_controls(self) -> IntegrationControls:
        return IntegrationControls(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=self.resolved_max_step(),
            max_steps=self.max_steps,
            record_from=(1.0 - self.classifier.tail_fraction) * self.t_max,
        )


@dataclass(frozen=True)
class RegimeCell:
    """Long-run summary of one (alpha, beta) grid cell."""

    alpha: float
    beta: float
    f_c: float
    regime: str
    theta_deg: float
    svo: str


@dataclass(frozen=True)
class SweepResult:
    """Row-major grid of cells (alpha varies slowest) plus its config."""

    config: SweepConfig
    cells: tuple[RegimeCell, ...]

    def f_c_grid(self) -> np.ndarray:
        n = self.config.grid_n
        return np.array([c.f_c for c in self.cells]).reshape(n, n)

    def surviving_cells(self, threshold: float | None = None) -> list[RegimeCell]:
        thr = self.config.survival_threshold if threshold is None else threshold
        return [c for c in self.cells if not math.isnan(c.f_c) and c.f_c > thr]


def evaluate_cell(config: SweepConfig, alpha: float, beta: float) -> RegimeCell:
    """Integrate and classify one grid cell from every configured start."""
    try:
        orientation = classify_svo(alpha, beta)
        theta, svo = orientation.theta_deg, orientation.label
    except ValueError:
        theta, svo = float("nan"), "undefined"

    params = GameParams(config.group_size, config.enhancement, alpha, beta, config.mu)
    controls = config.integration_controls()
    best = None
    failures = 0
    for start in config.initial_conditions:
        state = SimplexState.from_components(*start)
        try:
            trajectory = integrate(params, state, config.t_max, controls)
        except IntegrationError:
            failures += 1
            continue
        outcome = classify_long_run(trajectory, config.classifier)
        if best is None or outcome.f_c > best.f_c:
            best = outcome
    if best is None:
        return RegimeCell(alpha, beta, float("nan"), REGIME_ERROR, theta, svo)
    return RegimeCell(alpha, beta, best.f_c, best.regime, theta, svo)


def _cell_task(task: tuple[SweepConfig, float, float]) -> RegimeCell:
    return evaluate_cell(*task)


def run_sweep(config: SweepConfig, jobs: int = 1) -> SweepResult:
    """Evaluate the whole grid, optionally with a process pool.

    Cells are gathered in row-major grid order regardless of scheduling, so
    the result is byte-identical for any ``jobs`` value.
    """
    tasks = [(config, float(a), float(b)) for a in config.alphas() for b in config.betas()]
    if jobs <= 1:
        cells = [_cell_task(task) for task in tasks]
    else:
        chunk = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_cell_task, tasks, chunksize=chunk))
    return SweepResult(config=config, cells=tuple(cells))


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepComparison:
    """Cells that cross the survival threshold between two sweeps."""

    threshold: float
    gained: tuple[RegimeCell, ...]
    lost: tuple[RegimeCell, ...]

    @property
    def n_gained(self) -> int:
        return len(self.gained)

    @property
    def n_lost(self) -> int:
        return len(self.lost)


def compare_sweeps(a: SweepResult, b: SweepResult, threshold: float | None = None) -> SweepComparison:
    """Count and list cells whose survival status differs between two grids."""
    geometry = ("alpha_range", "beta_range", "grid_n")
    for name in geometry:
        if getattr(a.config, name) != getattr(b.config, name):
            raise ValueError(f"sweep grids differ in {name}")
    thr = a.config.survival_threshold if threshold is None else threshold

    def survives(cell: RegimeCell) -> bool:
        return not math.isnan(cell.f_c) and cell.f_c > thr

    gained = []
    lost = []
    for cell_a, cell_b in zip(a.cells, b.cells):
        if (cell_a.alpha, cell_a.beta) != (cell_b.alpha, cell_b.beta):
            raise ValueError("sweep grids are not aligned cell by cell")
        sa, sb = survives(cell_a), survives(cell_b)
        if sb and not sa:
            gained.append(cell_b)
        elif sa and not sb:
            lost.append(cell_a)
    return SweepComparison(threshold=thr, gained=tuple(gained), lost=tuple(lost))


# ---------------------------------------------------------------------------
# File output
# ---------------------------------------------------------------------------

def write_sweep_csv(result: SweepResult, destination) -> None:
    """Write one row per cell: alpha,beta,F_C,regime,theta_deg,svo."""
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    handle = open(destination, "w") if own else destination
    try:
        handle.write("alpha,beta,F_C,regime,theta_deg,svo\n")
        for c in result.cells:
            handle.write(
                f"{c.alpha:.17g},{c.beta:.17g},{c.f_c:.17g},{c.regime},{c.theta_deg:.17g},{c.svo}\n"
            )
    finally:
        if own:
            handle.close()


def metadata_path(csv_path: str) -> str:
    return (csv_path[:-4] if csv_path.endswith(".csv") else csv_path) + ".meta.json"


def sweep_metadata(result: SweepResult, extra: dict | None = None) -> dict:
    meta = {
        "format": "sweep-grid-v1",
        "package_version": __version__,
        "config": dataclasses.asdict(result.config),
        "f_c_definition": "time average of the cooperator fraction over the tail window, "
                          "maximum across the configured initial conditions",
        "cell_order": "row-major, alpha slowest",
    }
    if extra:
        meta.update(extra)
    return meta


def write_sweep_metadata(result: SweepResult, csv_path: str, extra: dict | None = None) -> str:
    path = metadata_path(csv_path)
    with open(path, "w") as handle:
        json.dump(sweep_metadata(result, extra), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path
