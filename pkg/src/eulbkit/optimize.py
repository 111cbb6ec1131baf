"""Minimize the EULB over the filter strengths (m, n1, n2), with m2 = 1.

Two searches share one objective:

* :func:`evolve`, a seeded genetic algorithm working in the unit cube
  (linear in m, log10 in n1 and n2);
* :func:`grid_oracle`, an exhaustive lattice scan used to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import KrausChannel
from .entropy import eulb, eulb_batch
from .protocol import (
    FilterAnnihilationError,
    FilterParams,
    ObservablePair,
    run_pipeline,
    run_pipeline_batch,
)

CHUNK = 4096


@dataclass(frozen=True)
class Scenario:
    rho0: np.ndarray = field(repr=False)
    ch_a: KrausChannel
    ch_b: KrausChannel
    obs: ObservablePair = field(default_factory=ObservablePair.default, repr=False)
    name: str = ""


@dataclass(frozen=True)
class SearchSpace:
    m_range: tuple[float, float] = (0.0, 3.0)
    n1_range: tuple[float, float] = (1e-9, 1e5)
    n2_range: tuple[float, float] = (1e-9, 1e5)

    def __post_init__(self):
        lo, hi = self.m_range
        if not 0 <= lo <= hi:
            raise ValueError(f"m_range must satisfy 0 <= lo <= hi, got {self.m_range}")
        for name in ("n1_range", "n2_range"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"{name} is log-scaled and needs 0 < lo <= hi, got {(lo, hi)}")

    def _bounds(self) -> np.ndarray:
        return np.array(
            [
                self.m_range,
                np.log10(self.n1_range),
                np.log10(self.n2_range),
            ]
        )

    def from_unit(self, u: np.ndarray) -> np.ndarray:
        """Map unit-cube points (N, 3) to (m, n1, n2) columns."""
        b = self._bounds()
        x = b[:, 0] + np.asarray(u) * (b[:, 1] - b[:, 0])
        return np.column_stack([x[:, 0], 10.0 ** x[:, 1], 10.0 ** x[:, 2]])

    def to_unit(self, params: np.ndarray) -> np.ndarray:
        b = self._bounds()
        p = np.atleast_2d(np.asarray(params, dtype=float))
        x = np.column_stack([p[:, 0], np.log10(p[:, 1]), np.log10(p[:, 2])])
        width = b[:, 1] - b[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = np.where(width > 0, (x - b[:, 0]) / width, 0.0)
        return np.clip(u, 0.0, 1.0)


@dataclass(frozen=True)
class OptimizerConfig:
    population: int = 64
    generations: int = 200
    seed: int = 0
    elite_fraction: float = 0.1
    mutation_scale: float = 0.1

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not 0 < self.elite_fraction < 1:
            raise ValueError("elite_fraction must lie in (0, 1)")
        if self.mutation_scale < 0:
            raise ValueError("mutation_scale must be >= 0")


@dataclass(frozen=True)
class OptimizationResult:
    m: float
    n1: float
    n2: float
    eulb_min: float
    baseline: float
    evaluations: int
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "converged": self.converged,
            "eulb_min": self.eulb_min,
            "evaluations": self.evaluations,
            "m": self.m,
            "n1": self.n1,
            "n2": self.n2,
        }


def objective(scenario: Scenario, m: float, n1: float, n2: float) -> float:
    """EULB after the full pipeline with filters (m, 1, n1, n2); +inf if a filter fails."""
    try:
        report = run_pipeline(
            scenario.rho0, FilterParams(m, 1.0, n1, n2), scenario.ch_a, scenario.ch_b
        )
    except FilterAnnihilationError:
        return float("inf")
    return eulb(report.state_after_reversal, scenario.obs)


def objective_batch(scenario: Scenario, params: np.ndarray) -> np.ndarray:
    """Vectorized :func:`objective` over rows of (m, n1, n2)."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    out = np.empty(len(params))
    for start in range(0, len(params), CHUNK):
        p = params[start : start + CHUNK]
        states, ok = run_pipeline_batch(
            scenario.rho0, p[:, 0], 1.0, p[:, 1], p[:, 2], scenario.ch_a, scenario.ch_b
        )
        states[~ok] = np.eye(4) / 4
        vals = eulb_batch(states, scenario.obs)
        vals[~ok | ~np.isfinite(vals)] = np.inf
        out[start : start + len(p)] = vals
    return out


def baseline(scenario: Scenario) -> float:
    """EULB with every filter set to the identity."""
    return objective(scenario, 1.0, 1.0, 1.0)


def _ranked(vals: np.ndarray, params: np.ndarray) -> np.ndarray:
    # ascending objective; ties go to the lexicographically smaller (m, n1, n2)
    return np.lexsort((params[:, 2], params[:, 1], params[:, 0], vals))


def evolve(
    scenario: Scenario,
    space: SearchSpace | None = None,
    cfg: OptimizerConfig | None = None,
    fixed_m: float | None = None,
) -> OptimizationResult:
    """Genetic search over (m, n1, n2) in unit-cube coordinates.

    Rank-based parent selection, blend (BLX-0.5) crossover, Gaussian
    mutation and elitism. The identity point (1, 1, 1) seeds the first
    population, so the result never exceeds the baseline. With ``fixed_m``
    only (n1, n2) are searched.
    """
    space = space or SearchSpace()
    cfg = cfg or OptimizerConfig()
    rng = np.random.default_rng(cfg.seed)
    pop_size = cfg.population
    n_elite = max(1, int(round(cfg.elite_fraction * pop_size)))
    n_child = pop_size - n_elite

    free = np.array([fixed_m is None, True, True])
    start = np.array([1.0 if fixed_m is None else fixed_m, 1.0, 1.0])
    anchor = space.to_unit(start)[0]

    def params_of(u: np.ndarray) -> np.ndarray:
        u = np.where(free, u, anchor)
        return space.from_unit(u)

    pop = rng.random((pop_size, 3))
    pop[0] = anchor
    pop = np.where(free, pop, anchor)
    params = params_of(pop)
    vals = objective_batch(scenario, params)
    evaluations = pop_size

    # linear ranking: best gets weight pop_size, worst gets 1
    weights = np.arange(pop_size, 0, -1, dtype=float)
    weights /= weights.sum()

    order = _ranked(vals, params)
    history = [float(vals[order[0]])]
    for _ in range(cfg.generations):
        pop, params, vals = pop[order], params[order], vals[order]
        ia = rng.choice(pop_size, size=n_child, p=weights)
        ib = rng.choice(pop_size, size=n_child, p=weights)
        lo = np.minimum(pop[ia], pop[ib])
        hi = np.maximum(pop[ia], pop[ib])
        span = hi - lo
        children = rng.uniform(lo - 0.5 * span, hi + 0.5 * span)
        children += rng.normal(0.0, cfg.mutation_scale, children.shape)
        children = np.where(free, np.clip(children, 0.0, 1.0), anchor)
        child_params = params_of(children)
        child_vals = objective_batch(scenario, child_params)
        evaluations += n_child

        pop = np.concatenate([pop[:n_elite], children])
        params = np.concatenate([params[:n_elite], child_params])
        vals = np.concatenate([vals[:n_elite], child_vals])
        order = _ranked(vals, params)
        history.append(float(vals[order[0]]))

    best = order[0]
    window = max(10, cfg.generations // 5)
    tail = history[-window - 1 :]
    converged = bool(np.isfinite(tail[-1]) and tail[0] - tail[-1] <= 1e-10)
    m, n1, n2 = params[best]
    return OptimizationResult(
        float(m),
        float(n1),
        float(n2),
        float(vals[best]),
        baseline(scenario),
        evaluations,
        converged,
        tuple(history),
    )


def lattice(space: SearchSpace, steps: int) -> np.ndarray:
    """steps^3 grid of (m, n1, n2): linear in m, logarithmic in n1 and n2."""
    if steps < 2:
        raise ValueError("grid needs at least 2 steps per axis")
    ms = np.linspace(*space.m_range, steps)
    n1s = np.geomspace(*space.n1_range, steps)
    n2s = np.geomspace(*space.n2_range, steps)
    grid = np.meshgrid(ms, n1s, n2s, indexing="ij")
    return np.column_stack([g.ravel() for g in grid])


def grid_oracle(scenario: Scenario, space: SearchSpace | None = None, steps: int = 40) -> OptimizationResult:
    """Exhaustive lattice minimum; deterministic and independent of any RNG."""
    space = space or SearchSpace()
    params = lattice(space, steps)
    vals = objective_batch(scenario, params)
    best = _ranked(vals, params)[0]
    m, n1, n2 = params[best]
    return OptimizationResult(
        float(m), float(n1), float(n2), float(vals[best]), baseline(scenario), len(params), True
    )


@dataclass(frozen=True)
class SweepPoint:
    m: float
    n1_opt: float
    n2_opt: float
    eulb: float


def sweep_m(
    scenario: Scenario,
    space: SearchSpace | None,
    m_grid,
    cfg: OptimizerConfig | None = None,
) -> tuple[list[SweepPoint], float]:
    """Constrained minimum over (n1, n2) at each m; also returns the baseline."""
    space = space or SearchSpace()
    lo, hi = space.m_range
    points = []
    for m in np.asarray(m_grid, dtype=float):
        if not lo <= m <= hi:
            raise ValueError(f"m = {m} lies outside m_range {space.m_range}")
        res = evolve(scenario, space, cfg, fixed_m=float(m))
        points.append(SweepPoint(float(m), res.n1, res.n2, res.eulb_min))
    return points, baseline(scenario)
