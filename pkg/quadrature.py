"""
Numerical integration rules shared by patches, Pappus profiles and oracles

Tensor rules evaluate the integrand over a grid split into fixed chunks of
flat indices; chunk sums are combined in chunk order so results do not depend
on how many worker threads ran them.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate
from scipy.special import roots_legendre

from errors import DomainError, InputFormatError, QuadratureError
from masscenter import pairwise_sum

logger = logging.getLogger(__name__)

GAUSS_LEGENDRE = "gauss-legendre-tensor"
ADAPTIVE_SIMPSON = "adaptive-simpson"
METHODS = (GAUSS_LEGENDRE, ADAPTIVE_SIMPSON)
PRESETS = ("fast", "standard", "precise")

# Integrand over a batch of parameter points (M, k) -> values (M,) or (M, c)
BatchIntegrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class QuadratureConfig:
    """How to integrate over a box

    Args:
        method: gauss-legendre-tensor or adaptive-simpson
        points_per_axis: Gauss-Legendre nodes per axis
        rel_tol / abs_tol: stopping tolerances (adaptive rules, scipy quad)
        max_subdivisions: interval limit handed to scipy quad
        max_levels: grid doublings allowed to adaptive-simpson
        chunk_size: grid points evaluated per batch
        workers: threads evaluating chunks
    """

    method: str = GAUSS_LEGENDRE
    points_per_axis: int = 64
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    max_levels: int = 8
    chunk_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputFormatError(f"Unknown quadrature method {self.method!r}; expected one of {METHODS}")
        if self.points_per_axis < 2:
            raise DomainError(f"points_per_axis must be at least 2, got {self.points_per_axis}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("Quadrature tolerances must be positive")
        if self.max_subdivisions < 1 or self.max_levels < 2 or self.chunk_size < 1 or self.workers < 1:
            raise DomainError("Quadrature budgets must be positive")

    @classmethod
    def preset(cls, name: str, k: int = 2, workers: int = 1) -> "QuadratureConfig":
        """Named presets; standard switches to adaptive-simpson for three-dimensional domains"""
        if name == "fast":
            return cls(GAUSS_LEGENDRE, points_per_axis=24, rel_tol=1e-8, workers=workers)
        if name == "standard":
            if k >= 3:
                return cls(ADAPTIVE_SIMPSON, rel_tol=1e-8, max_levels=7, workers=workers)
            return cls(GAUSS_LEGENDRE, points_per_axis=64, rel_tol=1e-10, workers=workers)
        if name == "precise":
            return cls(GAUSS_LEGENDRE, points_per_axis=96, rel_tol=1e-12, workers=workers)
        raise InputFormatError(f"Unknown quadrature preset {name!r}; expected one of {PRESETS}")

    def with_points(self, points_per_axis: int) -> "QuadratureConfig":
        return replace(self, points_per_axis=points_per_axis)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class QuadratureResult:
    value: Union[float, NDArray[np.float64]]
    error: float
    evaluations: int
    method: str


def _tolerance(value: ArrayLike, config: QuadratureConfig) -> float:
    return max(config.abs_tol, config.rel_tol * float(np.max(np.abs(value))))


def gauss_legendre_rule(points: int, lower: float, upper: float) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = roots_legendre(points)
    half = 0.5 * (upper - lower)
    return lower + half * (x + 1.0), half * w


def simpson_rule(intervals: int, lower: float, upper: float) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Composite Simpson nodes and weights; intervals must be even"""
    x = np.linspace(lower, upper, intervals + 1)
    w = np.ones(intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return x, w * (upper - lower) / (3.0 * intervals)


def tensor_sum(f: BatchIntegrand, nodes: Sequence[NDArray[np.float64]], weights: Sequence[NDArray[np.float64]],
               chunk_size: int = 1 << 16, workers: int = 1) -> NDArray[np.float64]:
    """sum over the tensor grid of prod(weights) * f(nodes)"""
    shape = tuple(len(x) for x in nodes)
    total = int(np.prod(shape))
    bounds = [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]

    def chunk(bound: Tuple[int, int]) -> NDArray[np.float64]:
        idx = np.unravel_index(np.arange(*bound), shape)
        params = np.stack([nodes[a][i] for a, i in enumerate(idx)], axis=-1)
        w = np.ones(len(params))
        for a, i in enumerate(idx):
            w = w * weights[a][i]
        values = np.asarray(f(params), dtype=float)
        return np.tensordot(w, values, axes=(0, 0))

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(chunk, bounds))
    else:
        partial = [chunk(b) for b in bounds]
    return pairwise_sum(np.stack(partial))


def integrate_box(f: BatchIntegrand, lower: ArrayLike, upper: ArrayLike, config: QuadratureConfig) -> QuadratureResult:
    """Integrate a batch integrand over an axis-aligned box

    Gauss-Legendre reports |I_p - I_{p/2}| as its error. adaptive-simpson
    doubles a composite Simpson grid, Richardson-extrapolates consecutive
    levels and stops when two extrapolants agree to tolerance.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    if lower.shape != upper.shape:
        raise DomainError("Box bounds must have equal length")
    dims = len(lower)

    def run(rule, n):
        pairs = [rule(n, lo, hi) for lo, hi in zip(lower, upper)]
        value = tensor_sum(f, [p[0] for p in pairs], [p[1] for p in pairs], config.chunk_size, config.workers)
        return value, int(np.prod([len(p[0]) for p in pairs]))

    if config.method == GAUSS_LEGENDRE:
        p = config.points_per_axis
        value, evals = run(gauss_legendre_rule, p)
        coarse, coarse_evals = run(gauss_legendre_rule, max(2, p // 2))
        error = float(np.max(np.abs(value - coarse)))
        if error > _tolerance(value, config):
            logger.warning(f"Gauss-Legendre {p}^{dims}: estimated error {error:.3e} above tolerance")
        return QuadratureResult(value, error, evals + coarse_evals, config.method)

    evals = 0
    previous_simpson = None
    previous_extrapolated = None
    for level in range(1, config.max_levels + 1):
        simpson, n_evals = run(simpson_rule, 2 ** level)
        evals += n_evals
        if previous_simpson is not None:
            extrapolated = simpson + (simpson - previous_simpson) / 15.0
            if previous_extrapolated is not None:
                error = float(np.max(np.abs(extrapolated - previous_extrapolated)))
                logger.debug(f"adaptive-simpson level {level}: {evals} evaluations, change {error:.3e}")
                if error <= _tolerance(extrapolated, config):
                    return QuadratureResult(extrapolated, error, evals, config.method)
            previous_extrapolated = extrapolated
        previous_simpson = simpson
    raise QuadratureError(
        f"adaptive-simpson did not reach rel_tol {config.rel_tol:.0e} within {config.max_levels} levels "
        f"({evals} evaluations)"
    )


def integrate_1d(f: Callable[[float], float], a: float, b: float, config: Optional[QuadratureConfig] = None,
                 points: Optional[Sequence[float]] = None) -> QuadratureResult:
    """Adaptive 1-D integral through scipy's QUADPACK wrapper"""
    config = config or QuadratureConfig()
    if b == a:
        return QuadratureResult(0.0, 0.0, 0, "quad")
    breakpoints = [p for p in (points or ()) if a < p < b] or None
    out = integrate.quad(f, a, b, epsabs=config.abs_tol, epsrel=config.rel_tol,
                         limit=config.max_subdivisions, points=breakpoints, full_output=1)
    value, error, info = out[0], out[1], out[2]
    if len(out) > 3:
        if error > 1e3 * max(config.abs_tol, config.rel_tol * abs(value)):
            raise QuadratureError(f"quad failed on [{a}, {b}]: {out[3]}")
        logger.warning(f"quad on [{a}, {b}] stopped at its limit with error {error:.3e}")
    return QuadratureResult(float(value), float(error), int(info['neval']), "quad")


__all__ = [
    "GAUSS_LEGENDRE",
    "ADAPTIVE_SIMPSON",
    "PRESETS",
    "QuadratureConfig",
    "QuadratureResult",
    "gauss_legendre_rule",
    "simpson_rule",
    "tensor_sum",
    "integrate_box",
    "integrate_1d",
]
