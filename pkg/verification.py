"""
Verification suites behind `mcenter verify`

Each suite returns a SuiteReport of named checks with the worst residual seen
and the tolerance it was held to.  Random instances come from
numpy.random.default_rng(seed), so reports are reproducible.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ambient import Geometry, GeometryKind, MaterialVector, apply_isometry, decompose, distance, random_isometry
from errors import InputFormatError
from manifolds import (
    ball_centered_mass,
    ball_patch,
    ball_total_mass,
    integrate_patch,
    mass_center_of_union,
    ngon_centered_area,
    ngon_patch,
    sphere_centered_mass,
    sphere_shell_patch,
    sphere_total_mass,
)
from masscenter import (
    PointSet,
    centered_mass_two,
    deviation,
    locate_center,
    oplus,
    place_pair,
    random_point_set,
)
from onedim import FkSystem, fk_center, fk_embed, fk_invariance_check, split_merge_pair, standard_center
from pappus import oracle_volume_mc, oracle_volume_quadrature
from quadrature import QuadratureConfig
from solids import make_solid

logger = logging.getLogger(__name__)

KINDS = (GeometryKind.EUCLIDEAN, GeometryKind.SPHERICAL, GeometryKind.HYPERBOLIC)


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    at_least: bool = False

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        return self.residual >= self.tolerance if self.at_least else self.residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'residual': float(self.residual),
            'tolerance': float(self.tolerance),
            'pass': self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: List[Check] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, tolerance: float, at_least: bool = False) -> None:
        self.checks.append(Check(name, float(residual), float(tolerance), at_least))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'seed': self.seed,
            'pass': self.passed,
            'elapsed': self.elapsed,
            'checks': [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class VerifyOptions:
    seed: int = 0
    tolerance_scale: float = 1.0
    preset: str = "standard"
    instances: int = 1000
    mc_samples: int = 10_000_000
    workers: int = 1

    def tol(self, value: float) -> float:
        return value * self.tolerance_scale


def _relative(a: np.ndarray, b: np.ndarray, scale: float) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / max(scale, 1e-300))


# ============================================================================
# Suites
# ============================================================================

def suite_axioms(opts: VerifyOptions) -> SuiteReport:
    """Single point, overlapping, multiplication, partition and isometry equivariance of the vector sum"""
    report = SuiteReport("axioms", opts.seed)
    rng = np.random.default_rng(opts.seed)
    for n in (2, 3):
        for kind in KINDS:
            g = Geometry(kind, n)
            worst = {'single point': 0.0, 'overlapping': 0.0, 'multiplication': 0.0,
                     'partition': 0.0, 'isometry': 0.0}
            for _ in range(opts.instances):
                s = random_point_set(g, int(rng.integers(2, 9)), rng)
                total = oplus(s)
                scale = float(np.sum(np.abs(s.coords)))

                a = s.vectors[0]
                worst['single point'] = max(worst['single point'],
                                            _relative(oplus(PointSet(g, (a,))).coords, a.coords, a.mass))

                r1, r2 = rng.uniform(0.1, 3.0, 2)
                overlap = oplus(PointSet(g, (a.scaled(r1), a.scaled(r2))))
                worst['overlapping'] = max(worst['overlapping'],
                                           _relative(overlap.coords, a.scaled(r1 + r2).coords, (r1 + r2) * a.mass))

                r = float(rng.uniform(0.1, 3.0))
                pair = PointSet(g, s.vectors[:2])
                worst['multiplication'] = max(worst['multiplication'], _relative(
                    oplus(pair.scaled(r)).coords, r * oplus(pair).coords, r * float(np.sum(np.abs(pair.coords)))))

                mask = rng.random(len(s)) < 0.5
                mask[0], mask[-1] = True, False
                first, second = s.split(mask)
                worst['partition'] = max(worst['partition'],
                                         _relative((oplus(first) + oplus(second)).coords, total.coords, scale))

                iso = random_isometry(g, rng)
                moved = s.mapped(iso)
                worst['isometry'] = max(worst['isometry'], _relative(
                    apply_isometry(iso, total).coords, oplus(moved).coords, float(np.sum(np.abs(moved.coords)))))
            for name, residual in worst.items():
                report.add(f"{name} {g}", residual, opts.tol(1e-10))
    return report


def suite_two_point(opts: VerifyOptions) -> SuiteReport:
    """Two-point centered mass, lever law, deviation identity and its sign"""
    report = SuiteReport("two-point", opts.seed)
    rng = np.random.default_rng(opts.seed)
    for kind in KINDS:
        g = Geometry(kind, 2)
        d_max = np.pi - 1e-3 if g.is_spherical else 3.0
        worst = {'centered mass vs vector sum': 0.0, 'second centered-mass form': 0.0, 'lever residual': 0.0,
                 'd1 + d2 = d': 0.0, 'center location': 0.0, 'deviation identity': 0.0}
        sign_violations = 0
        for _ in range(opts.instances):
            m_a, m_b = rng.uniform(0.1, 3.0, 2)
            d = float(rng.uniform(1e-3, d_max))
            a, b = place_pair(m_a, m_b, d, g)
            sol = locate_center(m_a, m_b, d, g)
            mass, point = decompose(a + b)
            m_cen = centered_mass_two(m_a, m_b, d, g)
            worst['centered mass vs vector sum'] = max(worst['centered mass vs vector sum'],
                                                       abs(m_cen - mass) / sol.m_tot)
            worst['second centered-mass form'] = max(worst['second centered-mass form'],
                                                     abs(sol.m_cen - sol.m_cen_lever) / sol.m_tot)
            worst['lever residual'] = max(worst['lever residual'], sol.lever_residual)
            worst['d1 + d2 = d'] = max(worst['d1 + d2 = d'], abs(sol.d1 + sol.d2 - d))
            worst['center location'] = max(worst['center location'], abs(distance(a.point, point, g) - sol.d1))
            worst['deviation identity'] = max(worst['deviation identity'],
                                              abs(deviation(m_a, m_b, d, g) - (m_cen ** 2 - sol.m_tot ** 2)))
            if g.is_spherical and not m_cen < sol.m_tot:
                sign_violations += 1
            elif g.is_hyperbolic and not m_cen > sol.m_tot:
                sign_violations += 1
            elif g.is_euclidean and abs(m_cen - sol.m_tot) > 1e-12 * sol.m_tot:
                sign_violations += 1
        tolerances = {'deviation identity': 1e-9, 'center location': 1e-9}
        for name, residual in worst.items():
            report.add(f"{name} {g}", residual, opts.tol(tolerances.get(name, 1e-10)))
        report.add(f"deviation sign law {g} (violations)", sign_violations, 0)
    return report


def suite_tables(opts: VerifyOptions) -> SuiteReport:
    """Closed-form ball, sphere and polygon masses against quadrature of the integral formula"""
    report = SuiteReport("tables", opts.seed)
    tol = opts.tol(1e-6)
    for kind in KINDS:
        for k in (1, 2, 3):
            q = QuadratureConfig.preset(opts.preset, k, opts.workers)
            for r in (0.3, 0.7, 1.1):
                g = Geometry(kind, k)
                ball = integrate_patch(ball_patch(k, r, g)[0], q)
                expected = ball_centered_mass(k, r, g)
                report.add(f"ball centered mass k={k} r={r} {kind.value}",
                           abs(ball.vector.mass - expected) / expected, tol)
                expected = ball_total_mass(k, r, g)
                report.add(f"ball total mass k={k} r={r} {kind.value}",
                           abs(ball.total_mass - expected) / expected, tol)
                shell = integrate_patch(sphere_shell_patch(k, r, g)[0], q)
                expected = sphere_centered_mass(k, r, g)
                report.add(f"sphere centered mass k={k} r={r} {kind.value}",
                           abs(shell.vector.mass - abs(expected)) / abs(expected), tol)
                expected = sphere_total_mass(k, r, g)
                report.add(f"sphere total mass k={k} r={r} {kind.value}",
                           abs(shell.total_mass - expected) / expected, tol)
    q2 = QuadratureConfig.preset(opts.preset, 2, opts.workers)
    for kind in (GeometryKind.SPHERICAL, GeometryKind.HYPERBOLIC):
        g = Geometry(kind, 2)
        for n, a in ((3, 0.4), (5, 0.6), (8, 0.2)):
            expected = ngon_centered_area(n, a, g)
            got = mass_center_of_union(ngon_patch(n, a, g), q2).mass
            report.add(f"{n}-gon centered area a={a} {kind.value}", abs(got - expected) / expected, tol)
    return report


def suite_derivative(opts: VerifyOptions) -> SuiteReport:
    """d/dr of the ball centered mass is the sphere centered mass"""
    report = SuiteReport("derivative", opts.seed)
    h = 1e-5
    for kind in KINDS:
        g = Geometry(kind, 4)
        for k in (1, 2, 3, 4):
            for r in (0.3, 0.7, 1.1):
                fd = (ball_centered_mass(k, r + h, g) - ball_centered_mass(k, r - h, g)) / (2 * h)
                expected = sphere_centered_mass(k - 1, r, g)
                report.add(f"d/dr ball k={k} r={r} {kind.value}", abs(fd - expected) / abs(expected), opts.tol(1e-6))
    return report


PAPPUS_CASES = (
    ("torus", GeometryKind.SPHERICAL, {'R': 0.8, 'r': 0.3}),
    ("torus", GeometryKind.HYPERBOLIC, {'R': 1.2, 'r': 0.5}),
    ("cone", GeometryKind.SPHERICAL, {'r': 0.4, 'h': 0.6}),
    ("cone", GeometryKind.SPHERICAL, {'r': 0.7, 'h': 0.9}),
    ("cone", GeometryKind.HYPERBOLIC, {'r': 0.4, 'h': 0.6}),
    ("cone", GeometryKind.HYPERBOLIC, {'r': 0.7, 'h': 0.9}),
)

DEGENERATION_CASES = (
    ("torus", {'R': 0.8, 'r': 0.3}, 3),
    ("cone", {'r': 0.4, 'h': 0.6}, 3),
    ("ball-cone", {'r': 0.4, 'h': 0.6}, 4),
    ("ngon-cone", {'n': 5, 'a': 0.6, 'h': 0.5}, 3),
)


def suite_pappus(opts: VerifyOptions) -> SuiteReport:
    """Line integral against full-dimensional oracles, closed forms and the Euclidean limit"""
    report = SuiteReport("pappus", opts.seed)
    oracle_q = QuadratureConfig(points_per_axis=48, workers=opts.workers)
    for key, kind, params in PAPPUS_CASES:
        solid = make_solid(key, Geometry(kind, 3), **params)
        label = f"{solid!r}"
        line = solid.pappus_volume()
        closed = solid.closed_form_volume()
        report.add(f"closed form vs line integral {label}", abs(closed - line) / line, opts.tol(1e-10))
        quad = oracle_volume_quadrature(solid, oracle_q)
        report.add(f"line integral vs quadrature oracle {label}", abs(line - quad.value) / line, opts.tol(1e-6))
        mc = oracle_volume_mc(solid, opts.mc_samples, opts.seed, opts.workers)
        report.add(f"Monte Carlo standard errors {label}", abs(mc.value - line) / mc.error_estimate, opts.tol(3.0))

    for kind in (GeometryKind.SPHERICAL, GeometryKind.HYPERBOLIC):
        g3 = Geometry(kind, 3)
        cone = make_solid("cone", g3, r=0.4, h=0.6).closed_form_volume()
        ball_cone = make_solid("ball-cone", g3, r=0.4, h=0.6).closed_form_volume()
        report.add(f"ball-cone n=3 vs cone {kind.value}", abs(cone - ball_cone) / cone, opts.tol(1e-10))
        ngon = make_solid("ngon-cone", g3, n=5, a=0.6, h=0.5)
        quad = oracle_volume_quadrature(ngon, oracle_q)
        line = ngon.pappus_volume()
        report.add(f"line integral vs quadrature oracle {ngon!r}", abs(line - quad.value) / line, opts.tol(1e-6))

    lam = 1e-3
    for key, params, n in DEGENERATION_CASES:
        scaled = {k: (v if k == 'n' else v * lam) for k, v in params.items()}
        euclid = make_solid(key, Geometry.euclidean(n), **scaled).closed_form_volume()
        for kind in (GeometryKind.SPHERICAL, GeometryKind.HYPERBOLIC):
            curved = make_solid(key, Geometry(kind, n), **scaled).closed_form_volume()
            report.add(f"Euclidean limit {key} {kind.value}", abs(curved / euclid - 1.0), opts.tol(1e-4))
    return report


def suite_fk(opts: VerifyOptions) -> SuiteReport:
    """Translation and reflection invariance of F_k, and distinct centers for distinct k"""
    report = SuiteReport("fk", opts.seed)
    rng = np.random.default_rng(opts.seed)
    instances = max(1, opts.instances // 10)
    for kind in (GeometryKind.EUCLIDEAN, GeometryKind.HYPERBOLIC):
        g = Geometry(kind, 1)
        for k in (0.0, 0.5, 1.0, 2.0, 5.0):
            sys_k = FkSystem(k, g)
            worst = 0.0
            for _ in range(instances):
                size = int(rng.integers(1, 7))
                masses = rng.uniform(0.1, 3.0, size)
                positions = rng.uniform(-2.0, 2.0, size)
                shift = float(rng.uniform(-3.0, 3.0))
                worst = max(worst,
                            fk_invariance_check(sys_k, masses, positions, shift, reflect=False),
                            fk_invariance_check(sys_k, masses, positions, shift, reflect=True))
            report.add(f"F_{k:g} invariance {g}", worst, opts.tol(1e-10))

        standard_k = 0.0 if g.is_euclidean else 1.0
        worst = 0.0
        for _ in range(instances):
            size = int(rng.integers(1, 7))
            masses = rng.uniform(0.1, 3.0, size)
            positions = rng.uniform(-2.0, 2.0, size)
            fk = fk_center(FkSystem(standard_k, g), masses, positions)
            std = standard_center(g, masses, positions)
            worst = max(worst, abs(fk[0] - std[0]) / std[0], abs(fk[1] - std[1]))
        report.add(f"F_{standard_k:g} equals the vector sum {g}", worst, opts.tol(1e-12 if g.is_euclidean else 1e-10))

    g = Geometry.euclidean(1)
    # equal masses at 0 and 1: both centers sit at 1/2, the masses tell them apart
    f1, f2 = FkSystem(1.0, g), FkSystem(2.0, g)
    a1 = fk_embed(f1, *fk_center(f1, [1.0, 1.0], [0.0, 1.0]))
    a2 = fk_embed(f2, *fk_center(f2, [1.0, 1.0], [0.0, 1.0]))
    report.add("F_1 and F_2 centers differ", float(np.linalg.norm(a1.coords - a2.coords)), 1e-6, at_least=True)
    return report


def suite_split_merge(opts: VerifyOptions) -> SuiteReport:
    """Halving distances, conserved vector sum and the limit point on S^1"""
    report = SuiteReport("split-merge", opts.seed)
    rng = np.random.default_rng(opts.seed)
    g = Geometry.spherical(1)
    halving = conservation = limit = 0.0
    for _ in range(max(1, opts.instances // 10)):
        m_a, m_b = rng.uniform(0.1, 3.0, 2)
        d = float(rng.uniform(0.05, np.pi - 0.05))
        trace = split_merge_pair(m_a, m_b, d, max_steps=40)
        a0, b0 = trace.pairs[0]
        total = a0.coords + b0.coords
        scale = float(np.sum(np.abs(a0.coords)) + np.sum(np.abs(b0.coords)))
        dists = np.array(trace.distances)
        if len(dists) > 1:
            halving = max(halving, float(np.max(np.abs(dists[1:] - dists[:-1] / 2.0))))
        for a, b in trace.pairs:
            conservation = max(conservation, _relative(a.coords + b.coords, total, scale))
        limit = max(limit, distance(trace.limit_point, decompose(MaterialVector(g, total))[1], g))
    report.add(f"distance halves each step {g}", halving, opts.tol(1e-10))
    report.add(f"vector sum conserved {g}", conservation, opts.tol(1e-12))
    report.add(f"limit point is the mass center {g}", limit, opts.tol(1e-9))
    return report


_SUITE_REGISTRY: Dict[str, Callable[[VerifyOptions], SuiteReport]] = {
    'axioms': suite_axioms,
    'two-point': suite_two_point,
    'tables': suite_tables,
    'derivative': suite_derivative,
    'pappus': suite_pappus,
    'fk': suite_fk,
    'split-merge': suite_split_merge,
}


def list_suites() -> List[str]:
    return list(_SUITE_REGISTRY)


def run_suite(name: str, opts: Optional[VerifyOptions] = None) -> List[SuiteReport]:
    """Run one suite, or every suite for "all" """
    opts = opts or VerifyOptions()
    if name == "all":
        names = list_suites()
    elif name in _SUITE_REGISTRY:
        names = [name]
    else:
        raise InputFormatError(f"Unknown verify suite {name!r}; expected 'all' or one of {list_suites()}")
    reports = []
    for suite in names:
        started = time.perf_counter()
        logger.info(f"verify {suite}: seed {opts.seed}")
        report = _SUITE_REGISTRY[suite](opts)
        report.elapsed = time.perf_counter() - started
        failed = [c.name for c in report.checks if not c.passed]
        logger.info(f"verify {suite}: {len(report.checks) - len(failed)}/{len(report.checks)} passed "
                    f"in {report.elapsed:.2f}s")
        reports.append(report)
    return reports


__all__ = [
    "Check",
    "SuiteReport",
    "VerifyOptions",
    "list_suites",
    "run_suite",
]
