#!/usr/bin/env python3
"""Diagnose a catalogue solid: every volume method side by side, with timings"""

import os
import sys
import time

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ambient import Geometry  # noqa: E402
from pappus import oracle_volume_mc, oracle_volume_quadrature  # noqa: E402
from quadrature import QuadratureConfig  # noqa: E402
from solids import make_solid  # noqa: E402


def diagnose_solid(key, kind, samples=1_000_000, seed=0, **params):
    """Print closed form, Pappus line integral, quadrature and Monte Carlo volumes"""

    print(f"\n{'='*70}")
    print(f"Diagnosing {key} in {kind} space: {params}")
    print(f"{'='*70}\n")

    try:
        solid = make_solid(key, Geometry(kind, params.pop('dim', 3)), **params)
        print(f"✓ Solid: {solid!r}")
        print(f"  Bounding radius: {solid.bounding_radius():.6g}\n")

        started = time.perf_counter()
        closed = solid.closed_form_volume()
        print(f"✓ Method 1: closed form         {closed:.17g}  ({time.perf_counter() - started:.3f}s)")

        started = time.perf_counter()
        line = solid.pappus_volume()
        print(f"✓ Method 2: Pappus line integral {line:.17g}  ({time.perf_counter() - started:.3f}s)")
        print(f"  relative difference: {abs(line - closed) / closed:.3e}")

        for points in (24, 48):
            try:
                report = oracle_volume_quadrature(solid, QuadratureConfig(points_per_axis=points))
                print(f"\n✓ Method 3: Gauss-Legendre {points}^d  {report.value:.17g}  ({report.elapsed:.3f}s)")
                print(f"  estimated error: {report.error_estimate:.3e}, "
                      f"relative difference: {abs(report.value - closed) / closed:.3e}")
            except Exception as e:
                print(f"  ERROR: {str(e)}")

        try:
            report = oracle_volume_mc(solid, samples, seed)
            sigmas = abs(report.value - closed) / report.error_estimate
            print(f"\n✓ Method 4: Monte Carlo n={samples}  {report.value:.10g} ± {report.error_estimate:.2e}"
                  f"  ({report.elapsed:.3f}s)")
            print(f"  distance from closed form: {sigmas:.2f} standard errors")
        except Exception as e:
            print(f"  ERROR: {str(e)}")

        print(f"\n{'='*70}")
        print("Diagnosis Complete!")
        print(f"{'='*70}\n")

    except Exception as e:
        print(f"\n✗ ERROR: {str(e)}")
        import traceback
        traceback.print_exc()


if __name__ == '__main__':
    diagnose_solid('torus', 'spherical', R=0.8, r=0.3)
    diagnose_solid('cone', 'hyperbolic', r=0.7, h=0.9)
    diagnose_solid('ngon-cone', 'spherical', n=5, a=0.6, h=0.5)
    diagnose_solid('ball-cone', 'hyperbolic', dim=4, r=0.4, h=0.6)
