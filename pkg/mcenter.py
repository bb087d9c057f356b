"""
mcenter: mass centers and Pappus volumes in E^n, S^n and H^n

Usage:
    mcenter center points.json
    mcenter center --geometry spherical --point 1:1,0 --point 2:0,1
    mcenter volume torus --geometry spherical -R 0.8 -r 0.3 --oracle both
    mcenter table balls --k 1 --k 2 --k 3 --r 0.5
    mcenter fk --k 2 --point 1:0 --point 3:1
    mcenter split-merge --masses 1 2 --distance 1.5
    mcenter verify all --seed 7

Reports go to stdout as JSON (17 significant digits) or CSV (12); logs go to
stderr.  Exit codes: 0 ok, 1 failed verification or internal error, 2 no mass
center, 64 bad input, 65 out-of-range parameters, 70 numerical failure.
"""
from __future__ import annotations

import functools
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv

from ambient import Geometry, GeometryKind, MaterialVector, decompose
from errors import InputFormatError, MassCenterError, NoMassCenterError
from manifolds import (
    ball_centered_mass,
    ball_total_mass,
    ngon_centered_area,
    ngon_total_area,
    sphere_centered_mass,
    sphere_total_mass,
)
from masscenter import PointSet, oplus, total_mass
from onedim import FkSystem, fk_center, fk_embed, split_merge_pair
from pappus import oracle_volume_mc, oracle_volume_quadrature
from quadrature import PRESETS, QuadratureConfig
from solids import build_solid, list_registered_solids, make_solid
from verification import VerifyOptions, run_suite

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

USAGE_EXIT = 64
OUTPUT_FORMATS = ("json", "csv")
KIND_NAMES = [kind.value for kind in GeometryKind]
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# ============================================================================
# Configuration
# ============================================================================

@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand

    Precedence: command-line flag, then MCENTER_* environment (or .env), then
    the defaults below.
    """

    output_format: str = "json"
    seed: int = 0
    preset: str = "standard"
    tolerance_scale: float = 1.0
    workers: int = 1
    mc_samples: int = 1_000_000
    log_level: str = "WARNING"

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise InputFormatError(f"Output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        if self.preset not in PRESETS:
            raise InputFormatError(f"Quadrature preset must be one of {PRESETS}, got {self.preset!r}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise InputFormatError(f"Log level must be one of {LOG_LEVELS}, got {self.log_level!r}")
        if self.seed < 0 or self.workers < 1 or self.mc_samples < 2 or not self.tolerance_scale > 0:
            raise InputFormatError(f"Invalid run configuration: {asdict(self)}")
        object.__setattr__(self, 'log_level', self.log_level.upper())

    @classmethod
    def from_env(cls, **overrides: Any) -> "RunConfig":
        """Defaults from MCENTER_* variables; overrides that are None are ignored"""
        try:
            config = cls(
                output_format=os.getenv('MCENTER_FORMAT', 'json'),
                seed=int(os.getenv('MCENTER_SEED', '0')),
                preset=os.getenv('MCENTER_QUADRATURE', 'standard'),
                tolerance_scale=float(os.getenv('MCENTER_TOLERANCE_SCALE', '1')),
                workers=int(os.getenv('MCENTER_WORKERS', '1')),
                mc_samples=int(os.getenv('MCENTER_MC_SAMPLES', '1000000')),
                log_level=os.getenv('MCENTER_LOG_LEVEL', 'WARNING'),
            )
        except ValueError as e:
            raise InputFormatError(f"Bad MCENTER_* environment value: {e}") from None
        return replace(config, **{k: v for k, v in overrides.items() if v is not None})

    def oracle_quadrature(self) -> QuadratureConfig:
        points = 96 if self.preset == "precise" else 48
        return QuadratureConfig(points_per_axis=points, workers=self.workers)


# ============================================================================
# Output
# ============================================================================

def format_json(obj: Any) -> str:
    """Deterministic JSON with every float printed to 17 significant digits"""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {format_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(format_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            return "null"
        return format(value, '.17g')
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _flatten(payload: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    row: Dict[str, Any] = {}
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            row.update(_flatten(value, f"{name}."))
        elif isinstance(value, (list, tuple, np.ndarray)):
            if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in value):
                row.update({f"{name}[{i}]": v for i, v in enumerate(value)})
        else:
            row[name] = value
    return row


def emit(payload: Dict[str, Any], rows: Optional[List[Dict[str, Any]]] = None) -> None:
    """Write a report in the configured format; CSV uses rows, or the flattened payload"""
    ctx = click.get_current_context(silent=True)
    config: RunConfig = ctx.obj if ctx is not None and isinstance(ctx.obj, RunConfig) else RunConfig()
    if config.output_format == "csv":
        frame = pd.DataFrame(rows if rows is not None else [_flatten(payload)])
        click.echo(frame.to_csv(index=False, float_format='%.12g'), nl=False)
    else:
        click.echo(format_json(payload))


def report_errors(func: Callable) -> Callable:
    """Turn library errors into a JSON status report and the error's exit code"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except NoMassCenterError as e:
            click.echo(format_json({'status': 'no mass center', 'error': str(e)}))
            ctx.exit(e.exit_code)
        except MassCenterError as e:
            logger.error(f"{ctx.info_name}: {e}")
            click.echo(format_json({'status': 'error', 'error': str(e), 'type': type(e).__name__}))
            ctx.exit(e.exit_code)
    return wrapper


class McenterGroup(click.Group):
    """Click group with the mcenter exit-code contract (usage errors exit 64)"""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(USAGE_EXIT)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        sys.exit(rv if isinstance(rv, int) else 0)


def parse_mass_point(text: str) -> Tuple[float, List[float]]:
    """'m:x1,x2,...' -> (m, [x1, x2, ...])"""
    mass, sep, coords = text.partition(":")
    if not sep or not coords:
        raise InputFormatError(f"Expected MASS:X1,X2,..., got {text!r}")
    try:
        return float(mass), [float(x) for x in coords.split(",")]
    except ValueError:
        raise InputFormatError(f"Expected numbers in {text!r}") from None


# ============================================================================
# Commands
# ============================================================================

@click.group(cls=McenterGroup)
@click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), help='Report format [env MCENTER_FORMAT]')
@click.option('--preset', type=click.Choice(PRESETS), help='Quadrature preset [env MCENTER_QUADRATURE]')
@click.option('--workers', type=click.IntRange(min=1), help='Worker threads [env MCENTER_WORKERS]')
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False),
              help='Log level on stderr [env MCENTER_LOG_LEVEL]')
@click.pass_context
def cli(ctx, output_format, preset, workers, log_level):
    """Mass centers and Pappus volumes in Euclidean, spherical and hyperbolic space"""
    try:
        config = RunConfig.from_env(output_format=output_format, preset=preset, workers=workers, log_level=log_level)
    except InputFormatError as e:
        raise click.UsageError(str(e)) from None
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, config.log_level),
        format='%(asctime)s %(name)s %(levelname)s: %(message)s',
    )
    logging.getLogger().setLevel(getattr(logging, config.log_level))
    ctx.obj = config


@cli.command()
@click.argument('file', type=click.File('r', encoding='utf-8'), required=False)
@click.option('--point', 'points', multiple=True, metavar='M:X1,X2,...', help='Mass and on-space coordinates')
@click.option('--geometry', type=click.Choice(KIND_NAMES), help='Geometry of --point entries')
@report_errors
def center(file, points, geometry):
    """Mass center of a point set (JSON file, '-' for stdin, or --point entries)"""
    if file is not None:
        s = PointSet.from_json(file.read())
    elif points:
        if geometry is None:
            raise InputFormatError("--point needs --geometry")
        parsed = [parse_mass_point(p) for p in points]
        g = Geometry(geometry, len(parsed[0][1]) - 1)
        if any(len(x) != g.dim for _, x in parsed):
            raise InputFormatError("Every --point needs the same number of coordinates")
        s = PointSet.from_masses_points(g, [m for m, _ in parsed], [x for _, x in parsed])
    else:
        raise InputFormatError("Give a point-set FILE or at least one --point")

    vector = oplus(s)
    m_tot = total_mass(s)
    if vector.is_zero:
        emit({'status': 'no mass center', 'geometry': s.geometry.to_dict(), 'total_mass': m_tot,
              'error': 'The material vectors sum to zero'})
        click.get_current_context().exit(NoMassCenterError.exit_code)
    m_cen, point = decompose(vector)
    emit({
        'status': 'ok',
        'geometry': s.geometry.to_dict(),
        'vector': vector.coords,
        'mass_center': point,
        'centered_mass': m_cen,
        'total_mass': m_tot,
        'deviation': m_cen ** 2 - m_tot ** 2,
    })


@cli.command()
@click.argument('solid', required=False)
@click.option('--geometry', type=click.Choice(KIND_NAMES), default='euclidean', show_default=True)
@click.option('-R', 'big_r', type=float, help='Torus center radius')
@click.option('-r', 'r', type=float, help='Tube or base radius')
@click.option('-H', 'h', type=float, help='Cone height')
@click.option('-a', 'a', type=float, help='Base polygon edge')
@click.option('--sides', type=int, help='Base polygon sides')
@click.option('--dim', type=int, help='Ambient dimension of a ball-cone')
@click.option('--spec', 'spec_file', type=click.File('r', encoding='utf-8'), help='SolidSpec JSON file')
@click.option('--oracle', type=click.Choice(['none', 'mc', 'quad', 'both']), default='none', show_default=True)
@click.option('--samples', type=int, help='Monte Carlo samples [env MCENTER_MC_SAMPLES]')
@click.option('--seed', type=click.IntRange(min=0), help='Monte Carlo seed [env MCENTER_SEED]')
@click.option('--list', 'list_solids', is_flag=True, help='List the solid catalogue')
@click.pass_obj
@report_errors
def volume(config: RunConfig, solid, geometry, big_r, r, h, a, sides, dim, spec_file, oracle, samples, seed,
           list_solids):
    """Volume of a catalogue solid: closed form, Pappus line integral and optional oracles"""
    if list_solids:
        emit({'status': 'ok', 'solids': list_registered_solids()})
        return
    if spec_file is not None:
        try:
            body = build_solid(json.load(spec_file))
        except json.JSONDecodeError as e:
            raise InputFormatError(f"SolidSpec is not valid JSON: {e}") from None
    elif solid is None:
        raise InputFormatError("Give a SOLID name, --spec FILE or --list")
    else:
        params = {name: value for name, value in (('R', big_r), ('r', r), ('h', h), ('a', a)) if value is not None}
        if sides is not None:
            params['n'] = sides
        n = 3
        if solid == "ball-cone" and dim is not None:
            params['n'] = dim
            n = dim
        elif dim is not None:
            n = dim
        body = make_solid(solid, Geometry(geometry, n), **params)

    closed = body.closed_form_volume()
    line = body.pappus_volume()
    payload: Dict[str, Any] = {
        'status': 'ok',
        'solid': body.to_dict(),
        'volume': closed,
        'pappus': line,
    }
    reports = []
    if oracle in ('quad', 'both'):
        reports.append(oracle_volume_quadrature(body, config.oracle_quadrature()))
    if oracle in ('mc', 'both'):
        reports.append(oracle_volume_mc(body, samples or config.mc_samples,
                                        config.seed if seed is None else seed, config.workers))
    if reports:
        payload['oracles'] = [
            {**rep.to_dict(), 'rel_diff': abs(rep.value - closed) / closed if closed else abs(rep.value)}
            for rep in reports
        ]
    emit(payload)


def _table_rows(family: str, sizes: Sequence[int], radii: Sequence[float],
                kinds: Sequence[str]) -> List[Dict[str, Any]]:
    order = {kind: i for i, kind in enumerate(KIND_NAMES)}
    grid = sorted({(s, x, kind) for s in sizes for x in radii for kind in kinds},
                  key=lambda t: (t[0], t[1], order[t[2]]))
    rows = []
    for size, x, kind in grid:
        g = Geometry(kind, max(size, 2) if family == "ngons" else max(size, 1))
        if family == "balls":
            rows.append({'k': size, 'r': x, 'geometry': kind,
                         'total_mass': ball_total_mass(size, x, g), 'centered_mass': ball_centered_mass(size, x, g)})
        elif family == "spheres":
            rows.append({'k': size, 'r': x, 'geometry': kind,
                         'total_mass': sphere_total_mass(size, x, g),
                         'centered_mass': sphere_centered_mass(size, x, g)})
        else:
            rows.append({'n': size, 'a': x, 'geometry': kind,
                         'total_mass': ngon_total_area(size, x, g), 'centered_mass': ngon_centered_area(size, x, g)})
    return rows


@cli.command()
@click.argument('family', type=click.Choice(['balls', 'spheres', 'ngons']))
@click.option('--k', 'ks', type=int, multiple=True, help='Dimension k (balls, spheres)')
@click.option('--n', 'ns', type=int, multiple=True, help='Number of sides (ngons)')
@click.option('--r', 'radii', type=float, multiple=True, help='Radius (balls, spheres)')
@click.option('--a', 'edges', type=float, multiple=True, help='Edge length (ngons)')
@click.option('--geometry', 'kinds', type=click.Choice(KIND_NAMES), multiple=True,
              help='Geometries to tabulate [default: all]')
@report_errors
def table(family, ks, ns, radii, edges, kinds):
    """Total and centered masses of balls, spheres or regular polygons over a grid"""
    if family == "ngons":
        sizes, values = ns, edges
    else:
        sizes, values = ks, radii
    kinds = kinds or tuple(KIND_NAMES)
    if not sizes or not values:
        raise InputFormatError(f"Empty grid for {family}: give at least one size and one radius or edge")
    rows = _table_rows(family, sizes, values, kinds)
    emit({'status': 'ok', 'family': family, 'rows': rows}, rows=rows)


@cli.command()
@click.option('--k', 'k', type=float, required=True, help='System parameter, 0 <= k <= 50')
@click.option('--geometry', type=click.Choice(['euclidean', 'hyperbolic']), default='euclidean', show_default=True)
@click.option('--point', 'points', multiple=True, required=True, metavar='M:X', help='Mass and intrinsic position')
@report_errors
def fk(k, geometry, points):
    """Center of the one-parameter F_k system on E^1 or H^1"""
    parsed = [parse_mass_point(p) for p in points]
    if any(len(x) != 1 for _, x in parsed):
        raise InputFormatError("F_k positions are single numbers")
    sys_k = FkSystem(k, Geometry(geometry, 1))
    mass, position = fk_center(sys_k, [m for m, _ in parsed], [x[0] for _, x in parsed])
    emit({
        'status': 'ok',
        'k': sys_k.k,
        'geometry': sys_k.geometry.to_dict(),
        'mass': mass,
        'position': position,
        'vector': fk_embed(sys_k, mass, position).coords,
    })


@cli.command('split-merge')
@click.option('--masses', type=float, nargs=2, required=True, metavar='MA MB')
@click.option('--distance', type=float, required=True, help='Arc distance on S^1')
@click.option('--steps', type=click.IntRange(min=1), default=40, show_default=True)
@report_errors
def split_merge_cmd(masses, distance, steps):
    """Split-and-merge trace of two material points on S^1"""
    trace = split_merge_pair(masses[0], masses[1], distance, max_steps=steps)
    a, b = trace.pairs[0]
    center_point = decompose(MaterialVector(trace.geometry, a.coords + b.coords))[1]
    emit({'status': 'ok', **trace.to_dict(), 'mass_center': center_point})


@cli.command()
@click.argument('suite')
@click.option('--seed', type=click.IntRange(min=0), help='Instance seed [env MCENTER_SEED]')
@click.option('--tolerance-scale', type=float, help='Multiply every tolerance [env MCENTER_TOLERANCE_SCALE]')
@click.option('--samples', type=int, help='Monte Carlo samples for the pappus suite')
@click.option('--instances', type=click.IntRange(min=1), default=1000, show_default=True,
              help='Random instances per geometry')
@click.pass_obj
@report_errors
def verify(config: RunConfig, suite, seed, tolerance_scale, samples, instances):
    """Run a verification suite (or 'all'); exit 0 iff every check passes"""
    config = replace(config, **{k: v for k, v in (('seed', seed), ('tolerance_scale', tolerance_scale))
                                if v is not None})
    opts = VerifyOptions(
        seed=config.seed,
        tolerance_scale=config.tolerance_scale,
        preset=config.preset,
        instances=instances,
        mc_samples=samples or 10_000_000,
        workers=config.workers,
    )
    reports = run_suite(suite, opts)
    passed = all(rep.passed for rep in reports)
    rows = [{'suite': rep.suite, **check.to_dict()} for rep in reports for check in rep.checks]
    emit({'status': 'ok' if passed else 'fail', 'pass': passed, 'suites': [rep.to_dict() for rep in reports]},
         rows=rows)
    if not passed:
        click.get_current_context().exit(1)


def main():
    cli(prog_name='mcenter')


if __name__ == '__main__':
    main()
