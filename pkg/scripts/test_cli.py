#!/usr/bin/env python3
"""
Tests for the mcenter command line: reports, formats and exit codes
"""
import json

import numpy as np
import pytest
from click.testing import CliRunner

from ambient import Geometry
from errors import InputFormatError
from masscenter import random_point_set
from mcenter import RunConfig, cli, format_json, parse_mass_point


@pytest.fixture
def runner():
    return CliRunner()


def run_json(runner, args, exit_code=0):
    result = runner.invoke(cli, args)
    assert result.exit_code == exit_code, result.output
    return json.loads(result.stdout)


# ============================================================================
# Helpers
# ============================================================================

def test_format_json_prints_full_precision():
    text = format_json({'x': 0.1, 'n': 3, 'ok': True, 'bad': float('nan'), 'v': np.array([1.0, 2.5])})
    assert text == '{"x": 0.10000000000000001, "n": 3, "ok": true, "bad": null, "v": [1, 2.5]}'


def test_parse_mass_point():
    assert parse_mass_point("2.5:1,0,0") == (2.5, [1.0, 0.0, 0.0])
    with pytest.raises(InputFormatError):
        parse_mass_point("2.5")
    with pytest.raises(InputFormatError):
        parse_mass_point("heavy:1,0")


def test_run_config_precedence(monkeypatch):
    monkeypatch.setenv('MCENTER_SEED', '9')
    monkeypatch.setenv('MCENTER_FORMAT', 'csv')
    config = RunConfig.from_env(output_format='json', workers=None)
    assert config.seed == 9
    assert config.output_format == 'json'
    assert config.workers == 1


def test_run_config_rejects_bad_values(monkeypatch):
    monkeypatch.setenv('MCENTER_WORKERS', 'many')
    with pytest.raises(InputFormatError):
        RunConfig.from_env()
    with pytest.raises(InputFormatError):
        RunConfig(preset='sloppy')


# ============================================================================
# center
# ============================================================================

def test_center_from_points(runner):
    report = run_json(runner, ['center', '--geometry', 'euclidean', '--point', '2:1,2,1'])
    assert report['status'] == 'ok'
    assert report['mass_center'] == [1.0, 2.0, 1.0]
    assert report['centered_mass'] == pytest.approx(2.0)
    assert report['deviation'] == pytest.approx(0.0, abs=1e-12)


def test_center_from_file(runner, tmp_path):
    path = tmp_path / "points.json"
    path.write_text(json.dumps({
        'geometry': {'kind': 'spherical', 'n': 1},
        'points': [{'mass': 1, 'point': [1, 0]}, {'mass': 3, 'point': [0, 1]}],
    }))
    report = run_json(runner, ['center', str(path)])
    assert report['centered_mass'] == pytest.approx(np.sqrt(10.0))
    assert report['total_mass'] == pytest.approx(4.0)
    assert report['mass_center'] == pytest.approx([1 / np.sqrt(10.0), 3 / np.sqrt(10.0)])
    assert report['deviation'] < 0


def test_center_antipodal_points_have_no_mass_center(runner):
    report = run_json(runner, ['center', '--geometry', 'spherical', '--point', '1:1,0', '--point', '1:-1,0'],
                      exit_code=2)
    assert report['status'] == 'no mass center'


def test_center_off_space_point(runner):
    result = runner.invoke(cli, ['center', '--geometry', 'spherical', '--point', '1:1,1'])
    assert result.exit_code == 65


def test_center_needs_input(runner):
    result = runner.invoke(cli, ['center'])
    assert result.exit_code == 64


def test_bad_choice_is_a_usage_error(runner):
    result = runner.invoke(cli, ['center', '--geometry', 'flat', '--point', '1:0,1'])
    assert result.exit_code == 64


# ============================================================================
# volume
# ============================================================================

def test_volume_euclidean_cone(runner):
    report = run_json(runner, ['volume', 'cone', '--geometry', 'euclidean', '-r', '1', '-H', '3'])
    assert report['volume'] == pytest.approx(np.pi)
    assert report['pappus'] == pytest.approx(np.pi, rel=1e-10)
    assert 'oracles' not in report


def test_volume_out_of_range(runner):
    result = runner.invoke(cli, ['volume', 'cone', '--geometry', 'spherical', '-r', '2', '-H', '2'])
    assert result.exit_code == 65


def test_volume_large_hyperbolic_cone(runner):
    report = run_json(runner, ['volume', 'cone', '--geometry', 'hyperbolic', '-r', '3', '-H', '3'])
    assert report['volume'] == pytest.approx(7.180955272851749, rel=1e-10)
    assert report['pappus'] == pytest.approx(report['volume'], rel=1e-8)


def test_volume_unknown_solid(runner):
    result = runner.invoke(cli, ['volume', 'prism', '-r', '1'])
    assert result.exit_code == 64


def test_volume_list(runner):
    report = run_json(runner, ['volume', '--list'])
    assert [entry['key'] for entry in report['solids']] == ['torus', 'cone', 'ball-cone', 'ngon-cone']


def test_volume_from_spec_with_monte_carlo(runner, tmp_path):
    path = tmp_path / "torus.json"
    path.write_text(json.dumps({'solid': 'torus', 'geometry': 'spherical', 'params': {'R': 0.8, 'r': 0.3}}))
    report = run_json(runner, ['volume', '--spec', str(path), '--oracle', 'mc', '--samples', '200000', '--seed', '5'])
    expected = 2 * np.pi ** 2 * np.sin(0.8) * np.sin(0.3) ** 2
    assert report['volume'] == pytest.approx(expected)
    [oracle] = report['oracles']
    assert oracle['method'] == 'mc'
    assert abs(oracle['value'] - expected) <= 5.0 * oracle['stderr']


def test_volume_ball_cone_dimension(runner):
    report = run_json(runner, ['volume', 'ball-cone', '--geometry', 'euclidean', '-r', '0.5', '-H', '1',
                               '--dim', '2'])
    assert report['volume'] == pytest.approx(0.5)
    assert report['solid']['geometry'] == {'kind': 'euclidean', 'n': 2}


# ============================================================================
# table
# ============================================================================

def test_table_balls_grid(runner):
    report = run_json(runner, ['table', 'balls', '--k', '3', '--k', '1', '--k', '2', '--r', '0.5'])
    rows = report['rows']
    assert len(rows) == 9
    assert [row['k'] for row in rows] == [1, 1, 1, 2, 2, 2, 3, 3, 3]
    assert [row['geometry'] for row in rows[:3]] == ['euclidean', 'spherical', 'hyperbolic']
    assert rows[0]['total_mass'] == pytest.approx(1.0)


def test_table_zero_sphere(runner):
    report = run_json(runner, ['table', 'spheres', '--k', '0', '--r', '0.5', '--geometry', 'spherical'])
    [row] = report['rows']
    assert row['centered_mass'] == pytest.approx(2 * np.cos(0.5))
    assert row['total_mass'] == pytest.approx(2.0)


def test_table_empty_grid(runner):
    result = runner.invoke(cli, ['table', 'balls', '--k', '1'])
    assert result.exit_code == 64


def test_table_csv(runner):
    result = runner.invoke(cli, ['--format', 'csv', 'table', 'balls', '--k', '2', '--r', '0.5',
                                 '--geometry', 'euclidean'])
    assert result.exit_code == 0, result.output
    lines = result.stdout.strip().splitlines()
    assert lines[0] == 'k,r,geometry,total_mass,centered_mass'
    assert lines[1] == '2,0.5,euclidean,0.785398163397,0.785398163397'


# ============================================================================
# fk, split-merge, verify
# ============================================================================

def test_fk_weighted_average(runner):
    report = run_json(runner, ['fk', '--k', '0', '--point', '1:0', '--point', '3:4'])
    assert report['mass'] == pytest.approx(4.0)
    assert report['position'] == pytest.approx(3.0)


def test_fk_rejects_spherical(runner):
    result = runner.invoke(cli, ['fk', '--k', '1', '--geometry', 'spherical', '--point', '1:0'])
    assert result.exit_code == 64


def test_split_merge_equal_masses(runner):
    report = run_json(runner, ['split-merge', '--masses', '1.5', '1.5', '--distance', '0.8'])
    assert report['steps'] == 1
    assert report['mass_center'] == pytest.approx([np.sin(0.4), np.cos(0.4)])


def test_verify_unknown_suite(runner):
    result = runner.invoke(cli, ['verify', 'bogus'])
    assert result.exit_code == 64


def test_verify_split_merge(runner):
    report = run_json(runner, ['verify', 'split-merge', '--instances', '10', '--seed', '3'])
    assert report['status'] == 'ok'
    assert report['pass'] is True
    assert report['suites'][0]['seed'] == 3


def test_center_hyperbolic_file_has_excess_centered_mass(runner, tmp_path, rng):
    path = tmp_path / "h2.json"
    path.write_text(json.dumps(random_point_set(Geometry.hyperbolic(2), 5, rng).to_json()))
    report = run_json(runner, ['center', str(path)])
    assert report['centered_mass'] >= report['total_mass']
    assert report['deviation'] > 0
