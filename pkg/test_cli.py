"""
Tests for the command line interface
"""
import json

import pytest
from click.testing import CliRunner

import commands
from app import cli
from config import TestingConfig
from services.serialization import read_context


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def triangle_path(tmp_path, triangle_dict):
    path = tmp_path / 'triangle.json'
    path.write_text(json.dumps(triangle_dict))
    return str(path)


@pytest.fixture
def segment_path(tmp_path):
    path = tmp_path / 'segment.json'
    path.write_text(json.dumps({'n': 3, 'k': 1, 'm': 1, 'Z': [['1', '1'], ['1', '2'], ['1', '3']],
                                'C': [['1', '1', '1']]}))
    return str(path)


def invoke(runner, *args):
    return runner.invoke(cli, list(args), obj={})


def test_sample_is_reproducible(runner, tmp_path):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert invoke(runner, 'sample', '--n', '5', '--k', '2', '--m', '2', '--seed', '3', '--out', str(first)).exit_code == 0
    assert invoke(runner, 'sample', '--n', '5', '--k', '2', '--m', '2', '--seed', '3', '--out', str(second)).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert read_context(str(first)).n == 5


def test_sample_refuses_large_n(runner):
    result = invoke(runner, 'sample', '--n', '40', '--k', '1', '--m', '2')
    assert result.exit_code == 1


def test_twistor_table(runner, triangle_path, tmp_path):
    out = tmp_path / 'twistors.csv'
    assert invoke(runner, 'twistor', triangle_path, '--out', str(out)).exit_code == 0
    assert out.read_text().splitlines() == ['window,value,sign', '1 2,2,1', '1 3,-2,-1', '2 3,2,1']


@pytest.mark.parametrize('mode,expected', [('random', 1), ('mu', 1)])
def test_winding_command(runner, triangle_path, tmp_path, mode, expected):
    out = tmp_path / 'winding.json'
    assert invoke(runner, 'winding', triangle_path, '--mode', mode, '--out', str(out)).exit_code == 0
    data = json.loads(out.read_text())
    assert data['magnitude'] == expected
    assert data['ray']['mode']


def test_winding_on_the_coarse_boundary_exits_4(runner, tmp_path, triangle_dict):
    data = {key: value for key, value in triangle_dict.items() if key != 'C'}
    data['Y'] = [['2', '3', '5']]
    path = tmp_path / 'wall.json'
    path.write_text(json.dumps(data))
    assert invoke(runner, 'winding', str(path)).exit_code == 4


def test_crossing_command(runner, segment_path, tmp_path):
    out = tmp_path / 'crossing.json'
    assert invoke(runner, 'crossing', segment_path, '--out', str(out)).exit_code == 0
    data = json.loads(out.read_text())
    assert data['count'] == 1
    assert data['cells'] == [{'vertices': [2], 'dim': 0}]
    assert data['degenerate']


def test_membership_command(runner, triangle_path, segment_path, tmp_path):
    out = tmp_path / 'membership.json'
    assert invoke(runner, 'membership', triangle_path, '--out', str(out)).exit_code == 0
    data = json.loads(out.read_text())
    assert data['verdict'] == 'Inside'
    assert data['sign_flips']['criterion_inside']

    assert invoke(runner, 'membership', segment_path, '--out', str(out)).exit_code == 0
    data = json.loads(out.read_text())
    assert data['verdict'] == 'Unproven'
    assert data['crossing'] == 1


def test_bad_input_exit_codes(runner, tmp_path):
    malformed = tmp_path / 'bad.json'
    malformed.write_text('{"n": 3,')
    assert invoke(runner, 'crossing', str(malformed)).exit_code == 2

    negative = tmp_path / 'negative.json'
    negative.write_text(json.dumps({'n': 3, 'k': 1, 'm': 1, 'Z': [['1', '2'], ['1', '1'], ['1', '3']],
                                    'C': [['1', '1', '1']]}))
    assert invoke(runner, 'crossing', str(negative)).exit_code == 3


def test_wrong_parity_is_a_contract_error(runner, triangle_path):
    assert invoke(runner, 'crossing', triangle_path).exit_code == 1


def test_render_command(runner, triangle_path, tmp_path):
    out = tmp_path / 'polygon.svg'
    assert invoke(runner, 'render', triangle_path, '--out', str(out)).exit_code == 0
    assert out.read_text().endswith('</svg>\n')


def test_verify_writes_a_report(runner, tmp_path):
    out = tmp_path / 'report.json'
    result = invoke(runner, 'verify', '--grid', 'm=2;k=1', '--seeds', '1', '--out', str(out))
    assert result.exit_code == 0
    report = json.loads(out.read_text())
    assert report['all_passed']
    assert report['grid'] == [[3, 1, 2, 0]]
    assert report['settings']['DEFAULT_SEEDS'] == 3
    assert not (tmp_path / 'report.failure.json').exists()


def test_verify_rejects_a_bad_grid(runner):
    assert invoke(runner, 'verify', '--grid', 'm=2').exit_code == 2


def test_show_config(runner):
    result = invoke(runner, '--show-config')
    assert result.exit_code == 0
    assert json.loads(result.stdout)['MAX_N'] == 14


def test_help_without_a_subcommand(runner):
    result = invoke(runner)
    assert result.exit_code == 0
    assert 'winding' in result.stdout


def test_input_limit_follows_the_active_settings(runner, segment_path, monkeypatch):
    monkeypatch.setattr(TestingConfig, 'MAX_N', 2)
    assert invoke(runner, '--env', 'testing', 'crossing', segment_path).exit_code == 1
    assert invoke(runner, '--env', 'testing', 'crossing', segment_path, '--allow-large-n').exit_code == 0


def test_winding_uses_the_configured_retries(runner, triangle_path, monkeypatch):
    monkeypatch.setattr(TestingConfig, 'RAY_RETRIES', 7)
    seen = []
    original = commands.winding_number

    def recording(ctx, ray_seed=0, retries=None):
        seen.append(retries)
        return original(ctx, ray_seed=ray_seed, retries=retries)

    monkeypatch.setattr(commands, 'winding_number', recording)
    assert invoke(runner, '--env', 'testing', 'winding', triangle_path).exit_code == 0
    assert seen == [7]
