import inspect
import json
import logging

import numpy as np
import pytest

from src.cli import check, commands, qwalk
from src.config.settings import MAX_SPECTRAL_N, VERSION
from src.core import spectral
from src.types.errors import InvalidCoinError, InvariantViolation


def run(tmp_path, *argv):
    return qwalk.main([*argv, '--out', str(tmp_path)])


def read_json(path):
    return json.loads(path.read_text(encoding='utf-8'))


def test_spectrum_command_writes_csv_and_json(tmp_path):
    assert run(tmp_path, 'spectrum', '--n', '4') == qwalk.EXIT_OK
    lines = (tmp_path / 'spectrum.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'mu,eta,degeneracy'
    assert len(lines) - 1 == spectral.eigenvalue_count(4)
    summary = read_json(tmp_path / 'spectrum.json')
    assert summary['config']['command'] == 'spectrum'
    assert summary['config']['n'] == 4
    assert summary['version'] in (VERSION, qwalk.package_version())
    assert summary['results']['total_degeneracy'] == 16


def test_symmetry_command_reads_binary_indices(tmp_path):
    assert run(tmp_path, 'symmetry', '--n', '7', '--k', '(1001010)b') == qwalk.EXIT_OK
    results = read_json(tmp_path / 'symmetry.json')['results']
    assert results['k'] == 74
    assert results['S_up'] == [1, 4, 6]
    assert results['p_k'] == results['preserving_swaps'] == 9
    assert results['mu'] == results['mu_from_swaps'] == 48


def test_single_walker_command(tmp_path):
    assert run(tmp_path, 'single', '--t', '2', '--format', 'csv,json,svg') == qwalk.EXIT_OK
    results = read_json(tmp_path / 'single.json')['results']
    assert results['total_probability'] == pytest.approx(1.0, abs=1e-12)
    assert (tmp_path / 'single_t2.csv').exists()
    assert (tmp_path / 'single_t2.svg').exists()


def test_c2_command_reports_the_eigenvalue(tmp_path):
    assert run(tmp_path, 'c2', '--n', '3', '--k', '6') == qwalk.EXIT_OK
    results = read_json(tmp_path / 'c2.json')['results']
    assert results['c2'] == pytest.approx(spectral.eta(3, 6), abs=1e-12)
    lines = (tmp_path / 'c2.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'n,c2,eta_min,eta_max'
    assert float(lines[1].split(',')[1]) == pytest.approx(spectral.eta(3, 6), abs=1e-12)


def test_entropy_command_compares_with_the_closed_form(tmp_path):
    assert run(tmp_path, 'entropy', '--n', '5', '--k', '6') == qwalk.EXIT_OK
    results = read_json(tmp_path / 'entropy.json')['results']
    assert results['rank'] == 2
    assert results['entropy'] == pytest.approx(results['entropy_closed'], abs=1e-10)


@pytest.mark.parametrize(
    'argv',
    [
        ['c2', '--n', '2', '--coin', '1,1,0,0'],
        ['c2', '--n', '2', '--coin', 'eigen:9'],
        ['spectrum', '--n', '3', '--format', 'pdf'],
        ['jointdist', '--n', '3', '--k', '2', '--t', '3', '--pair', '1'],
        ['moments', '--n', '3', '--t', '3'],
    ],
)
def test_bad_requests_exit_with_a_usage_error(tmp_path, argv):
    assert run(tmp_path, *argv) == qwalk.EXIT_USAGE


def test_missing_subcommand_is_a_usage_error():
    assert qwalk.main([]) == qwalk.EXIT_USAGE


def test_oversized_requests_exit_with_a_usage_error(tmp_path, caplog):
    assert run(tmp_path, 'spectrum', '--n', str(MAX_SPECTRAL_N + 1)) == qwalk.EXIT_USAGE
    assert not any(record.levelno >= logging.CRITICAL for record in caplog.records)
    assert not (tmp_path / 'spectrum.csv').exists()


def test_array_results_reach_the_json_summary(tmp_path):
    assert run(tmp_path, 'moments', '--n', '2', '--k', '1', '--t', '10') == qwalk.EXIT_OK
    table = read_json(tmp_path / 'moments.json')['results']['pair_moments']
    assert len(table) == 2 and table[0][1] == table[1][0]
    assert run(tmp_path, 'entropy', '--n', '4', '--k', '2') == qwalk.EXIT_OK
    nu = read_json(tmp_path / 'entropy.json')['results']['nu']
    assert sum(nu) == pytest.approx(1.0, abs=1e-12)


def test_identical_runs_write_identical_bytes(tmp_path):
    argv = ['moments', '--n', '3', '--k', '2', '--t', '12', '--positions', '0,1,-1']
    assert run(tmp_path, *argv) == qwalk.EXIT_OK
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert run(tmp_path, *argv) == qwalk.EXIT_OK
    second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert first == second
    assert set(first) == {'moments.csv', 'pair_moments.csv', 'moments.json'}


def test_check_command_passes_selected_checks(tmp_path):
    assert run(tmp_path, 'check', '--only', 'symmetry,relabeling') == qwalk.EXIT_OK
    rows = read_json(tmp_path / 'check.json')['results']['checks']
    assert [r['name'] for r in rows] == ['symmetry', 'relabeling']
    assert all(r['passed'] for r in rows)


def test_failing_check_exits_with_an_invariant_error(tmp_path, monkeypatch):
    def broken():
        raise InvariantViolation('deliberately broken')

    monkeypatch.setitem(check.CHECKS, 'relabeling', broken)
    assert run(tmp_path, 'check', '--only', 'relabeling') == qwalk.EXIT_INVARIANT
    assert 'false' in (tmp_path / 'check.csv').read_text(encoding='utf-8')


def test_check_suite_defaults_to_the_full_ranges():
    def default(func, name):
        return inspect.signature(func).parameters[name].default

    assert default(check.check_integral_ledger, 'max_arg') == 6
    assert tuple(default(check.check_integral_ledger, 'steps')) == (100, 400)
    assert default(check.check_spectrum, 'max_n') == 10
    assert default(check.check_symmetry, 'max_n') == 8
    assert default(check.check_schmidt_weights, 'max_n') == 10
    assert 2 * check.C2_FIT_COINS == 20
    assert 2 * check.BRUTE_FORCE_COINS == 100


def test_smaller_checks_pass():
    assert 'n=3..5' in check.check_schmidt_weights(max_n=5)
    assert 'n <= 5' in check.check_symmetry(max_n=5)
    assert '20 random coin vectors' in check.check_brute_force(coins=10)


@pytest.mark.slow
def test_full_check_suite_passes():
    results = check.run_checks()
    assert [r['name'] for r in results if not r['passed']] == []


def test_unknown_check_names_are_rejected():
    with pytest.raises(ValueError):
        check.run_checks(['nonsense'])


@pytest.mark.parametrize(
    'text, expected', [('74', 74), ('0b1001010', 74), ('(1001010)b', 74), (' 0x4a ', 74)]
)
def test_parse_k(text, expected):
    assert commands.parse_k(text) == expected


def test_parse_k_rejects_garbage():
    with pytest.raises(ValueError):
        commands.parse_k('(1021)b')


def test_parse_coin_variants():
    np.testing.assert_array_equal(commands.parse_coin('basis:2', 2).amplitudes, [0, 0, 1, 0])
    eigen = commands.parse_coin('eigen:(10)b', 2)
    np.testing.assert_allclose(eigen.amplitudes, spectral.normalized_eigenstate(2, 2).amplitudes)
    mixed = commands.parse_coin('0.6, 0, 0, 0.8j', 2)
    assert mixed.amplitudes[3] == 0.8j
    assert commands.parse_coin('up', 1).amplitudes[1] == 1.0


@pytest.mark.parametrize('spec', ['basis:4', 'eigen:x', '0.6,0.8', '1,nope,0,0', 'up'])
def test_parse_coin_rejects_bad_specs(spec):
    with pytest.raises(InvalidCoinError):
        commands.parse_coin(spec, 2)


def test_step_range():
    assert commands.step_range(100, 300, 100) == [100, 200, 300]
    with pytest.raises(ValueError):
        commands.step_range(10, 5)


def test_moments_follow_the_subgraphs(csv_only):
    coin = spectral.normalized_eigenstate(7, 0b1001010)
    results = commands.cmd_moments(csv_only, coin, 100)
    squares = results['mean_x2']
    for group in ((1, 4, 6), (2, 3, 5, 7)):
        values = [squares[i - 1] for i in group]
        assert values == pytest.approx([values[0]] * len(values), rel=1e-9)
    table = results['pair_moments']
    assert table[0, 3] > 0 and table[1, 2] > 0
    assert table[0, 1] < 0
