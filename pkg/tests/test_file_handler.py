import json

import numpy as np
import pytest

from src.config.paths import OUTPUT_ENV_VAR, output_dir
from src.utils import plotting
from src.utils.file_handler import OutputWriter, format_number


def test_format_number():
    assert format_number(0.1) == '0.10000000000000001'
    assert format_number(np.float64(2.5)) == '2.5'
    assert format_number(np.int64(7)) == '7'
    assert format_number(True) == 'true'
    assert format_number(np.bool_(False)) == 'false'
    assert format_number('x_1') == 'x_1'


def test_csv_has_a_header_and_full_precision(csv_only):
    path = csv_only.write_csv('table.csv', ('t', 'value'), [(1, 1 / 3), (2, 0.5)])
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines == ['t,value', '1,0.33333333333333331', '2,0.5']


def test_json_sorts_keys_and_splits_complex_numbers(writer):
    path = writer.write_json(
        'doc.json', {'b': np.array([1 + 2j]), 'a': (np.int64(1), np.float32(0.5))}
    )
    document = json.loads(path.read_text(encoding='utf-8'))
    assert list(document) == ['a', 'b']
    assert document['b'] == [{'re': 1.0, 'im': 2.0}]
    assert document['a'] == [1, 0.5]


def test_json_writes_real_and_complex_arrays(writer):
    document = {
        'nu': np.array([0.75, 0.25]),
        'table': np.array([[1.0, -0.5], [-0.5, 1.0]]),
        'counts': np.arange(3),
        'grid': np.array([[1j, 2.0]]),
    }
    path = writer.write_json('arrays.json', document)
    loaded = json.loads(path.read_text(encoding='utf-8'))
    assert loaded['nu'] == [0.75, 0.25]
    assert loaded['table'] == [[1.0, -0.5], [-0.5, 1.0]]
    assert loaded['counts'] == [0, 1, 2]
    assert loaded['grid'] == [[{'re': 0.0, 'im': 1.0}, {'re': 2.0, 'im': 0.0}]]


def test_disabled_formats_write_nothing(csv_only, tmp_path):
    assert csv_only.write_json('doc.json', {'a': 1}) is None
    assert csv_only.svg_path('figure.svg') is None
    assert not (tmp_path / 'doc.json').exists()


def test_unknown_format_is_rejected(tmp_path):
    with pytest.raises(ValueError):
        OutputWriter(tmp_path, ('csv', 'pdf'))


def test_output_path_must_be_a_directory(tmp_path):
    target = tmp_path / 'taken'
    target.write_text('not a directory')
    with pytest.raises(NotADirectoryError):
        OutputWriter(target)


def test_output_root_follows_the_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV_VAR, str(tmp_path / 'runs'))
    assert output_dir() == tmp_path / 'runs'
    writer = OutputWriter()
    assert writer.out_dir == tmp_path / 'runs'
    assert writer.out_dir.is_dir()


def test_figures_render_deterministically(tmp_path):
    x = np.arange(5)
    first = plotting.line_chart(tmp_path / 'a.svg', x, {'y': x**2}, 'x', 'y', title='curve')
    second = plotting.line_chart(tmp_path / 'b.svg', x, {'y': x**2}, 'x', 'y', title='curve')
    assert first.read_bytes() == second.read_bytes()
    assert b'<svg' in first.read_bytes()


def test_heatmap_and_bar_chart_write_svg(tmp_path):
    grid = np.arange(12.0).reshape(4, 3)
    heat = plotting.heatmap(tmp_path / 'h.svg', grid, [-3, -1, 1, 3], [-2, 0, 2], 'x_1', 'x_2')
    bars = plotting.bar_chart(tmp_path / 'b.svg', ['0', '12'], [1.0, 2.0], 'mu', 'eta')
    assert heat.stat().st_size > 0
    assert bars.stat().st_size > 0
