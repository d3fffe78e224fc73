"""
Tests for the exact-rational wire format and atomic file output
"""
import json
import os
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from errors import ContractError, DimensionError, ParseError, PositivityError
from models import PositivityClass, scalar_to_str
from services.serialization import (context_from_dict, context_to_dict, csv_text, dumps, loads,
                                    matrix_from_dict, parse_scalar, read_context, write_json_atomic,
                                    write_text_atomic)
from services.twistor import twistor


@pytest.mark.parametrize('raw,expected', [
    (3, Fraction(3)), ('3/6', Fraction(1, 2)), (' -2 / 4 ', Fraction(-1, 2)), ('+5', Fraction(5)), ('0', Fraction(0)),
])
def test_parse_scalar(raw, expected):
    assert parse_scalar(raw) == expected


@pytest.mark.parametrize('raw', [1.5, True, '1/0', 'abc', '1.5', None, '1/-2'])
def test_parse_scalar_rejects(raw):
    with pytest.raises(ParseError) as info:
        parse_scalar(raw)
    assert info.value.exit_code == 2


@given(st.fractions())
def test_rendered_scalars_parse_back(value):
    assert parse_scalar(scalar_to_str(value)) == value


def test_matrix_forms():
    assert matrix_from_dict([['1', '2']]).entries == ((Fraction(1), Fraction(2)),)
    with pytest.raises(ParseError):
        matrix_from_dict({'rows': 2, 'cols': 2, 'entries': [['1', '2']]})
    with pytest.raises(ParseError):
        matrix_from_dict({'entries': [['1', '2'], ['3']]})
    with pytest.raises(ParseError):
        matrix_from_dict('1 2')


def test_context_from_c(triangle_dict):
    ctx = context_from_dict(triangle_dict)
    assert ctx.y.matrix.entries == ((Fraction(3), Fraction(6), Fraction(14)),)
    assert ctx.c.positivity_class == PositivityClass.STRICTLY_POSITIVE
    assert ctx.z.certified


def test_context_from_y(triangle_dict):
    data = dict(triangle_dict)
    del data['C']
    data['Y'] = [['3', '6', '14']]
    ctx = context_from_dict(data)
    assert ctx.c is None
    assert twistor(ctx, (1, 2)) == 2


def test_context_needs_exactly_one_of_c_and_y(triangle_dict):
    both = dict(triangle_dict, Y=[['3', '6', '14']])
    with pytest.raises(ParseError):
        context_from_dict(both)
    neither = {key: value for key, value in triangle_dict.items() if key != 'C'}
    with pytest.raises(ParseError):
        context_from_dict(neither)


def test_context_rejects_a_non_positive_z():
    with pytest.raises(PositivityError) as info:
        context_from_dict({'n': 3, 'k': 1, 'm': 1, 'Z': [['1', '2'], ['1', '1'], ['1', '3']], 'C': [['1', '1', '1']]})
    assert info.value.exit_code == 3


def test_context_shape_and_size_rules(triangle_dict):
    with pytest.raises(DimensionError):
        context_from_dict(dict(triangle_dict, C=[['1', '1']]))
    with pytest.raises(ContractError):
        context_from_dict(dict(triangle_dict, n=2))
    with pytest.raises(ParseError):
        context_from_dict(dict(triangle_dict, k='one'))
    with pytest.raises(ParseError):
        context_from_dict([1, 2, 3])


def test_rank_deficient_y_is_rejected(triangle_dict):
    data = {key: value for key, value in triangle_dict.items() if key != 'C'}
    data['Y'] = [['0', '0', '0']]
    with pytest.raises(ContractError):
        context_from_dict(data)


def test_large_n_needs_the_flag():
    data = {'n': 15, 'k': 1, 'm': 1, 'Z': [['1', str(i)] for i in range(1, 16)], 'Y': [['0', '1']]}
    with pytest.raises(ContractError):
        context_from_dict(data)
    assert context_from_dict(data, allow_large_n=True).n == 15


def test_limit_follows_the_given_max_n(triangle_dict, tmp_path):
    with pytest.raises(ContractError):
        context_from_dict(triangle_dict, max_n=2)
    assert context_from_dict(triangle_dict, max_n=3).n == 3
    path = tmp_path / 'triangle.json'
    path.write_text(json.dumps(triangle_dict))
    with pytest.raises(ContractError):
        read_context(str(path), max_n=2)
    assert read_context(str(path), allow_large_n=True, max_n=2).n == 3


def test_context_dict_is_reloadable(triangle_ctx):
    again = context_from_dict(loads(dumps(context_to_dict(triangle_ctx))))
    assert again.y.matrix == triangle_ctx.y.matrix


def test_dumps_is_deterministic():
    text = dumps({'b': 1, 'a': [1, 2]})
    assert text == dumps({'a': [1, 2], 'b': 1})
    assert text.endswith('}\n')
    assert list(json.loads(text)) == ['a', 'b']


def test_loads_reports_bad_json():
    with pytest.raises(ParseError):
        loads('{"n": ')


def test_read_context(tmp_path, triangle_dict):
    path = tmp_path / 'ctx.json'
    path.write_text(json.dumps(triangle_dict))
    assert read_context(str(path)).n == 3
    with pytest.raises(ParseError):
        read_context(str(tmp_path / 'missing.json'))


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    target = tmp_path / 'nested' / 'out.json'
    write_json_atomic(str(target), {'x': '1/2'})
    write_text_atomic(str(target), 'replaced\n')
    assert target.read_text() == 'replaced\n'
    assert os.listdir(target.parent) == ['out.json']


def test_csv_text():
    assert csv_text(['window', 'value'], [('1 2', '2'), ('2 3', '-1/2')]) == 'window,value\n1 2,2\n2 3,-1/2\n'
