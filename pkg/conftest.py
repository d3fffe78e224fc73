"""
Shared fixtures: the two hand-checkable contexts used across the test files
"""
import os

import pytest

os.environ.setdefault('AMPLI_ENV', 'testing')

from config import TestingConfig  # noqa: E402
from services.serialization import context_from_dict  # noqa: E402


@pytest.fixture
def settings():
    return TestingConfig


@pytest.fixture
def segment_ctx():
    """n=3, k=1, m=1: Z_i = (1, i), C = (1, 1, 1), so Y = (3, 6) and <Y, i> = 3i - 6"""
    return context_from_dict({
        'n': 3, 'k': 1, 'm': 1,
        'Z': [['1', '1'], ['1', '2'], ['1', '3']],
        'C': [['1', '1', '1']]
    })


@pytest.fixture
def triangle_ctx():
    """n=3, k=1, m=2: Vandermonde nodes 1, 2, 3 and C = (1, 1, 1), so Y = (3, 6, 14)"""
    return context_from_dict({
        'n': 3, 'k': 1, 'm': 2,
        'Z': [['1', '1', '1'], ['1', '2', '4'], ['1', '3', '9']],
        'C': [['1', '1', '1']]
    })


@pytest.fixture
def triangle_dict():
    return {
        'n': 3, 'k': 1, 'm': 2,
        'Z': {'rows': 3, 'cols': 3, 'entries': [['1', '1', '1'], ['1', '2', '4'], ['1', '3', '9']]},
        'C': {'rows': 1, 'cols': 3, 'entries': [['1', '1', '1']]}
    }
