import os

import pytest
from hypothesis import HealthCheck, settings

from src.utils.file_handler import OutputWriter

settings.register_profile(
    'default',
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile('fast', max_examples=8, deadline=None, derandomize=True)
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


@pytest.fixture
def writer(tmp_path):
    return OutputWriter(tmp_path, ('csv', 'json', 'svg'))


@pytest.fixture
def csv_only(tmp_path):
    return OutputWriter(tmp_path, ('csv',))
