"""
Unit tests for settings and log formatting
"""
import json
import logging

import pytest

from khow.config import Settings, settings
from khow.logging_config import JSONFormatter, get_logger


class TestSettings:
    """Environment-driven settings"""

    def test_testing_env(self):
        assert settings.ENV == 'testing'
        assert settings.DEFAULT_AGENT == '1'

    def test_bad_log_format(self, monkeypatch):
        monkeypatch.setattr(Settings, 'LOG_FORMAT', 'xml')
        with pytest.raises(ValueError):
            Settings.validate()

    def test_bad_valuation_cap(self, monkeypatch):
        monkeypatch.setattr(Settings, 'MAX_VALUATIONS', 0)
        with pytest.raises(ValueError):
            Settings.validate()


class TestJSONFormatter:
    """Structured log lines"""

    def record(self, **extra):
        record = logging.LogRecord('khow.sat', logging.INFO, __file__, 1, 'SAT with %d states', (3,), None)
        record.__dict__.update(extra)
        return record

    def test_fields(self):
        line = json.loads(JSONFormatter().format(self.record()))
        assert line['level'] == 'INFO'
        assert line['logger'] == 'khow.sat'
        assert line['message'] == 'SAT with 3 states'

    def test_context_fields(self):
        line = json.loads(JSONFormatter().format(self.record(bound=13, states=3, unrelated='x')))
        assert line['bound'] == 13
        assert line['states'] == 3
        assert 'unrelated' not in line

    def test_single_handler(self):
        first = get_logger('khow.test_config')
        second = get_logger('khow.test_config')
        assert first is second
        assert len(first.handlers) == 1
