import json
import os
from pathlib import Path

import pytest

os.environ.setdefault('ENV', 'testing')
os.environ.setdefault('LOG_LEVEL', 'WARNING')

from fastapi.testclient import TestClient

from khow import fixtures
from khow.main import app

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture()
def client():
    """FastAPI test client"""
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def emp_fail():
    """Single-agent model where EMP and COMPKh fail"""
    return fixtures.emp_fail()


@pytest.fixture(scope='session')
def emp_fail_path():
    return ROOT / 'fixtures' / 'emp-fail.json'


@pytest.fixture()
def emp_fail_doc(emp_fail_path):
    return json.loads(emp_fail_path.read_text())
