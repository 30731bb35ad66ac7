"""Shared fixtures."""

from pathlib import Path

import pytest

from spiked_qes.models.problem import Parity, QESProblem
from spiked_qes.services import qes_core
from spiked_qes.utils.config import Config
from spiked_qes.utils.logger import QESLogger

ENV_KEYS = (
    "QES_DIGITS",
    "QES_BOX_PADDING",
    "QES_GRID_POINTS",
    "QES_MATCH_TOLERANCE",
    "QES_GOLDEN_TABLES",
    "LOG_LEVEL",
    "LOGS_FOLDER",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    """Run every test from an empty directory with no QES overrides set."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def config(tmp_path) -> Config:
    return Config(env_file=tmp_path / ".env", config_file=tmp_path / "missing.yml")


@pytest.fixture
def logger() -> QESLogger:
    return QESLogger(quiet=True)


@pytest.fixture
def ground_state():
    """N=1 even solution at d = -1, psi = (1 + |x|) exp(-x^2/2 - |x|)."""
    return qes_core.solve(QESProblem(1, Parity.EVEN))[0]


@pytest.fixture
def write_yaml(tmp_path):
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
