"""Testes da configuração: omissões, ficheiro KEY=VALUE e variáveis NLC_*."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

SRC_DIR = Path(__file__).resolve().parents[1] / "capacity-engine" / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from capacity import DEFAULT_MASTER_SEED, DEFAULT_RESTARTS  # noqa: E402
from rates import DEFAULT_FD_STEP  # noqa: E402
from settings import EngineSettings  # noqa: E402


def test_defaults_without_file_or_environment(tmp_path) -> None:
    settings = EngineSettings.from_sources(tmp_path / "missing.conf", env={})

    assert settings.restarts == DEFAULT_RESTARTS
    assert settings.master_seed == DEFAULT_MASTER_SEED
    assert settings.fd_dt == DEFAULT_FD_STEP
    assert settings.workers == 1
    assert settings.log_level == "INFO"


def test_file_values_and_environment_overrides(tmp_path) -> None:
    config = tmp_path / "engine.conf"
    config.write_text(
        "# reprodução rápida\n"
        "RESTARTS=8\n"
        "seed = 7\n"
        "FD_DT=2e-5\n"
        "linha sem separador\n"
        "LOG_LEVEL=debug\n",
        encoding="utf-8",
    )

    settings = EngineSettings.from_sources(
        config, env={"NLC_RESTARTS": "16", "NLC_WORKERS": "2"}
    )

    assert settings.restarts == 16
    assert settings.master_seed == 7
    assert settings.fd_dt == 2e-5
    assert settings.workers == 2
    assert settings.log_level == "DEBUG"


def test_config_path_comes_from_environment(tmp_path) -> None:
    config = tmp_path / "other.conf"
    config.write_text("MAX_ITER=250\n", encoding="utf-8")

    settings = EngineSettings.from_sources(env={"NLC_CONFIG": str(config)})

    assert settings.max_iterations == 250


def test_invalid_values_fall_back_to_defaults(tmp_path, caplog) -> None:
    env = {
        "NLC_RESTARTS": "muitos",
        "NLC_STEP": "-0.5",
        "NLC_SEED": "-3",
        "NLC_LOG_LEVEL": "verbose",
    }

    with caplog.at_level(logging.WARNING, logger="settings"):
        settings = EngineSettings.from_sources(tmp_path / "missing.conf", env=env)

    assert settings.restarts == DEFAULT_RESTARTS
    assert settings.step == EngineSettings().step
    assert settings.master_seed == DEFAULT_MASTER_SEED
    assert settings.log_level == "INFO"
    assert len(caplog.records) == 4


def test_optimization_config_applies_command_line_overrides() -> None:
    settings = EngineSettings(restarts=10, master_seed=3, workers=2)

    config = settings.optimization_config(restarts=2, workers=None)

    assert config.restarts == 2
    assert config.master_seed == 3
    assert config.workers == 2
    assert config.tolerance == settings.tolerance
