"""Configuração do motor: omissões < ficheiro KEY=VALUE < variáveis NLC_*."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, TypeVar

from capacity import (
    DEFAULT_GRADIENT_STEP,
    DEFAULT_MASTER_SEED,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RESTARTS,
    DEFAULT_STEP,
    DEFAULT_TOLERANCE,
    OptimizationConfig,
)
from rates import DEFAULT_FD_STEP

LOGGER = logging.getLogger("settings")

DEFAULT_CONFIG_PATH = Path("nonlocal-capacity.conf")
CONFIG_ENV_KEY = "NLC_CONFIG"
DEFAULT_LOG_LEVEL = "INFO"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

_T = TypeVar("_T", int, float)


def _parse_positive(value: str, default: _T, cast: Callable[[str], _T]) -> _T:
    try:
        parsed = cast(value)
    except (TypeError, ValueError):
        LOGGER.warning(
            "Valor inválido para parâmetro numérico (%r); utilizando %s",
            value,
            default,
        )
        return default
    if parsed <= 0:
        LOGGER.warning(
            "Valor não positivo fornecido (%r); utilizando %s", value, default
        )
        return default
    return parsed


def _parse_seed(value: str, default: int) -> int:
    try:
        parsed = int(value)
    except (TypeError, ValueError):
        LOGGER.warning("Semente inválida (%r); utilizando %s", value, default)
        return default
    if parsed < 0:
        LOGGER.warning("Semente negativa (%r); utilizando %s", value, default)
        return default
    return parsed


def _parse_config_file(path: Path) -> Dict[str, str]:
    if not path.exists():
        return {}
    values: Dict[str, str] = {}
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        LOGGER.warning("Não foi possível ler %s: %s", path, exc)
        return values
    for line in raw.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            continue
        key, value = stripped.split("=", 1)
        values[key.strip().upper()] = value.strip()
    return values


@dataclass(frozen=True)
class EngineSettings:
    restarts: int = DEFAULT_RESTARTS
    master_seed: int = DEFAULT_MASTER_SEED
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    step: float = DEFAULT_STEP
    tolerance: float = DEFAULT_TOLERANCE
    gradient_step: float = DEFAULT_GRADIENT_STEP
    workers: int = 1
    fd_dt: float = DEFAULT_FD_STEP
    log_level: str = DEFAULT_LOG_LEVEL

    @classmethod
    def from_sources(
        cls,
        path: Optional[Path] = None,
        env: Optional[Mapping[str, str]] = None,
    ) -> "EngineSettings":
        env = os.environ if env is None else env
        if path is None:
            path = Path(env.get(CONFIG_ENV_KEY) or DEFAULT_CONFIG_PATH)
        data = _parse_config_file(path)

        def _override(key: str) -> Optional[str]:
            value = env.get(f"NLC_{key}")
            if value:
                return value
            return data.get(key)

        def _positive(key: str, default: _T, cast: Callable[[str], _T]) -> _T:
            raw = _override(key)
            return _parse_positive(raw, default, cast) if raw else default

        seed_raw = _override("SEED")
        level = (_override("LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
        if level not in LOG_LEVELS:
            LOGGER.warning(
                "LOG_LEVEL desconhecido (%r); utilizando %s", level, DEFAULT_LOG_LEVEL
            )
            level = DEFAULT_LOG_LEVEL

        return cls(
            restarts=_positive("RESTARTS", DEFAULT_RESTARTS, int),
            master_seed=(
                _parse_seed(seed_raw, DEFAULT_MASTER_SEED)
                if seed_raw
                else DEFAULT_MASTER_SEED
            ),
            max_iterations=_positive("MAX_ITER", DEFAULT_MAX_ITERATIONS, int),
            step=_positive("STEP", DEFAULT_STEP, float),
            tolerance=_positive("TOL", DEFAULT_TOLERANCE, float),
            gradient_step=_positive("GRADIENT_STEP", DEFAULT_GRADIENT_STEP, float),
            workers=_positive("WORKERS", 1, int),
            fd_dt=_positive("FD_DT", DEFAULT_FD_STEP, float),
            log_level=level,
        )

    def optimization_config(
        self,
        *,
        restarts: Optional[int] = None,
        master_seed: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> OptimizationConfig:
        return OptimizationConfig(
            restarts=self.restarts if restarts is None else restarts,
            master_seed=self.master_seed if master_seed is None else master_seed,
            max_iterations=self.max_iterations,
            step=self.step,
            tolerance=self.tolerance,
            gradient_step=self.gradient_step,
            workers=self.workers if workers is None else workers,
        )
