"""Ficheiros de entrada (estado, Hamiltoniano) e saídas JSON/CSV."""

from __future__ import annotations

import csv
import io
import json
import logging
from math import prod
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from hamiltonians import SYSTEM_THREE_QUBIT, InteractionSpec
from numeric_core import PureState, SchmidtDecomposition

LOGGER = logging.getLogger("io_formats")

SIGNIFICANT_DIGITS = 9
RENORMALIZE_ATOL = 1e-6
EXACT_NORM_ATOL = 1e-12


class InputFileError(ValueError):
    """Ficheiro de entrada ilegível ou fora do esquema."""


def format_number(value: float) -> str:
    return f"{float(value):.{SIGNIFICANT_DIGITS}g}"


def round_significant(value: float) -> float:
    rounded = float(format_number(value))
    return 0.0 if rounded == 0 else rounded


def to_serializable(payload: Any) -> Any:
    """Converte arrays/escalares numpy e arredonda reais a 9 algarismos."""

    if isinstance(payload, Mapping):
        return {str(key): to_serializable(value) for key, value in payload.items()}
    if isinstance(payload, np.ndarray):
        return to_serializable(payload.tolist())
    if isinstance(payload, (list, tuple)):
        return [to_serializable(value) for value in payload]
    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        return round_significant(payload)
    if isinstance(payload, complex):
        return [round_significant(payload.real), round_significant(payload.imag)]
    return payload


def dumps_json(payload: Mapping[str, Any]) -> str:
    return json.dumps(to_serializable(payload), indent=2, sort_keys=True) + "\n"


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue()


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"não foi possível ler {path}: {exc}") from exc
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputFileError(f"{path}: JSON inválido ({exc})") from exc
    if not isinstance(payload, dict):
        raise InputFileError(f"{path}: esperado um objeto JSON")
    return payload


def state_to_payload(state: PureState) -> Dict[str, Any]:
    return {
        "dims": list(state.dims),
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }


def schmidt_to_payload(decomp: SchmidtDecomposition) -> Dict[str, Any]:
    """Forma de Schmidt: coeficientes e vectores locais (colunas) em [re, im]."""

    def _columns(basis: np.ndarray) -> List[List[List[float]]]:
        return [
            [[float(a.real), float(a.imag)] for a in basis[:, k]]
            for k in range(basis.shape[1])
        ]

    return {
        "coefficients": [float(c) for c in decomp.coefficients],
        "left": _columns(decomp.left),
        "right": _columns(decomp.right),
    }


def state_from_payload(
    payload: Mapping[str, Any], source: str = "<estado>"
) -> PureState:
    dims = payload.get("dims")
    amps = payload.get("amps")
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise InputFileError(f"{source}: 'dims' deve ser uma lista de inteiros")
    if not isinstance(amps, list):
        raise InputFileError(f"{source}: 'amps' deve ser uma lista de pares [re, im]")
    try:
        vector = np.array([complex(float(re), float(im)) for re, im in amps])
    except (TypeError, ValueError) as exc:
        raise InputFileError(f"{source}: amplitude inválida ({exc})") from exc
    if vector.size != prod(dims):
        raise InputFileError(
            f"{source}: {vector.size} amplitudes para dims={dims} "
            f"(esperadas {prod(dims)})"
        )

    norm = float(np.linalg.norm(vector))
    deviation = abs(norm - 1.0)
    if deviation > RENORMALIZE_ATOL:
        raise InputFileError(f"{source}: norma {norm:.9g} fora de 1 ± 1e-6")
    if deviation > EXACT_NORM_ATOL:
        LOGGER.warning("%s: norma %.12g renormalizada para 1", source, norm)
    try:
        return PureState.normalized(dims, vector)
    except ValueError as exc:
        raise InputFileError(f"{source}: {exc}") from exc


def load_state(path: Path) -> PureState:
    return state_from_payload(_read_json(path), str(path))


def _three_qubit_pairs(payload: Mapping[str, Any]) -> Tuple[Sequence[float], ...]:
    """Acoplamentos (AB, BC, AC): ``mu_ab``/``mu_bc``/``mu_ac`` ou ``mu`` 3×3."""

    nested = payload.get("mu")
    if nested is not None and not any(
        key in payload for key in ("mu_ab", "mu_bc", "mu_ac")
    ):
        if not isinstance(nested, list) or len(nested) != 3:
            raise ValueError("'mu' de 2x2x2 deve ser uma lista 3×3 (AB, BC, AC)")
        if not all(isinstance(row, list) for row in nested):
            raise ValueError("cada linha de 'mu' deve ser uma lista de 3 valores")
        return tuple(nested)
    return (
        payload.get("mu_ab") or (),
        payload.get("mu_bc") or (),
        payload.get("mu_ac") or (),
    )


def hamiltonian_from_payload(
    payload: Mapping[str, Any], source: str = "<hamiltoniano>"
) -> InteractionSpec:
    system = payload.get("system")
    if not isinstance(system, str):
        raise InputFileError(f"{source}: campo 'system' em falta")
    allow_unordered = bool(payload.get("allow_unordered", False))
    try:
        if system == SYSTEM_THREE_QUBIT:
            pairs = _three_qubit_pairs(payload)
            return InteractionSpec.three_qubit(*pairs, allow_unordered=allow_unordered)
        return InteractionSpec(
            system, mu=tuple(payload.get("mu") or ()), allow_unordered=allow_unordered
        )
    except (TypeError, ValueError) as exc:
        raise InputFileError(f"{source}: {exc}") from exc


def load_hamiltonian(path: Path) -> InteractionSpec:
    return hamiltonian_from_payload(_read_json(path), str(path))


def write_payload(text: str, out: Optional[Path], stream) -> None:
    """Escreve em ``out`` quando indicado; caso contrário no stream (stdout)."""

    if out is None:
        stream.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")
    LOGGER.info("resultado escrito em %s", out)
