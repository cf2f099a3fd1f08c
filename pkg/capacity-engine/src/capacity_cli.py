"""Linha de comandos do motor de capacidade de emaranhamento.

O payload (JSON/CSV/tabela) vai para stdout ou para ``--out``; diagnósticos
vão para stderr. Códigos de saída: 0 sucesso, 1 reprodução falhada, 2 erro
de entrada.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from bloch import decompose, entanglement
from capacity import (
    LABEL_BISEPARABLE,
    LABEL_GHZ,
    LABEL_PRODUCT,
    LABEL_W,
    OptimizationResult,
    isotropic_scan,
    maximize_rate,
    von_neumann_entropy,
)
from io_formats import (
    dumps_csv,
    dumps_json,
    load_hamiltonian,
    load_state,
    schmidt_to_payload,
    state_to_payload,
    write_payload,
)
from numeric_core import schmidt_decompose
from protocol import steer
from rates import (
    METHOD_CLOSED,
    METHOD_FINITE_DIFFERENCE,
    METHOD_GENERIC,
    compute_rate,
    f_curve,
    f_vn_curve,
)
from reproduction import exit_code, format_table, run_checks
from settings import LOG_LEVELS, EngineSettings

LOGGER = logging.getLogger("capacity_cli")

EXIT_OK = 0
EXIT_REPRODUCTION_FAILED = 1
EXIT_INPUT_ERROR = 2

METHOD_ALIASES: Dict[str, str] = {
    "generic": METHOD_GENERIC,
    "closed": METHOD_CLOSED,
    "fd": METHOD_FINITE_DIFFERENCE,
}
CLASS_SHORT_NAMES: Dict[str, str] = {
    LABEL_PRODUCT: "product",
    LABEL_BISEPARABLE: "biseparable",
    LABEL_W: "W",
    LABEL_GHZ: "GHZ",
}
EVOLVE_HEADER = ("t", "p", "E", "gamma", "res_r", "res_tau")


def configure_logging(level: str = "INFO") -> None:
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def _emit(args: argparse.Namespace, text: str) -> None:
    write_payload(text, args.out, sys.stdout)


def _cmd_decompose(args: argparse.Namespace, settings: EngineSettings) -> int:
    state = load_state(args.state)
    decomp = decompose(state)
    payload: Dict[str, object] = dict(decomp.to_dict())
    payload["dims"] = list(state.dims)
    payload["T_norm"] = decomp.correlation_norm
    payload["E"] = entanglement(state)
    if len(state.dims) == 2:
        payload["schmidt_coefficients"] = schmidt_decompose(state).coefficients
        payload["E_vn"] = von_neumann_entropy(state)
    _emit(args, dumps_json(payload))
    return EXIT_OK


def _cmd_rate(args: argparse.Namespace, settings: EngineSettings) -> int:
    state = load_state(args.state)
    spec = load_hamiltonian(args.ham)
    dt = settings.fd_dt if args.dt is None else args.dt
    if args.method != "all":
        report = compute_rate(state, spec, METHOD_ALIASES[args.method], dt=dt)
        _emit(args, dumps_json(report.to_dict()))
        return EXIT_OK

    reports = {
        method: compute_rate(state, spec, method, dt=dt)
        for method in METHOD_ALIASES.values()
    }
    methods = list(reports)
    deltas = {
        f"{a}-{b}": abs(reports[a].gamma - reports[b].gamma)
        for index, a in enumerate(methods)
        for b in methods[index + 1 :]
    }
    payload: Dict[str, object] = {m: r.to_dict() for m, r in reports.items()}
    payload["deltas"] = deltas
    payload["max_delta"] = max(deltas.values())
    _emit(args, dumps_json(payload))
    return EXIT_OK


def _result_payload(result: OptimizationResult) -> Dict[str, object]:
    payload: Dict[str, object] = {
        "hamiltonian": result.spec.to_dict(),
        "gamma_max": result.gamma_max,
        "E": result.entanglement_of_optimum,
        "state": state_to_payload(result.best_state),
        "diagnostics": {
            "best_restart": result.best_restart,
            "converged": result.converged,
            "restarts": [
                {
                    "index": summary.index,
                    "gamma": summary.gamma,
                    "iterations": summary.iterations,
                    "converged": summary.converged,
                }
                for summary in result.restarts
            ],
        },
    }
    if result.schmidt_coefficients is not None:
        payload["schmidt_coefficients"] = list(result.schmidt_coefficients)
        payload["schmidt_form"] = schmidt_to_payload(
            schmidt_decompose(result.best_state)
        )
    if result.classification is not None:
        payload["class"] = CLASS_SHORT_NAMES[result.classification]
        payload["three_tangle"] = result.three_tangle
    return payload


def _parse_strengths(raw: str) -> List[float]:
    try:
        values = [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise ValueError(f"--scan inválido: {raw}") from exc
    if not values:
        raise ValueError("--scan sem intensidades")
    return values


def _cmd_capacity(args: argparse.Namespace, settings: EngineSettings) -> int:
    spec = load_hamiltonian(args.ham)
    config = settings.optimization_config(
        restarts=args.restarts, master_seed=args.seed, workers=args.workers
    )
    if args.scan:
        rows = isotropic_scan(spec.system, _parse_strengths(args.scan), config)
        payload = {
            "system": spec.system,
            "scan": [
                {
                    "mu": row.strength,
                    "gamma_max": row.gamma_max,
                    "gamma_per_mu": row.gamma_per_strength,
                    "E": row.entanglement_of_optimum,
                }
                for row in rows
            ],
        }
        _emit(args, dumps_json(payload))
        return EXIT_OK

    _emit(args, dumps_json(_result_payload(maximize_rate(spec, config))))
    return EXIT_OK


def _cmd_curves(args: argparse.Namespace, settings: EngineSettings) -> int:
    if args.samples < 2:
        raise ValueError(f"--samples deve ser >= 2 (recebido {args.samples})")
    curve = f_curve if args.measure == "tensor" else f_vn_curve
    count = args.samples
    grid = [index / (count + 1) for index in range(1, count + 1)]
    _emit(args, dumps_csv(("p", "f"), ((p, curve(p)) for p in grid)))
    return EXIT_OK


def _cmd_evolve(args: argparse.Namespace, settings: EngineSettings) -> int:
    spec = load_hamiltonian(args.ham)
    trajectory = steer(spec, args.p0, args.dt, args.tmax)
    LOGGER.info(
        "trajetória: %d pontos, paragem '%s', erro máximo de reposição %.3e",
        len(trajectory.points),
        trajectory.stop_reason,
        trajectory.max_reset_error,
    )
    rows = (point.as_row() for point in trajectory.points)
    _emit(args, dumps_csv(EVOLVE_HEADER, rows))
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace, settings: EngineSettings) -> int:
    config = settings.optimization_config(
        restarts=args.restarts, master_seed=args.seed, workers=args.workers
    )
    rows = run_checks(
        config,
        oracle_samples=args.oracle_samples,
        invariance_samples=args.invariance_samples,
    )
    _emit(args, format_table(rows))
    code = exit_code(rows)
    if code != EXIT_OK:
        failures = sum(not row.passed for row in rows)
        LOGGER.error("reprodução falhou em %d verificações", failures)
        return EXIT_REPRODUCTION_FAILED
    return EXIT_OK


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"esperado inteiro >= 1, recebido {raw}")
    return value


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", type=_positive_int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=_positive_int, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out", type=Path, default=None, help="Escreve o resultado neste ficheiro"
    )
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, default=None, help="Nível de log (stderr)"
    )
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Ficheiro KEY=VALUE (default: $NLC_CONFIG ou nonlocal-capacity.conf)",
    )

    parser = argparse.ArgumentParser(
        prog="capacity_cli",
        description="Taxas e capacidades de emaranhamento de Hamiltonianos não locais",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser(
        "decompose", parents=[common], help="Decomposição de Bloch e medida E"
    )
    p_dec.add_argument("--state", type=Path, required=True)
    p_dec.set_defaults(func=_cmd_decompose)

    p_rate = sub.add_parser("rate", parents=[common], help="Taxa Γ = dE/dt")
    p_rate.add_argument("--state", type=Path, required=True)
    p_rate.add_argument("--ham", type=Path, required=True)
    p_rate.add_argument(
        "--method", choices=(*METHOD_ALIASES, "all"), default="generic"
    )
    p_rate.add_argument("--dt", type=float, default=None)
    p_rate.set_defaults(func=_cmd_rate)

    p_cap = sub.add_parser(
        "capacity", parents=[common], help="Capacidade max_ψ Γ(ψ) por otimização"
    )
    p_cap.add_argument("--ham", type=Path, required=True)
    _add_optimizer_flags(p_cap)
    p_cap.add_argument(
        "--scan",
        default=None,
        help="Intensidades isotrópicas separadas por vírgulas (ex.: 0.5,1,2)",
    )
    p_cap.set_defaults(func=_cmd_capacity)

    p_curves = sub.add_parser("curves", parents=[common], help="Curvas f(p) em CSV")
    p_curves.add_argument("--measure", choices=("tensor", "vn"), default="tensor")
    p_curves.add_argument("--samples", type=int, default=99)
    p_curves.set_defaults(func=_cmd_curves)

    p_evolve = sub.add_parser(
        "evolve", parents=[common], help="Trajetória conduzida de dois qubits"
    )
    p_evolve.add_argument("--ham", type=Path, required=True)
    p_evolve.add_argument("--p0", type=float, required=True)
    p_evolve.add_argument("--dt", type=float, required=True)
    p_evolve.add_argument("--tmax", type=float, required=True)
    p_evolve.set_defaults(func=_cmd_evolve)

    p_repro = sub.add_parser(
        "reproduce", parents=[common], help="Verifica os valores publicados"
    )
    _add_optimizer_flags(p_repro)
    p_repro.add_argument("--oracle-samples", type=_positive_int, default=1000)
    p_repro.add_argument("--invariance-samples", type=_positive_int, default=500)
    p_repro.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = EngineSettings.from_sources(args.config)
    configure_logging(args.log_level or settings.log_level)

    try:
        return int(args.func(args, settings))
    except (ValueError, OSError) as exc:
        LOGGER.error("Falha no comando %s: %s", args.command, exc)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
