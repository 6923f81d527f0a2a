"""
Commands Module
Provides the command handlers behind the CLI: input loading, pipeline
dispatch, report output and the exit-code contract.
"""

import json
import logging
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import click
from sympy import ImmutableMatrix, diag, zeros

from modules.closure import (
    SEMIGROUP, ClosureReport, check_mode, closure_pipeline, power_closure_check,
    Verdict, symbolic_diagonal_pipeline, verify_oracle, verify_symbolic,
)
from modules.error_handler import (
    EXIT_OK, EXIT_ORACLE, ClosureError, DimensionMismatch, ErrorHandler, InputError, OracleFailure,
)
from modules.exact import parse_rational, to_sympy
from modules.intlinalg import lattice_equal
from modules.mgroup import SymbolicScalar
from modules.multipoly import GREVLEX, LEX, Ideal, matrix_variables, parse_poly
from modules.performance import performance
from modules.report_format import (
    COORDINATES, JSON_OUTPUT, ORIGINAL, OUTPUTS, ReportFormatter, dumps,
)
from modules.settings import get_settings
from modules.spectral import matrix_to_json, parse_matrix_json, rational_matrix
from modules.toric import realize_as_matrix, toric_from_points

logger = logging.getLogger(__name__)

ORDERS = (LEX, GREVLEX)


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation"""

    command: str
    source: str
    mode: str = SEMIGROUP
    coords: str = ORIGINAL
    order: str = GREVLEX
    verify_k: int = 0
    output: str = JSON_OUTPUT
    vector: Optional[str] = None
    report_source: Optional[str] = None
    q: Optional[int] = None
    round_trip: bool = False
    stats: bool = False

    def __post_init__(self):
        check_mode(self.mode)
        if self.coords not in COORDINATES:
            raise InputError(f"coords must be one of {', '.join(COORDINATES)}")
        if self.order not in ORDERS:
            raise InputError(f"order must be one of {', '.join(ORDERS)}")
        if self.output not in OUTPUTS:
            raise InputError(f"output must be one of {', '.join(OUTPUTS)}")
        if self.verify_k < 0:
            raise InputError(f"verify depth must be >= 0, got {self.verify_k}")


@dataclass
class CommandResult:
    exit_code: int = EXIT_OK
    stdout: str = ""
    stderr: List[str] = field(default_factory=list)


def read_source(source: str) -> str:
    """Input text from stdin ("-"), a file path, or the argument itself as inline JSON"""
    if source == "-":
        text = click.get_text_stream("stdin").read()
    elif os.path.isfile(source):
        try:
            with open(source, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as e:
            raise InputError(f"cannot read {source}: {e}")
    else:
        text = source
    return ErrorHandler.validate_input_text(text)


def load_json(source: str) -> Any:
    text = read_source(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}")


def parse_vector(data: Any, n: int) -> List[Fraction]:
    if not isinstance(data, list):
        raise InputError("affine vector must be a JSON list")
    if len(data) != n:
        raise DimensionMismatch(f"affine vector of length {len(data)} for an {n}x{n} matrix")
    return [parse_rational(x) for x in data]


def augment(M: ImmutableMatrix, b: List[Fraction]) -> ImmutableMatrix:
    """[[M, b], [0, 1]]: the loop x <- M x + b as a linear map on (x, 1)"""
    n = M.rows
    A = zeros(n + 1, n + 1)
    A[:n, :n] = M
    for i, value in enumerate(b):
        A[i, n] = to_sympy(value)
    A[n, n] = 1
    return ImmutableMatrix(A)


def parse_symbolic_eigenvalues(data: Any) -> List[SymbolicScalar]:
    if isinstance(data, dict):
        data = data.get("eigenvalues")
    if not isinstance(data, list) or not data:
        raise InputError("symbolic input must be a nonempty list of eigenvalues")
    eigs = []
    for entry in data:
        if isinstance(entry, dict):
            eigs.append(SymbolicScalar.from_json(entry))
        else:
            eigs.append(SymbolicScalar.from_rational(entry))
    return eigs


def stored_report(data: Any, n: int) -> ClosureReport:
    """The parts of a JSON report the oracle needs"""
    if not isinstance(data, dict) or "ideal" not in data:
        raise InputError('report JSON needs an "ideal" field')
    if data.get("coords", ORIGINAL) != ORIGINAL:
        raise InputError("only reports in original coordinates can be verified")
    if data.get("n", n) != n:
        raise DimensionMismatch(f"report is for {data['n']}x{data['n']} matrices, input is {n}x{n}")

    variables = matrix_variables(n)
    ideal = Ideal(variables, [parse_poly(p, variables) for p in data["ideal"]], GREVLEX)
    points = tuple(rational_matrix(p) for p in data.get("isolated_points", []))
    return ClosureReport(
        mode=check_mode(data.get("mode", SEMIGROUP)),
        n=n,
        nu=int(data.get("nu", 0)),
        has_zero_eigenvalue=bool(data.get("has_zero_eigenvalue", False)),
        rank_G=int(data.get("rank", 0)),
        torsion_order=int(data.get("torsion", 1)),
        diagonalizable_part=bool(data.get("diagonalizable_part", True)),
        dimension=int(data.get("dimension", 0)),
        num_components=int(data.get("components", 0)),
        isolated_points=points,
        ideal=ideal,
        jordan_ideal=ideal,
    )


class CommandRunner:
    """Runs one command per call and maps errors onto exit codes"""

    def __init__(self):
        self.handlers: Dict[str, Callable[[RunConfig], CommandResult]] = {
            "closure": self.cmd_closure,
            "toric realize": self.cmd_toric_realize,
            "invariants": self.cmd_invariants,
            "symbolic": self.cmd_symbolic,
            "verify": self.cmd_verify,
            "power-check": self.cmd_power_check,
        }

    def run(self, cfg: RunConfig) -> CommandResult:
        handler = self.handlers.get(cfg.command)
        if handler is None:
            return CommandResult(1, "", [f"unknown command {cfg.command!r}"])

        performance.reset()
        try:
            result = handler(cfg)
        except ClosureError as e:
            ErrorHandler.log_error(e, cfg.command, {"source": cfg.source[:80]})
            result = CommandResult(ErrorHandler.exit_code_for(e), "", [ErrorHandler.describe(e)])
        except Exception as e:
            ErrorHandler.log_error(e, cfg.command)
            result = CommandResult(ErrorHandler.exit_code_for(e), "", [f"internal error: {e}"])

        if cfg.stats:
            result.stderr.append(performance.format_summary())
        return result

    def _formatter(self, cfg: RunConfig, label: str = "ideal") -> ReportFormatter:
        return ReportFormatter(order=cfg.order, coords=cfg.coords, ideal_label=label)

    def _emit_report(self, cfg: RunConfig, report: ClosureReport, verdict: Optional[Verdict] = None,
                     label: str = "ideal") -> CommandResult:
        formatter = self._formatter(cfg, label)
        result = CommandResult()

        if cfg.output == JSON_OUTPUT:
            data = formatter.report_to_json(report)
            if verdict is not None:
                data["oracle"] = str(verdict)
            result.stdout = dumps(data)
        else:
            text = formatter.report_to_text(report)
            if verdict is not None:
                text += f"\noracle: {verdict}"
            result.stdout = text

        if verdict is not None and not verdict:
            failure = OracleFailure(str(verdict))
            ErrorHandler.log_error(failure, cfg.command)
            result.exit_code = EXIT_ORACLE
            result.stderr.append(ErrorHandler.describe(failure))
        return result

    def cmd_closure(self, cfg: RunConfig) -> CommandResult:
        M = parse_matrix_json(load_json(cfg.source))
        report = closure_pipeline(M, cfg.mode)
        verdict = verify_oracle(M, report, cfg.verify_k, cfg.mode) if cfg.verify_k else None
        return self._emit_report(cfg, report, verdict)

    def cmd_invariants(self, cfg: RunConfig) -> CommandResult:
        """Loop invariants of x <- M x (+ b); always the semigroup closure"""
        data = load_json(cfg.source)
        vector = None
        if isinstance(data, dict) and "matrix" in data:
            vector = data.get("b")
            data = data["matrix"]
        M = parse_matrix_json(data)
        if cfg.vector is not None:
            vector = load_json(cfg.vector)

        if vector is not None:
            b = parse_vector(vector, M.rows)
            if any(b):
                M = augment(M, b)
                logger.info(f"affine loop augmented to a {M.rows}x{M.rows} matrix")

        semigroup = replace(cfg, mode=SEMIGROUP)
        report = closure_pipeline(M, SEMIGROUP)
        verdict = verify_oracle(M, report, cfg.verify_k, SEMIGROUP) if cfg.verify_k else None
        return self._emit_report(semigroup, report, verdict, label="polynomial invariants")

    def cmd_symbolic(self, cfg: RunConfig) -> CommandResult:
        eigs = parse_symbolic_eigenvalues(load_json(cfg.source))
        report = symbolic_diagonal_pipeline(eigs, cfg.mode)
        verdict = None
        if cfg.verify_k:
            if all(e.as_rational() is not None for e in eigs):
                M = ImmutableMatrix(diag(*[to_sympy(e.as_rational()) for e in eigs]))
                verdict = verify_oracle(M, report, cfg.verify_k, cfg.mode)
            else:
                verdict = verify_symbolic(eigs, report, cfg.verify_k)
        return self._emit_report(cfg, report, verdict)

    def cmd_toric_realize(self, cfg: RunConfig) -> CommandResult:
        points = load_json(cfg.source)
        if not isinstance(points, list):
            raise InputError("points must be a JSON list of integer vectors")
        toric = toric_from_points(points)
        diagonal = realize_as_matrix(points)
        formatter = self._formatter(cfg)

        result = CommandResult()
        round_trip = None
        if cfg.round_trip:
            report = symbolic_diagonal_pipeline(diagonal, cfg.mode)
            round_trip = lattice_equal(report.relation_lattice, toric.kernel)
            if not round_trip:
                result.exit_code = EXIT_ORACLE
                result.stderr.append("OracleFailure: realized matrix has a different relation lattice")

        if cfg.output == JSON_OUTPUT:
            data = {
                "matrix": matrix_to_json(diag(*[to_sympy(a.modulus) for a in diagonal])),
                "toric": formatter.toric_to_json(toric),
            }
            if round_trip is not None:
                data["round_trip"] = round_trip
            result.stdout = dumps(data)
        else:
            text = formatter.toric_to_text(toric, diagonal)
            if round_trip is not None:
                text += f"\nround trip: {'ok' if round_trip else 'mismatch'}"
            result.stdout = text
        return result

    def cmd_verify(self, cfg: RunConfig) -> CommandResult:
        M = parse_matrix_json(load_json(cfg.source))
        if cfg.report_source is not None:
            report = stored_report(load_json(cfg.report_source), M.rows)
        else:
            report = closure_pipeline(M, cfg.mode)

        depth = cfg.verify_k or get_settings().default_verify_k or 10
        verdict = verify_oracle(M, report, depth, report.mode)
        data = {
            "passed": verdict.passed,
            "checked": verdict.checked,
            "point": verdict.point,
            "generator": verdict.generator,
            "value": verdict.value,
        }
        result = CommandResult(stdout=dumps(data) if cfg.output == JSON_OUTPUT else str(verdict))
        if not verdict:
            result.exit_code = EXIT_ORACLE
            result.stderr.append(ErrorHandler.describe(OracleFailure(str(verdict))))
        return result

    def cmd_power_check(self, cfg: RunConfig) -> CommandResult:
        if cfg.q is None:
            raise InputError("power-check needs an exponent q")
        M = parse_matrix_json(load_json(cfg.source))
        same = power_closure_check(M, cfg.q)
        if cfg.output == JSON_OUTPUT:
            stdout = dumps({"q": cfg.q, "equal": same})
        else:
            stdout = f"closure of M^{cfg.q} {'equals' if same else 'differs from'} closure of M"
        return CommandResult(EXIT_OK if same else EXIT_ORACLE, stdout)
