# src/app.py

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from src.constants import (
    APP_NAME,
    APP_VERSION,
    CODE_FILE_EXTENSION,
    DEFAULT_CONFIG_PATH,
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_USAGE,
    LOG_LEVELS,
    OUTPUT_FORMATS,
    VERIFY_MODES,
)
from src.features.codes import (
    Code,
    VerificationReport,
    construct_extended_binary_hamming,
    construct_extended_perfect,
    construct_extended_rs,
    construct_hamming,
    construct_trivial,
    verify_all,
    verify_extended_perfect_fast,
    verify_extended_perfect_prop1,
    verify_extended_perfect_puncture,
    verify_perfect,
)
from src.features.feasibility import (
    FeasibilityReport,
    classify,
    feasibility_report,
    nonexistence_witness,
    prime_power,
    scan,
)
from src.features.finitefield import field_make, parse_modulus
from src.features.graph import InequitabilityWitness, distance_partition, quotient_matrix
from src.features.search import SearchTask, exhaustive_search
from src.features.spectral import distance_i_quotient_theoretical, krawtchouk
from src.utils.config_manager import ConfigManager
from src.utils.error_handler import ErrorHandler, InvalidParameterError
from src.utils.export_manager import ExportManager
from src.utils.performance import PerformanceUtils, resolve_workers

CONSTRUCT_FAMILIES = ["trivial", "hamming", "extended-hamming", "extended-rs", "auto"]


def _user_config() -> Optional[str]:
    """The per-user configuration file, only when it already exists."""
    return DEFAULT_CONFIG_PATH if Path(DEFAULT_CONFIG_PATH).exists() else None


@dataclass
class RunConfig:
    """One CLI invocation: the subcommand, its parameters and the global overrides."""
    subcommand: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_format: Optional[str] = None
    cap: Optional[int] = None
    threads: Optional[int] = None
    modulus: Optional[str] = None
    config_file: Optional[str] = None
    log_level: Optional[str] = None
    log_file: Optional[str] = None

    def __post_init__(self):
        if self.cap is not None and self.cap <= 0:
            raise InvalidParameterError(f"--cap must be positive, got {self.cap}")
        if self.threads is not None and self.threads < 0:
            raise InvalidParameterError(f"--threads must be >= 0, got {self.threads}")
        if self.output_format is not None and self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterError(f"unknown output format {self.output_format!r}")


class PerfectCodesApp:
    """Command dispatcher: resolves configuration, runs one subcommand, renders its report."""

    def __init__(self, run_config: RunConfig, stdout: Optional[TextIO] = None):
        self.run_config = run_config
        self.stdout = stdout or sys.stdout
        self.config = ConfigManager(run_config.config_file or _user_config())
        self.error_handler = ErrorHandler(
            run_config.log_level or self.config.get("logging.level", "WARNING"),
            run_config.log_file,
        )
        self.logger = logging.getLogger(__name__)
        self.export_manager = ExportManager()
        self.performance = PerformanceUtils()

        self.cap = run_config.cap or self.config.get("enumeration.cap")
        self.workers = resolve_workers(run_config.threads or self.config.get("runtime.threads"))
        self.output_format = run_config.output_format or self.config.get("runtime.output_format")

        self.commands: Dict[str, Callable[[Dict[str, Any]], int]] = {
            "construct": self.cmd_construct,
            "verify": self.cmd_verify,
            "quotient": self.cmd_quotient,
            "krawtchouk": self.cmd_krawtchouk,
            "feasibility": self.cmd_feasibility,
            "classify": self.cmd_classify,
            "scan": self.cmd_scan,
            "witness": self.cmd_witness,
            "search": self.cmd_search,
        }

    @property
    def modulus(self) -> Optional[Tuple[int, ...]]:
        return parse_modulus(self.run_config.modulus) if self.run_config.modulus else None

    def run(self) -> int:
        command = self.commands.get(self.run_config.subcommand)
        if command is None:
            self.logger.error(f"Unknown subcommand {self.run_config.subcommand!r}")
            return EXIT_USAGE
        self.logger.info(f"{APP_NAME} {APP_VERSION}: {self.run_config.subcommand}")
        try:
            with self.performance.measure_time(self.run_config.subcommand):
                return command(self.run_config.parameters)
        except Exception as e:
            return self.error_handler.handle_error(e, context=self.run_config.subcommand)

    def emit(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def emit_json(self, payload: Dict[str, Any]) -> None:
        self.emit(self.export_manager.to_json(payload))

    # -- codes -----------------------------------------------------------------

    def cmd_construct(self, params: Dict[str, Any]) -> int:
        family = params["family"]
        materialize_cap = self.config.get("codes.materialize_cap")
        if family == "trivial":
            code = construct_trivial(self._required(params, "q"))
        elif family == "hamming":
            q = self._required(params, "q")
            pm = prime_power(q)
            if pm is None:
                raise InvalidParameterError(f"q={q} is not a prime power")
            spec = field_make(pm[0], pm[1], self.modulus)
            code = construct_hamming(spec, self._required(params, "t"), materialize_cap)
        elif family == "extended-hamming":
            code = construct_extended_binary_hamming(self._required(params, "t"), materialize_cap)
        elif family == "extended-rs":
            code = construct_extended_rs(self._required(params, "m"), self.modulus, materialize_cap)
        else:
            code = construct_extended_perfect(self._required(params, "n"), self._required(params, "q"),
                                              materialize_cap)

        output = params.get("output")
        if not code.is_materialized:
            self.logger.warning("Code is too large to list; printing its summary only")
            self._emit_code_summary(code)
            return EXIT_OK
        if output:
            self.export_manager.write_code(code, output)
            if self.output_format != "pretty":
                self._emit_code_summary(code)
        elif self.output_format == "json":
            self.emit_json({"code": self._code_summary(code), "words": [list(w) for w in code.word_list()]})
        else:
            self.export_manager.write_code(code, self.stdout)
        return EXIT_OK

    def _code_summary(self, code: Code) -> Dict[str, Any]:
        return {
            "n": code.n,
            "q": code.q,
            "size": code.size,
            "dimension": code.dimension,
            "materialized": code.is_materialized,
            "parameters": dict(code.parameters),
        }

    def _emit_code_summary(self, code: Code) -> None:
        summary = self._code_summary(code)
        if self.output_format == "json":
            self.emit_json({"code": summary})
        else:
            self.emit(f"code in H({code.n},{code.q}): size {code.size}, dimension {code.dimension}")
            for key, value in sorted(code.parameters.items()):
                self.emit(f"  {key}: {value}")

    def cmd_verify(self, params: Dict[str, Any]) -> int:
        code = self.export_manager.read_code(params["code_file"])
        mode = params.get("mode", "all")
        if mode == "perfect":
            reports = [verify_perfect(code, self.cap, self.workers)]
        elif mode == "extended-perfect":
            reports = [verify_extended_perfect_prop1(code, self.cap, self.workers)]
        elif mode == "puncture":
            reports = [verify_extended_perfect_puncture(code, self.cap, self.workers)]
        elif mode == "fast":
            reports = [verify_extended_perfect_fast(code, self.workers)]
        else:
            reports = verify_all(code, self.cap, self.workers)

        if self.output_format == "json":
            self.emit_json({"reports": [r.to_dict() for r in reports]})
        elif self.output_format == "tsv":
            self.emit(self.export_manager.to_tsv(
                ["route", "verdict", "n", "q", "size", "detail"],
                [[r.route.value, r.verdict, r.n, r.q, r.size,
                  r.failure_witness.detail if r.failure_witness else ""] for r in reports]))
        else:
            for report in reports:
                self._emit_verification(report)
        return EXIT_OK if all(r.accepted for r in reports) else EXIT_REJECTED

    def _emit_verification(self, report: VerificationReport) -> None:
        self.emit(f"{report.route.value}: {report.verdict} (H({report.n},{report.q}), size {report.size})")
        if report.failure_witness:
            witness = report.failure_witness
            self.emit(f"  {witness.detail}")
            if witness.vertex is not None:
                self.emit(f"  vertex {''.join(str(s) for s in witness.vertex)}")
            if witness.other is not None:
                self.emit(f"  other  {''.join(str(s) for s in witness.other)}")
        if report.quotient is not None:
            self.emit("  quotient matrix:")
            self.emit(self.export_manager.render_matrix(report.quotient, indent="    "))

    def cmd_quotient(self, params: Dict[str, Any]) -> int:
        dist = params.get("dist", 1)
        if params.get("theoretical"):
            n, q = self._required(params, "n"), self._required(params, "q")
            matrix = distance_i_quotient_theoretical(n, q, dist)
            self._emit_matrix({"n": n, "q": q, "dist": dist, "source": "theoretical"}, matrix)
            return EXIT_OK

        if not params.get("code_file"):
            raise InvalidParameterError("quotient needs a code file unless --theoretical is given")
        code = self.export_manager.read_code(params["code_file"])
        record = distance_partition(code.ranks(), code.n, code.q, self.cap)
        if params.get("export_partition"):
            self.export_manager.export_partition(record, params["export_partition"])
        result = quotient_matrix(record.partition, code.n, code.q, dist, self.cap, self.workers)
        header = {"n": code.n, "q": code.q, "dist": dist, "source": "enumeration",
                  "covering_radius": record.covering_radius, "cell_sizes": record.cell_sizes}

        if isinstance(result, InequitabilityWitness):
            if self.output_format == "json":
                self.emit_json({**header, "equitable": False, "witness": result.describe()})
            else:
                self.emit(f"not equitable at distance {dist}: {result.describe()}")
            return EXIT_REJECTED
        self._emit_matrix(header, result)
        return EXIT_OK

    def _emit_matrix(self, header: Dict[str, Any], matrix) -> None:
        if self.output_format == "json":
            self.emit_json({**header, "quotient": matrix.to_json()})
        elif self.output_format == "tsv":
            self.emit(self.export_manager.to_tsv([f"c{j}" for j in range(matrix.cols)], matrix))
        else:
            self.emit(" ".join(f"{k}={v}" for k, v in header.items()))
            self.emit(self.export_manager.render_matrix(matrix))

    def cmd_krawtchouk(self, params: Dict[str, Any]) -> int:
        r, x, q, n = (self._required(params, key) for key in ("r", "x", "q", "n"))
        value = krawtchouk(r, x, q, n)
        if self.output_format == "json":
            self.emit_json({"r": r, "x": x, "q": q, "n": n, "value": str(value)})
        else:
            self.emit(str(value))
        return EXIT_OK

    # -- feasibility -----------------------------------------------------------

    def cmd_feasibility(self, params: Dict[str, Any]) -> int:
        report = feasibility_report(self._required(params, "n"), self._required(params, "q"),
                                    params.get("full", False), **self.config.feasibility_limits())
        if self.output_format == "json":
            self.emit_json(report.to_dict())
        elif self.output_format == "tsv":
            self._emit_report_table([report])
        else:
            self._emit_report(report)
        return EXIT_OK if report.admissible else EXIT_REJECTED

    def _emit_report(self, report: FeasibilityReport) -> None:
        self.emit(f"H({report.n},{report.q}): {report.verdict}")
        for check in report.checks:
            self.emit(f"  [{check.verdict}] {check.name}: {check.detail}")
        if report.witness is not None:
            self.emit(f"  witness {report.witness.describe()}")

    def _emit_report_table(self, reports: List[FeasibilityReport]) -> None:
        rows = []
        for r in reports:
            if r.witness is not None:
                reason = r.witness.describe()
            else:
                reason = "; ".join(f"{c.name}: {c.detail}" for c in r.failed_checks())
            rows.append([r.n, r.q, r.p, r.m, r.k, r.verdict, reason])
        self.emit(self.export_manager.to_tsv(["n", "q", "p", "m", "k", "verdict", "reason"], rows))

    def _emit_reports(self, reports: List[FeasibilityReport]) -> None:
        if self.output_format == "json":
            self.emit_json({"reports": [r.to_dict() for r in reports]})
        elif self.output_format == "tsv":
            self._emit_report_table(reports)
        else:
            for report in reports:
                self._emit_report(report)

    def cmd_classify(self, params: Dict[str, Any]) -> int:
        limits = self.config.feasibility_limits()
        reports = classify(self._required(params, "p"), self._required(params, "m"),
                           self._required(params, "kmax"), params.get("full", False),
                           limits["bound"], self.workers)
        self._emit_reports(reports)
        return EXIT_OK

    def cmd_scan(self, params: Dict[str, Any]) -> int:
        if params.get("q"):
            q_list = params["q"]
        elif params.get("qmax"):
            q_list = [q for q in range(2, params["qmax"] + 1) if prime_power(q)]
        else:
            raise InvalidParameterError("scan needs --qmax or --q")
        reports = scan(q_list, self._required(params, "kmax"), params.get("full", False),
                       self.config.feasibility_limits()["bound"], self.workers)
        if self.output_format == "pretty":
            self.emit(self.export_manager.to_tsv(["n", "q"], [[r.n, r.q] for r in reports]))
        else:
            self._emit_reports(reports)
        return EXIT_OK

    def cmd_witness(self, params: Dict[str, Any]) -> int:
        p, m, k = (self._required(params, key) for key in ("p", "m", "k"))
        witness = nonexistence_witness(p, m, k, self.config.feasibility_limits()["bound"])
        if self.output_format == "json":
            self.emit_json({"p": p, "m": m, "k": k, "q": witness.q, "n": witness.n,
                            "witness": witness.to_dict()})
        else:
            self.emit(f"H({witness.n},{witness.q}) excluded: {witness.describe()}")
        return EXIT_OK

    # -- search ----------------------------------------------------------------

    def cmd_search(self, params: Dict[str, Any]) -> int:
        task = SearchTask(self._required(params, "n"), self._required(params, "q"),
                          normalize=not params.get("no_normalize", False),
                          count_only=params.get("count_only", False))
        result = exhaustive_search(task, self.config.get("search.pool_cap"), self.workers,
                                   self.config.get("search.space_bits_cap"))

        output_dir = params.get("output_dir")
        if output_dir and result.codes:
            directory = Path(output_dir)
            directory.mkdir(parents=True, exist_ok=True)
            width = len(str(len(result.codes)))
            for index, code in enumerate(result.codes, start=1):
                self.export_manager.write_code(
                    code, directory / f"H{task.n}_{task.q}_{index:0{width}d}.{CODE_FILE_EXTENSION}")

        if self.output_format == "json":
            self.emit_json(result.to_dict())
        else:
            line = f"H({task.n},{task.q}): {result.count} codes of size {result.target_size} ({result.scope})"
            if result.reason:
                line += f"; {result.reason}"
            self.emit(line)
        return EXIT_OK

    @staticmethod
    def _required(params: Dict[str, Any], key: str) -> Any:
        value = params.get(key)
        if value is None:
            raise InvalidParameterError(f"missing required option --{key}")
        return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perfectcodes",
        description="Construction, verification and existence screening of extended 1-perfect codes in H(n,q).",
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--cap", type=int, help="maximum vertex-visits of one enumeration")
    parser.add_argument("--threads", type=int, help="worker threads (0: available parallelism)")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="report format")
    parser.add_argument("--modulus", help='field modulus, low degree first, e.g. "1 1 1"')
    parser.add_argument("--config", dest="config_file", help="JSON configuration file")
    parser.add_argument("--log-level", choices=list(LOG_LEVELS), help="logging level (stderr)")
    parser.add_argument("--log-file", help="also write log records to this file")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("construct", help="build a known (extended) 1-perfect code")
    p.add_argument("family", choices=CONSTRUCT_FAMILIES)
    p.add_argument("--q", type=int, help="alphabet size (trivial, hamming, auto)")
    p.add_argument("--t", type=int, help="redundancy (hamming, extended-hamming)")
    p.add_argument("--m", type=int, help="q = 2^m (extended-rs)")
    p.add_argument("--n", type=int, help="length (auto)")
    p.add_argument("--output", help="code file to write (default: standard output)")

    p = sub.add_parser("verify", help="check a code file for (extended) 1-perfectness")
    p.add_argument("code_file")
    p.add_argument("--mode", choices=VERIFY_MODES, default="all")

    p = sub.add_parser("quotient", help="quotient matrix of the distance partition")
    p.add_argument("code_file", nargs="?")
    p.add_argument("--dist", type=int, default=1, help="distance-i graph (default 1)")
    p.add_argument("--theoretical", action="store_true", help="closed form instead of enumeration")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--export-partition", help="write the distance partition to this file")

    p = sub.add_parser("krawtchouk", help="evaluate K_r(x) for H(n,q)")
    for key in ("r", "x", "q", "n"):
        p.add_argument(f"--{key}", type=int, required=True)

    p = sub.add_parser("feasibility", help="necessary conditions for one (n,q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--full", action="store_true", help="also check every distance-n quotient entry")

    p = sub.add_parser("classify", help="screen the admissible lengths of q = p^m")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--full", action="store_true")

    p = sub.add_parser("scan", help="admissible (n,q) over several prime powers")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--qmax", type=int)
    group.add_argument("--q", type=int, nargs="+")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--full", action="store_true")

    p = sub.add_parser("witness", help="nonexistence proof trace for (p, m, k)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("search", help="exhaustive search in a small H(n,q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--no-normalize", action="store_true", help="do not fix the zero word")
    p.add_argument("--output-dir", help="write every code found into this directory")
    return parser


GLOBAL_OPTIONS = ("cap", "threads", "output_format", "modulus", "config_file", "log_level", "log_file")


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    namespace = vars(build_parser().parse_args(argv))
    subcommand = namespace.pop("subcommand")
    overrides = {key: namespace.pop(key) for key in GLOBAL_OPTIONS}
    return RunConfig(subcommand, namespace, **overrides)


def run(config: RunConfig, stdout: Optional[TextIO] = None) -> int:
    return PerfectCodesApp(config, stdout).run()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except InvalidParameterError as e:
        logging.getLogger(__name__).error(str(e))
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
