#!/usr/bin/env python3
"""
Sierpinski Domination CLI

Generates S(K_n, t), builds the dominating sets D_{n,t} and the Roman and
double Roman labelings derived from them, checks their structural lemmas, and
compares the closed-form domination numbers with an exact solver.
"""

import argparse
import csv
import io
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from loguru import logger

from .config import Config, ConfigError
from .construction import KIND_D, KIND_D_STAR, VertexSet, build_D, build_D_star
from .domination import (
    InvalidLabelingError,
    Labeling,
    LabelingMode,
    Variant,
    build_report,
    double_roman_labeling_from_D,
    double_roman_violation,
    first_undominated,
    first_unseparated,
    formula_for,
    gamma_dR_formula,
    gamma_formula,
    gamma_R_formula,
    lower_bound_for,
    roman_labeling_from_D,
    roman_violation,
)
from .graph import (
    CapacityError,
    GraphParams,
    InvalidParamsError,
    InvalidWordError,
    format_word,
    to_dot,
    to_edgelist,
    to_json,
)
from .lemmas import LemmaVerifier
from .solver import (
    LowerBoundMode,
    SolverBudgetExceeded,
    SolverCapError,
    SolverConfig,
    minimum_pairwise_distance,
    solve,
)
from .utils import (
    create_timestamped_output_dir,
    dump_json,
    generate_failure_report,
    generate_json_log,
    load_json_file,
    write_output,
)

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CAPACITY = 2
EXIT_SOLVER = 3
EXIT_USAGE = 64

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


class UsageError(Exception):
    """Raised for arguments that parse but cannot be used."""
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def setup_logging(verbosity: int = 0) -> None:
    """Configure logging for the application."""
    # Remove default handler
    logger.remove()

    level = "INFO" if verbosity <= 0 else "DEBUG" if verbosity == 1 else "TRACE"
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)


def _variant(text: str) -> Variant:
    return Variant(text.replace("-", "_"))


def _at_least(value: Optional[int], fallback: int, flag: str, minimum: int = 1) -> int:
    """The flag value when given, else the configured one; below ``minimum`` is a usage error."""
    value = fallback if value is None else value
    if value < minimum:
        raise UsageError(f"{flag} must be at least {minimum}, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdom", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for debug logging, -vv for solver traces")
    parser.add_argument("--config", type=Path, help="YAML configuration file")
    parser.add_argument("--threads", type=int, help="solver workers (default: all cores; 1 is deterministic)")
    parser.add_argument("--vertex-cap", type=int, help="largest n^t for whole-graph operations")
    parser.add_argument("--member-cap", type=int, help="largest |D_{n,t}| to materialize")

    instance = _Parser(add_help=False)
    instance.add_argument("-n", type=int, required=True, help="base clique size (n >= 2)")
    instance.add_argument("-t", type=int, required=True, help="iteration depth (t >= 1)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[instance], help="emit the graph S(K_n, t)")
    gen.add_argument("--format", choices=["edgelist", "dot", "json"], default="edgelist")
    gen.add_argument("--out", type=Path)

    construct = sub.add_parser("construct", parents=[instance], help="build D_{n,t} or D*_{n,t}")
    construct.add_argument("--kind", choices=[KIND_D, KIND_D_STAR], default=KIND_D)
    construct.add_argument("--format", choices=["json", "text"], default="json")
    construct.add_argument("--out", type=Path)

    label = sub.add_parser("label", parents=[instance], help="build the labeling derived from D_{n,t}")
    label.add_argument("--mode", choices=["roman", "double-roman"], required=True)
    label.add_argument("--out", type=Path)

    verify = sub.add_parser("verify", help="re-verify a set or labeling written by construct/label")
    verify.add_argument("--input", type=Path, required=True)
    verify.add_argument("--out", type=Path)

    solve_cmd = sub.add_parser("solve", parents=[instance], help="compare formula, witness and exact optimum")
    solve_cmd.add_argument("--variant", choices=["plain", "roman", "double-roman"], default="plain")
    solve_cmd.add_argument("--unrestricted", action="store_true",
                           help="double Roman: also search the value 1")
    solve_cmd.add_argument("--solver-cap", type=int, help="largest n^t the solver accepts")
    solve_cmd.add_argument("--time-budget", type=float, help="seconds before giving up with bounds")
    solve_cmd.add_argument("--lower-bound", choices=[m.value for m in LowerBoundMode])
    solve_cmd.add_argument("--format", choices=["text", "json"], default="text")

    table = sub.add_parser("table", help="closed-form gamma, gamma_R, gamma_dR per (n, t)")
    table.add_argument("--n-min", type=int, default=2)
    table.add_argument("--n-max", type=int, default=8)
    table.add_argument("--t-min", type=int, default=1)
    table.add_argument("--t-max", type=int, default=8)
    table.add_argument("--format", choices=["csv", "text"], default="csv")
    table.add_argument("--out", type=Path)

    lemmas = sub.add_parser("check-lemmas", parents=[instance], help="verify the structural lemmas of D_{n,t}")
    lemmas.add_argument("--sample-size", type=int)
    lemmas.add_argument("--seed", type=int)
    lemmas.add_argument("--pair-threshold", type=int)
    lemmas.add_argument("--out", type=Path)
    lemmas.add_argument("--save", action="store_true", help="also write a timestamped run folder")

    sub.add_parser("init-config", help="write the default configuration file")
    return parser


class Runner:
    """Dispatch parsed arguments to the subcommand handlers."""

    def __init__(self, args: argparse.Namespace, config: Config):
        self.args = args
        self.config = config
        self.vertex_cap = _at_least(args.vertex_cap, config.vertex_cap, "--vertex-cap")
        self.member_cap = _at_least(args.member_cap, config.member_cap, "--member-cap")
        self.threads = _at_least(args.threads, config.threads, "--threads")

    def params(self) -> GraphParams:
        try:
            return GraphParams(self.args.n, self.args.t)
        except InvalidParamsError as e:
            raise UsageError(str(e))

    def dispatch(self) -> int:
        handler = {
            "gen": self.run_gen,
            "construct": self.run_construct,
            "label": self.run_label,
            "verify": self.run_verify,
            "solve": self.run_solve,
            "table": self.run_table,
            "check-lemmas": self.run_check_lemmas,
            "init-config": self.run_init_config,
        }[self.args.command]
        return handler()

    def run_gen(self) -> int:
        g = self.params()
        render = {"edgelist": to_edgelist, "dot": to_dot, "json": to_json}[self.args.format]
        write_output(render(g, self.vertex_cap), self.args.out)
        return EXIT_OK

    def run_construct(self) -> int:
        g = self.params()
        members = build_D(g, self.member_cap) if self.args.kind == KIND_D else build_D_star(g, self.member_cap)
        if self.args.format == "text":
            text = "".join(f"{format_word(w)}\n" for w in members)
        else:
            text = dump_json(members.to_json_dict())
        write_output(text, self.args.out)
        logger.info(f"{self.args.kind}_{g.n},{g.t} has {len(members)} members")
        return EXIT_OK

    def run_label(self) -> int:
        g = self.params()
        if self.args.mode == "roman":
            labeling = roman_labeling_from_D(g, self.member_cap)
        else:
            labeling = double_roman_labeling_from_D(g, self.member_cap)
        write_output(dump_json(labeling.to_json_dict()), self.args.out)
        logger.info(f"{labeling.mode.value} labeling weight {labeling.weight}")
        return EXIT_OK

    def run_verify(self) -> int:
        try:
            data = load_json_file(self.args.input)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read {self.args.input}: {e}")

        try:
            if "mode" in data:
                labeling = Labeling.from_json_dict(data)
            elif "members" in data:
                members = VertexSet.from_json_dict(data)
            else:
                raise UsageError(f"{self.args.input} is neither a vertex set nor a labeling")
        except (InvalidLabelingError, KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed input {self.args.input}: {e}")

        if "mode" in data:
            g = labeling.params
            check = roman_violation if labeling.mode is LabelingMode.ROMAN else double_roman_violation
            violation = check(g, labeling, self.vertex_cap)
            result = {"n": g.n, "t": g.t, "kind": labeling.mode.value, "weight": labeling.weight}
        else:
            g = members.params
            result = {"n": g.n, "t": g.t, "kind": members.kind, "size": len(members)}
            if members.kind == KIND_D_STAR:
                # D* is checked for separation, not domination
                violation = first_unseparated(g, members)
                if len(members) >= 2:
                    result["minimum_distance"] = minimum_pairwise_distance(g, members.members, self.vertex_cap)
            else:
                violation = first_undominated(g, members, self.vertex_cap)

        result["valid"] = violation is None
        result["counterexample"] = None if violation is None else format_word(violation)
        write_output(dump_json(result), self.args.out)
        return EXIT_OK if violation is None else EXIT_FAILURE

    def _solver_config(self, variant: Variant) -> SolverConfig:
        return SolverConfig(
            variant=variant,
            restrict_values=self.config.restrict_values and not self.args.unrestricted,
            vertex_cap=_at_least(self.args.solver_cap, self.config.solver_vertex_cap, "--solver-cap"),
            time_budget=self.args.time_budget if self.args.time_budget is not None else self.config.time_budget,
            lower_bound_mode=self.args.lower_bound or self.config.lower_bound_mode,
            workers=self.threads,
            trace=self.args.verbose >= 2,
        )

    def _print_solve(self, payload: dict) -> None:
        if self.args.format == "json":
            write_output(dump_json(payload))
            return
        lines = [f"S(K_{payload['n']},{payload['t']}) {payload['variant']}"]
        for key in ("formula_value", "witness_weight", "exact_value", "lower_bound", "incumbent", "status"):
            if payload.get(key) is not None:
                lines.append(f"  {key:<15} {payload[key]}")
        for name, ok in sorted(payload.get("checks", {}).items()):
            lines.append(f"  {name:<28} {'yes' if ok else 'NO'}")
        write_output("\n".join(lines) + "\n")

    def run_solve(self) -> int:
        g = self.params()
        variant = _variant(self.args.variant)
        cfg = self._solver_config(variant)
        try:
            result = solve(g, cfg)
        except SolverCapError as e:
            logger.error(str(e))
            self._print_solve({
                "n": g.n, "t": g.t, "variant": variant.value, "status": "solver_cap",
                "formula_value": formula_for(g, variant),
                "lower_bound": lower_bound_for(g, variant),
            })
            return EXIT_SOLVER
        except SolverBudgetExceeded as e:
            logger.error(str(e))
            self._print_solve({
                "n": g.n, "t": g.t, "variant": variant.value, "status": "time_budget",
                "formula_value": formula_for(g, variant),
                "lower_bound": e.lower_bound, "incumbent": e.incumbent,
            })
            return EXIT_SOLVER

        report = build_report(g, variant, result.value, self.vertex_cap, self.member_cap)
        report.checks["witness_optimal"] = report.witness_weight == result.value
        report.checks["solver_bound_sound"] = result.lower_bound <= result.value
        payload = report.to_json_dict()
        payload["status"] = "solved"
        payload["nodes"] = result.nodes
        self._print_solve(payload)
        return EXIT_OK if report.passed else EXIT_FAILURE

    def run_table(self) -> int:
        args = self.args
        if args.n_min < 2 or args.t_min < 1 or args.n_max < args.n_min or args.t_max < args.t_min:
            raise UsageError("table needs 2 <= n-min <= n-max and 1 <= t-min <= t-max")
        rows = []
        for n in range(args.n_min, args.n_max + 1):
            for t in range(args.t_min, args.t_max + 1):
                try:
                    g = GraphParams(n, t)
                    rows.append([n, t, gamma_formula(g), gamma_R_formula(g), gamma_dR_formula(g)])
                except CapacityError:
                    rows.append([n, t, "overflow", "overflow", "overflow"])
        header = ["n", "t", "gamma", "gamma_R", "gamma_dR"]
        if args.format == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
            text = buffer.getvalue()
        else:
            widths = [max(len(str(row[i])) for row in rows + [header]) for i in range(len(header))]
            text = "".join(
                "  ".join(str(cell).rjust(width) for cell, width in zip(row, widths)) + "\n"
                for row in [header] + rows
            )
        write_output(text, args.out)
        return EXIT_OK

    def run_check_lemmas(self) -> int:
        g = self.params()
        start_time = time.time()
        verifier = LemmaVerifier(
            g,
            vertex_cap=self.vertex_cap,
            member_cap=self.member_cap,
            pair_threshold=_at_least(self.args.pair_threshold, self.config.pair_threshold, "--pair-threshold", 0),
            sample_size=_at_least(self.args.sample_size, self.config.sample_size, "--sample-size"),
            seed=self.args.seed if self.args.seed is not None else self.config.seed,
        )
        report = verifier.run()
        payload = report.to_json_dict()
        write_output(dump_json(payload), self.args.out)

        if self.args.save:
            output_dir = create_timestamped_output_dir(Config.get_output_path(), f"LEMMAS-n{g.n}-t{g.t}")
            generate_json_log(output_dir, "check-lemmas", payload, time.time() - start_time, n=g.n, t=g.t)
            generate_failure_report(output_dir, [c.to_json_dict() for c in report.failures], "check-lemmas")
        return EXIT_OK if report.passed else EXIT_FAILURE

    def run_init_config(self) -> int:
        path = self.config.save_config()
        logger.info(f"Wrote configuration to {path}")
        return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the command-line tool."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    # Set up logging
    setup_logging(args.verbose)

    try:
        config = Config(args.config) if args.config else Config()
        return Runner(args, config).dispatch()

    except (UsageError, ConfigError, InvalidWordError, InvalidParamsError) as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except SolverCapError as e:
        logger.error(f"Solver capacity exceeded: {e}")
        return EXIT_SOLVER
    except CapacityError as e:
        logger.error(f"Capacity exceeded: {e}")
        return EXIT_CAPACITY
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
