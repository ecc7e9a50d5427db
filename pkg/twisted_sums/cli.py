# Copyright (C) 2024 twyleg
import argparse
import json
import logging
import math
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import mpmath
import numpy as np

from twisted_sums import __version__
from twisted_sums.arith import Kind, partial_sums, sieve, weights_table
from twisted_sums.bounds import ENVELOPE_IDS, UnknownEnvelopeError, envelope_for, empirical_ratio, evaluate, sample_alphas, theorem_id
from twisted_sums.diophantine import ArcDissection, classify
from twisted_sums.expsum import exp_sum_convergent_sweep, exp_sum_poly, twisted_sum
from twisted_sums.generic_application import ExitCode, GenericApplication
from twisted_sums.output import dump_json, print_csv, write_csv, write_json
from twisted_sums.partitions import CountMethod, PartitionKind, arc_diagnostics, asymptotic_count, partition_counts, solve_saddle
from twisted_sums.subcommand_application import SubcommandApplication
from twisted_sums.zeta import DEFAULT_ZEROS_FILE, explicit_sweep, generate_zeros, load_zeros, write_zeros


logm = logging.getLogger(__name__)

FILE_DIR = Path(__file__).parent

APPLICATION_NAME = "twisted_sums"
ENV_ZEROS = "TWISTED_SUMS_ZEROS"
ENV_THREADS = "TWISTED_SUMS_THREADS"
PHASE_DEGREES = {"linear": 1, "quadratic": 2, "cubic": 3}
FIGURES = {"1": "mobius-prime", "3": "explicit"}


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one run: CLI flag > environment > config file > default."""

    precision_dps: int
    tolerance: float
    chunk_size: int
    threads: int | None
    zeros_file: str | None
    seed: int
    version: str = __version__
    command: str | None = None
    arguments: Dict[str, Any] = field(default_factory=dict)

    @property
    def zeros_path(self) -> Path:
        return Path(self.zeros_file) if self.zeros_file else DEFAULT_ZEROS_FILE

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_default_config() -> Dict[str, Any]:
    with open(FILE_DIR / "resources/default_config.json") as f:
        return json.load(f)


def count(text: str) -> int:
    """Positive integer, scientific notation allowed (1e6)."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value) or value < 1 or value != int(value):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def q_range(text: str) -> Tuple[int, int]:
    match = re.fullmatch(r"q=(\d+)\.\.(\d+)", text.strip())
    if not match or int(match.group(1)) < 1 or int(match.group(1)) > int(match.group(2)):
        raise argparse.ArgumentTypeError(f"expected q=LO..HI with 1 <= LO <= HI, got {text!r}")
    return int(match.group(1)), int(match.group(2))


def theorem(text: str) -> str:
    try:
        return theorem_id(text)
    except UnknownEnvelopeError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def frange(lo: float, hi: float, step: float) -> List[float]:
    if step <= 0 or hi < lo:
        raise GenericApplication.UsageError(f"Invalid range {lo}..{hi} with step {step}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + i * step for i in range(n + 1)]


def centred(alpha: float) -> float:
    """Representative of alpha mod 1 in [-1/2, 1/2)."""
    return alpha - math.floor(alpha + 0.5)


class TwistedSumsApplication(SubcommandApplication):
    def __init__(self, **kwargs):
        kwargs.setdefault("application_name", APPLICATION_NAME)
        kwargs.setdefault("version", __version__)
        kwargs.setdefault("application_config_schema_filepath", FILE_DIR / "resources/config_schema.json")
        kwargs.setdefault("application_config_default_filepath", FILE_DIR / "resources/default_config.json")
        super().__init__(**kwargs)

        self.run_config: RunConfig | None = None
        self._resolved_args: argparse.Namespace | None = None
        self.add_custom_init_stage_two(self.resolve_run_config)
        self.add_custom_init_stage_three(self.log_run_header)
        self.__add_subcommands()

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        # fmt: off
        parser.add_argument(
            "--threads",
            help="Cap on worker threads (default: machine parallelism).",
            type=count,
            default=None
        )
        parser.add_argument(
            "--precision",
            help="mpmath working precision in decimal digits.",
            type=count,
            default=None
        )
        # fmt: on

    def resolve_run_config(self) -> None:
        settings = load_default_config()
        if self.application_config:
            settings |= self.application_config

        if os.environ.get(ENV_ZEROS):
            settings["zeros_file"] = os.environ[ENV_ZEROS]
        if os.environ.get(ENV_THREADS):
            try:
                settings["threads"] = count(os.environ[ENV_THREADS])
            except argparse.ArgumentTypeError as e:
                raise GenericApplication.UsageError(f"{ENV_THREADS}: {e}") from None

        args = self._args
        self._resolved_args = args
        if args is not None:
            if args.threads is not None:
                settings["threads"] = args.threads
            if args.precision is not None:
                settings["precision_dps"] = args.precision
            if getattr(args, "zeros", None):
                settings["zeros_file"] = args.zeros

        command = None
        arguments: Dict[str, Any] = {}
        if args is not None:
            arguments = {k: v for k, v in vars(args).items() if k != "handler" and not k.endswith("_command")}
            command = getattr(args, f"{APPLICATION_NAME}_command", None)

        self.run_config = RunConfig(
            precision_dps=int(settings["precision_dps"]),
            tolerance=float(settings["tolerance"]),
            chunk_size=int(settings["chunk_size"]),
            threads=settings["threads"],
            zeros_file=settings["zeros_file"],
            seed=int(settings["seed"]),
            command=command,
            arguments=arguments,
        )

    def log_run_header(self) -> None:
        config = self.settings
        logm.debug("run configuration:")
        logm.debug("- numpy version = %s", np.__version__)
        logm.debug("- mpmath version = %s", mpmath.__version__)
        logm.debug("- mpmath working precision = %d digits", config.precision_dps)
        logm.debug("- worker cap = %s", config.threads or f"machine parallelism ({os.cpu_count()})")
        logm.debug("- zeros file = %s", config.zeros_path)
        logm.debug("- series tolerance = %g, chunk size = %d, seed = %d", config.tolerance, config.chunk_size, config.seed)

    @property
    def settings(self) -> RunConfig:
        # commands issued in the shell replace self._args
        if self.run_config is None or self._resolved_args is not self._args:
            self.resolve_run_config()
        assert self.run_config is not None
        return self.run_config

    def emit_csv(self, args: argparse.Namespace, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        if getattr(args, "out", None):
            write_csv(args.out, header, rows, self.settings.to_dict())
        else:
            print_csv(header, rows, self.settings.to_dict())

    def emit_json(self, args: argparse.Namespace, result: Any) -> None:
        if getattr(args, "out", None):
            write_json(args.out, result, self.settings.to_dict())
        else:
            print(dump_json(result, self.settings.to_dict()))

    def __add_subcommands(self) -> None:
        # fmt: off
        cmd = self.add_subcommand("sieve", help="Tabulate an arithmetic function",
                                  description="Sieve one arithmetic function on [1, limit] and emit n,value.", handler=self.handle_sieve)
        cmd.parser.add_argument("--kind", choices=[k.value for k in Kind if k is not Kind.CUSTOM], required=True)
        cmd.parser.add_argument("--limit", type=count, required=True)
        cmd.parser.add_argument("--k", type=count, default=None, help="Number of factors for tau_k.")
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("expsum", help="Evaluate a twisted exponential sum",
                                  description="sum_{n <= X} w(n) e(alpha P(n)), emitted as re,im,abs.", handler=self.handle_expsum)
        cmd.parser.add_argument("--weight", type=str, default="mu_abs", help="Weight kind, or kind:r for an r-fold convolution.")
        cmd.parser.add_argument("--alpha", type=float, required=True)
        cmd.parser.add_argument("--x", type=count, required=True)
        cmd.parser.add_argument("--phase", choices=sorted(PHASE_DEGREES), default="linear")
        cmd.parser.add_argument("--coeffs", type=float, nargs="+", default=None, help="Polynomial phase coefficients c_0 .. c_k.")
        cmd.parser.add_argument("--sweep", type=q_range, default=None, help="Evaluate at the convergents a/q of alpha, e.g. q=2..1000.")
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("arcs", help="Classify alpha in the arc dissection",
                                  description="Principal major, major or minor arc of alpha for Q = (log X)^A.", handler=self.handle_arcs)
        cmd.parser.add_argument("--alpha", type=float, required=True)
        cmd.parser.add_argument("--x", type=float, required=True)
        cmd.parser.add_argument("--a-param", type=float, default=4.0)
        cmd.parser.add_argument("--strict", action="store_true", help="Fail on overlapping arcs.")

        cmd = self.add_subcommand("envelope", help="Evaluate a bound envelope",
                                  description="Value and dominant term of one bound envelope.", handler=self.handle_envelope)
        self.__add_envelope_arguments(cmd.parser)
        cmd.parser.add_argument("--x", type=float, required=True)
        cmd.parser.add_argument("--q", type=count, required=True)
        cmd.parser.add_argument("--upsilon", type=float, default=1.0)
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("verify", help="Sample |S| / envelope ratios",
                                  description="Ratio of measured sums to an envelope over seeded alpha samples.", handler=self.handle_verify)
        self.__add_envelope_arguments(cmd.parser)
        cmd.parser.add_argument("--weight", type=str, default=None, help="Weight specification (default: the envelope's own).")
        cmd.parser.add_argument("--samples", type=count, default=100)
        cmd.parser.add_argument("--x", type=count, nargs="+", required=True)
        cmd.parser.add_argument("--seed", type=int, default=None)
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("explicit", help="Arithmetic vs explicit-formula Phi along theta(X)",
                                  description="Phi_1(X, J, N) against Phi_2(X, T, N_trivial) for X on a grid.", handler=self.handle_explicit)
        self.__add_explicit_arguments(cmd.parser)
        cmd.parser.add_argument("--t-count", type=int, default=25)
        cmd.parser.add_argument("--n-trivial", type=int, default=1)
        cmd.parser.add_argument("--j", type=count, default=1500)
        cmd.parser.add_argument("--n-arith", type=count, default=1500)

        cmd = self.add_subcommand("partitions", help="Exact counts of partitions into squarefree parts",
                                  description="p(n) for n <= N, emitted as n,count,log_count.", handler=self.handle_partitions)
        cmd.parser.add_argument("--kind", choices=[k.value for k in PartitionKind], default=PartitionKind.SQUAREFREE.value)
        cmd.parser.add_argument("--n", type=count, required=True)
        cmd.parser.add_argument("--method", choices=[m.value for m in CountMethod], default=CountMethod.AUTO.value)
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("saddle", help="Solve the saddle-point equation",
                                  description="X_param with rho Phi'(rho) = x, rho = exp(-1/X_param).", handler=self.handle_saddle)
        cmd.parser.add_argument("--x", type=float, required=True)
        cmd.parser.add_argument("--kind", choices=[k.value for k in PartitionKind], default=PartitionKind.SQUAREFREE.value)
        cmd.parser.add_argument("--out", type=str, default=None)

        cmd = self.add_subcommand("arc-scan", help="|Phi(rho e(alpha))| across the arcs",
                                  description="Grid scan of |Phi| with per-arc maxima and comparison scales.", handler=self.handle_arc_scan)
        cmd.parser.add_argument("--x-param", type=float, required=True)
        cmd.parser.add_argument("--a-param", type=float, default=3.0)
        cmd.parser.add_argument("--grid", type=count, default=20000)
        cmd.parser.add_argument("--kind", choices=[k.value for k in PartitionKind], default=PartitionKind.SQUAREFREE.value)
        cmd.parser.add_argument("--out", type=str, default=None)
        cmd.parser.add_argument("--summary", type=str, default=None, help="JSON file for the per-arc maxima.")

        cmd = self.add_subcommand("figures", help="Regenerate figure data",
                                  description="mobius-prime: x, mu_p, partial_sum; explicit: Phi_1(1500, 1500), Phi_2(25, 1), Phi_2,0 and zero part.",
                                  handler=self.handle_figures)
        cmd.parser.add_argument("--which", choices=["mobius-prime", "explicit", *FIGURES], required=True,
                                help="Figure data set; 1 is mobius-prime, 3 is explicit.")
        cmd.parser.add_argument("--limit", type=count, default=500)
        self.__add_explicit_arguments(cmd.parser)

        cmd = self.add_subcommand("zeros", help="Regenerate a zeros file",
                                  description="Locate the first zeros with mpmath and write one ordinate per line.", handler=self.handle_zeros)
        cmd.parser.add_argument("--count", type=count, default=100)
        cmd.parser.add_argument("--out", type=str, required=True)
        # fmt: on

    @staticmethod
    def __add_envelope_arguments(parser: argparse.ArgumentParser) -> None:
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--envelope", choices=ENVELOPE_IDS, default="vinogradov")
        group.add_argument("--theorem", type=theorem, default=None, help="Theorem identifier, e.g. 1.2 or 1.4-S2.")
        parser.add_argument("--r", type=int, default=None, help="Number of prime factors for parametric envelopes.")
        parser.add_argument("--eta", type=float, default=None)
        parser.add_argument("--k", type=int, default=None, help="Polynomial degree for Weyl-type envelopes.")
        parser.add_argument("--epsilon", type=float, default=0.0)

    @staticmethod
    def __add_explicit_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--xmin", type=float, default=10.0)
        parser.add_argument("--xmax", type=float, default=500.0)
        parser.add_argument("--step", type=float, default=5.0)
        parser.add_argument("--zeros", type=str, default=None, help="Zeros file (one ordinate per line).")
        parser.add_argument("--out", type=str, default=None)

    def handle_sieve(self, args: argparse.Namespace) -> int:
        if args.kind == Kind.TAU_K.value and args.k is None:
            raise GenericApplication.UsageError("--kind tau_k needs --k")
        table = sieve(args.kind, args.limit, k=args.k, workers=self.settings.threads)
        self.emit_csv(args, ["n", "value"], zip(range(1, table.limit + 1), table.values.tolist()))
        return ExitCode.SUCCESS

    def handle_expsum(self, args: argparse.Namespace) -> int:
        config = self.settings
        weights = weights_table(args.weight, args.x, config.threads)

        if args.sweep:
            q_min, q_max = args.sweep
            rows = exp_sum_convergent_sweep(weights, args.alpha, args.x, q_min, q_max, PHASE_DEGREES[args.phase], config.threads)
            self.emit_csv(args, ["a", "q", "re", "im", "abs"], ((a, q, r.value.real, r.value.imag, r.abs) for a, q, r in rows))
            return ExitCode.SUCCESS

        if args.coeffs:
            result = exp_sum_poly(weights, args.coeffs, args.alpha, args.x, config.chunk_size, config.threads)
        else:
            degree = PHASE_DEGREES[args.phase]
            result = twisted_sum(weights, [(args.alpha, degree)], args.alpha, args.x, f"{weights.name}:{args.phase}", config.chunk_size, config.threads)
        self.emit_csv(args, ["re", "im", "abs"], [(result.value.real, result.value.imag, result.abs)])
        return ExitCode.SUCCESS

    def handle_arcs(self, args: argparse.Namespace) -> int:
        result = classify(centred(args.alpha), ArcDissection(args.x, args.a_param), strict=args.strict)
        self.emit_json(args, result.to_dict())
        return ExitCode.SUCCESS

    def handle_envelope(self, args: argparse.Namespace) -> int:
        env = envelope_for(args.theorem or args.envelope, r=args.r, eta=args.eta, k=args.k)
        value = evaluate(env, args.x, args.q, args.upsilon, args.epsilon)
        self.emit_json(
            args,
            {
                "envelope": env.name,
                "value": value.value,
                "dominant_term": value.dominant_term,
                "term_values": list(value.term_values),
                "violations": list(value.violations),
            },
        )
        return ExitCode.SUCCESS

    def handle_verify(self, args: argparse.Namespace) -> int:
        config = self.settings
        env = envelope_for(args.theorem or args.envelope, r=args.r, eta=args.eta, k=args.k)
        seed = config.seed if args.seed is None else args.seed
        alphas = sample_alphas(seed, args.samples)
        sample = [(alpha, X) for X in args.x for alpha in alphas]
        stats = empirical_ratio(args.weight, env, sample, args.epsilon, config.threads)

        header = ["alpha", "X", "a", "q", "upsilon", "abs_sum", "envelope", "ratio", "in_regime"]
        rows = [(s.alpha, s.X, s.a, s.q, s.upsilon, s.abs_sum, s.envelope, s.ratio, s.in_regime) for s in stats.samples]
        self.emit_csv(args, header, rows)
        self.logm.info("max ratio %.6g, median %.6g, mean %.6g", stats.max, stats.median, stats.mean)
        return ExitCode.SUCCESS

    def handle_explicit(self, args: argparse.Namespace) -> int:
        config = self.settings
        xs = frange(args.xmin, args.xmax, args.step)
        zeros = load_zeros(config.zeros_path)
        evals = explicit_sweep(xs, args.j, args.n_arith, args.t_count, args.n_trivial, zeros, config.precision_dps, config.threads)

        header = ["X", "re_phi1", "im_phi1", "re_phi2", "im_phi2", "re_phi20", "im_phi20", "residual"]
        rows = [(e.X, e.phi1.real, e.phi1.imag, e.phi2.real, e.phi2.imag, e.phi20.real, e.phi20.imag, e.residual) for e in evals]
        self.emit_csv(args, header, rows)
        self.logm.info("largest residual |Phi1 - Phi2| / |Phi2,0| = %.4g", max(e.residual for e in evals))
        return ExitCode.SUCCESS

    def handle_partitions(self, args: argparse.Namespace) -> int:
        series = partition_counts(args.kind, args.n, args.method)
        rows = ((n, str(c), math.log(c) if c else None) for n, c in enumerate(series.counts))
        self.emit_csv(args, ["n", "count", "log_count"], rows)
        return ExitCode.SUCCESS

    def handle_saddle(self, args: argparse.Namespace) -> int:
        config = self.settings
        state = solve_saddle(args.x, config.tolerance, args.kind)
        result: Dict[str, Any] = {**asdict(state), "residual": state.residual, "sqrt_gap": state.sqrt_gap}
        if args.x >= 2 and args.x == int(args.x):
            log_estimate, _ = asymptotic_count(int(args.x), config.tolerance, args.kind)
            result["log_estimate"] = log_estimate
        self.emit_json(args, result)
        return ExitCode.SUCCESS

    def handle_arc_scan(self, args: argparse.Namespace) -> int:
        config = self.settings
        report = arc_diagnostics(args.x_param, args.a_param, args.grid, config.tolerance, args.kind, config.threads)
        rows = zip(report.alphas.tolist(), report.q.tolist(), report.abs_phi.tolist())
        self.emit_csv(args, ["alpha", "q", "abs_phi"], rows)
        if args.summary:
            write_json(args.summary, report.summary(), config.to_dict())
        else:
            self.logm.info("arc maxima: %s", json.dumps(report.summary()))
        return ExitCode.SUCCESS

    def handle_figures(self, args: argparse.Namespace) -> int:
        config = self.settings
        if FIGURES.get(args.which, args.which) == "mobius-prime":
            mu_p = sieve(Kind.MU_PRIME, args.limit, workers=config.threads)
            sums = partial_sums(mu_p)
            self.emit_csv(args, ["x", "mu_p", "partial_sum"], zip(range(1, args.limit + 1), mu_p.values.tolist(), sums.tolist()))
            return ExitCode.SUCCESS

        xs = frange(args.xmin, args.xmax, args.step)
        evals = explicit_sweep(xs, 1500, 1500, 25, 1, load_zeros(config.zeros_path), config.precision_dps, config.threads)
        header = ["X", "re_phi1", "im_phi1", "re_phi2", "im_phi2", "re_phi20", "im_phi20", "re_zeros", "im_zeros"]
        rows = [(e.X, e.phi1.real, e.phi1.imag, e.phi2.real, e.phi2.imag, e.phi20.real, e.phi20.imag, e.zero_part.real, e.zero_part.imag) for e in evals]
        self.emit_csv(args, header, rows)
        return ExitCode.SUCCESS

    def handle_zeros(self, args: argparse.Namespace) -> int:
        table = generate_zeros(args.count, self.settings.precision_dps)
        write_zeros(table, args.out)
        self.logm.info("Wrote %d zeros (max ordinate %.6f) to %s", len(table), table.max_ordinate, args.out)
        return ExitCode.SUCCESS


def main() -> None:
    sys.exit(TwistedSumsApplication().start(sys.argv[1:]))


if __name__ == "__main__":
    main()
