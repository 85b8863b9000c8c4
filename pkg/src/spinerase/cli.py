"""Command-line experiment runner.

Subcommands: erase, dist, sweep, match, reuse, oracle-check.  Every command
accepts --out, --config, --workers and --seed.  A config file holds plain
``key=value`` lines (keys are the long flag names with underscores);
command-line flags take precedence over the file, which takes precedence
over built-in defaults, so a run is fully reproducible from its manifest.

All tabular output is RFC-4180-style CSV with a header row, LF line endings
and floats in scientific notation with 12 significant digits, making output
byte-deterministic for identical effective options regardless of worker
count.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification
breach (oracle-check deviation above threshold).
"""

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import divergence, infinite, oracle, stats
from .core import ReservoirSpec, initial_reservoir, inverse_spin_temperature
from .errors import MatchNotFoundError, SpinEraseError
from .finite import extract_reservoir, reuse_iteration, run_protocol

__all__ = ["ExperimentGrid", "main"]

USAGE_ERROR = 1
COMPUTE_ERROR = 2
VERIFY_ERROR = 3

QUANTITIES = (
    "avg_spinlabor",
    "avg_per_bit",
    "reset_cost",
    "p_up_final",
    "jsd",
    "n_min",
    "spinlabor_dist",
    "reuse_series",
)

ORACLE_CHECK_THRESHOLD = 1e-10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentGrid:
    """A sweep over (alpha, N) cells for one quantity, bound to an output path."""

    alpha_values: tuple
    n_values: tuple
    quantity: str
    output_path: str | None = None

    def __post_init__(self):
        if not self.alpha_values or not self.n_values:
            raise UsageError("sweep grids must be non-empty")
        if any(not 0.0 < a <= 0.5 for a in self.alpha_values):
            raise UsageError("sweep polarisations must lie in (0, 0.5]")
        if any(n < 1 for n in self.n_values):
            raise UsageError("sweep reservoir sizes must be >= 1")
        if self.quantity not in QUANTITIES:
            raise UsageError(f"unknown quantity {self.quantity!r}")


def _fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.11e}"


def _write_csv(path, header, rows):
    def emit(handle):
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])

    if path is None:
        emit(sys.stdout)
    else:
        with open(path, "w", newline="") as handle:
            emit(handle)


# ---------------------------------------------------------------------------
# option plumbing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# (name, type, default, required) per command; config files use the same names
_COMMON = [
    ("out", str, None, False),
    ("config", str, None, False),
    ("workers", int, 1, False),
    ("seed", int, 0, False),
]
_OPTIONS = {
    "erase": [
        ("n", int, None, True),
        ("alpha", float, None, True),
        ("cycles", int, None, False),
    ],
    "dist": [
        ("variant", str, None, True),
        ("alpha", float, None, True),
        ("n", int, None, False),
        ("m_max", int, 10000, False),
    ],
    "sweep": [
        ("quantity", str, None, True),
        ("alphas", str, None, True),
        ("ns", str, None, True),
        ("iterations", int, 50, False),
    ],
    "match": [
        ("alpha_from", float, 0.01, False),
        ("alpha_to", float, 0.40, False),
        ("alpha_step", float, 0.01, False),
        ("tolerance", float, 0.005, False),
        ("n_max_scan", int, 2000, False),
        ("stability_window", int, 50, False),
    ],
    "reuse": [
        ("n", int, 50, False),
        ("alpha", float, 0.3, False),
        ("iterations", int, 50, False),
    ],
    "oracle-check": [
        ("n", int, None, True),
        ("alpha", float, None, True),
    ],
}


def _read_config(path):
    values = {}
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"config line is not key=value: {line!r}")
            key, _, raw = line.partition("=")
            values[key.strip().replace("-", "_")] = raw.strip()
    return values


def _resolve(command, args):
    """Merge CLI values, config-file values and defaults into one namespace."""
    spec = _OPTIONS[command] + _COMMON
    config = {}
    if args.config is not None:
        config = _read_config(args.config)
    merged = {}
    for name, typ, default, required in spec:
        value = getattr(args, name)
        if value is None and name in config:
            try:
                value = typ(config[name])
            except ValueError as exc:
                raise UsageError(f"config value for {name!r} is not a {typ.__name__}") from exc
        if value is None:
            value = default
        if value is None and required:
            raise UsageError(f"--{name.replace('_', '-')} is required")
        merged[name] = value
    return argparse.Namespace(**merged)


def _check_alpha(alpha, allow_zero=False):
    low_ok = alpha >= 0.0 if allow_zero else alpha > 0.0
    if not (low_ok and alpha <= 0.5):
        raise UsageError(f"alpha must be in {'[0' if allow_zero else '(0'}, 0.5], got {alpha}")


def _parse_float_list(text, name):
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise UsageError(f"{name} must be a comma-separated number list") from exc
    if not values:
        raise UsageError(f"{name} must be non-empty")
    return values


# ---------------------------------------------------------------------------
# commands


def cmd_erase(opts):
    _check_alpha(opts.alpha, allow_zero=True)
    if opts.n < 1:
        raise UsageError(f"reservoir size must be >= 1, got {opts.n}")
    spec = ReservoirSpec(opts.n, opts.alpha)
    cycles = spec.max_cycles if opts.cycles is None else opts.cycles
    if not 0 <= cycles <= spec.max_cycles:
        raise UsageError(f"cycles must be in [0, {spec.max_cycles}], got {cycles}")
    _, trace = run_protocol(spec, 0.5, cycles)

    increments = np.concatenate(([0.0], np.cumsum(trace.p_up[:-1])))
    rows = [
        (m, trace.p_up[m], trace.alpha_m[m], increments[m], trace.norm_drift[m])
        for m in range(cycles + 1)
    ]
    _write_csv(opts.out, ["m", "p_up_m", "alpha_m", "incremental_avg_cost", "norm_drift"], rows)

    summary = stats.summarize(spec, trace)
    if opts.out is None:
        print()
    _write_csv(
        None,
        ["avg", "bound", "per_bit", "reset", "total"],
        [
            (
                summary.avg_spinlabor,
                summary.bound_finite,
                summary.avg_per_bit,
                summary.reset_cost,
                summary.total_with_reset,
            )
        ],
    )
    return 0


def _trimmed(probs):
    last = len(probs)
    while last > 1 and probs[last - 1] == 0.0:
        last -= 1
    return probs[:last]


def cmd_dist(opts):
    _check_alpha(opts.alpha, allow_zero=True)
    if opts.variant not in ("fin", "inf", "fin-reset"):
        raise UsageError(f"variant must be fin, inf or fin-reset, got {opts.variant!r}")
    if opts.variant == "inf":
        gamma = inverse_spin_temperature(opts.alpha)
        dist = infinite.infinite_spinlabor_recurrence(gamma, opts.m_max)
        probs = dist.probs
    else:
        if opts.n is None:
            raise UsageError("--n is required for finite variants")
        spec = ReservoirSpec(opts.n, opts.alpha)
        _, trace = run_protocol(spec)
        dist = stats.finite_spinlabor_distribution(trace)
        if opts.variant == "fin-reset":
            dist = stats.reset_distribution(dist, spec.size_n, trace.p_up_final)
        probs = dist.probs
    probs = _trimmed(probs)
    _write_csv(opts.out, ["n_cost", "probability"], list(enumerate(probs)))
    return 0


def _sweep_cell(task):
    quantity, alpha, n_size, iterations = task
    if quantity == "n_min":
        # depends on alpha only; the grid's N is echoed for schema uniformity
        return [(quantity, divergence.n_min_search(alpha).n_min)]
    spec = ReservoirSpec(n_size, alpha)
    if quantity == "reuse_series":
        reservoir = initial_reservoir(spec)
        rows = []
        for it in range(1, iterations + 1):
            reservoir, p_f = reuse_iteration(spec, reservoir)
            rows.append((f"reuse_series[{it}]", p_f))
        return rows
    _, trace = run_protocol(spec)
    if quantity == "p_up_final":
        return [(quantity, trace.p_up_final)]
    if quantity == "avg_spinlabor":
        return [(quantity, stats.avg_spinlabor(trace))]
    if quantity == "avg_per_bit":
        return [(quantity, stats.summarize(spec, trace).avg_per_bit)]
    if quantity == "reset_cost":
        return [(quantity, stats.reset_cost(spec.size_n, trace.p_up_final))]
    fin = stats.finite_spinlabor_distribution(trace)
    if quantity == "spinlabor_dist":
        return [(f"spinlabor_dist[{k}]", p) for k, p in enumerate(fin.probs)]
    if quantity == "jsd":
        clamped = infinite.infinite_spinlabor_recurrence(spec.gamma, trace.cycles)
        return [(quantity, divergence.jsd(fin.probs, clamped.probs).jsd_nats)]
    raise UsageError(f"unknown quantity {quantity!r}")


def _run_cells(tasks, worker, workers):
    """Map cells to results, per-cell failures collected instead of raised."""
    wrapped = [(worker, task) for task in tasks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_guarded_cell, wrapped))
    else:
        outcomes = [_guarded_cell(item) for item in wrapped]
    return outcomes


def _guarded_cell(item):
    worker, task = item
    try:
        return ("ok", worker(task))
    except (SpinEraseError, UsageError) as exc:
        return ("error", f"{type(exc).__name__}: {exc}")


def cmd_sweep(opts):
    alphas = _parse_float_list(opts.alphas, "--alphas")
    try:
        ns = tuple(int(part) for part in opts.ns.split(",") if part.strip())
    except ValueError as exc:
        raise UsageError("--ns must be a comma-separated integer list") from exc
    grid = ExperimentGrid(tuple(sorted(alphas)), tuple(sorted(ns)), opts.quantity, opts.out)

    tasks = [
        (grid.quantity, alpha, n_size, opts.iterations)
        for alpha in grid.alpha_values
        for n_size in grid.n_values
    ]
    outcomes = _run_cells(tasks, _sweep_cell, opts.workers)

    rows = []
    failures = []
    for task, (status, payload) in zip(tasks, outcomes):
        _, alpha, n_size, _ = task
        if status == "ok":
            rows.extend((alpha, n_size, label, value) for label, value in payload)
        else:
            failures.append(f"cell alpha={alpha} N={n_size}: {payload}")
    _write_csv(grid.output_path, ["alpha", "N", "quantity", "value"], rows)
    if failures:
        print("failed cells:", file=sys.stderr)
        for line in failures:
            print("  " + line, file=sys.stderr)
        return COMPUTE_ERROR
    return 0


def _match_cell(task):
    alpha, tolerance, n_max_scan, window = task
    try:
        result = divergence.n_min_search(alpha, tolerance, n_max_scan, window)
    except MatchNotFoundError:
        return (alpha, "NA", "NA", "NA")
    return (alpha, result.n_min, result.jsd_at_n_min, result.p_up_final_at_n_min)


def cmd_match(opts):
    if opts.alpha_step <= 0:
        raise UsageError("--alpha-step must be positive")
    _check_alpha(opts.alpha_from)
    _check_alpha(opts.alpha_to)
    count = int(round((opts.alpha_to - opts.alpha_from) / opts.alpha_step)) + 1
    alphas = [round(opts.alpha_from + k * opts.alpha_step, 12) for k in range(count)]
    alphas = [a for a in alphas if a <= opts.alpha_to + 1e-12]
    if not alphas:
        raise UsageError("empty polarisation grid")

    tasks = [(alpha, opts.tolerance, opts.n_max_scan, opts.stability_window) for alpha in alphas]
    outcomes = _run_cells(tasks, _match_cell, opts.workers)
    rows = []
    for task, (status, payload) in zip(tasks, outcomes):
        if status != "ok":
            print(f"cell alpha={task[0]}: {payload}", file=sys.stderr)
            return COMPUTE_ERROR
        rows.append(payload)
    _write_csv(opts.out, ["alpha_i", "n_min", "jsd", "p_up_final"], rows)
    return 0


def cmd_reuse(opts):
    _check_alpha(opts.alpha)
    if opts.n < 2:
        raise UsageError("reuse needs a reservoir of at least 2 spins")
    if opts.iterations < 1:
        raise UsageError("--iterations must be >= 1")
    spec = ReservoirSpec(opts.n, opts.alpha)
    reservoir = initial_reservoir(spec)
    levels = np.arange(spec.size_n + 1)
    rows = []
    for iteration in range(1, opts.iterations + 1):
        reservoir, p_f = reuse_iteration(spec, reservoir)
        rows.append((iteration, p_f, float(np.dot(levels, reservoir))))
    _write_csv(opts.out, ["iteration", "p_up_final", "reservoir_mean_excitation"], rows)
    return 0


def cmd_oracle_check(opts):
    _check_alpha(opts.alpha, allow_zero=True)
    if not 1 <= opts.n <= oracle.MAX_SPINS:
        raise UsageError(f"--n must be in [1, {oracle.MAX_SPINS}], got {opts.n}")
    spec = ReservoirSpec(opts.n, opts.alpha)
    reference = oracle.enumerate_protocol(spec)
    worst = 0.0
    for m in range(spec.max_cycles + 1):
        joint, _ = run_protocol(spec, 0.5, cycles=m)
        worst = max(worst, float(np.abs(joint.table - reference[m]).max()))
    print(f"max_abs_deviation={worst:.11e}")
    return 0 if worst < ORACLE_CHECK_THRESHOLD else VERIFY_ERROR


_COMMANDS = {
    "erase": cmd_erase,
    "dist": cmd_dist,
    "sweep": cmd_sweep,
    "match": cmd_match,
    "reuse": cmd_reuse,
    "oracle-check": cmd_oracle_check,
}


def _build_parser():
    parser = _Parser(prog="spinerase", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, options in _OPTIONS.items():
        sub = subparsers.add_parser(command)
        for name, typ, _default, _required in options + _COMMON:
            sub.add_argument(f"--{name.replace('_', '-')}", type=typ, default=None)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        opts = _resolve(args.command, args)
        return _COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SpinEraseError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return COMPUTE_ERROR


if __name__ == "__main__":
    sys.exit(main())
