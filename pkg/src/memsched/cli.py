"""Command-line front end: validate inputs, run one scheduling policy with
full reports, or compare both policies on identical inputs.

Exit codes: 0 success, 1 semantic or constraint failure (diagnostics on
stderr as ``ERROR <code>: ...``), 2 I/O or document-syntax failure. All
written files are deterministic: same inputs, same bytes.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .dfg import Dfg, compute_timing, parse_dfg, parse_library, validate_dfg
from .errors import FormatError, SchedulingError, TooLarge
from .memmap import (
    MappingPolicy,
    MemoryMapping,
    generate_default_mapping,
    parse_mapping,
    validate_mapping,
)
from .metrics import (
    analyze,
    compare,
    comparison_to_json,
    export_csv,
    export_gantt,
    metrics_to_json,
)
from .scheduler import (
    Allocation,
    Policy,
    SchedulerConfig,
    bruteforce_optimal_makespan,
    compute_min_allocation,
    schedule_baseline,
    schedule_memory_aware,
)

_ORACLE_LIMIT = 10


@dataclass
class RunConfig:
    """Everything one command invocation needs."""

    dfg_path: str
    library_path: str
    mapping_path: str | None = None
    time_constraint_cycles: int | None = None
    policy: Policy = Policy.BASELINE
    model2_reduction: float = 0.25
    alloc_overrides: dict[str, int] = field(default_factory=dict)
    out_dir: str | None = None
    default_mapping: MappingPolicy | None = None
    dynamic_mobility: bool = False
    positional_affinity: bool = False
    use_affinity: bool = True
    per_shared_input_energy: bool = False
    oracle: bool = False

    def needs_mapping(self) -> bool:
        return self.policy is Policy.MEMORY_AWARE and self.default_mapping is None


def _load_graph(cfg: RunConfig) -> Dfg:
    library = parse_library(Path(cfg.library_path).read_text(encoding="utf-8"))
    return parse_dfg(Path(cfg.dfg_path).read_text(encoding="utf-8"), library)


def _resolve_mapping(cfg: RunConfig, g: Dfg) -> MemoryMapping | None:
    """Mapping from file, from the default-mapping generator, or None.

    ``--default-mapping`` replaces any placement the file carries; the
    round-robin generator still takes its banks from the file.
    """
    file_mapping = None
    if cfg.mapping_path is not None:
        file_mapping = parse_mapping(Path(cfg.mapping_path).read_text(encoding="utf-8"))
    if cfg.default_mapping is None:
        return file_mapping
    banks = file_mapping.banks if file_mapping is not None else ()
    if cfg.default_mapping is MappingPolicy.ROUND_ROBIN and not banks:
        raise FormatError(
            "--default-mapping round-robin needs a --mapping file declaring banks"
        )
    return generate_default_mapping(g, banks, cfg.default_mapping)


def _scheduler_config(cfg: RunConfig, policy: Policy) -> SchedulerConfig:
    if cfg.time_constraint_cycles is None:
        raise FormatError("a time constraint (--T) is required")
    return SchedulerConfig(
        time_constraint_cycles=cfg.time_constraint_cycles,
        policy=policy,
        model2_reduction=cfg.model2_reduction,
        dynamic_mobility=cfg.dynamic_mobility,
        positional_affinity=cfg.positional_affinity,
        use_affinity=cfg.use_affinity,
        per_shared_input_energy=cfg.per_shared_input_energy,
    )


def _allocation(cfg: RunConfig, g: Dfg) -> Allocation:
    alloc = compute_min_allocation(g, g.library, cfg.time_constraint_cycles)
    if not cfg.alloc_overrides:
        return alloc
    counts = dict(alloc.counts)
    for name, count in cfg.alloc_overrides.items():
        g.library.class_named(name)  # unknown class -> UnknownOpcode
        counts[name] = count
    return Allocation(counts)


def _run_schedule(cfg: RunConfig, g: Dfg, mapping: MemoryMapping | None):
    timing = compute_timing(g, g.library, cfg.time_constraint_cycles)
    alloc = _allocation(cfg, g)
    sched_cfg = _scheduler_config(cfg, cfg.policy)
    if cfg.policy is Policy.MEMORY_AWARE:
        schedule = schedule_memory_aware(g, alloc, mapping, sched_cfg, timing)
    else:
        schedule = schedule_baseline(g, alloc, sched_cfg, timing)
    return schedule, alloc, timing


# ---------------------------------------------------------------------------
# commands

def _guard(body) -> int:
    """Map errors onto the exit-code contract: 2 for I/O and document syntax,
    1 for semantic diagnostics and constraint failures."""
    try:
        return body()
    except FormatError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SchedulingError as e:
        print(f"ERROR {e.code}: {e.message}", file=sys.stderr)
        return 1


def cmd_validate(cfg: RunConfig) -> int:
    """Exit 0 iff the graph (and mapping, when given) is clean."""
    return _guard(lambda: _validate_body(cfg))


def _validate_body(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    diagnostics = list(validate_dfg(g))
    mapping = _resolve_mapping(cfg, g)
    if mapping is not None:
        diagnostics.extend(validate_mapping(mapping, g))
    for diag in diagnostics:
        print(diag, file=sys.stderr)
    return 1 if diagnostics else 0


def cmd_schedule(cfg: RunConfig) -> int:
    """Run one policy and write schedule.json, metrics.json, gantt.svg and
    schedule.csv into the output directory."""
    return _guard(lambda: _schedule_body(cfg))


def _schedule_body(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    mapping = _resolve_mapping(cfg, g)
    if cfg.policy is Policy.MEMORY_AWARE and mapping is None:
        raise FormatError("policy mem-aware needs --mapping or --default-mapping")
    schedule, _, _ = _run_schedule(cfg, g, mapping)
    m = analyze(schedule, g, g.library, mapping, schedule.config)
    out = Path(cfg.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "schedule.json").write_text(schedule.to_json(), encoding="utf-8")
    (out / "metrics.json").write_text(metrics_to_json(m), encoding="utf-8")
    (out / "gantt.svg").write_text(export_gantt(schedule, mapping), encoding="utf-8")
    (out / "schedule.csv").write_text(export_csv(schedule), encoding="utf-8")
    print(
        f"{cfg.policy.value}: makespan {schedule.makespan_cycles} cycles, "
        f"{m.model2_count}/{m.op_count} input-sharing ops, "
        f"datapath energy {m.datapath_energy}, conflicts {m.total_conflicts}"
    )
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    """Run both policies on identical inputs and report the trade-off.

    The memory-ignorant schedule is replayed against the mapping so its
    would-be port conflicts are counted on equal terms.
    """
    return _guard(lambda: _compare_body(cfg))


def _compare_body(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    mapping = _resolve_mapping(cfg, g)
    if mapping is None:
        raise FormatError("compare needs --mapping or --default-mapping")
    base_cfg = RunConfig(**{**cfg.__dict__, "policy": Policy.BASELINE})
    aware_cfg = RunConfig(**{**cfg.__dict__, "policy": Policy.MEMORY_AWARE})
    s_base, alloc, _ = _run_schedule(base_cfg, g, mapping)
    s_aware, _, _ = _run_schedule(aware_cfg, g, mapping)
    m_base = analyze(s_base, g, g.library, mapping, s_base.config)
    m_aware = analyze(s_aware, g, g.library, mapping, s_aware.config)
    report = compare(m_base, m_aware)

    extra = {}
    oracle_makespan = None
    if cfg.oracle:
        if len(g.operations) <= _ORACLE_LIMIT:
            try:
                oracle_makespan, _ = bruteforce_optimal_makespan(
                    g, alloc, mapping, cfg.time_constraint_cycles
                )
                extra["oracle_makespan"] = oracle_makespan
            except TooLarge:
                pass
        if oracle_makespan is None:
            print(
                f"note: --oracle skipped, graph exceeds {_ORACLE_LIMIT} operations"
            )

    out = Path(cfg.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.json").write_text(
        comparison_to_json(report, extra), encoding="utf-8"
    )

    rows = [
        ("makespan [cycles]", m_base.makespan_cycles, m_aware.makespan_cycles),
        ("input-sharing ops", m_base.model2_count, m_aware.model2_count),
        ("datapath energy", m_base.datapath_energy, m_aware.datapath_energy),
        ("memory energy", m_base.memory_energy, m_aware.memory_energy),
        ("port conflicts", m_base.total_conflicts, m_aware.total_conflicts),
    ]
    header = f"{'metric':<20} {'baseline':>12} {'mem-aware':>12}"
    if oracle_makespan is not None:
        header += f" {'optimal':>10}"
    print(header)
    print("-" * len(header))
    for i, (label, left, right) in enumerate(rows):
        line = f"{label:<20} {left:>12} {right:>12}"
        if oracle_makespan is not None:
            line += f" {oracle_makespan:>10}" if i == 0 else f" {'':>10}"
        print(line)
    print(report.verdict)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _parse_alloc(value: str) -> tuple[str, int]:
    name, sep, count = value.partition("=")
    if not sep or not name or not count.isdigit() or int(count) < 1:
        raise argparse.ArgumentTypeError(
            f"--alloc expects class=count with count >= 1, got {value!r}"
        )
    return name, int(count)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memsched",
        description="Schedule DSP data-flow graphs under memory-mapping constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_schedule_flags):
        p.add_argument("--dfg", required=True, help="data-flow graph document")
        p.add_argument("--library", required=True, help="operator library document")
        p.add_argument("--mapping", help="memory mapping document")
        p.add_argument(
            "--default-mapping",
            choices=["registers", "round-robin"],
            help="generate the placement instead of taking it from --mapping",
        )
        if with_schedule_flags:
            p.add_argument("--T", type=int, required=True, dest="time_constraint",
                           help="real-time constraint in cycles")
            p.add_argument("--reduction", type=float, default=0.25,
                           help="energy discount for input-sharing ops (0.25..0.50)")
            p.add_argument("--alloc", type=_parse_alloc, action="append", default=[],
                           metavar="CLASS=COUNT",
                           help="override the instance count of one class (repeatable)")
            p.add_argument("--dynamic-mobility", action="store_true",
                           help="re-evaluate slack against the current cycle")
            p.add_argument("--positional-affinity", action="store_true",
                           help="count shared inputs per operand position")
            p.add_argument("--no-affinity", action="store_true",
                           help="disable input-sharing priority and binding")
            p.add_argument("--per-shared-input-energy", action="store_true",
                           help="scale the energy discount by the shared-input fraction")
            p.add_argument("--out", default=".", help="output directory")

    p_validate = sub.add_parser("validate", help="check the input documents")
    add_common(p_validate, with_schedule_flags=False)

    p_schedule = sub.add_parser("schedule", help="run one policy and write reports")
    add_common(p_schedule, with_schedule_flags=True)
    p_schedule.add_argument("--policy", choices=["baseline", "mem-aware"],
                            default="baseline")

    p_compare = sub.add_parser("compare", help="run both policies and compare")
    add_common(p_compare, with_schedule_flags=True)
    p_compare.add_argument("--oracle", action="store_true",
                           help="add the exact optimal makespan (small graphs only)")

    return parser


def _config_from_args(args) -> RunConfig:
    policy = Policy.BASELINE
    if getattr(args, "policy", None) == "mem-aware":
        policy = Policy.MEMORY_AWARE
    default_mapping = None
    if args.default_mapping == "registers":
        default_mapping = MappingPolicy.ALL_REGISTERS
    elif args.default_mapping == "round-robin":
        default_mapping = MappingPolicy.ROUND_ROBIN
    return RunConfig(
        dfg_path=args.dfg,
        library_path=args.library,
        mapping_path=args.mapping,
        time_constraint_cycles=getattr(args, "time_constraint", None),
        policy=policy,
        model2_reduction=getattr(args, "reduction", 0.25),
        alloc_overrides=dict(getattr(args, "alloc", [])),
        out_dir=getattr(args, "out", None),
        default_mapping=default_mapping,
        dynamic_mobility=getattr(args, "dynamic_mobility", False),
        positional_affinity=getattr(args, "positional_affinity", False),
        use_affinity=not getattr(args, "no_affinity", False),
        per_shared_input_energy=getattr(args, "per_shared_input_energy", False),
        oracle=getattr(args, "oracle", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    command = {
        "validate": cmd_validate,
        "schedule": cmd_schedule,
        "compare": cmd_compare,
    }[args.command]
    return command(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
