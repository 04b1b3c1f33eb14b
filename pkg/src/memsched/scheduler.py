"""Resource-constrained list scheduling with optional memory-port gating.

Two policies share one engine. BASELINE treats every data item as
register-resident and packs operations onto a fixed pool of operator
instances, highest priority first (least mobility, then input-sharing
affinity, then id). MEMORY_AWARE adds one bookable access token per bank
port: an operation may only start at cycle t if every operand fetch gets a
free port over the read window [t - read_latency, t) and, when its result
lives in memory, a port is free for the store window [end, end +
write_latency). The scanner walks the priority-sorted ready list and takes
the first operation whose ports are all free; blocked operations simply wait.

A branch-and-bound search over start cycles provides exact optimal makespans
for small instances, used as a test oracle and by the CLI ``--oracle`` flag.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, replace
from typing import Mapping

from .dfg import DataRef, Dfg, OperatorClass, TimingAnalysis, compute_timing, topological_order
from .errors import (
    ClassMismatch,
    Infeasible,
    InfeasibleConstraint,
    MappingInfeasible,
    TimeConstraintViolated,
    TooLarge,
    UnmappedData,
)
from .memmap import MemoryBank, MemoryMapping, memory_read_refs, validate_mapping


class Policy(enum.Enum):
    BASELINE = "baseline"
    MEMORY_AWARE = "memory_aware"


@dataclass(frozen=True)
class Allocation:
    """How many operator instances exist per class."""

    counts: Mapping[str, int]

    def __post_init__(self):
        for name, count in self.counts.items():
            if count < 1:
                raise ValueError(f"allocation for class {name!r} must be >= 1")

    def count(self, class_name: str) -> int:
        return self.counts.get(class_name, 0)


@dataclass(frozen=True)
class SchedulerConfig:
    """Scheduling knobs.

    ``step_cycles`` and ``pipeline_slices`` are reserved and pinned to 1.
    ``model2_reduction`` is the per-operation energy discount applied to
    operations that reuse an input of their instance's previous operation;
    it only affects reporting, never placement.
    """

    time_constraint_cycles: int
    policy: Policy = Policy.BASELINE
    model2_reduction: float = 0.25
    step_cycles: int = 1
    pipeline_slices: int = 1
    dynamic_mobility: bool = False
    positional_affinity: bool = False
    use_affinity: bool = True
    per_shared_input_energy: bool = False

    def __post_init__(self):
        if self.time_constraint_cycles < 1:
            raise ValueError("time constraint must be >= 1 cycle")
        if self.step_cycles != 1:
            raise ValueError("step_cycles is reserved and must be 1")
        if self.pipeline_slices != 1:
            raise ValueError("pipeline_slices is reserved and must be 1")
        if not 0.25 <= self.model2_reduction <= 0.50:
            raise ValueError("model2_reduction must lie in [0.25, 0.50]")


@dataclass
class OperatorInstanceState:
    """Mutable bookkeeping for one operator instance during a run."""

    operator_class: OperatorClass
    instance_index: int
    busy_until_cycle: int = 0
    last_operand_sources: tuple[DataRef, ...] | None = None

    @property
    def class_name(self) -> str:
        return self.operator_class.name


@dataclass(frozen=True)
class PortBooking:
    """A half-open cycle interval reserved on one bank port."""

    bank_id: str
    port_index: int
    start: int
    end: int


class PortLedger:
    """Non-overlapping interval bookings per (bank, port)."""

    def __init__(self):
        self._bookings: dict[tuple[str, int], list[tuple[int, int]]] = {}

    def is_free(self, bank_id: str, port_index: int, start: int, end: int) -> bool:
        for s, e in self._bookings.get((bank_id, port_index), ()):
            if s < end and start < e:
                return False
        return True

    def free_ports(self, bank: MemoryBank, start: int, end: int) -> list[int]:
        """Port indices of ``bank`` free over [start, end), ascending."""
        return [p for p in range(bank.ports) if self.is_free(bank.id, p, start, end)]

    def book(self, bank_id: str, port_index: int, start: int, end: int) -> None:
        if not self.is_free(bank_id, port_index, start, end):
            raise ValueError(
                f"overlapping booking on {bank_id} port {port_index}: [{start},{end})"
            )
        self._bookings.setdefault((bank_id, port_index), []).append((start, end))

    def bookings(self) -> dict[tuple[str, int], list[tuple[int, int]]]:
        return {key: sorted(vals) for key, vals in self._bookings.items()}


@dataclass(frozen=True)
class ScheduleEntry:
    """Placement of one operation: when it runs, on which instance, and the
    port intervals reserved for its fetches and its store."""

    op_id: str
    start_cycle: int
    end_cycle: int
    class_name: str
    instance_index: int
    read_bookings: tuple[PortBooking, ...] = ()
    write_booking: PortBooking | None = None
    is_model2: bool = False
    shared_inputs: int = 0

    @property
    def finish_cycle(self) -> int:
        """Cycle at which the result is usable downstream."""
        return self.write_booking.end if self.write_booking else self.end_cycle


@dataclass
class Schedule:
    """Complete schedule for one graph under one configuration."""

    entries: dict[str, ScheduleEntry]
    makespan_cycles: int
    policy: Policy
    config: SchedulerConfig
    allocation: Allocation

    def sorted_entries(self) -> list[ScheduleEntry]:
        return sorted(self.entries.values(), key=lambda e: (e.start_cycle, e.op_id))

    def to_json_dict(self) -> dict:
        entries = []
        for e in self.sorted_entries():
            entry = {
                "op": e.op_id,
                "start": e.start_cycle,
                "end": e.end_cycle,
                "class": e.class_name,
                "instance": e.instance_index,
                "reads": [
                    {"bank": b.bank_id, "port": b.port_index, "from": b.start, "to": b.end}
                    for b in e.read_bookings
                ],
            }
            if e.write_booking is not None:
                b = e.write_booking
                entry["write"] = {
                    "bank": b.bank_id, "port": b.port_index, "from": b.start, "to": b.end,
                }
            entry["model2"] = e.is_model2
            entries.append(entry)
        return {
            "policy": self.policy.value,
            "time_constraint": self.config.time_constraint_cycles,
            "makespan": self.makespan_cycles,
            "entries": entries,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def model2_affinity(
    op, inst: OperatorInstanceState, positional: bool = False
) -> int:
    """How many inputs ``op`` shares with the previous operation executed on
    ``inst`` (0 on a fresh instance).

    By default sharing is positional-agnostic: the size of the multiset
    intersection of the two operand lists. With ``positional`` only matching
    port positions count.
    """
    if op.opcode not in inst.operator_class.opcodes:
        raise ClassMismatch(
            f"operation {op.id!r} ({op.opcode}) cannot run on class "
            f"{inst.operator_class.name!r}"
        )
    return _affinity(op.operands, inst.last_operand_sources, positional)


def _affinity(
    operands: tuple[DataRef, ...],
    last: tuple[DataRef, ...] | None,
    positional: bool,
) -> int:
    if last is None:
        return 0
    if positional:
        return sum(1 for a, b in zip(operands, last) if a == b)
    shared = Counter(operands) & Counter(last)
    return sum(shared.values())


def compute_min_allocation(
    g: Dfg, library, time_constraint_cycles: int
) -> Allocation:
    """Average-parallelism lower bound on instance counts: for each class,
    ceil(ops * latency / deadline), at least one."""
    compute_timing(g, library, time_constraint_cycles)  # InfeasibleConstraint guard
    per_class: Counter[str] = Counter()
    for op in g.operations:
        per_class[library.class_for(op.opcode).name] += 1
    counts = {}
    for name, n_ops in sorted(per_class.items()):
        latency = library.class_named(name).latency_cycles
        counts[name] = max(1, -(-n_ops * latency // time_constraint_cycles))
    return Allocation(counts)


def ample_allocation(g: Dfg) -> Allocation:
    """One instance per operation of each class; removes resource contention."""
    per_class: Counter[str] = Counter()
    for op in g.operations:
        per_class[g.class_of(op).name] += 1
    return Allocation(dict(per_class))


# ---------------------------------------------------------------------------
# list-scheduling engine

class _Engine:
    def __init__(self, g: Dfg, alloc: Allocation, cfg: SchedulerConfig,
                 timing: TimingAnalysis, mapping: MemoryMapping | None):
        self.g = g
        self.cfg = cfg
        self.timing = timing
        self.mapping = mapping
        self.cls = {op.id: g.class_of(op) for op in g.operations}
        self.preds = {op.id: g.predecessors(op.id) for op in g.operations}
        used = sorted({c.name for c in self.cls.values()})
        for name in used:
            if alloc.count(name) < 1:
                raise ValueError(f"allocation covers no instances of class {name!r}")
        self.instances: dict[str, list[OperatorInstanceState]] = {
            name: [
                OperatorInstanceState(g.library.class_named(name), i)
                for i in range(alloc.count(name))
            ]
            for name in used
        }
        self.mem_reads: dict[str, dict[str, tuple[DataRef, ...]]] = {}
        self.result_bank: dict[str, MemoryBank | None] = {}
        if mapping is not None:
            for op in g.operations:
                self.mem_reads[op.id] = memory_read_refs(op, mapping)
                self.result_bank[op.id] = mapping.bank_of(op.result)

    def run(self) -> tuple[dict[str, ScheduleEntry], set[str]]:
        cfg = self.cfg
        T = cfg.time_constraint_cycles
        ledger = PortLedger()
        entries: dict[str, ScheduleEntry] = {}
        finish: dict[str, int] = {}
        unscheduled = {op.id for op in self.g.operations}

        t = 0
        while t < T and unscheduled:
            while True:
                ready = [
                    oid for oid in unscheduled
                    if all(p in finish and finish[p] <= t for p in self.preds[oid])
                ]
                candidates = []
                for oid in sorted(ready):
                    free = self._free_instances(oid, t)
                    if free:
                        candidates.append((oid, free))
                if not candidates:
                    break
                candidates.sort(key=lambda item: self._priority(item[0], item[1], t))
                placed = False
                for oid, free in candidates:
                    plan = self._gate(oid, t, ledger, finish)
                    if plan is None:
                        continue
                    self._place(oid, t, free, plan, ledger, entries, finish)
                    unscheduled.discard(oid)
                    placed = True
                    break
                if not placed:
                    break
            t += cfg.step_cycles
        return entries, unscheduled

    def _free_instances(self, oid: str, t: int) -> list[OperatorInstanceState]:
        return [
            inst for inst in self.instances[self.cls[oid].name]
            if inst.busy_until_cycle <= t
        ]

    def _priority(self, oid: str, free: list[OperatorInstanceState], t: int):
        if self.cfg.dynamic_mobility:
            slack = self.timing.alap[oid] - t
        else:
            slack = self.timing.mobility[oid]
        if self.cfg.use_affinity:
            op = self.g.operation(oid)
            best = max(
                _affinity(op.operands, inst.last_operand_sources,
                          self.cfg.positional_affinity)
                for inst in free
            )
        else:
            best = 0
        return (slack, -best, oid)

    def _gate(self, oid: str, t: int, ledger: PortLedger, finish: dict[str, int]):
        """Port plan for starting ``oid`` at t, or None when blocked."""
        lat = self.cls[oid].latency_cycles
        end = t + lat
        if self.mapping is None:
            if end > self.cfg.time_constraint_cycles:
                return None
            return (), None
        wbank = self.result_bank[oid]
        completion = end + wbank.write_latency_cycles if wbank else end
        if completion > self.cfg.time_constraint_cycles:
            return None
        reads: list[PortBooking] = []
        for bank_id in sorted(self.mem_reads[oid]):
            bank = self.mapping.bank_by_id[bank_id]
            refs = self.mem_reads[oid][bank_id]
            window_start = t - bank.read_latency_cycles
            if window_start < 0:
                return None
            for ref in refs:
                producer = self.g.producer_of(ref)
                if producer is not None and finish[producer] > window_start:
                    return None
            free = ledger.free_ports(bank, window_start, t)
            if len(free) < len(refs):
                return None
            reads.extend(
                PortBooking(bank_id, p, window_start, t) for p in free[: len(refs)]
            )
        write = None
        if wbank is not None:
            free = ledger.free_ports(wbank, end, completion)
            if not free:
                return None
            write = PortBooking(wbank.id, free[0], end, completion)
        return tuple(reads), write

    def _place(self, oid, t, free, plan, ledger, entries, finish) -> None:
        op = self.g.operation(oid)
        reads, write = plan
        if self.cfg.use_affinity:
            inst = max(
                free,
                key=lambda i: (
                    _affinity(op.operands, i.last_operand_sources,
                              self.cfg.positional_affinity),
                    -i.instance_index,
                ),
            )
        else:
            inst = min(free, key=lambda i: i.instance_index)
        shared = _affinity(op.operands, inst.last_operand_sources,
                           self.cfg.positional_affinity)
        end = t + self.cls[oid].latency_cycles
        for b in reads:
            ledger.book(b.bank_id, b.port_index, b.start, b.end)
        if write is not None:
            ledger.book(write.bank_id, write.port_index, write.start, write.end)
        entries[oid] = ScheduleEntry(
            op_id=oid,
            start_cycle=t,
            end_cycle=end,
            class_name=inst.class_name,
            instance_index=inst.instance_index,
            read_bookings=tuple(sorted(reads, key=lambda b: (b.bank_id, b.port_index))),
            write_booking=write,
            is_model2=shared >= 1,
            shared_inputs=shared,
        )
        finish[oid] = write.end if write is not None else end
        inst.busy_until_cycle = end
        inst.last_operand_sources = op.operands


def _run_or_raise(
    g: Dfg,
    alloc: Allocation,
    cfg: SchedulerConfig,
    timing: TimingAnalysis,
    mapping: MemoryMapping | None,
) -> Schedule:
    if timing.critical_path_cycles > cfg.time_constraint_cycles:
        raise InfeasibleConstraint(timing.critical_path_cycles, cfg.time_constraint_cycles)
    entries, unscheduled = _Engine(g, alloc, cfg, timing, mapping).run()
    if unscheduled:
        suggestion = None
        for factor in (2, 4, 8):
            bigger = cfg.time_constraint_cycles * factor
            retry_cfg = replace(cfg, time_constraint_cycles=bigger)
            retry_timing = compute_timing(g, g.library, bigger)
            _, left = _Engine(g, alloc, retry_cfg, retry_timing, mapping).run()
            if not left:
                suggestion = bigger
                break
        raise TimeConstraintViolated(
            sorted(unscheduled), cfg.time_constraint_cycles, suggestion
        )
    makespan = max((e.finish_cycle for e in entries.values()), default=0)
    return Schedule(entries, makespan, cfg.policy, cfg, alloc)


def schedule_baseline(
    g: Dfg, alloc: Allocation, cfg: SchedulerConfig, timing: TimingAnalysis
) -> Schedule:
    """Priority-list scheduling that ignores memory placement entirely."""
    if cfg.policy is not Policy.BASELINE:
        raise ValueError("schedule_baseline needs cfg.policy = BASELINE")
    return _run_or_raise(g, alloc, cfg, timing, None)


def schedule_memory_aware(
    g: Dfg,
    alloc: Allocation,
    mapping: MemoryMapping,
    cfg: SchedulerConfig,
    timing: TimingAnalysis,
) -> Schedule:
    """List scheduling gated by bank-port availability (see module docs).

    The mapping must validate against the graph: unmapped items raise
    UnmappedData, single operations demanding more ports than a bank owns
    raise MappingInfeasible.
    """
    if cfg.policy is not Policy.MEMORY_AWARE:
        raise ValueError("schedule_memory_aware needs cfg.policy = MEMORY_AWARE")
    problems = validate_mapping(mapping, g)
    for diag in problems:
        if diag.code == "UnmappedData":
            raise UnmappedData(diag.payload)
    if problems:
        raise MappingInfeasible(
            "; ".join(str(d) for d in problems), diagnostics=problems
        )
    return _run_or_raise(g, alloc, cfg, timing, mapping)


# ---------------------------------------------------------------------------
# exact oracle for small instances

_BRUTEFORCE_MAX_OPS = 10


def bruteforce_optimal_makespan(
    g: Dfg,
    alloc: Allocation,
    mapping: MemoryMapping | None = None,
    T_max: int = 64,
) -> tuple[int, Schedule]:
    """Exact minimal makespan by branch-and-bound over start cycles.

    Explores every dependency- and resource-feasible start assignment under
    the same timing rules as the list scheduler (read windows before start,
    store windows after end) and returns the best makespan with one witness
    schedule. Exponential: guarded to 10 operations.
    """
    ops = list(g.operations)
    if len(ops) > _BRUTEFORCE_MAX_OPS:
        raise TooLarge(f"{len(ops)} operations exceed the oracle guard of "
                       f"{_BRUTEFORCE_MAX_OPS}")
    order = topological_order(g)
    cls = {op.id: g.class_of(op) for op in ops}
    preds = {op.id: g.predecessors(op.id) for op in ops}
    succs = g.successors()

    mem_reads: dict[str, dict[str, tuple[DataRef, ...]]] = {}
    result_bank: dict[str, MemoryBank | None] = {}
    for op in ops:
        if mapping is not None:
            mem_reads[op.id] = memory_read_refs(op, mapping)
            result_bank[op.id] = mapping.bank_of(op.result)
        else:
            mem_reads[op.id] = {}
            result_bank[op.id] = None

    def own_span(oid: str) -> int:
        wbank = result_bank[oid]
        return cls[oid].latency_cycles + (wbank.write_latency_cycles if wbank else 0)

    tail: dict[str, int] = {}
    for oid in reversed(order):
        tail[oid] = cls[oid].latency_cycles + max(
            (tail[s] for s in succs[oid]), default=0
        )

    # admissible global lower bound: critical path, per-class pigeonhole,
    # per-bank port-cycle pigeonhole
    lower = max((tail[oid] for oid in order), default=0)
    per_class: Counter[str] = Counter()
    for op in ops:
        per_class[cls[op.id].name] += cls[op.id].latency_cycles
    for name, work in per_class.items():
        lower = max(lower, -(-work // alloc.count(name)))
    if mapping is not None:
        port_work: Counter[str] = Counter()
        for op in ops:
            for bank_id, refs in mem_reads[op.id].items():
                bank = mapping.bank_by_id[bank_id]
                port_work[bank_id] += len(refs) * bank.read_latency_cycles
            wbank = result_bank[op.id]
            if wbank is not None:
                port_work[wbank.id] += wbank.write_latency_cycles
        for bank_id, work in port_work.items():
            lower = max(lower, -(-work // mapping.bank_by_id[bank_id].ports))

    class_usage: Counter[tuple[str, int]] = Counter()
    port_usage: Counter[tuple[str, int]] = Counter()
    starts: dict[str, int] = {}
    finish: dict[str, int] = {}
    best = T_max + 1
    best_starts: dict[str, int] | None = None

    def earliest(oid: str) -> int:
        op = g.operation(oid)
        lo = 0
        mem_ref_banks = {
            ref: bank_id for bank_id, refs in mem_reads[oid].items() for ref in refs
        }
        for ref in dict.fromkeys(op.operands):
            producer = g.producer_of(ref)
            bank_id = mem_ref_banks.get(ref)
            if bank_id is not None:
                rl = mapping.bank_by_id[bank_id].read_latency_cycles
                lo = max(lo, (finish[producer] if producer else 0) + rl)
            elif producer is not None:
                lo = max(lo, finish[producer])
        for dep in op.extra_deps:
            lo = max(lo, finish[dep])
        return lo

    def cycles_needed(oid: str, s: int) -> list[tuple[Counter, tuple, int]]:
        """(counter, key-range, amount) increments for starting oid at s."""
        lat = cls[oid].latency_cycles
        needs = [(class_usage, (cls[oid].name, s, s + lat), 1)]
        for bank_id, refs in mem_reads[oid].items():
            rl = mapping.bank_by_id[bank_id].read_latency_cycles
            needs.append((port_usage, (bank_id, s - rl, s), len(refs)))
        wbank = result_bank[oid]
        if wbank is not None:
            needs.append(
                (port_usage, (wbank.id, s + lat, s + lat + wbank.write_latency_cycles), 1)
            )
        return needs

    def capacity_ok(oid: str, s: int) -> bool:
        for counter, (key, lo_c, hi_c), amount in cycles_needed(oid, s):
            cap = (
                alloc.count(key)
                if counter is class_usage
                else mapping.bank_by_id[key].ports
            )
            for c in range(lo_c, hi_c):
                if counter[(key, c)] + amount > cap:
                    return False
        return True

    def apply(oid: str, s: int, sign: int) -> None:
        for counter, (key, lo_c, hi_c), amount in cycles_needed(oid, s):
            for c in range(lo_c, hi_c):
                counter[(key, c)] += sign * amount

    def dfs(i: int) -> None:
        nonlocal best, best_starts
        if best <= lower:
            return
        if i == len(order):
            makespan = max((starts[o] + own_span(o) for o in starts), default=0)
            if makespan < best:
                best = makespan
                best_starts = dict(starts)
            return
        oid = order[i]
        lo = earliest(oid)
        hi = min(T_max - own_span(oid), best - 1 - tail[oid])
        for s in range(lo, hi + 1):
            if not capacity_ok(oid, s):
                continue
            apply(oid, s, +1)
            starts[oid] = s
            finish[oid] = s + own_span(oid)
            dfs(i + 1)
            del starts[oid], finish[oid]
            apply(oid, s, -1)

    dfs(0)
    if best_starts is None:
        raise Infeasible(f"no schedule fits within {T_max} cycles")
    witness = _witness_schedule(g, alloc, mapping, best_starts, best, T_max)
    return best, witness


def _witness_schedule(
    g: Dfg,
    alloc: Allocation,
    mapping: MemoryMapping | None,
    starts: Mapping[str, int],
    makespan: int,
    T_max: int,
) -> Schedule:
    """Turn a feasible start assignment into a full schedule: instances and
    ports by greedy interval partitioning in window-start order (exact when
    per-cycle occupancy fits, which the search guaranteed), sharing flags
    replayed per instance in execution order."""
    cfg = SchedulerConfig(
        time_constraint_cycles=T_max,
        policy=Policy.MEMORY_AWARE if mapping is not None else Policy.BASELINE,
    )
    cls = {op.id: g.class_of(op) for op in g.operations}
    by_start = sorted(g.operations, key=lambda op: (starts[op.id], op.id))

    instance_free: dict[str, list[int]] = {}
    chosen: dict[str, int] = {}
    for op in by_start:
        name = cls[op.id].name
        frees = instance_free.setdefault(name, [0] * alloc.count(name))
        start = starts[op.id]
        idx = next(i for i, until in enumerate(frees) if until <= start)
        frees[idx] = start + cls[op.id].latency_cycles
        chosen[op.id] = idx

    # All port windows of all ops, assigned in window-start order so greedy
    # lowest-free-port packing never exceeds the per-cycle occupancy bound.
    ledger = PortLedger()
    read_by_op: dict[str, list[PortBooking]] = {op.id: [] for op in g.operations}
    write_by_op: dict[str, PortBooking | None] = {op.id: None for op in g.operations}
    if mapping is not None:
        windows: list[tuple[int, int, str, str, bool]] = []
        for op in by_start:
            start = starts[op.id]
            end = start + cls[op.id].latency_cycles
            for bank_id, refs in sorted(memory_read_refs(op, mapping).items()):
                rl = mapping.bank_by_id[bank_id].read_latency_cycles
                windows.extend((start - rl, start, bank_id, op.id, False) for _ in refs)
            wbank = mapping.bank_of(op.result)
            if wbank is not None:
                windows.append(
                    (end, end + wbank.write_latency_cycles, wbank.id, op.id, True)
                )
        for w_start, w_end, bank_id, op_id, is_write in sorted(windows):
            bank = mapping.bank_by_id[bank_id]
            port = ledger.free_ports(bank, w_start, w_end)[0]
            ledger.book(bank_id, port, w_start, w_end)
            booking = PortBooking(bank_id, port, w_start, w_end)
            if is_write:
                write_by_op[op_id] = booking
            else:
                read_by_op[op_id].append(booking)

    last_ops: dict[tuple[str, int], tuple[DataRef, ...]] = {}
    entries: dict[str, ScheduleEntry] = {}
    for op in by_start:
        start = starts[op.id]
        end = start + cls[op.id].latency_cycles
        idx = chosen[op.id]
        shared = _affinity(op.operands, last_ops.get((cls[op.id].name, idx)), False)
        last_ops[(cls[op.id].name, idx)] = op.operands
        entries[op.id] = ScheduleEntry(
            op_id=op.id,
            start_cycle=start,
            end_cycle=end,
            class_name=cls[op.id].name,
            instance_index=idx,
            read_bookings=tuple(
                sorted(read_by_op[op.id], key=lambda b: (b.bank_id, b.port_index))
            ),
            write_booking=write_by_op[op.id],
            is_model2=shared >= 1,
            shared_inputs=shared,
        )
    return Schedule(entries, makespan, cfg.policy, cfg, alloc)
