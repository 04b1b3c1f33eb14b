"""Schedule analysis and reporting.

Energy model: every executed operation costs its class base energy; an
operation flagged as input-sharing (model 2) is discounted by the configured
reduction factor. Memory energy is linear in bank accesses. Conflict
counting replays memory-ignorant schedules against a mapping by attributing
all fetches of an operation to the cycle right before its start and its
store to its end cycle, mirroring the windows the memory-aware scheduler
books, so the two policies compare like for like.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Mapping
from xml.sax.saxutils import escape

from .dfg import Dfg, OperatorLibrary
from .errors import InconsistentSchedule, MismatchedInputs
from .memmap import MemoryMapping, access_requirements
from .scheduler import Policy, Schedule, SchedulerConfig


@dataclass(frozen=True)
class BankStats:
    accesses: int
    peak_simultaneous_requests: int
    port_conflict_cycles: int


@dataclass(frozen=True)
class ScheduleMetrics:
    makespan_cycles: int
    op_count: int
    model2_count: int
    model2_ratio: float
    datapath_energy: float
    memory_energy: float
    per_bank: Mapping[str, BankStats]
    total_conflicts: int

    def to_json_dict(self) -> dict:
        return {
            "makespan": self.makespan_cycles,
            "op_count": self.op_count,
            "model2_count": self.model2_count,
            "model2_ratio": self.model2_ratio,
            "datapath_energy": self.datapath_energy,
            "memory_energy": self.memory_energy,
            "per_bank": {
                bank: {
                    "accesses": st.accesses,
                    "peak_simultaneous_requests": st.peak_simultaneous_requests,
                    "port_conflict_cycles": st.port_conflict_cycles,
                }
                for bank, st in sorted(self.per_bank.items())
            },
            "total_conflicts": self.total_conflicts,
        }


@dataclass(frozen=True)
class ComparisonReport:
    left: ScheduleMetrics
    right: ScheduleMetrics
    makespan_delta: int
    energy_delta: float
    conflict_delta: int
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "left": self.left.to_json_dict(),
            "right": self.right.to_json_dict(),
            "makespan_delta": self.makespan_delta,
            "energy_delta": self.energy_delta,
            "conflict_delta": self.conflict_delta,
            "verdict": self.verdict,
        }


def analyze(
    s: Schedule,
    g: Dfg,
    library: OperatorLibrary | None = None,
    mapping: MemoryMapping | None = None,
    cfg: SchedulerConfig | None = None,
) -> ScheduleMetrics:
    """Measure a schedule: sharing ratio, energy estimate, bank traffic.

    Memory-aware schedules are counted from their port bookings; schedules
    produced without memory knowledge are replayed against ``mapping`` to
    expose the port conflicts they would cause.
    """
    library = library or g.library
    cfg = cfg or s.config
    ids = {op.id for op in g.operations}
    if set(s.entries) != ids:
        raise InconsistentSchedule(
            f"schedule covers {len(s.entries)} of {len(ids)} operations"
        )
    for op in g.operations:
        entry = s.entries[op.id]
        latency = library.class_for(op.opcode).latency_cycles
        if entry.end_cycle - entry.start_cycle != latency:
            raise InconsistentSchedule(
                f"entry {op.id!r} spans {entry.end_cycle - entry.start_cycle} cycles, "
                f"class latency is {latency}"
            )

    op_count = len(g.operations)
    model2_count = sum(1 for e in s.entries.values() if e.is_model2)
    datapath = 0.0
    for e in s.sorted_entries():
        op = g.operation(e.op_id)
        base = library.class_for(op.opcode).base_energy
        if e.is_model2:
            if cfg.per_shared_input_energy:
                fraction = e.shared_inputs / len(op.operands)
                datapath += base * (1.0 - cfg.model2_reduction * fraction)
            else:
                datapath += base * (1.0 - cfg.model2_reduction)
        else:
            datapath += base

    per_bank: dict[str, BankStats] = {}
    memory_energy = 0.0
    total_conflicts = 0
    if mapping is not None and mapping.banks:
        if s.policy is Policy.MEMORY_AWARE:
            accesses, requests = _traffic_from_bookings(s)
        else:
            accesses, requests = _traffic_from_replay(s, g, mapping)
        for bank in sorted(mapping.banks, key=lambda b: b.id):
            cycles = requests.get(bank.id, {})
            peak = max(cycles.values(), default=0)
            conflicts = sum(1 for n in cycles.values() if n > bank.ports)
            count = accesses.get(bank.id, 0)
            per_bank[bank.id] = BankStats(count, peak, conflicts)
            memory_energy += count * bank.energy_per_access
            total_conflicts += conflicts

    return ScheduleMetrics(
        makespan_cycles=s.makespan_cycles,
        op_count=op_count,
        model2_count=model2_count,
        model2_ratio=(model2_count / op_count) if op_count else 0.0,
        datapath_energy=datapath,
        memory_energy=memory_energy,
        per_bank=per_bank,
        total_conflicts=total_conflicts,
    )


def _traffic_from_bookings(s: Schedule):
    accesses: Counter[str] = Counter()
    requests: dict[str, Counter[int]] = {}
    for e in s.sorted_entries():
        bookings = list(e.read_bookings)
        if e.write_booking is not None:
            bookings.append(e.write_booking)
        for b in bookings:
            accesses[b.bank_id] += 1
            cycles = requests.setdefault(b.bank_id, Counter())
            for c in range(b.start, b.end):
                cycles[c] += 1
    return accesses, requests


def _traffic_from_replay(s: Schedule, g: Dfg, mapping: MemoryMapping):
    accesses: Counter[str] = Counter()
    requests: dict[str, Counter[int]] = {}
    for e in s.sorted_entries():
        req = access_requirements(g.operation(e.op_id), mapping)
        for bank_id, k in sorted(req.reads.items()):
            accesses[bank_id] += k
            requests.setdefault(bank_id, Counter())[e.start_cycle - 1] += k
        for bank_id, k in sorted(req.writes.items()):
            accesses[bank_id] += k
            requests.setdefault(bank_id, Counter())[e.end_cycle] += k
    return accesses, requests


def compare(a: ScheduleMetrics, b: ScheduleMetrics) -> ComparisonReport:
    """Pairwise report; deltas are right minus left. Requires both analyses
    to come from the same graph (equal operation counts)."""
    if a.op_count != b.op_count:
        raise MismatchedInputs(
            f"op counts differ: {a.op_count} vs {b.op_count}"
        )
    makespan_delta = b.makespan_cycles - a.makespan_cycles
    energy_delta = (b.datapath_energy + b.memory_energy) - (
        a.datapath_energy + a.memory_energy
    )
    conflict_delta = b.total_conflicts - a.total_conflicts
    parts = []
    for axis, delta in (
        ("makespan", makespan_delta),
        ("energy", energy_delta),
        ("conflicts", conflict_delta),
    ):
        if delta == 0:
            parts.append(f"{axis}: tie")
        elif delta > 0:
            parts.append(f"{axis}: left wins by {_fmt(delta)}")
        else:
            parts.append(f"{axis}: right wins by {_fmt(-delta)}")
    return ComparisonReport(
        a, b, makespan_delta, energy_delta, conflict_delta, "; ".join(parts)
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 10))
    return str(x)


# ---------------------------------------------------------------------------
# exports

_CLASS_COLORS = ("#7ea7d8", "#a1d372", "#eb8445", "#7bcdc8", "#c49bd4", "#fff79a")
_READ_COLOR = "#d8e8c0"
_WRITE_COLOR = "#f2c9a8"

_MARGIN_LEFT = 110
_MARGIN_TOP = 34
_ROW_H = 26
_CYCLE_W = 30


def export_gantt(s: Schedule, mapping: MemoryMapping | None = None) -> str:
    """Deterministic SVG chart: one row per operator instance used, one row
    per bank port, boxes spanning each half-open cycle interval."""
    entries = s.sorted_entries()
    instance_rows = sorted({(e.class_name, e.instance_index) for e in entries})
    port_rows = []
    if mapping is not None:
        for bank in sorted(mapping.banks, key=lambda b: b.id):
            port_rows.extend((bank.id, p) for p in range(bank.ports))

    horizon = max(
        [s.makespan_cycles, 1]
        + [b.end for e in entries for b in e.read_bookings]
        + [e.write_booking.end for e in entries if e.write_booking is not None]
    )
    offset = min(
        [0]
        + [b.start for e in entries for b in e.read_bookings]
    )  # replayed fetches may sit one cycle before start 0
    rows = [("op", cls, idx) for cls, idx in instance_rows]
    rows += [("port", bank, port) for bank, port in port_rows]
    width = _MARGIN_LEFT + (horizon - offset) * _CYCLE_W + 20
    height = _MARGIN_TOP + max(1, len(rows)) * _ROW_H + 30

    def x(cycle: int) -> int:
        return _MARGIN_LEFT + (cycle - offset) * _CYCLE_W

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    step = 1
    for candidate in (1, 2, 5, 10, 20, 50):
        if (horizon - offset) / candidate <= 40:
            step = candidate
            break
    for c in range(offset, horizon + 1):
        top = _MARGIN_TOP
        bottom = _MARGIN_TOP + len(rows) * _ROW_H
        out.append(
            f'<line x1="{x(c)}" y1="{top}" x2="{x(c)}" y2="{bottom}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        if c % step == 0:
            out.append(
                f'<text x="{x(c)}" y="{_MARGIN_TOP - 8}" text-anchor="middle" '
                f'fill="#333333">{c}</text>'
            )
    classes = sorted({cls for cls, _ in instance_rows})
    color_of = {
        cls: _CLASS_COLORS[i % len(_CLASS_COLORS)] for i, cls in enumerate(classes)
    }
    row_index = {row: i for i, row in enumerate(rows)}
    for kind, a, b in rows:
        y_top = _MARGIN_TOP + row_index[(kind, a, b)] * _ROW_H
        label = f"{a}[{b}]" if kind == "op" else f"{a}.p{b}"
        out.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{y_top + _ROW_H - 9}" '
            f'text-anchor="end" fill="#333333">{escape(label)}</text>'
        )
        out.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{y_top}" x2="{x(horizon)}" y2="{y_top}" '
            f'stroke="#eeeeee" stroke-width="1"/>'
        )

    def box(row_key, start, end, fill, label):
        y_top = _MARGIN_TOP + row_index[row_key] * _ROW_H + 3
        out.append(
            f'<rect x="{x(start)}" y="{y_top}" width="{(end - start) * _CYCLE_W}" '
            f'height="{_ROW_H - 6}" fill="{fill}" stroke="#555555" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{(x(start) + x(end)) // 2}" y="{y_top + _ROW_H - 12}" '
            f'text-anchor="middle" fill="#222222">{escape(label)}</text>'
        )

    for e in entries:
        box(("op", e.class_name, e.instance_index), e.start_cycle, e.end_cycle,
            color_of[e.class_name], e.op_id)
        for b in e.read_bookings:
            box(("port", b.bank_id, b.port_index), b.start, b.end, _READ_COLOR, e.op_id)
        if e.write_booking is not None:
            b = e.write_booking
            box(("port", b.bank_id, b.port_index), b.start, b.end, _WRITE_COLOR, e.op_id)

    bottom = _MARGIN_TOP + len(rows) * _ROW_H
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{bottom}" x2="{x(horizon)}" y2="{bottom}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


_CSV_HEADER = ("op", "start", "end", "class", "instance", "model2")


def export_csv(s: Schedule) -> str:
    """CSV view of a schedule, rows sorted by (start, op id), LF endings."""
    return format_schedule_csv(
        {
            "op": e.op_id,
            "start": e.start_cycle,
            "end": e.end_cycle,
            "class": e.class_name,
            "instance": e.instance_index,
            "model2": e.is_model2,
        }
        for e in s.sorted_entries()
    )


def format_schedule_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row["op"],
                row["start"],
                row["end"],
                row["class"],
                row["instance"],
                "true" if row["model2"] else "false",
            ]
        )
    return buf.getvalue()


def parse_schedule_csv(text: str) -> list[dict]:
    """Inverse of :func:`export_csv` for the exported fields."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != _CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = []
    for raw in reader:
        if not raw:
            continue
        op, start, end, cls, instance, model2 = raw
        rows.append(
            {
                "op": op,
                "start": int(start),
                "end": int(end),
                "class": cls,
                "instance": int(instance),
                "model2": model2 == "true",
            }
        )
    return rows


def metrics_to_json(metrics: ScheduleMetrics) -> str:
    return json.dumps(metrics.to_json_dict(), indent=2) + "\n"


def comparison_to_json(report: ComparisonReport, extra: dict | None = None) -> str:
    doc = report.to_json_dict()
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"
