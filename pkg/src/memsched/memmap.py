"""Memory hierarchy model: banks with ports and access latencies, placement
of data items onto banks or registers, and per-operation access requirements.

Placement keys are data item names. A whole-array entry (``"x": "M0"``)
covers every element; an element entry (``"x[3]": "M1"``) overrides it.
Items without an entry resolve to REGISTER only when the mapping sets its
default, otherwise they are unmapped.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .dfg import DataRef, Dfg, _ELEMENT_RE, _NAME_RE
from .errors import (
    CapacityExceeded,
    Diagnostic,
    FormatError,
    UnknownBank,
    UnmappedData,
)

REGISTER = "REGISTER"


@dataclass(frozen=True)
class MemoryBank:
    """One memory bank: simultaneous accesses are limited by ``ports``,
    read/write latencies are whole cycles, ``capacity_words`` of None means
    unbounded."""

    id: str
    ports: int
    read_latency_cycles: int
    write_latency_cycles: int
    level: int = 0
    capacity_words: int | None = None
    energy_per_access: float = 1.0

    def __post_init__(self):
        if self.ports < 1:
            raise ValueError(f"bank {self.id!r} needs at least one port")
        if self.read_latency_cycles < 1 or self.write_latency_cycles < 1:
            raise ValueError(f"bank {self.id!r} latencies must be >= 1")
        if self.level < 0:
            raise ValueError(f"bank {self.id!r} level must be >= 0")
        if self.capacity_words is not None and self.capacity_words < 1:
            raise ValueError(f"bank {self.id!r} capacity must be >= 1 or unbounded")
        if self.energy_per_access < 0:
            raise ValueError(f"bank {self.id!r} energy per access must be >= 0")


class MemoryMapping:
    """Placement of data items onto banks or registers.

    ``placement`` maps item or array names to a bank id or ``REGISTER``.
    Targets must name declared banks; per-bank placement-entry counts are
    checked against capacities (an array entry counts as one word here, its
    true extent is only known to the consumer graph).
    """

    def __init__(
        self,
        banks: Iterable[MemoryBank],
        placement: Mapping[str, str],
        default_register: bool = False,
    ):
        self.banks: tuple[MemoryBank, ...] = tuple(banks)
        self.bank_by_id: dict[str, MemoryBank] = {}
        for bank in self.banks:
            if bank.id in self.bank_by_id:
                raise FormatError(f"bank {bank.id!r} declared twice")
            self.bank_by_id[bank.id] = bank
        self.placement: dict[str, str] = dict(placement)
        self.default_register = default_register

        used: dict[str, int] = {}
        for name, target in self.placement.items():
            if target == REGISTER:
                continue
            if target not in self.bank_by_id:
                raise UnknownBank(f"placement of {name!r} names unknown bank {target!r}")
            used[target] = used.get(target, 0) + 1
        for bank_id, count in sorted(used.items()):
            cap = self.bank_by_id[bank_id].capacity_words
            if cap is not None and count > cap:
                raise CapacityExceeded(
                    f"bank {bank_id!r} holds {count} items but its capacity is {cap}",
                    bank=bank_id,
                )

    def location_of(self, ref: DataRef) -> str:
        """Bank id or REGISTER for a data item; raises UnmappedData."""
        if ref.name in self.placement:
            return self.placement[ref.name]
        if ref.array is not None and ref.array in self.placement:
            return self.placement[ref.array]
        if self.default_register:
            return REGISTER
        raise UnmappedData(ref.name)

    def bank_of(self, ref: DataRef) -> MemoryBank | None:
        """The bank holding ``ref``, or None when it lives in a register."""
        loc = self.location_of(ref)
        return None if loc == REGISTER else self.bank_by_id[loc]


def all_registers(banks: Iterable[MemoryBank] = ()) -> MemoryMapping:
    """A mapping that keeps every item in registers."""
    return MemoryMapping(banks, {}, default_register=True)


@dataclass(frozen=True)
class AccessRequirement:
    """How many bank ports one operation needs: distinct memory-resident
    operands per bank (duplicate operands collapse to one fetch) and the
    single result store, when the result lives in memory."""

    op_id: str
    reads: Mapping[str, int]
    writes: Mapping[str, int]


class MappingPolicy(enum.Enum):
    ALL_REGISTERS = "all-registers"
    ROUND_ROBIN = "round-robin"


def parse_mapping(text: str) -> MemoryMapping:
    """Parse a memory-mapping document.

    Format: ``{"banks": [...], "place": {...}, "default": "REGISTER"?}``.
    Bank entries carry id, ports, read_latency, write_latency, level and
    optionally capacity_words and energy_per_access (default 1.0).
    """
    doc = _load(text)
    _check_keys(doc, {"banks"}, {"place", "default"}, "mapping document")
    raw_banks = doc["banks"]
    if not isinstance(raw_banks, list):
        raise FormatError("mapping banks must be a list")
    banks = [_parse_bank(entry, i) for i, entry in enumerate(raw_banks)]

    place = doc.get("place", {})
    if not isinstance(place, dict):
        raise FormatError("mapping place must be an object")
    for name, target in place.items():
        if not (_NAME_RE.match(name) or _ELEMENT_RE.match(name)):
            raise FormatError(f"bad placement key {name!r}")
        if not isinstance(target, str):
            raise FormatError(f"placement of {name!r} must name a bank or REGISTER")

    default_register = False
    if "default" in doc:
        if doc["default"] != REGISTER:
            raise FormatError('mapping default may only be "REGISTER"')
        default_register = True

    return MemoryMapping(banks, place, default_register)


def _parse_bank(entry, i: int) -> MemoryBank:
    where = f"banks[{i}]"
    if not isinstance(entry, dict):
        raise FormatError(f"{where} must be an object")
    required = {"id", "ports", "read_latency", "write_latency", "level"}
    _check_keys(entry, required, {"capacity_words", "energy_per_access"}, where)
    for key in ("ports", "read_latency", "write_latency", "level"):
        if not isinstance(entry[key], int) or isinstance(entry[key], bool):
            raise FormatError(f"{where}.{key} must be an integer")
    if not isinstance(entry["id"], str) or not _NAME_RE.match(entry["id"]):
        raise FormatError(f"{where}.id must be an identifier")
    capacity = entry.get("capacity_words")
    if capacity is not None and (not isinstance(capacity, int) or isinstance(capacity, bool)):
        raise FormatError(f"{where}.capacity_words must be an integer")
    energy = entry.get("energy_per_access", 1.0)
    if not isinstance(energy, (int, float)) or isinstance(energy, bool) or energy < 0:
        raise FormatError(f"{where}.energy_per_access must be a non-negative number")
    try:
        return MemoryBank(
            id=entry["id"],
            ports=entry["ports"],
            read_latency_cycles=entry["read_latency"],
            write_latency_cycles=entry["write_latency"],
            level=entry["level"],
            capacity_words=capacity,
            energy_per_access=float(energy),
        )
    except ValueError as e:
        raise FormatError(f"{where}: {e}") from None


def memory_read_refs(op, mapping: MemoryMapping) -> dict[str, tuple[DataRef, ...]]:
    """Distinct memory-resident operands of ``op`` grouped by bank id.

    Duplicate operands collapse: one port delivers the value once.
    """
    by_bank: dict[str, list[DataRef]] = {}
    for ref in dict.fromkeys(op.operands):
        bank = mapping.bank_of(ref)
        if bank is not None:
            by_bank.setdefault(bank.id, []).append(ref)
    return {bank_id: tuple(refs) for bank_id, refs in by_bank.items()}


def access_requirements(op, mapping: MemoryMapping) -> AccessRequirement:
    """Port demand of a single operation under a mapping.

    Raises UnmappedData when any of its items cannot be resolved.
    """
    reads = {bank_id: len(refs) for bank_id, refs in memory_read_refs(op, mapping).items()}
    writes: dict[str, int] = {}
    result_bank = mapping.bank_of(op.result)
    if result_bank is not None:
        writes[result_bank.id] = 1
    return AccessRequirement(op.id, reads, writes)


def validate_mapping(mapping: MemoryMapping, g: Dfg) -> list[Diagnostic]:
    """Check a mapping against a graph.

    Empty iff every item the graph touches resolves to a bank or register and
    no single operation demands more simultaneous fetches from a bank than it
    has ports. Reads and the result store never contend with each other:
    fetches finish at operation start while the store begins at operation
    end, so only the simultaneous-fetch count is structural.
    """
    diags: list[Diagnostic] = []
    unmapped_seen: set[str] = set()
    for op in g.operations:
        refs = list(dict.fromkeys(op.operands)) + [op.result]
        ok = True
        for ref in refs:
            try:
                mapping.location_of(ref)
            except UnmappedData:
                ok = False
                if ref.name not in unmapped_seen:
                    unmapped_seen.add(ref.name)
                    diags.append(Diagnostic("UnmappedData", ref.name, {"op": op.id}))
        if not ok:
            continue
        for bank_id, refs_here in sorted(memory_read_refs(op, mapping).items()):
            ports = mapping.bank_by_id[bank_id].ports
            need = len(refs_here)
            if need > ports:
                diags.append(
                    Diagnostic(
                        "PortOverSubscribed",
                        f"{op.id} needs {need} ports on {bank_id}, has {ports}",
                        {"op": op.id, "bank": bank_id, "need": need, "have": ports},
                    )
                )
    return diags


def generate_default_mapping(
    g: Dfg,
    banks: Iterable[MemoryBank],
    policy: MappingPolicy,
) -> MemoryMapping:
    """Deterministic stand-in for an upstream placement tool.

    ALL_REGISTERS keeps everything in registers. ROUND_ROBIN walks data items
    in ascending name order and deals them onto banks in declaration order,
    skipping full banks; raises CapacityExceeded when every bank is full.
    """
    banks = tuple(banks)
    if policy is MappingPolicy.ALL_REGISTERS:
        return MemoryMapping(banks, {}, default_register=True)
    if not banks:
        raise ValueError("ROUND_ROBIN placement needs at least one bank")
    names = sorted(ref.name for ref in g.data_items())
    fill: dict[str, int] = {bank.id: 0 for bank in banks}
    placement: dict[str, str] = {}
    cursor = 0
    for name in names:
        for attempt in range(len(banks)):
            bank = banks[(cursor + attempt) % len(banks)]
            cap = bank.capacity_words
            if cap is None or fill[bank.id] < cap:
                placement[name] = bank.id
                fill[bank.id] += 1
                cursor = cursor + attempt + 1
                break
        else:
            raise CapacityExceeded(
                f"all banks full while placing {name!r}", item=name
            )
    return MemoryMapping(banks, placement)


def serialize_mapping(mapping: MemoryMapping) -> str:
    """Render a mapping back to its document form."""
    banks = []
    for bank in mapping.banks:
        entry: dict = {
            "id": bank.id,
            "ports": bank.ports,
            "read_latency": bank.read_latency_cycles,
            "write_latency": bank.write_latency_cycles,
            "level": bank.level,
        }
        if bank.capacity_words is not None:
            entry["capacity_words"] = bank.capacity_words
        if bank.energy_per_access != 1.0:
            entry["energy_per_access"] = bank.energy_per_access
        banks.append(entry)
    doc: dict = {"banks": banks, "place": dict(sorted(mapping.placement.items()))}
    if mapping.default_register:
        doc["default"] = REGISTER
    return json.dumps(doc, indent=2) + "\n"


def _load(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid mapping document: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise FormatError("mapping document must be a JSON object")
    return doc


def _check_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    missing = required - obj.keys()
    if missing:
        raise FormatError(f"{where} is missing key(s): {', '.join(sorted(missing))}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise FormatError(f"{where} has unknown key(s): {', '.join(sorted(unknown))}")
