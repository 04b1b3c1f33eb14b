"""Data-flow graph IR: data items, operations, JSON parsing, validation,
topological ordering and ASAP/ALAP/mobility timing analysis.

A graph is a DAG of single-assignment operations over named scalar data
items; array accesses are flattened to per-element items at parse time
(``x[3]`` is one item). All values here are immutable and safe to share
between threads.
"""

from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    CycleDetected,
    Diagnostic,
    DuplicateOpcode,
    DuplicateWriter,
    FormatError,
    InfeasibleConstraint,
    UndefinedData,
    UnknownOpcode,
)

DEFAULT_WIDTH_BITS = 16

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_ELEMENT_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(0|[1-9][0-9]*)\]$")


@dataclass(frozen=True)
class DataRef:
    """A single schedulable data item: a scalar or one array element.

    Array elements are distinct items; their canonical ``name`` is
    ``array[index]`` with a flat, non-negative index.
    """

    name: str
    array: str | None = None
    index: int | None = None
    width_bits: int = DEFAULT_WIDTH_BITS

    def __post_init__(self):
        if not self.name:
            raise ValueError("data item name must be non-empty")
        if self.array is not None and (self.index is None or self.index < 0):
            raise ValueError(f"array element {self.name!r} needs a non-negative index")
        if self.width_bits < 1:
            raise ValueError(f"width_bits must be positive, got {self.width_bits}")

    @property
    def is_array_element(self) -> bool:
        return self.array is not None


def scalar(name: str, width_bits: int = DEFAULT_WIDTH_BITS) -> DataRef:
    """Build a scalar data item reference."""
    return DataRef(name=name, width_bits=width_bits)


def elem(array: str, index: int, width_bits: int = DEFAULT_WIDTH_BITS) -> DataRef:
    """Build an array-element data item reference (flat index)."""
    return DataRef(name=f"{array}[{index}]", array=array, index=index, width_bits=width_bits)


@dataclass(frozen=True)
class OperatorClass:
    """A hardware operator kind: which opcodes it executes, its latency in
    cycles and its per-execution base energy (arbitrary units)."""

    name: str
    opcodes: frozenset[str]
    latency_cycles: int
    base_energy: float = 1.0

    def __post_init__(self):
        if not self.opcodes:
            raise ValueError(f"operator class {self.name!r} has no opcodes")
        if self.latency_cycles < 1:
            raise ValueError(f"operator class {self.name!r} latency must be >= 1")
        if self.base_energy < 0:
            raise ValueError(f"operator class {self.name!r} base energy must be >= 0")


class OperatorLibrary:
    """Resolves opcodes to operator classes; each opcode belongs to exactly
    one class."""

    def __init__(self, classes: Iterable[OperatorClass]):
        self.classes: tuple[OperatorClass, ...] = tuple(classes)
        self._by_opcode: dict[str, OperatorClass] = {}
        self._by_name: dict[str, OperatorClass] = {}
        for cls in self.classes:
            if cls.name in self._by_name:
                raise DuplicateOpcode(f"operator class {cls.name!r} declared twice")
            self._by_name[cls.name] = cls
            for opcode in cls.opcodes:
                other = self._by_opcode.get(opcode)
                if other is not None:
                    raise DuplicateOpcode(
                        f"opcode {opcode!r} claimed by both {other.name!r} and {cls.name!r}"
                    )
                self._by_opcode[opcode] = cls

    def class_for(self, opcode: str) -> OperatorClass:
        try:
            return self._by_opcode[opcode]
        except KeyError:
            raise UnknownOpcode(f"opcode {opcode!r} is not in the operator library") from None

    def class_named(self, name: str) -> OperatorClass:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownOpcode(f"no operator class named {name!r}") from None

    def __contains__(self, opcode: str) -> bool:
        return opcode in self._by_opcode

    def __iter__(self) -> Iterator[OperatorClass]:
        return iter(self.classes)


@dataclass(frozen=True)
class Operation:
    """One graph node: reads ``operands`` (ordered), writes ``result`` once.

    ``extra_deps`` are explicit ordering edges to operation ids that must
    finish first, in addition to the producer edges implied by operands.
    """

    id: str
    opcode: str
    operands: tuple[DataRef, ...]
    result: DataRef
    extra_deps: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.operands:
            raise ValueError(f"operation {self.id!r} needs at least one operand")


@dataclass(frozen=True)
class InputDecl:
    """A declared primary input: a scalar or an array with a flat size."""

    name: str
    shape: tuple[int, ...] | None = None
    width_bits: int = DEFAULT_WIDTH_BITS

    def flat_size(self) -> int:
        size = 1
        for dim in self.shape or ():
            size *= dim
        return size

    def refs(self) -> tuple[DataRef, ...]:
        if self.shape is None:
            return (scalar(self.name, self.width_bits),)
        return tuple(elem(self.name, i, self.width_bits) for i in range(self.flat_size()))


class Dfg:
    """An immutable data-flow graph bound to an operator library.

    The constructor accepts any structurally well-formed graph; use
    :func:`validate_dfg` for the full invariant check and :func:`parse_dfg`
    for documents (which raises on the first violation).
    """

    def __init__(
        self,
        operations: Iterable[Operation],
        library: OperatorLibrary,
        primary_inputs: Iterable[DataRef],
        primary_outputs: Iterable[DataRef] = (),
        input_decls: Iterable[InputDecl] | None = None,
    ):
        self.operations: tuple[Operation, ...] = tuple(operations)
        self.library = library
        self.primary_inputs: frozenset[DataRef] = frozenset(primary_inputs)
        self.primary_outputs: frozenset[DataRef] = frozenset(primary_outputs)
        if input_decls is None:
            input_decls = _synthesize_decls(self.primary_inputs)
        self.input_decls: tuple[InputDecl, ...] = tuple(input_decls)

        self._by_id: dict[str, Operation] = {}
        for op in self.operations:
            if op.id in self._by_id:
                raise FormatError(f"duplicate operation id {op.id!r}")
            self._by_id[op.id] = op
        # result -> writer op ids; normally one, kept as a list so validation
        # can report duplicate writers instead of hiding them
        self._writers: dict[DataRef, list[str]] = {}
        for op in self.operations:
            self._writers.setdefault(op.result, []).append(op.id)

    @classmethod
    def build(
        cls,
        operations: Iterable[Operation],
        library: OperatorLibrary,
        outputs: Iterable[DataRef] | None = None,
    ) -> "Dfg":
        """Construct a graph inferring primary inputs (operands nobody
        produces) and, when ``outputs`` is omitted, primary outputs (results
        nobody consumes)."""
        operations = tuple(operations)
        produced = {op.result for op in operations}
        consumed = {ref for op in operations for ref in op.operands}
        inputs = consumed - produced
        if outputs is None:
            outputs = produced - consumed
        return cls(operations, library, inputs, outputs)

    def operation(self, op_id: str) -> Operation:
        return self._by_id[op_id]

    def __contains__(self, op_id: str) -> bool:
        return op_id in self._by_id

    def producer_of(self, ref: DataRef) -> str | None:
        """Id of the operation writing ``ref``, or None for primary inputs."""
        writers = self._writers.get(ref)
        return writers[0] if writers else None

    def predecessors(self, op_id: str) -> frozenset[str]:
        """Operation ids that must finish before ``op_id`` starts."""
        op = self._by_id[op_id]
        preds = {p for p in (self.producer_of(ref) for ref in op.operands) if p is not None}
        preds.update(dep for dep in op.extra_deps if dep in self._by_id)
        preds.discard(op_id)
        return frozenset(preds)

    def successors(self) -> dict[str, frozenset[str]]:
        succs: dict[str, set[str]] = {op.id: set() for op in self.operations}
        for op in self.operations:
            for pred in self.predecessors(op.id):
                succs[pred].add(op.id)
        return {k: frozenset(v) for k, v in succs.items()}

    def data_items(self) -> frozenset[DataRef]:
        """Every data item the graph touches: inputs, operands and results."""
        items = set(self.primary_inputs)
        for op in self.operations:
            items.update(op.operands)
            items.add(op.result)
        return frozenset(items)

    def class_of(self, op: Operation) -> OperatorClass:
        return self.library.class_for(op.opcode)


def _synthesize_decls(inputs: frozenset[DataRef]) -> tuple[InputDecl, ...]:
    # Programmatic graphs carry no declarations: fold element refs back into
    # array declarations sized by the largest index seen.
    arrays: dict[str, int] = {}
    widths: dict[str, int] = {}
    decls: list[InputDecl] = []
    for ref in sorted(inputs, key=lambda r: r.name):
        if ref.is_array_element:
            assert ref.array is not None and ref.index is not None
            arrays[ref.array] = max(arrays.get(ref.array, 0), ref.index + 1)
            widths[ref.array] = ref.width_bits
        else:
            decls.append(InputDecl(ref.name, None, ref.width_bits))
    for name in sorted(arrays):
        decls.append(InputDecl(name, (arrays[name],), widths[name]))
    decls.sort(key=lambda d: d.name)
    return tuple(decls)


# ---------------------------------------------------------------------------
# document parsing

def parse_library(text: str) -> OperatorLibrary:
    """Parse an operator library document.

    Format: ``{"classes": [{"name", "opcodes", "latency", "energy"?}]}``
    with ``energy`` defaulting to 1.0.
    """
    doc = _load_json(text, "library")
    _check_keys(doc, {"classes"}, set(), "library document")
    raw = _expect(doc, "classes", list, "library document")
    if not raw:
        raise FormatError("library declares no operator classes")
    classes = []
    for i, entry in enumerate(raw):
        where = f"classes[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where} must be an object")
        _check_keys(entry, {"name", "opcodes", "latency"}, {"energy"}, where)
        name = _identifier(_expect(entry, "name", str, where), where)
        opcodes = _expect(entry, "opcodes", list, where)
        if not all(isinstance(o, str) and _NAME_RE.match(o) for o in opcodes):
            raise FormatError(f"{where}.opcodes must be identifier strings")
        latency = _expect(entry, "latency", int, where)
        energy = entry.get("energy", 1.0)
        if not isinstance(energy, (int, float)) or isinstance(energy, bool) or energy < 0:
            raise FormatError(f"{where}.energy must be a non-negative number")
        if latency < 1:
            raise FormatError(f"{where}.latency must be >= 1")
        classes.append(OperatorClass(name, frozenset(opcodes), latency, float(energy)))
    return OperatorLibrary(classes)


def parse_dfg(text: str, library: OperatorLibrary | Iterable[OperatorClass]) -> Dfg:
    """Parse and fully validate a data-flow-graph document.

    The document has three keys: ``inputs`` (declarations with optional array
    shape and width), ``outputs`` (names of produced results) and ``ops``
    (ordered operation list). Array operands use the ``name[i]`` element
    syntax with a literal flat index. Unknown keys are rejected.

    Raises FormatError, UnknownOpcode, UndefinedData, DuplicateWriter or
    CycleDetected on the first violation found.
    """
    if not isinstance(library, OperatorLibrary):
        library = OperatorLibrary(library)
    doc = _load_json(text, "dfg")
    _check_keys(doc, {"inputs", "outputs", "ops"}, set(), "dfg document")

    decls = _parse_input_decls(_expect(doc, "inputs", list, "dfg document"))
    decl_by_name = {d.name: d for d in decls}

    raw_ops = _expect(doc, "ops", list, "dfg document")
    op_entries = []
    ids: set[str] = set()
    for i, entry in enumerate(raw_ops):
        where = f"ops[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where} must be an object")
        _check_keys(entry, {"id", "opcode", "args", "result"}, {"deps"}, where)
        op_id = _identifier(_expect(entry, "id", str, where), where)
        if op_id in ids:
            raise FormatError(f"duplicate operation id {op_id!r}")
        ids.add(op_id)
        opcode = _expect(entry, "opcode", str, where)
        library.class_for(opcode)  # UnknownOpcode before data resolution
        args = _expect(entry, "args", list, where)
        if not args or not all(isinstance(a, str) for a in args):
            raise FormatError(f"{where}.args must be a non-empty list of names")
        result = _expect(entry, "result", str, where)
        deps = entry.get("deps", [])
        if not isinstance(deps, list) or not all(isinstance(d, str) for d in deps):
            raise FormatError(f"{where}.deps must be a list of op ids")
        op_entries.append((op_id, opcode, args, result, deps, where))

    # Writers first: operands may reference results produced later in the file.
    written: dict[str, str] = {}
    for op_id, _, _, result, _, _ in op_entries:
        base = _token_parts(result)[0]
        if base in decl_by_name:
            raise DuplicateWriter(f"operation {op_id!r} writes declared input {result!r}")
        prev = written.get(result)
        if prev is not None:
            raise DuplicateWriter(
                f"data {result!r} written by both {prev!r} and {op_id!r}"
            )
        written[result] = op_id

    def resolve(token: str, reading: bool) -> DataRef:
        name, array, index = _token_parts(token)
        if reading and token in written:
            return _ref_for_token(token)
        decl = decl_by_name.get(name)
        if decl is not None:
            if array is None:
                if decl.shape is not None:
                    raise UndefinedData(
                        f"array {name!r} used without an element index"
                    )
                return scalar(name, decl.width_bits)
            if decl.shape is None:
                raise UndefinedData(f"{token!r} indexes scalar {name!r}")
            if index >= decl.flat_size():
                raise UndefinedData(
                    f"{token!r} is out of range for shape {list(decl.shape)}"
                )
            return elem(name, index, decl.width_bits)
        if reading:
            raise UndefinedData(f"{token!r} is neither a declared input nor a result")
        return _ref_for_token(token)

    for dep_list in (e[4] for e in op_entries):
        for dep in dep_list:
            if dep not in ids:
                raise FormatError(f"deps references unknown operation id {dep!r}")

    operations = []
    for op_id, opcode, args, result, deps, _ in op_entries:
        if op_id in deps:
            raise CycleDetected([op_id])
        operands = tuple(resolve(a, reading=True) for a in args)
        result_ref = resolve(result, reading=False)
        operations.append(Operation(op_id, opcode, operands, result_ref, frozenset(deps)))

    outputs = []
    for token in _expect(doc, "outputs", list, "dfg document"):
        if not isinstance(token, str):
            raise FormatError("outputs must be a list of names")
        if token not in written:
            raise UndefinedData(f"output {token!r} is not produced by any operation")
        outputs.append(_ref_for_token(token))

    primary_inputs = [ref for decl in decls for ref in decl.refs()]
    g = Dfg(operations, library, primary_inputs, outputs, decls)
    _ = topological_order(g)  # raises CycleDetected
    return g


def serialize_dfg(g: Dfg) -> str:
    """Render a graph back to its document form (deterministic byte stream).

    Graphs built programmatically get synthesized array declarations sized by
    the largest element index in use.
    """
    inputs = []
    for decl in g.input_decls:
        entry: dict = {"name": decl.name}
        if decl.shape is not None:
            entry["shape"] = list(decl.shape)
        if decl.width_bits != DEFAULT_WIDTH_BITS:
            entry["width_bits"] = decl.width_bits
        inputs.append(entry)
    ops = []
    for op in g.operations:
        entry = {
            "id": op.id,
            "opcode": op.opcode,
            "args": [ref.name for ref in op.operands],
            "result": op.result.name,
        }
        if op.extra_deps:
            entry["deps"] = sorted(op.extra_deps)
        ops.append(entry)
    doc = {
        "inputs": inputs,
        "outputs": sorted(ref.name for ref in g.primary_outputs),
        "ops": ops,
    }
    return json.dumps(doc, indent=2) + "\n"


def _parse_input_decls(raw: list) -> tuple[InputDecl, ...]:
    decls = []
    seen: set[str] = set()
    for i, entry in enumerate(raw):
        where = f"inputs[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where} must be an object")
        _check_keys(entry, {"name"}, {"shape", "width_bits"}, where)
        name = _identifier(_expect(entry, "name", str, where), where)
        if name in seen:
            raise FormatError(f"input {name!r} declared twice")
        seen.add(name)
        shape = None
        if "shape" in entry:
            shape_raw = entry["shape"]
            if (
                not isinstance(shape_raw, list)
                or not shape_raw
                or not all(isinstance(d, int) and d > 0 for d in shape_raw)
            ):
                raise FormatError(f"{where}.shape must be a list of positive integers")
            shape = tuple(shape_raw)
        width = entry.get("width_bits", DEFAULT_WIDTH_BITS)
        if not isinstance(width, int) or width < 1:
            raise FormatError(f"{where}.width_bits must be a positive integer")
        decls.append(InputDecl(name, shape, width))
    return tuple(decls)


def _token_parts(token: str) -> tuple[str, str | None, int | None]:
    m = _ELEMENT_RE.match(token)
    if m:
        return m.group(1), m.group(1), int(m.group(2))
    if not _NAME_RE.match(token):
        raise FormatError(f"bad data reference {token!r}")
    return token, None, None


def _ref_for_token(token: str, width_bits: int = DEFAULT_WIDTH_BITS) -> DataRef:
    name, array, index = _token_parts(token)
    if array is None:
        return scalar(name, width_bits)
    return elem(array, index, width_bits)


def _load_json(text: str, what: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid {what} document: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise FormatError(f"{what} document must be a JSON object")
    return doc


def _check_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    missing = required - obj.keys()
    if missing:
        raise FormatError(f"{where} is missing key(s): {', '.join(sorted(missing))}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise FormatError(f"{where} has unknown key(s): {', '.join(sorted(unknown))}")


def _expect(obj: dict, key: str, kind: type, where: str):
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise FormatError(f"{where}.{key} must be of type {kind.__name__}")
    if not isinstance(value, kind):
        raise FormatError(f"{where}.{key} must be of type {kind.__name__}")
    return value


def _identifier(name: str, where: str) -> str:
    if not _NAME_RE.match(name):
        raise FormatError(f"{where}: {name!r} is not a valid identifier")
    return name


# ---------------------------------------------------------------------------
# validation and ordering

def validate_dfg(g: Dfg) -> list[Diagnostic]:
    """Check all graph invariants; returns one Diagnostic per violation.

    Unlike :func:`parse_dfg` this never raises, so it also covers graphs
    assembled programmatically.
    """
    diags: list[Diagnostic] = []
    produced = {op.result for op in g.operations}

    for op in g.operations:
        if op.opcode not in g.library:
            diags.append(
                Diagnostic("UnknownOpcode", op.opcode, {"op": op.id})
            )

    seen_undefined: set[str] = set()
    for op in g.operations:
        for ref in op.operands:
            if ref in g.primary_inputs or ref in produced:
                continue
            if ref.name not in seen_undefined:
                seen_undefined.add(ref.name)
                diags.append(Diagnostic("UndefinedData", ref.name, {"op": op.id}))

    for ref, writers in sorted(g._writers.items(), key=lambda kv: kv[0].name):
        if len(writers) > 1:
            diags.append(
                Diagnostic("DuplicateWriter", ref.name, {"ops": list(writers)})
            )
        if ref in g.primary_inputs:
            diags.append(
                Diagnostic("DuplicateWriter", ref.name, {"ops": list(writers), "input": True})
            )

    for ref in sorted(g.primary_outputs, key=lambda r: r.name):
        if ref not in produced:
            diags.append(Diagnostic("UndefinedData", ref.name, {"output": True}))

    for op in g.operations:
        if op.id in op.extra_deps:
            diags.append(Diagnostic("CycleDetected", op.id, {"self_dep": True}))
        for dep in sorted(op.extra_deps):
            if dep != op.id and dep not in g:
                diags.append(Diagnostic("UnknownDependency", dep, {"op": op.id}))

    try:
        topological_order(g)
    except CycleDetected as e:
        diags.append(Diagnostic("CycleDetected", " -> ".join(e.cycle), {"cycle": e.cycle}))
    return diags


def topological_order(g: Dfg) -> list[str]:
    """Deterministic topological order: producers first, ties by ascending id."""
    indegree = {op.id: len(g.predecessors(op.id)) for op in g.operations}
    succs = g.successors()
    ready = [op_id for op_id, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        op_id = heapq.heappop(ready)
        order.append(op_id)
        for succ in sorted(succs[op_id]):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)
    if len(order) < len(g.operations):
        raise CycleDetected(_find_cycle(g, {o for o in indegree if indegree[o] > 0}))
    return order


def _find_cycle(g: Dfg, remaining: set[str]) -> list[str]:
    # Walk predecessor links inside the leftover set until a node repeats.
    start = min(remaining)
    seen: dict[str, int] = {}
    path: list[str] = []
    node = start
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = min(p for p in g.predecessors(node) if p in remaining)
    cycle = path[seen[node]:]
    pivot = cycle.index(min(cycle))
    return cycle[pivot:] + cycle[:pivot]


@dataclass(frozen=True)
class TimingAnalysis:
    """ASAP/ALAP start cycles, per-operation mobility and the critical path
    length under a given deadline."""

    asap: Mapping[str, int]
    alap: Mapping[str, int]
    mobility: Mapping[str, int]
    critical_path_cycles: int


def compute_timing(
    g: Dfg,
    library: OperatorLibrary,
    time_constraint_cycles: int,
) -> TimingAnalysis:
    """Longest-path timing analysis under a deadline.

    ASAP is the forward longest path from the inputs; ALAP is anchored so
    every operation finishes by ``time_constraint_cycles``; mobility is their
    difference. Raises InfeasibleConstraint when the critical path does not
    fit the deadline.
    """
    latency = {op.id: library.class_for(op.opcode).latency_cycles for op in g.operations}
    order = topological_order(g)
    preds = {op.id: g.predecessors(op.id) for op in g.operations}

    asap: dict[str, int] = {}
    for op_id in order:
        asap[op_id] = max((asap[p] + latency[p] for p in preds[op_id]), default=0)
    critical = max((asap[o] + latency[o] for o in asap), default=0)
    if critical > time_constraint_cycles:
        raise InfeasibleConstraint(critical, time_constraint_cycles)

    succs = g.successors()
    alap: dict[str, int] = {}
    for op_id in reversed(order):
        if succs[op_id]:
            alap[op_id] = min(alap[s] for s in succs[op_id]) - latency[op_id]
        else:
            alap[op_id] = time_constraint_cycles - latency[op_id]

    mobility = {o: alap[o] - asap[o] for o in asap}
    return TimingAnalysis(asap, alap, mobility, critical)
