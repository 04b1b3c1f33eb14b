"""Bundled DSP kernel fixtures: classic scheduling subjects shipped as
documents so the CLI, tests and demo scripts all exercise the same inputs.

Kernels: ``fir4`` and ``fir16`` (direct-form FIR with a serial adder
chain), ``fft8_stage`` (one stage of butterflies, rich in shared operator
inputs), ``iir_biquad`` (second-order recursive filter) and
``two_adds_one_bank`` (the minimal port-contention case). Each kernel has a
``.dfg.json`` and a ``.map.json``; they share the ``dsp`` operator library.
"""

from __future__ import annotations

from importlib import resources

from ..dfg import Dfg, OperatorLibrary, parse_dfg, parse_library
from ..memmap import MemoryMapping, parse_mapping

KERNELS = ("fir4", "fir16", "fft8_stage", "iir_biquad", "two_adds_one_bank")


def fixture_text(filename: str) -> str:
    return (resources.files(__package__) / filename).read_text(encoding="utf-8")


def fixture_path(filename: str):
    """Filesystem path of a bundled fixture document."""
    return resources.files(__package__) / filename


def load_library(name: str = "dsp") -> OperatorLibrary:
    return parse_library(fixture_text(f"{name}.lib.json"))


def load_dfg(kernel: str, library: OperatorLibrary | None = None) -> Dfg:
    return parse_dfg(fixture_text(f"{kernel}.dfg.json"), library or load_library())


def load_mapping(kernel: str) -> MemoryMapping:
    return parse_mapping(fixture_text(f"{kernel}.map.json"))
