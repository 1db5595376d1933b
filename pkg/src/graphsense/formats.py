"""Strict text codecs for graphs, matrices, measurement vectors, decode
plans (JSON sidecar) and experiment records (JSON lines).

All parsers reject trailing garbage and report the offending line.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Iterable, Sequence

import numpy as np

from .experiments import ExperimentRecord
from .graphs import Graph
from .matrices import DecodeGroup, DecodePlan, MeasurementMatrix

__all__ = [
    "FORMAT_VERSION",
    "ParseError",
    "write_graph",
    "read_graph",
    "write_matrix",
    "read_matrix",
    "write_vector",
    "read_vector",
    "plan_to_dict",
    "plan_from_dict",
    "record_to_dict",
    "write_jsonl",
    "read_jsonl",
]

FORMAT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _ints(line: str, lineno: int, expect: int | None = None) -> list[int]:
    parts = line.split()
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {line!r}") from None
    if expect is not None and len(vals) != expect:
        raise ParseError(lineno, f"expected {expect} fields, got {len(vals)}")
    return vals


# ---------------------------------------------------------------------------
# graph: "n m" then m lines "u v" with 0 <= u < v < n


def write_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def read_graph(text: str) -> Graph:
    lines = _lines(text)
    if not lines:
        raise ParseError(1, "empty graph file")
    n, m = _ints(lines[0], 1, expect=2)
    if len(lines) != m + 1:
        raise ParseError(len(lines), f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    for i, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, i, expect=2)
        if not 0 <= u < v < n:
            raise ParseError(i, f"edge ({u},{v}) must satisfy 0 <= u < v < n")
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise ParseError(len(lines), str(exc)) from None


# ---------------------------------------------------------------------------
# matrix: "m n" then m lines "cardinality sorted-indices..."


def write_matrix(a: MeasurementMatrix) -> str:
    out = [f"{a.m} {a.n}"]
    for row in a.rows:
        out.append(" ".join([str(len(row))] + [str(j) for j in row]))
    return "\n".join(out) + "\n"


def read_matrix(text: str) -> MeasurementMatrix:
    lines = _lines(text)
    if not lines:
        raise ParseError(1, "empty matrix file")
    m, n = _ints(lines[0], 1, expect=2)
    if len(lines) != m + 1:
        raise ParseError(len(lines), f"expected {m} row lines, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        vals = _ints(line, i)
        if not vals or len(vals) != vals[0] + 1:
            raise ParseError(i, "row must read: cardinality then that many indices")
        idx = vals[1:]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ParseError(i, "row indices must be sorted and unique")
        rows.append(tuple(idx))
    try:
        return MeasurementMatrix(n, tuple(rows))
    except ValueError as exc:
        raise ParseError(len(lines), str(exc)) from None


# ---------------------------------------------------------------------------
# vector: "m" then m reals, one per line (round-trip decimal)


def write_vector(y: Sequence[float]) -> str:
    vals = [float(v) for v in np.asarray(y, dtype=float).ravel()]
    return "\n".join([str(len(vals))] + [repr(v) for v in vals]) + "\n"


def read_vector(text: str) -> np.ndarray:
    lines = _lines(text)
    if not lines:
        raise ParseError(1, "empty vector file")
    (m,) = _ints(lines[0], 1, expect=1)
    if len(lines) != m + 1:
        raise ParseError(len(lines), f"expected {m} value lines, got {len(lines) - 1}")
    vals = []
    for i, line in enumerate(lines[1:], start=2):
        try:
            vals.append(float(line.strip()))
        except ValueError:
            raise ParseError(i, f"expected a real number, got {line!r}") from None
    return np.array(vals)


# ---------------------------------------------------------------------------
# decode plan sidecar (JSON)


def plan_to_dict(plan: DecodePlan) -> dict:
    from . import __version__
    return {
        "formatVersion": FORMAT_VERSION,
        "version": __version__,
        "groups": [
            {
                "target": list(grp.target),
                "rowRange": list(grp.row_range),
                "hubRow": grp.hub_row,
                "priorSubtract": [list(p) for p in grp.prior_subtract],
                "kernel": [list(r) for r in grp.kernel],
            }
            for grp in plan.groups
        ],
    }


def plan_from_dict(data: dict) -> DecodePlan:
    if data.get("formatVersion") != FORMAT_VERSION:
        raise ValueError(f"unsupported plan format {data.get('formatVersion')!r}")
    groups = []
    for grp in data["groups"]:
        groups.append(DecodeGroup(
            target=tuple(grp["target"]),
            row_range=tuple(grp["rowRange"]),
            hub_row=grp["hubRow"],
            prior_subtract=tuple(tuple(p) for p in grp["priorSubtract"]),
            kernel=tuple(tuple(r) for r in grp["kernel"])))
    return DecodePlan(tuple(groups))


# ---------------------------------------------------------------------------
# experiment records (JSON lines)


def record_to_dict(record: ExperimentRecord) -> dict:
    from . import __version__
    data = asdict(record)
    data["version"] = __version__
    data["formatVersion"] = FORMAT_VERSION
    return data


def write_jsonl(records: Iterable[ExperimentRecord]) -> str:
    return "".join(
        json.dumps(record_to_dict(r), sort_keys=True) + "\n" for r in records)


def read_jsonl(text: str) -> list[dict]:
    out = []
    for i, line in enumerate(_lines(text), start=1):
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(i, f"bad JSON record: {exc}") from None
    return out
