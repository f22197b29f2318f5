"""Grid sweeps over the canonical octant, with resumable JSON Lines output.

File layout: a header line ``{"config": {...}, "fingerprint": ..., "version": 1}``
followed by one record per canonical node (g, h), 0 <= g <= h, in row order
(h ascending, then g).  Records only depend on the fingerprinted config, so
a file is byte-identical for any worker count or chunk size, and an
interrupted file is always a prefix of the finished one.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .arithmetic import RangeError
from .certify import EXCEPTIONAL, certify_three, check_certificate
from .graph import LatticePoint, PathError, WalkPath, canonical_rep, check_path
from .oracle import (
    Distance,
    StepTable,
    check_escalation,
    classify,
    classify_one_step,
    default_escalation,
)

log = logging.getLogger(__name__)

VERSION = 1
TWO_OR_LESS = {"D0", "D1", "D2"}


class FingerprintMismatch(ValueError):
    pass


class CorruptSweep(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    g_max: int
    h_max: int
    leg_bound: int
    output_path: str
    escalation: Optional[tuple[int, ...]] = None
    chunk: int = 8
    resume: bool = False
    workers: int = 1
    use_families: bool = True
    # search the Euclid parameter box m < M, n < N, d < D instead of a leg box
    params: Optional[tuple[int, int, int]] = None

    def __post_init__(self) -> None:
        if self.g_max < 1 or self.h_max < 1 or self.leg_bound < 1:
            raise ValueError("grid bounds and leg bound must be positive")
        if self.chunk < 1 or self.workers < 1:
            raise ValueError("chunk and workers must be >= 1")
        check_escalation(self.levels, self.leg_bound)

    @property
    def levels(self) -> list[int]:
        if self.escalation is None:
            return default_escalation(self.leg_bound)
        return list(self.escalation)

    def fingerprint_fields(self) -> dict:
        return {
            "g_max": self.g_max,
            "h_max": self.h_max,
            "leg_bound": self.leg_bound,
            "escalation": self.levels,
            "use_families": self.use_families,
            "params": None if self.params is None else list(self.params),
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.fingerprint_fields(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def header_line(self) -> str:
        return _dumps({"config": self.fingerprint_fields(), "fingerprint": self.fingerprint(), "version": VERSION})


@dataclass
class SweepSummary:
    path: str
    total: int = 0
    written: int = 0
    counts: dict = field(default_factory=dict)
    beyond_two: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "total": self.total,
            "written": self.written,
            "counts": dict(sorted(self.counts.items())),
            "beyond_two": [list(p) for p in self.beyond_two],
        }


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def canonical_nodes(g_max: int, h_max: int) -> list[LatticePoint]:
    """Canonical representatives of every point of [0, g_max) x [0, h_max)."""
    out = []
    for h in range(max(g_max, h_max)):
        for g in range(h + 1):
            if (g < g_max and h < h_max) or (h < g_max and g < h_max):
                out.append(LatticePoint(g, h))
    return out


def _chunks(nodes: Sequence[LatticePoint], rows: int) -> list[list[LatticePoint]]:
    out: list[list[LatticePoint]] = []
    row_of_chunk = None
    for p in nodes:
        key = p.y // rows
        if key != row_of_chunk:
            out.append([])
            row_of_chunk = key
        out[-1].append(p)
    return out


def record_for(node: LatticePoint, levels: Sequence[int], use_families: bool,
               params: Optional[tuple[int, int, int]] = None) -> dict:
    table = _param_table(params) if params is not None else None
    try:
        v = classify(node, levels[-1], escalation=levels, use_families=use_families, table=table)
    except RangeError as exc:
        return {"g": node.x, "h": node.y, "class": Distance.UNRESOLVED.value, "witness": None,
                "step_lengths": None, "bound_used": levels[-1], "error": str(exc)}
    keep = v.cls in (Distance.D1, Distance.D2)
    return {
        "g": node.x,
        "h": node.y,
        "class": v.cls.value,
        "witness": [list(s.vec) for s in v.witness.steps] if keep else None,
        "step_lengths": list(v.witness.lengths) if keep else None,
        "bound_used": v.bound_used,
    }


_PARAM_TABLES: dict = {}


def _param_table(params: tuple[int, int, int]) -> StepTable:
    if params not in _PARAM_TABLES:
        _PARAM_TABLES[params] = StepTable.for_params(*params)
    return _PARAM_TABLES[params]


def _work(args) -> list[str]:
    nodes, levels, use_families, params = args
    return [_dumps(record_for(LatticePoint(*p), levels, use_families, params)) for p in nodes]


def _run_chunks(chunks: list[list[LatticePoint]], config: SweepConfig) -> Iterator[list[str]]:
    params = None if config.params is None else tuple(config.params)
    jobs = [([tuple(p) for p in c], config.levels, config.use_families, params) for c in chunks]
    if config.workers == 1 or len(jobs) <= 1:
        for job in jobs:
            yield _work(job)
        return
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        # map keeps submission order, so the single writer stays in order
        yield from pool.map(_work, jobs)


def _summarize(path: str, records: Iterable[dict], written: int) -> SweepSummary:
    s = SweepSummary(path, written=written)
    for r in records:
        s.total += 1
        s.counts[r["class"]] = s.counts.get(r["class"], 0) + 1
        if r["class"] not in TWO_OR_LESS:
            s.beyond_two.append(LatticePoint(r["g"], r["h"]))
    return s


def _write(config: SweepConfig, nodes: list[LatticePoint], fh, done: list[dict]) -> SweepSummary:
    new: list[dict] = []
    for lines in _run_chunks(_chunks(nodes, config.chunk), config):
        fh.write("".join(line + "\n" for line in lines))
        fh.flush()
        new.extend(json.loads(line) for line in lines)
        log.info("sweep %s: %d/%d nodes", config.output_path, len(done) + len(new), len(done) + len(nodes))
    return _summarize(config.output_path, done + new, len(new))


def run_sweep(config: SweepConfig) -> SweepSummary:
    """Classify every canonical node of the grid and write the record file.

    With ``config.resume`` and an existing file this continues that file.
    """
    if config.resume and os.path.exists(config.output_path):
        return resume_sweep(config)
    nodes = canonical_nodes(config.g_max, config.h_max)
    with open(config.output_path, "w", encoding="utf-8") as fh:
        fh.write(config.header_line() + "\n")
        return _write(config, nodes, fh, [])


def _read_prefix(path: str) -> tuple[Optional[dict], list[dict], int]:
    """Header, complete records, and byte offset just past the last one."""
    header = None
    records: list[dict] = []
    good = 0
    with open(path, "rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break
            try:
                obj = json.loads(raw)
            except ValueError:
                break
            if header is None:
                header = obj
            else:
                records.append(obj)
            good += len(raw)
    return header, records, good


def resume_sweep(config: SweepConfig) -> SweepSummary:
    """Finish an interrupted sweep file; refuses files from another config."""
    header, done, offset = _read_prefix(config.output_path)
    if header is None:
        raise FingerprintMismatch(f"{config.output_path}: no readable header line")
    if header.get("fingerprint") != config.fingerprint() or header.get("config") != config.fingerprint_fields():
        raise FingerprintMismatch(
            f"{config.output_path} was written with {header.get('config')}, "
            f"not {config.fingerprint_fields()}; refusing to mix results"
        )
    nodes = canonical_nodes(config.g_max, config.h_max)
    if len(done) > len(nodes):
        raise CorruptSweep(f"{config.output_path} has more records than the grid")
    for r, p in zip(done, nodes):
        if (r.get("g"), r.get("h")) != tuple(p):
            raise CorruptSweep(f"{config.output_path}: record for {(r.get('g'), r.get('h'))} where {tuple(p)} was expected")
    with open(config.output_path, "r+", encoding="utf-8") as fh:
        fh.seek(offset)
        fh.truncate()
        return _write(config, nodes[len(done):], fh, done)


# -- reporting ---------------------------------------------------------------

@dataclass
class ConjectureReport:
    """Aggregates over a record file.

    ``unresolved`` lists every node without a walk of length <= 2, certified
    or not; ``conjecture_consistent`` holds when all of them lie in the
    three exceptional orbits and no record failed re-verification.
    """

    config: Optional[dict] = None
    total: int = 0
    histogram: dict = field(default_factory=dict)
    unresolved: list = field(default_factory=list)
    certified: list = field(default_factory=list)
    max_step_length: int = 0
    max_step_node: Optional[LatticePoint] = None
    long_steps: list = field(default_factory=list)
    corrupt: list = field(default_factory=list)
    long_ratio: float = 10.0

    @property
    def conjecture_consistent(self) -> bool:
        return not self.corrupt and all(canonical_rep(p) in EXCEPTIONAL for p in self.unresolved)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "total": self.total,
            "histogram": dict(sorted(self.histogram.items())),
            "unresolved": [list(p) for p in self.unresolved],
            "certified": [list(p) for p in self.certified],
            "max_step_length": self.max_step_length,
            "max_step_node": None if self.max_step_node is None else list(self.max_step_node),
            "long_ratio": self.long_ratio,
            "long_steps": self.long_steps,
            "corrupt": self.corrupt,
            "conjecture_consistent": self.conjecture_consistent,
        }


def verify_record(r: dict) -> None:
    """Raise CorruptSweep unless the record re-derives its own class."""
    try:
        g, h, cls = int(r["g"]), int(r["h"]), r["class"]
        witness, lengths = r.get("witness"), r.get("step_lengths")
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSweep(f"malformed record: {exc}") from exc
    node = LatticePoint(g, h)
    if not 0 <= g <= h:
        raise CorruptSweep(f"{tuple(node)} is not a canonical node")
    want_steps = {"D1": 1, "D2": 2}.get(cls)
    if want_steps is not None:
        if not witness or len(witness) != want_steps:
            raise CorruptSweep(f"{cls} record for {tuple(node)} needs a {want_steps}-step witness")
        try:
            path = WalkPath.from_vectors(witness)
            check_path(path, node)
        except (PathError, ValueError) as exc:
            raise CorruptSweep(f"witness for {tuple(node)} fails: {exc}") from exc
        if lengths is not None and list(path.lengths) != list(lengths):
            raise CorruptSweep(f"step lengths for {tuple(node)} do not match the witness")
        if cls == "D2" and classify_one_step(node):
            raise CorruptSweep(f"{tuple(node)} is one step away but recorded D2")
    elif witness is not None:
        raise CorruptSweep(f"{cls} record for {tuple(node)} carries a witness")
    elif cls == "D0":
        if node != (0, 0):
            raise CorruptSweep(f"D0 record for {tuple(node)}")
    elif cls == "D3_CERTIFIED":
        cert = certify_three(node)
        if cert is None or not check_certificate(cert):
            raise CorruptSweep(f"no distance-3 certificate exists for {tuple(node)}")
    elif cls == "UNRESOLVED":
        if node == (0, 0) or classify_one_step(node):
            raise CorruptSweep(f"{tuple(node)} cannot be unresolved")
    else:
        raise CorruptSweep(f"unknown class {cls!r}")


def report(records_path: str, long_ratio: float = 10.0) -> ConjectureReport:
    """Re-verify every record and aggregate the file."""
    rep = ConjectureReport(long_ratio=long_ratio)
    seen = set()
    with open(records_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            try:
                r = json.loads(raw)
            except ValueError:
                rep.corrupt.append({"line": lineno, "reason": "not JSON"})
                continue
            if lineno == 1 and "config" in r:
                rep.config = r["config"]
                continue
            try:
                verify_record(r)
            except CorruptSweep as exc:
                rep.corrupt.append({"line": lineno, "reason": str(exc)})
                continue
            node = LatticePoint(r["g"], r["h"])
            if node in seen:
                rep.corrupt.append({"line": lineno, "reason": f"duplicate record for {tuple(node)}"})
                continue
            seen.add(node)
            rep.total += 1
            cls = r["class"]
            rep.histogram[cls] = rep.histogram.get(cls, 0) + 1
            if cls not in TWO_OR_LESS:
                rep.unresolved.append(node)
                if cls == "D3_CERTIFIED":
                    rep.certified.append(node)
            lengths = r.get("step_lengths") or []
            if lengths:
                top = max(lengths)
                if top > rep.max_step_length:
                    rep.max_step_length, rep.max_step_node = top, node
                ratio = top / math.hypot(*node)
                if ratio >= long_ratio:
                    rep.long_steps.append({"g": node.x, "h": node.y, "step_lengths": lengths,
                                           "ratio": round(ratio, 3)})
    return rep
