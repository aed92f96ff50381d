"""Exhaustive search for nuciferous Cayley graphs over one group at a time.

Inverse-closed connection sets are indexed by integers: bit ``b`` of the
index selects the ``b``-th basis item, involutions first (low bits), then
inverse pairs ``{x, x^-1}``.  The index space is cut into contiguous blocks,
each block is prescreened by the compiled kernel, and survivors are
certified exactly and canonically labeled.  Block results are merged and
sorted, so the report does not depend on the number of workers.
"""

from __future__ import annotations

import json
import logging
import os
import random
import re
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import _kernel
from .canon import canonical_form
from .cayley import ConnectionSet, cayley_graph, quotient_table
from .certify import (ExactnessNotGuaranteed, Verdict, certified_range, hadamard_cofactor_bound,
                      hadamard_det_bound, is_nuciferous)
from .graphio import from_graph6, to_graph6
from .groups import GroupTable, involution_pair_partition

log = logging.getLogger(__name__)

DEFAULT_BLOCK_BITS = 16
# bump when the per-block record changes shape
CHECKPOINT_FORMAT = 2

TABLE1_GROUPS = (
    "D(12) x C(2)", "A(4) x C(2)", "S(3) x C(4)", "D(24)", "S(4)",
    "D(28)", "C(30)", "D(10) x C(3)", "D(6) x C(5)", "D(30)",
)


class SearchError(RuntimeError):
    pass


def connection_basis(g: GroupTable) -> list[int]:
    part = involution_pair_partition(g)
    return [1 << x for x in part.involutions] + [(1 << a) | (1 << b) for a, b in part.pairs]


def subset_mask(basis: list[int], index: int) -> int:
    mask, b = 0, 0
    while index:
        if index & 1:
            mask |= basis[b]
        index >>= 1
        b += 1
    return mask


def enumerate_connection_sets(g: GroupTable, degree_min: int = 0,
                              degree_max: int | None = None) -> Iterator[ConnectionSet]:
    """Every inverse-closed identity-free subset with size in range, in index order."""
    if degree_max is None:
        degree_max = g.order - 1
    if not 0 <= degree_min <= degree_max <= g.order - 1:
        raise ValueError(f"bad degree range {degree_min}..{degree_max} for order {g.order}")
    basis = connection_basis(g)
    for idx in range(1 << len(basis)):
        mask = subset_mask(basis, idx)
        if degree_min <= mask.bit_count() <= degree_max:
            yield ConnectionSet(mask, g.order)


@dataclass(frozen=True, order=True)
class SearchRecord:
    degree: int
    cert: str  # canonical form, hex
    elements: tuple[int, ...]
    group: str = ""
    det: int = 0
    verdict: str = Verdict.NUCIFEROUS.value
    graph6: str = ""

    def to_dict(self) -> dict:
        return {
            "group": self.group, "degree": self.degree, "connection_set": list(self.elements),
            "det": str(self.det), "verdict": self.verdict, "cert": self.cert, "graph6": self.graph6,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchRecord":
        return cls(degree=d["degree"], cert=d["cert"], elements=tuple(d["connection_set"]),
                   group=d["group"], det=int(d["det"]), verdict=d["verdict"], graph6=d["graph6"])


@dataclass
class GroupReport:
    group: str
    order: int
    degree_min: int
    degree_max: int
    enumerated: int = 0
    pruned: int = 0
    singular: int = 0
    screened_out: int = 0
    offdiag_zero: int = 0
    certified: int = 0
    records: list[SearchRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def classes(self) -> dict[int, int]:
        """Degree -> number of distinct canonical forms."""
        per: dict[int, set[str]] = defaultdict(set)
        for r in self.records:
            per[r.degree].add(r.cert)
        return {d: len(per[d]) for d in sorted(per)}

    @property
    def class_sizes(self) -> dict[int, dict[str, int]]:
        """Degree -> canonical form -> number of connection sets realizing it."""
        out: dict[int, dict[str, int]] = defaultdict(lambda: defaultdict(int))
        for r in self.records:
            out[r.degree][r.cert] += 1
        return {d: dict(sorted(out[d].items())) for d in sorted(out)}

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "group": self.group, "order": self.order,
            "degree_min": self.degree_min, "degree_max": self.degree_max,
            "enumerated": self.enumerated, "pruned": self.pruned, "singular": self.singular,
            "screened_out": self.screened_out,
            "offdiag_zero": self.offdiag_zero, "certified": self.certified,
            "classes": {str(k): v for k, v in self.classes.items()},
            "class_sizes": {str(k): v for k, v in self.class_sizes.items()},
            "records": [r.to_dict() for r in self.records],
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------- blocks

@dataclass(frozen=True)
class _Job:
    group: GroupTable
    degree_min: int
    degree_max: int
    block_bits: int
    prune: bool


_arrays_cache: dict[int, tuple] = {}


def _arrays(job: _Job):
    key = id(job.group)
    hit = _arrays_cache.get(key)
    if hit is None or hit[0] is not job.group:
        g = job.group
        basis = connection_basis(g)
        sizes = [m.bit_count() for m in basis]
        hit = (g, basis, np.array(basis, dtype=np.int64), np.array(sizes, dtype=np.int64),
               np.array(g.mul, dtype=np.int64), np.array(quotient_table(g), dtype=np.int64))
        _arrays_cache.clear()
        _arrays_cache[key] = hit
    return hit[1:]


def run_block(job: _Job, block: int) -> dict:
    """Screen, certify and canonicalize one block of subset indices."""
    g = job.group
    basis, b_masks, b_sizes, mul, quot = _arrays(job)
    lo = block << job.block_bits
    hi = min(lo + (1 << job.block_bits), 1 << len(basis))
    status = np.zeros(hi - lo, dtype=np.int8)
    screen_modulus = 1
    for p in _kernel.SCREEN_PRIMES:
        screen_modulus *= int(p)
    singular_certified = screen_modulus > hadamard_det_bound(g.order)
    offdiag_exact = screen_modulus > 2 * hadamard_cofactor_bound(g.order)
    _kernel.screen_block(b_masks, b_sizes, mul, quot, lo, hi, job.degree_min, job.degree_max,
                         job.prune, _kernel.SCREEN_PRIMES, status, offdiag_exact)
    counts = np.bincount(status, minlength=6)
    exact = np.flatnonzero(status == _kernel.CANDIDATE).tolist()
    if not singular_certified:
        exact += np.flatnonzero(status == _kernel.SINGULAR).tolist()
    hits = []
    for off in sorted(exact):
        s = ConnectionSet(subset_mask(basis, lo + off), g.order)
        graph = cayley_graph(g, s)
        cert = is_nuciferous(graph)
        if cert.nuciferous:
            hits.append([s.mask, str(cert.det), canonical_form(graph).hex])
    return {
        "block": block,
        "enumerated": int(hi - lo - counts[_kernel.OUT_OF_RANGE]),
        "pruned": int(counts[_kernel.NOT_GENERATING]),
        "singular": int(counts[_kernel.SINGULAR]),
        "screened_out": int(counts[_kernel.DIAG_NONZERO]),
        "offdiag_zero": int(counts[_kernel.OFFDIAG_ZERO]),
        "certified": len(exact),
        "hits": hits,
    }


def _run_block_star(args):
    return run_block(*args)


# ---------------------------------------------------------------- driver

def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def search_group(g: GroupTable, degree_min: int = 0, degree_max: int | None = None,
                 jobs: int = 1, prune: bool = True, block_bits: int = DEFAULT_BLOCK_BITS,
                 checkpoint_dir: str | Path | None = None, progress=None,
                 seed: int | None = None) -> GroupReport:
    """Exhaustively search ``g`` for nuciferous Cayley graphs.

    With ``checkpoint_dir`` set, each finished block is stored under
    ``blocks/`` and listed in ``resume.json``; a rerun with the same
    directory skips those blocks.  ``seed`` shuffles the order in which
    blocks are dispatched; the report does not depend on it.
    """
    if degree_max is None:
        degree_max = g.order - 1
    if not 0 <= degree_min <= degree_max <= max(g.order - 1, 0):
        raise ValueError(f"bad degree range {degree_min}..{degree_max} for order {g.order}")
    if g.order > certified_range():
        raise ExactnessNotGuaranteed(f"order {g.order} exceeds certified range {certified_range()}")
    if g.order > 63:
        raise SearchError("the compiled prescreen handles orders up to 63")
    t0 = time.perf_counter()
    rank = involution_pair_partition(g).rank
    block_bits = min(block_bits, rank)
    nblocks = 1 << (rank - block_bits)
    job = _Job(g, degree_min, degree_max, block_bits, prune)

    results: dict[int, dict] = {}
    ckpt = _Checkpoint(Path(checkpoint_dir), g, job, nblocks) if checkpoint_dir else None
    if ckpt:
        results.update(ckpt.load())
    todo = [b for b in range(nblocks) if b not in results]
    if seed is not None:
        random.Random(seed).shuffle(todo)

    def done(res: dict) -> None:
        results[res["block"]] = res
        if ckpt:
            ckpt.save(res)
        if progress:
            progress(len(results), nblocks)

    if jobs <= 1 or len(todo) <= 1:
        for b in todo:
            done(run_block(job, b))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for res in pool.map(_run_block_star, [(job, b) for b in todo], chunksize=1):
                done(res)

    report = GroupReport(g.name, g.order, degree_min, degree_max)
    for b in range(nblocks):
        res = results[b]
        report.enumerated += res["enumerated"]
        report.pruned += res["pruned"]
        report.singular += res["singular"]
        report.screened_out += res["screened_out"]
        report.offdiag_zero += res["offdiag_zero"]
        report.certified += res["certified"]
        for mask, det, cert in res["hits"]:
            s = ConnectionSet(mask, g.order)
            report.records.append(SearchRecord(
                degree=len(s), cert=cert, elements=tuple(s.elements()), group=g.name,
                det=int(det), graph6=to_graph6(cayley_graph(g, s))))
    report.records.sort()
    report.wall_time = time.perf_counter() - t0
    log.info("%s: %d subsets, %d hits, classes %s, %.1fs", g.name, report.enumerated,
             len(report.records), report.classes, report.wall_time)
    return report


class _Checkpoint:
    def __init__(self, root: Path, g: GroupTable, job: _Job, nblocks: int):
        self.root = root
        self.blocks = root / "blocks"
        self.blocks.mkdir(parents=True, exist_ok=True)
        self.resume = root / "resume.json"
        self.meta = {"group": g.name, "order": g.order, "degree_min": job.degree_min,
                     "degree_max": job.degree_max, "block_bits": job.block_bits,
                     "prune": job.prune, "blocks": nblocks, "format": CHECKPOINT_FORMAT}
        self.completed: list[int] = []

    def load(self) -> dict[int, dict]:
        if not self.resume.exists():
            return {}
        state = json.loads(self.resume.read_text())
        if state.get("meta") != self.meta:
            raise SearchError(f"{self.resume} belongs to a different search: {state.get('meta')}")
        out = {}
        for b in state["completed"]:
            out[b] = json.loads((self.blocks / f"{b:06d}.json").read_text())
        self.completed = sorted(out)
        return out

    def save(self, res: dict) -> None:
        _atomic_write(self.blocks / f"{res['block']:06d}.json", json.dumps(res))
        self.completed.append(res["block"])
        self.completed.sort()
        _atomic_write(self.resume, json.dumps({"meta": self.meta, "completed": self.completed}))


# ---------------------------------------------------------------- cross-group

@dataclass
class ClassTable:
    # (order, cert) -> sorted list of (group, degree)
    realizations: dict[tuple[int, str], list[tuple[str, int]]]

    @property
    def per_order(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for order, _ in self.realizations:
            out[order] += 1
        return dict(sorted(out.items()))

    @property
    def total(self) -> int:
        return len(self.realizations)

    def coincidences(self) -> list[tuple[int, str, list[tuple[str, int]]]]:
        """Classes realized by more than one group."""
        return [(o, c, r) for (o, c), r in sorted(self.realizations.items())
                if len({grp for grp, _ in r}) > 1]

    def totals_line(self) -> str:
        parts = [f"{o}:{k}" for o, k in self.per_order.items()]
        return " ".join(parts + [f"total:{self.total}"])


def dedup_cross_group(reports: list[GroupReport]) -> ClassTable:
    real: dict[tuple[int, str], set[tuple[str, int]]] = defaultdict(set)
    for rep in reports:
        for r in rep.records:
            real[(rep.order, r.cert)].add((rep.group, r.degree))
    return ClassTable({k: sorted(v) for k, v in sorted(real.items())})


def table_rows(reports: list[GroupReport]) -> list[tuple[int, str, int, int]]:
    rows = [(rep.order, rep.group, d, k) for rep in reports for d, k in rep.classes.items()]
    return sorted(rows)


def format_csv(rows: list[tuple[int, str, int, int]]) -> str:
    lines = ["order,group,degree,count"]
    lines += [f"{o},{g},{d},{k}" for o, g, d, k in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- results directory

def group_slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "", name.replace(" x ", "x")) or "group"


def group_dir(out: Path, order: int, name: str) -> Path:
    return Path(out) / str(order) / group_slug(name)


def hit_stem(record: SearchRecord) -> str:
    mask = sum(1 << x for x in record.elements)
    return f"d{record.degree}_{record.cert[:12]}_s{mask:x}"


def write_results(reports: list[GroupReport], out: str | Path) -> tuple[str, str]:
    """Write per-hit files, per-group reports, ``table1.csv`` and ``totals.txt``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for rep in reports:
        gdir = group_dir(out, rep.order, rep.group)
        hits = gdir / "hits"
        hits.mkdir(parents=True, exist_ok=True)
        for r in rep.records:
            stem = hit_stem(r)
            (hits / f"{stem}.g6").write_text(r.graph6 + "\n")
            (hits / f"{stem}.cert.json").write_text(json.dumps(r.to_dict(), indent=1) + "\n")
        (gdir / "report.json").write_text(rep.to_json())
    csv = format_csv(table_rows(reports))
    totals = dedup_cross_group(reports).totals_line() + "\n"
    (out / "table1.csv").write_text(csv)
    (out / "totals.txt").write_text(totals)
    return csv, totals


def rebuild_from_results(out: str | Path, verify=None) -> tuple[list[GroupReport], str, str]:
    """Recompute class tables from the stored graph6 files alone.

    Every hit is re-parsed, re-certified and re-canonicalized; a failure
    raises :class:`SearchError` naming the file.
    """
    out = Path(out)
    reports = []
    for rep_path in sorted(out.glob("*/*/report.json")):
        meta = json.loads(rep_path.read_text())
        rep = GroupReport(meta["group"], meta["order"], meta["degree_min"], meta["degree_max"])
        for g6 in sorted((rep_path.parent / "hits").glob("*.g6")):
            try:
                graph = from_graph6(g6.read_text())
                cert = is_nuciferous(graph)
            except Exception as exc:
                raise SearchError(f"{g6}: cannot re-certify: {exc}") from exc
            if not cert.nuciferous:
                raise SearchError(f"{g6}: re-certification gives {cert.verdict.value}")
            if graph.n != rep.order or graph.degree is None:
                raise SearchError(f"{g6}: not a regular graph of order {rep.order}")
            if verify:
                verify(graph, cert)
            canon = canonical_form(graph)
            nbrs = tuple(v for v in range(graph.n) if graph.rows[0] >> v & 1)
            rep.records.append(SearchRecord(degree=graph.degree, cert=canon.hex, elements=nbrs,
                                            group=rep.group, det=cert.det, graph6=to_graph6(graph)))
        rep.records.sort()
        reports.append(rep)
    csv = format_csv(table_rows(reports))
    totals = dedup_cross_group(reports).totals_line() + "\n"
    return reports, csv, totals
