"""Hiring records and the weighted directed hiring network built from them.

The network is an immutable multigraph over institutions: the weight of edge
(i, j) counts the people who earned a Ph.D. at institution i and were hired
by institution j. Edge direction therefore always runs producer -> employer.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyNetworkError, RecordFormatError

RECORDS_HEADER = ("person_id", "phd_institution", "phd_year", "discipline", "hire_institution")
EDGES_HEADER = ("src", "dst", "weight")


@dataclass(frozen=True)
class HiringRecord:
    """One person's doctoral origin, graduation year, discipline, and destination."""

    person_id: str
    phd_institution: str
    phd_year: int
    discipline: str
    hire_institution: str


@dataclass(frozen=True)
class NetworkFilter:
    """Record predicate combining a half-open year range, a discipline set, and a whitelist.

    The whitelist keeps a record only if BOTH endpoints are whitelisted; a
    half-open range [start, end) partitions cohorts without double counting.
    """

    year_range: tuple[int, int] | None = None
    disciplines: frozenset[str] | None = None
    whitelist: frozenset[str] | None = None

    def __post_init__(self):
        if self.year_range is not None:
            start, end = self.year_range
            if not start < end:
                raise ValueError(f"year_range must satisfy start < end, got [{start}, {end})")
            object.__setattr__(self, "year_range", (int(start), int(end)))
        if self.disciplines is not None:
            object.__setattr__(self, "disciplines", frozenset(self.disciplines))
        if self.whitelist is not None:
            object.__setattr__(self, "whitelist", frozenset(self.whitelist))

    def keep(self, rec: HiringRecord) -> bool:
        if self.year_range is not None and not self.year_range[0] <= rec.phd_year < self.year_range[1]:
            return False
        if self.disciplines is not None and rec.discipline not in self.disciplines:
            return False
        if self.whitelist is not None and (
            rec.phd_institution not in self.whitelist or rec.hire_institution not in self.whitelist
        ):
            return False
        return True


class NodeRegistry:
    """Bijection between institution names and dense ids 0..N-1.

    Ids are assigned lexicographically by name, so identical name sets always
    yield identical registries.
    """

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(sorted(set(names)))
        self.index: dict[str, int] = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def id_of(self, name: str) -> int:
        return self.index[name]

    def name_of(self, node: int) -> str:
        return self.names[node]

    def __eq__(self, other) -> bool:
        return isinstance(other, NodeRegistry) and self.names == other.names

    def __repr__(self):
        return f"NodeRegistry({len(self)} institutions)"


class HiringNetwork:
    """Immutable weighted directed multigraph of Ph.D. placements.

    Edges are stored as parallel arrays (src, dst, weight) sorted by
    (src, dst) with no duplicate pairs and all weights >= 1. Safe for
    concurrent shared reads after construction.
    """

    __slots__ = ("registry", "src", "dst", "weight", "n_nodes", "total_weight",
                 "self_loop_weight", "_csr_cache", "_weight_map")

    def __init__(self, registry: NodeRegistry, src: np.ndarray, dst: np.ndarray, weight: np.ndarray):
        n = len(registry)
        src = np.ascontiguousarray(src, dtype=np.int32)
        dst = np.ascontiguousarray(dst, dtype=np.int32)
        weight = np.ascontiguousarray(weight, dtype=np.int64)
        if not (len(src) == len(dst) == len(weight)):
            raise ValueError("src, dst, weight must have equal length")
        if len(src) == 0:
            raise EmptyNetworkError("network has no edges")
        if src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n:
            raise ValueError("edge endpoint outside registry")
        if weight.min() < 1:
            raise ValueError("all stored weights must be >= 1")
        order = np.lexsort((dst, src))
        src, dst, weight = src[order], dst[order], weight[order]
        pair_key = src.astype(np.int64) * n + dst
        if len(pair_key) > 1 and (np.diff(pair_key) == 0).any():
            raise ValueError("duplicate (src, dst) pairs; aggregate weights first")
        for arr in (src, dst, weight):
            arr.setflags(write=False)
        self.registry = registry
        self.src, self.dst, self.weight = src, dst, weight
        self.n_nodes = n
        self.total_weight = int(weight.sum())
        self.self_loop_weight = int(weight[src == dst].sum())
        self._csr_cache = None
        self._weight_map = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_records(cls, records: Sequence[HiringRecord], flt: NetworkFilter | None = None) -> "HiringNetwork":
        if flt is not None:
            records = [r for r in records if flt.keep(r)]
        if not records:
            raise EmptyNetworkError("no records survive filtering; cannot build an empty network")
        names = set()
        for r in records:
            names.add(r.phd_institution)
            names.add(r.hire_institution)
        registry = NodeRegistry(names)
        counts: dict[tuple[int, int], int] = {}
        for r in records:
            key = (registry.id_of(r.phd_institution), registry.id_of(r.hire_institution))
            counts[key] = counts.get(key, 0) + 1
        return cls._from_counts(registry, counts)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, int]]) -> "HiringNetwork":
        """Build from (src_name, dst_name, weight) triples; duplicate pairs are summed."""
        edges = list(edges)
        if not edges:
            raise EmptyNetworkError("no edges given")
        names = set()
        for s, d, _ in edges:
            names.add(s)
            names.add(d)
        registry = NodeRegistry(names)
        counts: dict[tuple[int, int], int] = {}
        for s, d, w in edges:
            w = int(w)
            if w < 1:
                raise ValueError(f"edge weight must be >= 1, got {w} on {s}->{d}")
            key = (registry.id_of(s), registry.id_of(d))
            counts[key] = counts.get(key, 0) + w
        return cls._from_counts(registry, counts)

    @classmethod
    def _from_counts(cls, registry: NodeRegistry, counts: Mapping[tuple[int, int], int]) -> "HiringNetwork":
        pairs = sorted(counts)
        src = np.fromiter((p[0] for p in pairs), dtype=np.int32, count=len(pairs))
        dst = np.fromiter((p[1] for p in pairs), dtype=np.int32, count=len(pairs))
        weight = np.fromiter((counts[p] for p in pairs), dtype=np.int64, count=len(pairs))
        return cls(registry, src, dst, weight)

    @classmethod
    def from_unit_edges(cls, registry: NodeRegistry, usrc: np.ndarray, udst: np.ndarray) -> "HiringNetwork":
        """Aggregate unit edges (one per placement) into weights, keeping the registry."""
        n = len(registry)
        keys = np.asarray(usrc, dtype=np.int64) * n + np.asarray(udst, dtype=np.int64)
        uniq, counts = np.unique(keys, return_counts=True)
        return cls(registry, (uniq // n).astype(np.int32), (uniq % n).astype(np.int32), counts)

    # -- views ---------------------------------------------------------------

    def weight_of(self, i: int, j: int) -> int:
        if self._weight_map is None:
            self._weight_map = {
                (int(s), int(d)): int(w) for s, d, w in zip(self.src, self.dst, self.weight)
            }
        return self._weight_map.get((i, j), 0)

    def degree_sequences(self) -> tuple[np.ndarray, np.ndarray]:
        """Weighted (out_degree, in_degree); both sum to total_weight."""
        out_deg = np.zeros(self.n_nodes, dtype=np.int64)
        in_deg = np.zeros(self.n_nodes, dtype=np.int64)
        np.add.at(out_deg, self.src, self.weight)
        np.add.at(in_deg, self.dst, self.weight)
        return out_deg, in_deg

    def unit_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Expand weights into one edge per placement."""
        reps = self.weight
        return np.repeat(self.src, reps), np.repeat(self.dst, reps)

    def csr(self):
        """(out_indptr, out_indices, out_weights, in_indptr, in_indices, in_weights)."""
        if self._csr_cache is None:
            n = self.n_nodes
            out_indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.src, minlength=n), out=out_indptr[1:])
            in_order = np.lexsort((self.src, self.dst))
            in_indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.dst, minlength=n), out=in_indptr[1:])
            self._csr_cache = (
                out_indptr,
                self.dst.copy(),
                self.weight.copy(),
                in_indptr,
                self.src[in_order].copy(),
                self.weight[in_order].copy(),
            )
        return self._csr_cache

    @property
    def n_edges(self) -> int:
        """Number of distinct directed edges (weight entries)."""
        return len(self.weight)

    def nonloop_weight(self) -> int:
        return self.total_weight - self.self_loop_weight

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HiringNetwork)
            and self.registry == other.registry
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    def __repr__(self):
        return (f"HiringNetwork(N={self.n_nodes}, edges={self.n_edges}, "
                f"total_weight={self.total_weight})")


# -- spec-level operation aliases ------------------------------------------


def build_network(records: Sequence[HiringRecord], flt: NetworkFilter | None = None) -> HiringNetwork:
    return HiringNetwork.from_records(records, flt)


def degree_sequences(net: HiringNetwork) -> tuple[np.ndarray, np.ndarray]:
    return net.degree_sequences()


# -- CSV I/O -----------------------------------------------------------------


def _text_stream(source) -> IO[str]:
    if isinstance(source, str):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    if hasattr(source, "read"):
        probe = source.read(0)
        if isinstance(probe, bytes):
            return io.TextIOWrapper(source, encoding="utf-8", newline="")
        return source
    raise TypeError(f"cannot read CSV from {type(source).__name__}")


def _check_header(got: list[str] | None, expected: tuple[str, ...], what: str):
    if got is None:
        raise RecordFormatError(f"{what} is empty: missing header row")
    got = [h.strip() for h in got]
    if got == list(expected):
        return
    missing = [c for c in expected if c not in got]
    if missing:
        raise RecordFormatError(f"{what} header is missing column(s): {', '.join(missing)}")
    raise RecordFormatError(
        f"{what} header must be exactly {','.join(expected)}, got {','.join(got)}"
    )


def load_records(source) -> list[HiringRecord]:
    """Read hiring records from a UTF-8 CSV path or stream (text or bytes).

    The header must be exactly ``person_id,phd_institution,phd_year,
    discipline,hire_institution``. Fields are whitespace-trimmed; row order
    is preserved. Raises RecordFormatError with the offending line number.
    """
    stream = _text_stream(source)
    reader = csv.reader(stream)
    header = next(reader, None)
    _check_header(header, RECORDS_HEADER, "records CSV")
    records = []
    for row in reader:
        if not row:
            continue  # blank line, not a data row
        line = reader.line_num
        if len(row) != len(RECORDS_HEADER):
            raise RecordFormatError(f"expected {len(RECORDS_HEADER)} fields, got {len(row)}", line)
        person_id, phd_inst, year_s, discipline, hire_inst = (f.strip() for f in row)
        if not phd_inst:
            raise RecordFormatError("phd_institution is empty", line)
        if not hire_inst:
            raise RecordFormatError("hire_institution is empty", line)
        try:
            year = int(year_s)
        except ValueError:
            raise RecordFormatError(f"phd_year is not an integer: {year_s!r}", line) from None
        if year <= 0:
            raise RecordFormatError(f"phd_year must be positive, got {year}", line)
        records.append(HiringRecord(person_id, phd_inst, year, discipline, hire_inst))
    return records


def write_records_csv(records: Sequence[HiringRecord], dest) -> None:
    own = isinstance(dest, str)
    stream = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(RECORDS_HEADER)
        for r in records:
            w.writerow([r.person_id, r.phd_institution, r.phd_year, r.discipline, r.hire_institution])
    finally:
        if own:
            stream.close()


def load_whitelist(source) -> frozenset[str]:
    """One institution name per line; blank lines ignored."""
    stream = _text_stream(source)
    return frozenset(line.strip() for line in stream if line.strip())


def write_edge_csv(net: HiringNetwork, dest) -> None:
    """Edge list with header ``src,dst,weight``, rows sorted by (src name, dst name)."""
    own = isinstance(dest, str)
    stream = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(EDGES_HEADER)
        names = net.registry.names
        for s, d, wt in zip(net.src, net.dst, net.weight):
            w.writerow([names[s], names[d], int(wt)])
    finally:
        if own:
            stream.close()


def load_edge_csv(source) -> HiringNetwork:
    """Load a ``src,dst,weight`` CSV; duplicate pairs are summed."""
    stream = _text_stream(source)
    reader = csv.reader(stream)
    header = next(reader, None)
    _check_header(header, EDGES_HEADER, "edge CSV")
    edges = []
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 3:
            raise RecordFormatError(f"expected 3 fields, got {len(row)}", line)
        s, d, w_s = (f.strip() for f in row)
        if not s or not d:
            raise RecordFormatError("institution name is empty", line)
        try:
            wt = int(w_s)
        except ValueError:
            raise RecordFormatError(f"weight is not an integer: {w_s!r}", line) from None
        if wt < 1:
            raise RecordFormatError(f"weight must be >= 1, got {wt}", line)
        edges.append((s, d, wt))
    if not edges:
        raise EmptyNetworkError("edge CSV has no data rows")
    return HiringNetwork.from_edges(edges)
