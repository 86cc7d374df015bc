"""Core temporal graph model.

A temporal graph is a fixed vertex set 0..n-1 plus a set of undirected
edges that each exist at a single integer time step.  Journeys traverse
edges in non-decreasing ("non-strict") or strictly increasing ("strict")
time order; most connectivity notions here come in both flavours.

Everything in this module is immutable after construction and safe to
share between threads; all operations are pure functions of their inputs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

STRICT = "strict"
NON_STRICT = "non-strict"
SEMANTICS = (STRICT, NON_STRICT)


class InvalidCandidateError(ValueError):
    """An edge set offered for augmentation overlaps the graph or is malformed."""


class ParseError(ValueError):
    """Input text could not be parsed; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _check_semantics(semantics: str) -> None:
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}, expected one of {SEMANTICS}")


@dataclass(frozen=True, slots=True)
class TemporalEdge:
    """An undirected edge present at one time step.

    Endpoints are normalized so that ``u < v``; self-loops and
    non-positive times are rejected.
    """

    u: int
    v: int
    t: int

    def __post_init__(self):
        u, v, t = self.u, self.v, self.t
        if not (isinstance(u, int) and isinstance(v, int) and isinstance(t, int)):
            raise ValueError(f"temporal edge fields must be ints, got ({u!r}, {v!r}, {t!r})")
        if u == v:
            raise ValueError(f"self-loop on vertex {u} is not allowed")
        if t < 1:
            raise ValueError(f"edge time must be >= 1, got {t}")
        if u > v:
            object.__setattr__(self, "u", v)
            object.__setattr__(self, "v", u)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def key(self) -> tuple[int, int, int]:
        """Canonical sort key: (time, min endpoint, max endpoint)."""
        return (self.t, self.u, self.v)

    def __str__(self) -> str:
        return f"{{{self.u},{self.v}}}@{self.t}"


def sorted_edges(edges: Iterable[TemporalEdge]) -> tuple[TemporalEdge, ...]:
    """Canonical ordering used for every deterministic output."""
    return tuple(sorted(edges, key=lambda e: e.key))


@dataclass(frozen=True)
class SnapshotComponents:
    """Partition of all vertices into the connected components of one snapshot.

    Blocks are sorted internally and ordered by smallest member; isolated
    vertices appear as singleton blocks, so the blocks always cover 0..n-1.
    """

    time: int
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, v: int) -> tuple[int, ...]:
        for b in self.blocks:
            if v in b:
                return b
        raise ValueError(f"vertex {v} not covered by this partition")


@dataclass(frozen=True)
class Journey:
    """A hop sequence certifying reachability.

    ``hops`` is a tuple of (from, to, time) triples; consecutive hops chain
    and times are non-decreasing (non-strict) or strictly increasing
    (strict) per the carried ``semantics`` tag.  The empty journey is a
    valid journey from any vertex to itself.
    """

    hops: tuple[tuple[int, int, int], ...]
    semantics: str = NON_STRICT

    def __post_init__(self):
        _check_semantics(self.semantics)
        prev_to = None
        prev_t = None
        for frm, to, t in self.hops:
            if prev_to is not None and frm != prev_to:
                raise ValueError(f"hops do not chain: {prev_to} -> {frm}")
            if prev_t is not None:
                if self.semantics == STRICT and not prev_t < t:
                    raise ValueError(f"strict journey needs increasing times, got {prev_t} then {t}")
                if self.semantics == NON_STRICT and not prev_t <= t:
                    raise ValueError(f"journey times must be non-decreasing, got {prev_t} then {t}")
            prev_to, prev_t = to, t

    def __len__(self) -> int:
        return len(self.hops)

    @property
    def start(self) -> int | None:
        return self.hops[0][0] if self.hops else None

    @property
    def end(self) -> int | None:
        return self.hops[-1][1] if self.hops else None

    def is_valid_in(self, g: "TemporalGraph") -> bool:
        """True iff every hop uses an edge present in ``g``."""
        return all(TemporalEdge(frm, to, t) in g.edges for frm, to, t in self.hops)


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable temporal graph on vertices 0..n-1.

    ``lifespan`` defaults to the maximum edge time (0 when edgeless) and may
    be overridden upwards, e.g. so an empty graph can still host candidate
    edges at later times.  Use :meth:`build` to construct from an arbitrary
    edge iterable with duplicate detection.
    """

    n: int
    edges: frozenset[TemporalEdge] = frozenset()
    lifespan: int = 0
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        max_t = 0
        for e in self.edges:
            if not 0 <= e.u < self.n or not 0 <= e.v < self.n:
                raise ValueError(f"edge {e} has endpoints outside 0..{self.n - 1}")
            if e.t > max_t:
                max_t = e.t
        if self.lifespan < max_t:
            raise ValueError(f"lifespan {self.lifespan} is below the maximum edge time {max_t}")
        if self.names is not None:
            if len(self.names) != self.n:
                raise ValueError("name table size must equal the vertex count")
            if len(set(self.names)) != self.n:
                raise ValueError("vertex names must be unique")

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[TemporalEdge] = (),
        lifespan: int | None = None,
        names: tuple[str, ...] | None = None,
    ) -> "TemporalGraph":
        edge_list = list(edges)
        edge_set = frozenset(edge_list)
        if len(edge_set) != len(edge_list):
            dupes = sorted_edges(e for e in edge_set if edge_list.count(e) > 1)
            raise ValueError(f"duplicate temporal edges: {', '.join(map(str, dupes))}")
        max_t = max((e.t for e in edge_set), default=0)
        return cls(n, edge_set, max_t if lifespan is None else lifespan, names)

    # -- basic queries -------------------------------------------------

    @cached_property
    def edges_sorted(self) -> tuple[TemporalEdge, ...]:
        return sorted_edges(self.edges)

    @cached_property
    def max_edge_time(self) -> int:
        return max((e.t for e in self.edges), default=0)

    @cached_property
    def is_simple(self) -> bool:
        """True iff every endpoint pair carries exactly one time label."""
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if e.pair in seen:
                return False
            seen.add(e.pair)
        return True

    @cached_property
    def _edges_by_time(self) -> dict[int, tuple[TemporalEdge, ...]]:
        buckets: dict[int, list[TemporalEdge]] = defaultdict(list)
        for e in self.edges_sorted:
            buckets[e.t].append(e)
        return {t: tuple(es) for t, es in buckets.items()}

    @cached_property
    def _edge_times(self) -> tuple[int, ...]:
        return tuple(sorted(self._edges_by_time))

    @cached_property
    def _full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _comp_cache(self) -> dict[int, tuple[int, ...]]:
        return {}

    def with_lifespan(self, lifespan: int) -> "TemporalGraph":
        """Same graph with an explicit lifespan override."""
        return TemporalGraph(self.n, self.edges, lifespan, self.names)

    # -- snapshots and components ---------------------------------------

    def _check_time(self, t: int) -> None:
        if not 1 <= t <= self.lifespan:
            raise ValueError(f"time {t} out of range 1..{self.lifespan}")

    def snapshot(self, t: int) -> tuple[tuple[int, int], ...]:
        """Endpoint pairs of the edges present at time t, sorted."""
        self._check_time(t)
        return tuple(e.pair for e in self._edges_by_time.get(t, ()))

    def _component_masks(self, t: int) -> tuple[int, ...]:
        """Vertex bitmasks of the snapshot components at time t.

        Ordered by smallest member; cached per time step.  Valid for any
        t >= 1 (steps past the last edge are all-singleton).
        """
        cached = self._comp_cache.get(t)
        if cached is not None:
            return cached
        adj: dict[int, list[int]] = defaultdict(list)
        for e in self._edges_by_time.get(t, ()):
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        masks: list[int] = []
        seen = 0
        for start in range(self.n):
            if seen >> start & 1:
                continue
            mask = 1 << start
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj.get(x, ()):
                    if not mask >> y & 1:
                        mask |= 1 << y
                        stack.append(y)
            seen |= mask
            masks.append(mask)
        result = tuple(masks)
        self._comp_cache[t] = result
        return result

    def snapshot_components(self, t: int) -> SnapshotComponents:
        """Connected components of the snapshot at time t as a partition."""
        self._check_time(t)
        blocks = tuple(_mask_to_block(m) for m in self._component_masks(t))
        return SnapshotComponents(t, blocks)

    # -- reachability ----------------------------------------------------

    def _reach_mask(self, source: int, semantics: str) -> int:
        if semantics == NON_STRICT:
            reach = 1 << source
            for t in self._edge_times:
                for m in self._component_masks(t):
                    if m & reach:
                        reach |= m
            return reach
        # strict: at each time step a journey takes at most one hop, so the
        # frontier usable at time t is exactly what arrived strictly earlier
        before = 1 << source
        for t in self._edge_times:
            new = 0
            for e in self._edges_by_time[t]:
                bu, bv = 1 << e.u, 1 << e.v
                if before & bu:
                    new |= bv
                if before & bv:
                    new |= bu
            before |= new
        return before

    def reachable_set(self, source: int, semantics: str = NON_STRICT) -> frozenset[int]:
        """Vertices reachable from ``source`` by a journey (always contains it)."""
        _check_semantics(semantics)
        if not 0 <= source < self.n:
            raise ValueError(f"vertex {source} out of range 0..{self.n - 1}")
        return frozenset(_mask_to_block(self._reach_mask(source, semantics)))

    def is_temporally_connected(self, semantics: str = NON_STRICT) -> bool:
        """True iff every vertex reaches every other; n <= 1 counts as connected."""
        _check_semantics(semantics)
        if self.n <= 1:
            return True
        full = self._full_mask
        return all(self._reach_mask(s, semantics) == full for s in range(self.n))

    def check_property_p(self) -> bool:
        """Chain-of-overlapping-components test, equivalent to non-strict connectivity.

        For every component of the first snapshot, walk forward one time
        step at a time, closing over every component that intersects the
        current vertex set.  The test succeeds iff each walk ends covering
        all vertices, i.e. every first-step component links to every
        last-step component through per-step components with pairwise
        non-empty intersections.
        """
        if self.lifespan < 1:
            raise ValueError("requires lifespan >= 1")
        full = self._full_mask
        later_times = [t for t in self._edge_times if t > 1]
        for start_mask in self._component_masks(1):
            reach = start_mask
            for t in later_times:
                grown = 0
                for m in self._component_masks(t):
                    if m & reach:
                        grown |= m
                reach = grown
            if reach != full:
                return False
        return True

    # -- augmentation ----------------------------------------------------

    def augment(self, extra: Iterable[TemporalEdge]) -> "TemporalGraph":
        """Graph with ``extra`` added; lifespan extends to cover the new edges.

        Raises :class:`InvalidCandidateError` if any added edge already
        exists (candidate sets are disjoint from the graph by definition).
        """
        extra_list = list(extra)
        extra_set = frozenset(extra_list)
        if len(extra_set) != len(extra_list):
            raise InvalidCandidateError("duplicate edges in the added set")
        overlap = extra_set & self.edges
        if overlap:
            raise InvalidCandidateError(
                f"edges already present: {', '.join(map(str, sorted_edges(overlap)))}"
            )
        for e in extra_set:
            if not 0 <= e.u < self.n or not 0 <= e.v < self.n:
                raise InvalidCandidateError(f"edge {e} has endpoints outside 0..{self.n - 1}")
        lifespan = max(self.lifespan, max((e.t for e in extra_set), default=0))
        return TemporalGraph(self.n, self.edges | extra_set, lifespan, self.names)


def _mask_to_block(mask: int) -> tuple[int, ...]:
    block = []
    v = 0
    while mask:
        if mask & 1:
            block.append(v)
        mask >>= 1
        v += 1
    return tuple(block)


def validate_journey(g: TemporalGraph, journey: Journey, start: int | None = None) -> bool:
    """True iff ``journey`` is a valid journey of ``g`` (optionally from ``start``)."""
    if start is not None and journey.hops and journey.start != start:
        return False
    return journey.is_valid_in(g)


def find_journey(
    g: TemporalGraph, source: int, target: int, semantics: str = NON_STRICT
) -> Journey | None:
    """An explicit witness journey from source to target, or None.

    Deterministic: the reconstruction always follows the earliest arrival
    and smallest-vertex tie-breaks, so equal inputs give equal journeys.
    """
    _check_semantics(semantics)
    for v in (source, target):
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range 0..{g.n - 1}")
    if source == target:
        return Journey((), semantics)

    if semantics == STRICT:
        pred: dict[int, tuple[int, int]] = {}
        before = 1 << source
        for t in g._edge_times:
            new: dict[int, tuple[int, int]] = {}
            for e in g._edges_by_time[t]:
                if before >> e.u & 1 and not before >> e.v & 1 and e.v not in new:
                    new[e.v] = (e.u, t)
                if before >> e.v & 1 and not before >> e.u & 1 and e.u not in new:
                    new[e.u] = (e.v, t)
            for v, p in new.items():
                pred[v] = p
                before |= 1 << v
        if not before >> target & 1:
            return None
        hops = []
        v = target
        while v != source:
            u, t = pred[v]
            hops.append((u, v, t))
            v = u
        return Journey(tuple(reversed(hops)), STRICT)

    # non-strict: record, for each newly absorbed component, the anchor
    # vertex that was already reached; expand anchors to hop paths later.
    entry: dict[int, tuple[int, int]] = {}  # vertex -> (time, anchor)
    reach = 1 << source
    for t in g._edge_times:
        for m in g._component_masks(t):
            inter = m & reach
            if inter and m & ~reach:
                anchor = (inter & -inter).bit_length() - 1
                for v in _mask_to_block(m & ~reach):
                    entry[v] = (t, anchor)
                reach |= m
    if not reach >> target & 1:
        return None

    def static_path(t: int, a: int, b: int) -> list[tuple[int, int, int]]:
        # BFS within the snapshot at time t, smallest-neighbour first
        adj: dict[int, list[int]] = defaultdict(list)
        for e in g._edges_by_time[t]:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        prev = {a: None}
        queue = [a]
        while queue:
            x = queue.pop(0)
            if x == b:
                break
            for y in sorted(adj.get(x, ())):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        path = []
        v = b
        while prev[v] is not None:
            path.append((prev[v], v, t))
            v = prev[v]
        return list(reversed(path))

    hops: list[tuple[int, int, int]] = []
    chain: list[tuple[int, int, int]] = []  # (time, anchor, vertex) from target back
    v = target
    while v != source:
        t, anchor = entry[v]
        chain.append((t, anchor, v))
        v = anchor
    for t, anchor, v in reversed(chain):
        hops.extend(static_path(t, anchor, v))
    return Journey(tuple(hops), NON_STRICT)


# -- text and JSON formats ------------------------------------------------


def parse_tg(text: str) -> TemporalGraph:
    """Parse the ``.tg`` temporal graph format.

    One record per line, ``#`` starts a comment.  ``V <n>`` is required and
    must precede every edge line; ``T <lifespan>`` optionally overrides the
    lifespan; ``E <u> <v> <t1> [<t2> ...]`` expands to one temporal edge per
    listed time.
    """
    n: int | None = None
    override: int | None = None
    edges: list[TemporalEdge] = []
    seen: set[tuple[int, int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "V":
            if n is not None:
                raise ParseError("duplicate V record", lineno)
            n = _parse_int(parts, 1, lineno, "vertex count")
            if len(parts) != 2:
                raise ParseError("V record takes exactly one value", lineno)
            if n < 0:
                raise ParseError("vertex count must be non-negative", lineno)
        elif kind == "T":
            if override is not None:
                raise ParseError("duplicate T record", lineno)
            if n is not None:
                raise ParseError("T record must precede V", lineno)
            override = _parse_int(parts, 1, lineno, "lifespan")
            if len(parts) != 2:
                raise ParseError("T record takes exactly one value", lineno)
        elif kind == "E":
            if n is None:
                raise ParseError("edge record before V", lineno)
            if len(parts) < 4:
                raise ParseError("edge record needs two endpoints and at least one time", lineno)
            u = _parse_int(parts, 1, lineno, "endpoint")
            v = _parse_int(parts, 2, lineno, "endpoint")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"endpoint out of range 0..{n - 1}", lineno)
            if u == v:
                raise ParseError("self-loops are not allowed", lineno)
            for idx in range(3, len(parts)):
                t = _parse_int(parts, idx, lineno, "time")
                if t < 1:
                    raise ParseError("time steps must be >= 1", lineno)
                key = (min(u, v), max(u, v), t)
                if key in seen:
                    raise ParseError(f"duplicate temporal edge {{{u},{v}}}@{t}", lineno)
                seen.add(key)
                edges.append(TemporalEdge(u, v, t))
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)
    if n is None:
        raise ParseError("missing V record")
    max_t = max((e.t for e in edges), default=0)
    if override is not None and override < max_t:
        raise ParseError(f"declared lifespan {override} is below the maximum edge time {max_t}")
    return TemporalGraph.build(n, edges, lifespan=override if override is not None else None)


def _parse_int(parts: list[str], idx: int, lineno: int, what: str) -> int:
    try:
        return int(parts[idx])
    except (IndexError, ValueError):
        raise ParseError(f"expected integer {what}", lineno) from None


def format_tg(g: TemporalGraph) -> str:
    """Serialize to the ``.tg`` format (stable output, groups times per pair)."""
    lines = []
    if g.lifespan != g.max_edge_time:
        lines.append(f"T {g.lifespan}")
    lines.append(f"V {g.n}")
    by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
    for e in g.edges_sorted:
        by_pair[e.pair].append(e.t)
    for (u, v), times in sorted(by_pair.items()):
        lines.append(f"E {u} {v} " + " ".join(str(t) for t in sorted(times)))
    return "\n".join(lines) + "\n"


def parse_candidates(text: str) -> tuple[TemporalEdge, ...]:
    """Parse the ``.cand`` candidate set format: one ``E <u> <v> <t>`` per line."""
    edges: list[TemporalEdge] = []
    seen: set[TemporalEdge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "E" or len(parts) != 4:
            raise ParseError("expected 'E <u> <v> <t>'", lineno)
        u = _parse_int(parts, 1, lineno, "endpoint")
        v = _parse_int(parts, 2, lineno, "endpoint")
        t = _parse_int(parts, 3, lineno, "time")
        if u == v:
            raise ParseError("self-loops are not allowed", lineno)
        if t < 1:
            raise ParseError("time steps must be >= 1", lineno)
        e = TemporalEdge(u, v, t)
        if e in seen:
            raise ParseError(f"duplicate candidate {e}", lineno)
        seen.add(e)
        edges.append(e)
    return sorted_edges(edges)


def format_candidates(edges: Iterable[TemporalEdge]) -> str:
    return "".join(f"E {e.u} {e.v} {e.t}\n" for e in sorted_edges(edges))


def graph_to_json(g: TemporalGraph) -> dict:
    """JSON-ready mirror of the ``.tg`` fields."""
    data = {
        "n": g.n,
        "lifespan": g.lifespan,
        "edges": [[e.u, e.v, e.t] for e in g.edges_sorted],
    }
    if g.names is not None:
        data["names"] = list(g.names)
    return data


def graph_from_json(data: dict) -> TemporalGraph:
    names = tuple(data["names"]) if "names" in data else None
    return TemporalGraph.build(
        data["n"],
        (TemporalEdge(u, v, t) for u, v, t in data["edges"]),
        lifespan=data.get("lifespan"),
        names=names,
    )
