"""Hardness-gadget constructors with bidirectional witness maps.

Each reduction turns a classic combinatorial instance (dominating set,
hitting set, disjoint set covers, 3-SAT) into an equivalent augmentation
or matrix instance.  The constructors double as instance generators for
the solver CLI and as equivalence oracles in the test suite; the witness
maps translate solutions in both directions with the sizes the
equivalences promise.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .augmentation import (
    COST_EDGE,
    COST_GROUP,
    All,
    AugmentationProblem,
    Pairs,
    Source,
    verify_solution,
)
from .octo import COLS, ROWS, BinaryMatrix, MergeStep, apply_sequence
from .temporal_graph import (
    NON_STRICT,
    STRICT,
    ParseError,
    TemporalEdge,
    TemporalGraph,
    sorted_edges,
)

MODE_SIMPLE = "simple"
MODE_UNRESTRICTED = "unrestricted"
MODES = (MODE_SIMPLE, MODE_UNRESTRICTED)


@dataclass(frozen=True)
class StaticGraphInstance:
    """A simple undirected graph with a budget, for dominating set."""

    n: int
    edges: frozenset[tuple[int, int]]
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))


@dataclass(frozen=True)
class SetSystemInstance:
    """A universe 0..n-1, a collection of subsets, and a budget.

    Used both for hitting set (budget = max picked elements) and for
    disjoint set covers (budget = required number of covering parts).
    """

    universe_size: int
    subsets: tuple[frozenset[int], ...]
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if not self.subsets:
            raise ValueError("collection must be non-empty")
        for s in self.subsets:
            for e in s:
                if not 0 <= e < self.universe_size:
                    raise ValueError(f"element {e} outside universe 0..{self.universe_size - 1}")


@dataclass(frozen=True)
class CnfInstance:
    """A 3-CNF formula; literals are DIMACS style (+/- 1-based variable numbers)."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        if not self.clauses:
            raise ValueError("need at least one clause")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("clauses must have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range")
            if any(-lit in clause for lit in clause):
                raise ValueError("a clause may not contain a variable and its negation")


# -- dominating set -> strict 2-TCA -----------------------------------------


@dataclass(frozen=True)
class DominatingSetReduction:
    problem: AugmentationProblem
    x: int
    y: int


def reduce_dominating_set(
    inst: StaticGraphInstance, mode: str = MODE_SIMPLE
) -> DominatingSetReduction:
    """Strict full-connectivity instance equivalent to dominating set.

    Two fresh vertices x and y join the graph; the original edges and
    {x,y} exist at time 2, every other pair inside V+{y} at time 1.  All
    journeys into x exist already, so a solution must make x a source, and
    only edges ({x,v},1) ever help, which is exactly picking a dominating
    set.  Candidates are those n star edges (simple mode) or every missing
    temporal edge (unrestricted mode).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    n = inst.n
    x, y = n, n + 1
    names = tuple(str(v) for v in range(n)) + ("x", "y")
    edges = [TemporalEdge(x, y, 2)]
    edges.extend(TemporalEdge(u, v, 2) for u, v in inst.edges)
    inner = list(range(n)) + [y]
    for i, u in enumerate(inner):
        for v in inner[i + 1 :]:
            if (min(u, v), max(u, v)) not in inst.edges:
                edges.append(TemporalEdge(u, v, 1))
    base = TemporalGraph.build(n + 2, edges, lifespan=2, names=names)
    if mode == MODE_SIMPLE:
        candidates = frozenset(TemporalEdge(x, v, 1) for v in range(n))
    else:
        candidates = frozenset(
            TemporalEdge(u, v, t)
            for u in range(n + 2)
            for v in range(u + 1, n + 2)
            for t in (1, 2)
            if TemporalEdge(u, v, t) not in base.edges
        )
    problem = AugmentationProblem(base, candidates, All(), STRICT, COST_EDGE, inst.budget)
    return DominatingSetReduction(problem, x, y)


def ds_witness_to_edges(
    red: DominatingSetReduction, dominating: Iterable[int]
) -> frozenset[TemporalEdge]:
    """A dominating set becomes one time-1 star edge from x per chosen vertex."""
    return frozenset(TemporalEdge(red.x, u, 1) for u in dominating)


def ds_edges_to_witness(red: DominatingSetReduction, selected: Iterable[TemporalEdge]) -> frozenset[int]:
    """Normalize a valid connecting set into a dominating set of at most its size.

    Replays the dominance argument: time-1 edges not touching x are useless,
    a time-2 edge is only ever useful one hop after a (possibly replaced)
    time-1 star edge and moves to the star edge of its far endpoint, and
    edges meeting y never help.  Each selected edge contributes at most one
    vertex, so the result respects the budget.
    """
    x, y = red.x, red.y
    chosen = set(selected)
    star = {e.v if e.u == x else e.u for e in chosen if x in (e.u, e.v)}
    star.discard(y)
    late = [e for e in sorted_edges(chosen) if x not in (e.u, e.v) and e.t == 2]
    changed = True
    while changed:
        changed = False
        for e in late:
            if e.u in star and e.v not in star:
                star.add(e.v)
                changed = True
            elif e.v in star and e.u not in star:
                star.add(e.u)
                changed = True
    star.discard(y)
    witness = frozenset(star)
    if len(witness) > len(chosen):
        raise ValueError("normalization exceeded the witness size")
    return witness


# -- hitting set -> non-strict 2-TSA -----------------------------------------


@dataclass(frozen=True)
class HittingSetReduction:
    problem: AugmentationProblem
    x: int
    membership_vertices: tuple[tuple[int, int], ...]  # (element, set) per vertex, in id order
    set_vertices: tuple[int, ...]  # vertex id of each set

    def membership_id(self, element: int, subset: int) -> int:
        return 1 + self.membership_vertices.index((element, subset))


def reduce_hitting_set(
    inst: SetSystemInstance, mode: str = MODE_SIMPLE
) -> HittingSetReduction:
    """Non-strict source instance equivalent to hitting set.

    One vertex per (element, containing set) membership plus one per set; at
    time 1 the memberships of one element form a clique, at time 2 each
    membership connects to its set vertex.  Making x a source requires one
    time-1 edge from x into some membership of every set, i.e. a hitting set.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    for j, s in enumerate(inst.subsets):
        if not s:
            raise ValueError(f"subset {j} is empty")
    memberships = sorted(
        (e, j) for j, s in enumerate(inst.subsets) for e in s
    )
    x = 0
    member_id = {pair: 1 + k for k, pair in enumerate(memberships)}
    set_id = {j: 1 + len(memberships) + j for j in range(len(inst.subsets))}
    names = (
        ("x",)
        + tuple(f"e{e}S{j}" for e, j in memberships)
        + tuple(f"S{j}" for j in range(len(inst.subsets)))
    )
    edges = []
    by_element: dict[int, list[int]] = defaultdict(list)
    for e, j in memberships:
        by_element[e].append(member_id[(e, j)])
    for e in sorted(by_element):
        ids = by_element[e]
        edges.extend(
            TemporalEdge(a, b, 1) for i, a in enumerate(ids) for b in ids[i + 1 :]
        )
    for e, j in memberships:
        edges.append(TemporalEdge(member_id[(e, j)], set_id[j], 2))
    n = 1 + len(memberships) + len(inst.subsets)
    base = TemporalGraph.build(n, edges, lifespan=2, names=names)
    if mode == MODE_SIMPLE:
        candidates = frozenset(TemporalEdge(x, member_id[p], 1) for p in memberships)
    else:
        candidates = frozenset(
            TemporalEdge(u, v, t)
            for u in range(n)
            for v in range(u + 1, n)
            for t in (1, 2)
            if TemporalEdge(u, v, t) not in base.edges
        )
    problem = AugmentationProblem(
        base, candidates, Source(x), NON_STRICT, COST_EDGE, inst.budget
    )
    return HittingSetReduction(
        problem, x, tuple(memberships), tuple(set_id[j] for j in range(len(inst.subsets)))
    )


def hs_witness_to_edges(
    red: HittingSetReduction, inst: SetSystemInstance, hitting: Iterable[int]
) -> frozenset[TemporalEdge]:
    """Each picked element becomes an edge from x to its first membership vertex."""
    edges = set()
    for e in hitting:
        j = min(j for j, s in enumerate(inst.subsets) if e in s)
        edges.add(TemporalEdge(red.x, red.membership_id(e, j), 1))
    return frozenset(edges)


def hs_edges_to_witness(
    red: HittingSetReduction, selected: Iterable[TemporalEdge]
) -> frozenset[int]:
    """Normalize a valid source-making set into a hitting set of at most its size.

    Applies the replacement argument edge by edge: edges not touching x move
    to a star edge toward whichever endpoint x could not already reach
    (dropping them when x reaches neither endpoint in time), star edges into
    a set vertex shift to one of its memberships, and time-2 star edges move
    to time 1.  What remains reads off the hit elements directly.
    """
    problem = red.problem
    base = problem.base
    x = red.x
    member_of = {red.membership_id(e, j): (e, j) for e, j in red.membership_vertices}
    set_of = {v: j for j, v in enumerate(red.set_vertices)}
    current = set(selected)

    def reach_at(edges: set[TemporalEdge], horizon: int) -> int:
        g = base.augment(edges)
        reach = 1 << x
        for t in (1, 2):
            if t > horizon:
                break
            for m in g._component_masks(t):
                if m & reach:
                    reach |= m
        return reach

    # each round removes one nonconforming edge and adds at most one
    # conforming one, so the initial size bounds the rounds
    for _ in range(len(current) + 1):
        bad = sorted_edges(
            e
            for e in current
            if not (x in (e.u, e.v) and e.t == 1 and (e.v if e.u == x else e.u) in member_of)
        )
        if not bad:
            break
        e = bad[0]
        current.discard(e)
        if x in (e.u, e.v):
            other = e.v if e.u == x else e.u
            if other in member_of:
                current.add(TemporalEdge(x, other, 1))  # same edge, moved to time 1
            else:
                j = set_of[other]
                elem = min(inst_elem for inst_elem, jj in red.membership_vertices if jj == j)
                current.add(TemporalEdge(x, red.membership_id(elem, j), 1))
            continue
        without = reach_at(current, e.t)
        u_ok = without >> e.u & 1
        v_ok = without >> e.v & 1
        if not u_ok and not v_ok:
            continue  # useless: x cannot arrive at either endpoint in time
        target = e.v if u_ok else e.u
        if target in member_of:
            current.add(TemporalEdge(x, target, 1))
        elif target in set_of:
            j = set_of[target]
            elem = min(el for el, jj in red.membership_vertices if jj == j)
            current.add(TemporalEdge(x, red.membership_id(elem, j), 1))
        # a replacement toward x itself cannot occur: x is an endpoint case above
    hit = set()
    for e in current:
        other = e.v if e.u == x else e.u
        elem, _ = member_of[other]
        hit.add(elem)
    return frozenset(hit)


# -- disjoint set covers -> OCTO ---------------------------------------------


@dataclass(frozen=True)
class DscReduction:
    matrix: BinaryMatrix
    budget: int  # OR-combination budget m - K


def reduce_dsc(inst: SetSystemInstance) -> DscReduction:
    """Matrix whose one-filling within m-K merges means K disjoint covers exist.

    Row block i of the n(m+1)-row matrix marks which subsets contain element
    i mod n; repeating the block m+1 times makes row merges unaffordable, so
    any within-budget solution merges columns only, grouping the subsets
    into covers.
    """
    if inst.budget < 1:
        raise ValueError("cover target must be at least 1")
    n, m = inst.universe_size, len(inst.subsets)
    if n < 1:
        raise ValueError("universe must be non-empty")
    rows = tuple(
        tuple(1 if (i % n) in s else 0 for s in inst.subsets) for i in range(n * (m + 1))
    )
    return DscReduction(BinaryMatrix(rows), m - inst.budget)


def dsc_witness_to_steps(
    inst: SetSystemInstance, parts: Sequence[Iterable[int]]
) -> tuple[MergeStep, ...]:
    """A partition into covers becomes the column merges inside each part."""
    steps = []
    seen: set[int] = set()
    for part in sorted(tuple(sorted(p)) for p in parts):
        if not part:
            raise ValueError("empty part")
        for j in part:
            if j in seen or not 0 <= j < len(inst.subsets):
                raise ValueError(f"column {j} repeated or out of range")
            seen.add(j)
        head = part[0]
        steps.extend(MergeStep(COLS, head, j) for j in part[1:])
    if len(seen) != len(inst.subsets):
        raise ValueError("parts must partition the whole collection")
    return tuple(steps)


def dsc_steps_to_witness(
    inst: SetSystemInstance, red: DscReduction, steps: Sequence[MergeStep]
) -> tuple[tuple[int, ...], ...]:
    """Extract a partition into covering parts from a one-filling merge history.

    Useless row merges (those whose removal still one-fills) are dropped
    first; the column groups of the remaining history are each checked to
    cover the universe, and any non-covering leftovers are absorbed into the
    first covering part.
    """
    kept = list(steps)
    if not apply_sequence(red.matrix, kept).is_one_filled:
        raise ValueError("history does not one-fill the matrix")
    for step in list(kept):
        if step.axis == ROWS:
            trial = [s for s in kept if s is not step]
            if apply_sequence(red.matrix, trial).is_one_filled:
                kept = trial
    groups: dict[int, set[int]] = {j: {j} for j in range(len(inst.subsets))}
    reps: dict[int, int] = {j: j for j in range(len(inst.subsets))}

    def find(j: int) -> int:
        while reps[j] != j:
            reps[j] = reps[reps[j]]
            j = reps[j]
        return j

    for step in kept:
        if step.axis != COLS:
            raise ValueError("history still contains a meaningful row merge")
        a, b = find(step.i), find(step.j)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            reps[hi] = lo
            groups[lo] |= groups[hi]
            del groups[hi]
    universe = set(range(inst.universe_size))
    parts = [tuple(sorted(g)) for _, g in sorted(groups.items())]
    covering = [p for p in parts if set().union(*(inst.subsets[j] for j in p)) >= universe]
    rest = [p for p in parts if p not in covering]
    if not covering:
        raise ValueError("no covering part found")
    if rest:
        merged = tuple(sorted(covering[0] + tuple(j for p in rest for j in p)))
        covering = [merged] + covering[1:]
    return tuple(covering)


# -- 3-SAT -> non-strict edge-by-edge pair demands ----------------------------


@dataclass(frozen=True)
class ThreeSatReduction:
    problem: AugmentationProblem
    budget: int  # optional-link count along one branch per variable
    standard_budget: bool  # budget == 3m (false when clauses repeat variables)
    variable_starts: tuple[int, ...]
    variable_ends: tuple[int, ...]
    clause_starts: tuple[int, ...]
    clause_ends: tuple[int, ...]
    links: tuple[tuple[int, str, int, tuple[int, int]], ...]  # (var, branch, clause, pair)


def reduce_3sat(cnf: CnfInstance) -> ThreeSatReduction:
    """Two pair demands whose joint budget-3m satisfiability mirrors the formula.

    Per variable, a chain gadget with a true and a false branch; each branch
    holds one buffer+value pair per clause the variable occurs in, joined by
    an optional link present at times 1 and 2 (one candidate group each).
    Walking the variable chain at time 1 forces buying every link of one
    branch per variable.  Per clause, a time-2 gadget reachable only across
    a bought link of one of its literals.  Demands: first variable start to
    last variable end, and first clause start to last clause end.  The
    budget charges the links of one branch per variable; it equals 3m
    exactly when no clause repeats a variable, and ``standard_budget``
    records whether that holds.
    """
    n, m = cnf.n_vars, len(cnf.clauses)
    occs: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    literal_at: dict[tuple[int, int], set[str]] = defaultdict(set)  # (var, clause) -> branches
    for c, clause in enumerate(cnf.clauses):
        for lit in clause:
            var = abs(lit)
            if c not in occs[var]:
                occs[var].append(c)
            literal_at[(var, c)].add("T" if lit > 0 else "F")

    names: list[str] = []

    def add(label: str) -> int:
        names.append(label)
        return len(names) - 1

    edges: list[TemporalEdge] = []
    link_groups: list[tuple[int, str, int, tuple[int, int]]] = []
    buffer_id: dict[tuple[int, str, int], int] = {}
    value_id: dict[tuple[int, str, int], int] = {}
    starts, ends = [], []
    prev_end: int | None = None
    for var in range(1, n + 1):
        start = add(f"x{var}.start")
        starts.append(start)
        if prev_end is not None:
            edges.append(TemporalEdge(prev_end, start, 1))
        branch_tail: dict[str, int] = {}
        for branch in ("T", "F"):
            tail = start
            for c in occs[var]:
                buf = add(f"x{var}.{branch}.buffer.C{c}")
                val = add(f"x{var}.{branch}.value.C{c}")
                buffer_id[(var, branch, c)] = buf
                value_id[(var, branch, c)] = val
                edges.append(TemporalEdge(tail, buf, 1))
                link_groups.append((var, branch, c, (min(buf, val), max(buf, val))))
                tail = val
            branch_tail[branch] = tail
        end = add(f"x{var}.end")
        ends.append(end)
        for branch in ("T", "F"):
            if occs[var]:
                edges.append(TemporalEdge(branch_tail[branch], end, 1))
        if not occs[var]:
            edges.append(TemporalEdge(start, end, 1))
        prev_end = end

    clause_starts, clause_ends = [], []
    prev_cend: int | None = None
    for c in range(m):
        cs = add(f"C{c}.start")
        ce = add(f"C{c}.end")
        clause_starts.append(cs)
        clause_ends.append(ce)
        if prev_cend is not None:
            edges.append(TemporalEdge(prev_cend, cs, 2))
        for var in sorted({abs(lit) for lit in cnf.clauses[c]}):
            for branch in sorted(literal_at[(var, c)]):
                edges.append(TemporalEdge(cs, buffer_id[(var, branch, c)], 2))
                edges.append(TemporalEdge(value_id[(var, branch, c)], ce, 2))
        prev_cend = ce

    candidates = []
    for var, branch, c, (a, b) in link_groups:
        candidates.append(TemporalEdge(a, b, 1))
        candidates.append(TemporalEdge(a, b, 2))
    budget = sum(len(occs[var]) for var in range(1, n + 1))
    base = TemporalGraph.build(
        len(names), set(edges), lifespan=2, names=tuple(names)
    )
    problem = AugmentationProblem(
        base,
        frozenset(candidates),
        Pairs(((starts[0], ends[-1]), (clause_starts[0], clause_ends[-1]))),
        NON_STRICT,
        COST_GROUP,
        budget,
    )
    return ThreeSatReduction(
        problem,
        budget,
        budget == 3 * m,
        tuple(starts),
        tuple(ends),
        tuple(clause_starts),
        tuple(clause_ends),
        tuple(link_groups),
    )


def sat_witness_to_edges(
    red: ThreeSatReduction, assignment: Sequence[bool]
) -> frozenset[TemporalEdge]:
    """All optional links on the branch each variable's truth value selects."""
    edges = set()
    for var, branch, _, (a, b) in red.links:
        if (branch == "T") == bool(assignment[var - 1]):
            edges.add(TemporalEdge(a, b, 1))
            edges.add(TemporalEdge(a, b, 2))
    return frozenset(edges)


def sat_edges_to_witness(red: ThreeSatReduction, selected: Iterable[TemporalEdge]) -> tuple[bool, ...]:
    """Read the assignment off the bought branches of a valid solution."""
    pairs = {e.pair for e in selected}
    n_vars = len(red.variable_starts)
    bought: dict[int, set[str]] = defaultdict(set)
    links_of: dict[tuple[int, str], list[tuple[int, int]]] = defaultdict(list)
    for var, branch, _, pair in red.links:
        links_of[(var, branch)].append(pair)
    for (var, branch), link_pairs in links_of.items():
        if all(p in pairs for p in link_pairs):
            bought[var].add(branch)
    assignment = []
    for var in range(1, n_vars + 1):
        branches = bought.get(var, set())
        if not branches and not links_of.get((var, "T")):
            assignment.append(True)  # variable occurs in no clause; value is free
        else:
            assignment.append("T" in branches)
    return tuple(assignment)


# -- source-instance text formats ---------------------------------------------


def parse_static_graph(text: str, budget: int) -> StaticGraphInstance:
    """Edge-list format: ``V <n>`` then one ``E <u> <v>`` per line, '#' comments."""
    n: int | None = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "V" and len(parts) == 2:
            if n is not None:
                raise ParseError("duplicate V record", lineno)
            n = int(parts[1])
        elif parts[0] == "E" and len(parts) == 3:
            if n is None:
                raise ParseError("edge before V record", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("endpoints must be integers", lineno) from None
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ParseError("invalid edge", lineno)
            edges.add((min(u, v), max(u, v)))
        else:
            raise ParseError("expected 'V <n>' or 'E <u> <v>'", lineno)
    if n is None:
        raise ParseError("missing V record")
    return StaticGraphInstance(n, frozenset(edges), budget)


def parse_set_system(text: str, budget: int) -> SetSystemInstance:
    """Set-list format: ``U <n>`` then one ``S <i>: <e> <e> ...`` per line."""
    n: int | None = None
    subsets: list[frozenset[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("U"):
            parts = line.split()
            if n is not None or len(parts) != 2:
                raise ParseError("expected a single 'U <n>' record", lineno)
            n = int(parts[1])
        elif line.startswith("S"):
            if n is None:
                raise ParseError("set before U record", lineno)
            head, _, tail = line.partition(":")
            head_parts = head.split()
            if len(head_parts) != 2 or not _:
                raise ParseError("expected 'S <i>: <e> <e> ...'", lineno)
            try:
                idx = int(head_parts[1])
                elements = [int(tok) for tok in tail.split()]
            except ValueError:
                raise ParseError("indices and elements must be integers", lineno) from None
            if idx != len(subsets):
                raise ParseError(f"expected set index {len(subsets)}", lineno)
            if any(not 0 <= e < n for e in elements):
                raise ParseError(f"element outside universe 0..{n - 1}", lineno)
            subsets.append(frozenset(elements))
        else:
            raise ParseError("expected 'U <n>' or 'S <i>: ...'", lineno)
    if n is None:
        raise ParseError("missing U record")
    if not subsets:
        raise ParseError("no sets given")
    return SetSystemInstance(n, tuple(subsets), budget)


def parse_dimacs(text: str) -> CnfInstance:
    """Standard DIMACS CNF; clauses shorter than 3 pad by repeating a literal."""
    n_vars: int | None = None
    clauses: list[tuple[int, int, int]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno)
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise ParseError("clause before the problem line", lineno)
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError("literals must be integers", lineno) from None
        for value in values:
            if value == 0:
                if not pending:
                    raise ParseError("empty clause", lineno)
                if len(pending) > 3:
                    raise ParseError("clause with more than 3 literals", lineno)
                while len(pending) < 3:
                    pending.append(pending[-1])
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(value)
    if n_vars is None:
        raise ParseError("missing problem line")
    if pending:
        raise ParseError("unterminated clause")
    return CnfInstance(n_vars, tuple(clauses))
