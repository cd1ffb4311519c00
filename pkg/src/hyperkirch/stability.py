"""Stability combinatorics of edge-wise orbit data against a vertex character.

An orbit assignment gives every edge one of three shapes: Generic (its
character set is all integers), Segment(n) (characters in [N n, N (n+1)]),
or Point(n) (the single character N n). An assignment is semistable for a
vertex weight eta summing to zero when some integer edge vector c with
boundary d(c) = -eta has every c_e inside the edge's character set; this is
a circulation feasibility problem and is decided exactly by a max-flow
reduction (the incidence matrix is totally unimodular, so bounds can be
finite-boxed without losing solutions).

The weight eta is generic when no semistable assignment's Point edges
disconnect the graph. The semistable Segment assignments, taken modulo
translating their index vectors by N times the cycle lattice, form a finite
complex whose nodes are the translation classes and whose adjacency records
which boxes meet jointly; that complex is connected.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

from .graphs import (
    BudgetExceededError,
    DomainError,
    Multigraph,
    enumeration_budget,
)
from .lattice import IntMatrix, smith_normal_form


@dataclass(frozen=True)
class StabilityParam:
    """Integer vertex weight eta (summing to zero) and box scale N >= 1."""

    eta: dict
    N: int


@dataclass(frozen=True)
class EdgeOrbit:
    """Shape of one edge's orbit: kind in {'generic', 'segment', 'point'}."""

    kind: str
    level: int | None = None


def generic_orbit() -> EdgeOrbit:
    return EdgeOrbit("generic")


def segment_orbit(n: int) -> EdgeOrbit:
    return EdgeOrbit("segment", int(n))


def point_orbit(n: int) -> EdgeOrbit:
    return EdgeOrbit("point", int(n))


@dataclass(frozen=True)
class CharRange:
    """Closed integer interval, with None encoding an unbounded end."""

    lo: int | None
    hi: int | None


def delta_membership(k: int, m: int, N: int) -> str:
    """Position of the lattice point (k, m) against the N-scaled hull.

    The hull is spanned by the points (N (n^2 + n) / 2 + N, N n) over all
    integers n and is unbounded upward in k. With n = floor(m / N), the
    lower boundary above m has height N (n^2 + n) / 2 + N + (n + 1) (m - N n).
    Returns 'boundary', 'interior', or 'outside'.
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    n = m // N
    floor_k = N * (n * n + n) // 2 + N + (n + 1) * (m - N * n)
    if k == floor_k:
        return "boundary"
    return "interior" if k > floor_k else "outside"


def orbit_char_set(spec: Mapping[str, EdgeOrbit], N: int) -> dict[str, CharRange]:
    """Character interval of each edge orbit at box scale N."""
    if N < 1:
        raise DomainError("N must be at least 1")
    out = {}
    for eid, orbit in spec.items():
        if orbit.kind == "generic":
            out[eid] = CharRange(None, None)
        elif orbit.kind == "segment":
            out[eid] = CharRange(N * orbit.level, N * (orbit.level + 1))
        elif orbit.kind == "point":
            out[eid] = CharRange(N * orbit.level, N * orbit.level)
        else:
            raise DomainError(f"unknown orbit kind {orbit.kind!r}")
    return out


def _check_param(graph: Multigraph, param: StabilityParam) -> None:
    if param.N < 1:
        raise DomainError("N must be at least 1")
    if set(param.eta) != set(graph.vertices):
        raise DomainError("eta keys must be exactly the vertex ids")
    for v, x in param.eta.items():
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainError(f"eta value for {v!r} must be an integer")
    if sum(param.eta.values()) != 0:
        raise DomainError("eta must sum to zero")


# exact max-flow (Dinic), integer capacities


def _max_flow(n: int, arcs: list[tuple[int, int, int]], s: int, t: int) -> int:
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n)]

    for u, v, c in arcs:
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)

    flow = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = [s]
        while queue:
            cur = queue.pop(0)
            for a in adj[cur]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[cur] + 1
                    queue.append(to[a])
        if level[t] < 0:
            return flow
        it = [0] * n

        def dfs(u: int, pushed: int) -> int:
            if u == t:
                return pushed
            while it[u] < len(adj[u]):
                a = adj[u][it[u]]
                v = to[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    got = dfs(v, min(pushed, cap[a]))
                    if got:
                        cap[a] -= got
                        cap[a ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while True:
            pushed = dfs(s, 1 << 62)
            if not pushed:
                break
            flow += pushed


def _box_flow_feasible(
    graph: Multigraph, eta: Mapping[str, int], bounds: Mapping[str, tuple]
) -> bool:
    """Is there an integer edge vector c with d(c) = -eta and c_e in the box?

    Bounds are closed intervals with None for an unbounded end. A feasible
    vector, if one exists, can be taken with every coordinate bounded by the
    total eta mass plus the mass of all finite bounds: decompose any solution
    into source-to-sink paths plus circulations, and drop every circulation
    that avoids all finite boxes. Unbounded ends are therefore replaced by
    that finite cap and the rest is a standard feasible-flow instance.
    """
    finite_mass = sum(abs(x) for x in eta.values())
    for lo, hi in bounds.values():
        if lo is not None and hi is not None and lo > hi:
            return False
        finite_mass += (abs(lo) if lo is not None else 0) + (
            abs(hi) if hi is not None else 0
        )
    cap_box = finite_mass + 1
    verts = sorted(graph.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    source, sink = n, n + 1
    arcs = []
    excess = {v: -eta[v] for v in verts}
    for e in graph.edges:
        lo, hi = bounds[e.id]
        if e.head == e.tail:
            continue
        lo = -cap_box if lo is None else lo
        hi = cap_box if hi is None else hi
        # flow variable f = c - lo ranges in [0, hi - lo] along tail -> head
        arcs.append((idx[e.tail], idx[e.head], hi - lo))
        excess[e.head] -= lo
        excess[e.tail] += lo
    need = 0
    for v in verts:
        b = excess[v]
        if b > 0:
            # v must absorb a net inflow of b: route the surplus to the sink
            arcs.append((idx[v], sink, b))
            need += b
        elif b < 0:
            arcs.append((source, idx[v], -b))
    return _max_flow(n + 2, arcs, source, sink) == need


def is_semistable(
    graph: Multigraph, param: StabilityParam, spec: Mapping[str, EdgeOrbit]
) -> bool:
    """Does some integer character vector in the orbit's box bound -eta?"""
    _check_param(graph, param)
    if set(spec) != set(graph.edge_ids):
        raise DomainError("orbit spec keys must be exactly the edge ids")
    ranges = orbit_char_set(spec, param.N)
    bounds = {eid: (r.lo, r.hi) for eid, r in ranges.items()}
    return _box_flow_feasible(graph, param.eta, bounds)


def _particular_solution(graph: Multigraph, target: Mapping[str, int]) -> dict | None:
    """An integer edge vector c with d(c) = target, or None when none exists.

    Routes the demands through the greedy spanning forest; a solution exists
    exactly when the target sums to zero on every connected component.
    """
    forest = graph.spanning_forest()
    tree_adj: dict[str, list] = {v: [] for v in graph.vertices}
    for eid in sorted(forest):
        e = graph.edge(eid)
        tree_adj[e.head].append((e.tail, e))
        tree_adj[e.tail].append((e.head, e))
    c = {eid: 0 for eid in graph.edge_ids}
    remaining = {v: target[v] for v in graph.vertices}
    seen: set[str] = set()
    for comp in graph.components():
        root = min(comp)
        order = [root]
        seen.add(root)
        parent_edge: dict[str, tuple] = {}
        i = 0
        while i < len(order):
            cur = order[i]
            i += 1
            for nxt, e in tree_adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    parent_edge[nxt] = (cur, e)
                    order.append(nxt)
        for v in reversed(order):
            if v == root:
                continue
            parent, e = parent_edge[v]
            need = remaining[v]
            if e.head == v:
                c[e.id] += need
            else:
                c[e.id] -= need
            remaining[v] = 0
            remaining[parent] += need
        if remaining[root] != 0:
            return None
    return c


def _congruence_feasible(
    c0: list[int], rows: list[list[int]], picked: list[int], N: int
) -> bool:
    """Is there t with c0 + basis * t divisible by N on the picked coordinates?

    rows[e] holds the basis coefficients of edge e. Solved through the Smith
    form of the picked block: the system D s = U v (mod N) splits into
    scalar congruences, each solvable exactly when gcd(d_i, N) divides the
    right hand side.
    """
    if not picked:
        return True
    block = IntMatrix.from_rows([rows[e] for e in picked])
    u, d, _ = smith_normal_form(block)
    v = [-c0[e] for e in picked]
    uv = [sum(a * b for a, b in zip(urow, v)) for urow in u.entries]
    m, r = block.rows, block.cols
    for i in range(m):
        di = d.entries[i][i] if i < min(m, r) else 0
        g = math.gcd(di, N)
        if uv[i] % g != 0:
            return False
    return True


def is_generic(graph: Multigraph, param: StabilityParam, budget: int | None = None) -> bool:
    """No semistable assignment's Point edges disconnect the graph.

    Equivalently: for every edge subset W whose removal leaves the graph
    disconnected, there is no integer c with d(c) = -eta and N | c_e on W.
    Monotonicity in W would allow restricting to minimal disconnecting sets;
    at this scale all subsets are scanned in size order.
    """
    _check_param(graph, param)
    eids = sorted(graph.edge_ids)
    cap = enumeration_budget(budget)
    if 2 ** len(eids) > cap:
        raise BudgetExceededError(
            f"genericity scan needs {2 ** len(eids)} subsets, budget is {cap}"
        )
    target = {v: -x for v, x in param.eta.items()}
    c0map = _particular_solution(graph, target)
    if c0map is None:
        return True
    cycles = graph.cycle_basis()
    c0 = [c0map[e] for e in eids]
    rows = [[c[eid] for c in cycles] for eid in eids]
    for size in range(len(eids) + 1):
        for combo in itertools.combinations(range(len(eids)), size):
            removed = {eids[i] for i in combo}
            rest = Multigraph(
                graph.vertices, (e for e in graph.edges if e.id not in removed)
            )
            if rest.n_components() <= 1:
                continue
            if _congruence_feasible(c0, rows, list(combo), param.N):
                return False
    return True


@dataclass(frozen=True)
class StrataComplex:
    """Quotient complex of semistable Segment assignments.

    edge_order fixes the coordinate order of the index vectors. nodes lists
    one representative index vector per translation class. adjacency lists
    one entry per class of jointly feasible ordered-distinct pairs, as
    (left node, right node, left vector, right vector); parallel entries and
    self pairs are genuine features of the quotient. faces[i] lists the
    feasible closed faces of node i's box, each face a vector over edges
    with -1 (low endpoint), 0 (full segment), +1 (high endpoint), together
    with its dimension inside the box.
    """

    edge_order: tuple
    nodes: tuple
    adjacency: tuple
    faces: tuple
    connected: bool


def strata_complex(
    graph: Multigraph, param: StabilityParam, budget: int | None = None
) -> StrataComplex:
    """Enumerate semistable Segment assignments modulo N times the cycle lattice.

    Every semistable index vector's box contains an integer witness
    c = c0 + basis * t, and translating t by N^2 shifts witnesses by N^2
    times a cycle, which moves index vectors by N times that cycle, i.e. by
    a lattice translation. Scanning t over {0 .. N^2 - 1}^rank therefore
    meets every translation class; member vectors are the boxes around each
    witness. Classes are merged by the exact lattice membership test (the
    basis is the identity on its defining non-forest edges), adjacency scans
    the 3^E - 1 neighbors of each representative for joint feasibility, and
    pairs are deduplicated by translating each ordered pair so its first
    vector becomes its class representative.
    """
    _check_param(graph, param)
    N = param.N
    eids = sorted(graph.edge_ids)
    m = len(eids)
    cap = enumeration_budget(budget)
    target = {v: -x for v, x in param.eta.items()}
    c0map = _particular_solution(graph, target)
    if c0map is None:
        return StrataComplex(tuple(eids), (), (), (), True)
    c0 = [c0map[e] for e in eids]
    cycles = graph.cycle_basis()
    r = len(cycles)
    basis = [[c[eid] for eid in eids] for c in cycles]
    forest = graph.spanning_forest()
    chord_pos = [eids.index(eid) for eid in sorted(set(eids) - forest)]
    assert len(chord_pos) == r

    if (N * N) ** r > cap:
        raise BudgetExceededError(
            f"strata scan needs {(N * N) ** r} witness classes, budget is {cap}"
        )

    raw: set[tuple] = set()
    for t in itertools.product(range(N * N), repeat=r):
        c = list(c0)
        for ti, vec in zip(t, basis):
            for i in range(m):
                c[i] += ti * vec[i]
        options = []
        for x in c:
            n0 = x // N
            options.append((n0, n0 - 1) if x % N == 0 else (n0,))
        for combo in itertools.product(*options):
            raw.add(combo)
            if len(raw) > cap:
                raise BudgetExceededError(f"strata node scan exceeded budget {cap}")

    def lattice_shift(a: tuple, b: tuple):
        """Coefficients lam with b = a + N * (basis^T lam), or None.

        Each cycle is the unique one supported on its own non-forest edge,
        so the shift coefficients read off directly from those coordinates.
        """
        lam = []
        for pos in chord_pos:
            d = b[pos] - a[pos]
            if d % N:
                return None
            lam.append(d // N)
        for i in range(m):
            if a[i] + N * sum(l * basis[j][i] for j, l in enumerate(lam)) != b[i]:
                return None
        return lam

    members = sorted(raw)
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    buckets: dict[tuple, list[int]] = {}
    for i, vec in enumerate(members):
        key = tuple(vec[p] % N for p in chord_pos)
        buckets.setdefault(key, []).append(i)
    for group in buckets.values():
        for a_i, b_i in itertools.combinations(group, 2):
            if find(a_i) != find(b_i) and lattice_shift(members[a_i], members[b_i]):
                parent[find(a_i)] = find(b_i)

    classes: dict[int, list[tuple]] = {}
    for i, vec in enumerate(members):
        classes.setdefault(find(i), []).append(vec)

    def norm2(vec: tuple) -> int:
        return sum(x * x for x in vec)

    def descend(vec: tuple) -> tuple:
        cur = list(vec)
        improved = True
        while improved:
            improved = False
            for b in basis:
                for s in (1, -1):
                    cand = [x + s * N * g for x, g in zip(cur, b)]
                    if norm2(tuple(cand)) < norm2(tuple(cur)):
                        cur = cand
                        improved = True
        return tuple(cur)

    reps = []
    for group in classes.values():
        cands = {descend(v) for v in group} | set(group)
        reps.append(min(cands, key=lambda v: (norm2(v), v)))
    reps.sort()

    def class_of(vec: tuple) -> int:
        for i, rep in enumerate(reps):
            if lattice_shift(rep, vec) is not None:
                return i
        raise AssertionError("vector in no discovered class")

    def joint_feasible(a: tuple, b: tuple) -> bool:
        bounds = {}
        for i, eid in enumerate(eids):
            lo = N * max(a[i], b[i])
            hi = N * (min(a[i], b[i]) + 1)
            if lo > hi:
                return False
            bounds[eid] = (lo, hi)
        return _box_flow_feasible(graph, param.eta, bounds)

    def shifted(vec: tuple, lam: list) -> tuple:
        return tuple(
            x + N * sum(l * basis[j][i] for j, l in enumerate(lam))
            for i, x in enumerate(vec)
        )

    def pair_key(a: tuple, b: tuple):
        cands = []
        for x, y in ((a, b), (b, a)):
            cx = class_of(x)
            lam = lattice_shift(x, reps[cx])
            cands.append((reps[cx], shifted(y, lam)))
        return min(cands)

    adjacency: dict[tuple, tuple] = {}
    for rep in reps:
        for delta in itertools.product((-1, 0, 1), repeat=m):
            if not any(delta):
                continue
            b = tuple(x + d for x, d in zip(rep, delta))
            if not joint_feasible(rep, b):
                continue
            key = pair_key(rep, b)
            if key not in adjacency:
                adjacency[key] = (class_of(key[0]), class_of(key[1]), key[0], key[1])

    if len(reps) * 3**m > cap:
        raise BudgetExceededError(
            f"strata face scan needs {len(reps) * 3 ** m} checks, budget is {cap}"
        )
    all_faces = []
    for rep in reps:
        feasible_faces = []
        for face in itertools.product((-1, 0, 1), repeat=m):
            bounds = {}
            for i, eid in enumerate(eids):
                if face[i] < 0:
                    bounds[eid] = (N * rep[i], N * rep[i])
                elif face[i] > 0:
                    bounds[eid] = (N * (rep[i] + 1), N * (rep[i] + 1))
                else:
                    bounds[eid] = (N * rep[i], N * (rep[i] + 1))
            if _box_flow_feasible(graph, param.eta, bounds):
                feasible_faces.append((face, sum(1 for x in face if x == 0)))
        assert ((0,) * m, m) in feasible_faces
        all_faces.append(tuple(feasible_faces))

    uf = list(range(len(reps)))

    def ufind(i: int) -> int:
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i

    for lo, hi, _, _ in adjacency.values():
        uf[ufind(lo)] = ufind(hi)
    connected = len(reps) <= 1 or len({ufind(i) for i in range(len(reps))}) == 1

    return StrataComplex(
        edge_order=tuple(eids),
        nodes=tuple(reps),
        adjacency=tuple(adjacency[k] for k in sorted(adjacency)),
        faces=tuple(all_faces),
        connected=connected,
    )
