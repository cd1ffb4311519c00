"""Finite oriented multigraphs: minors, forests, cycle spaces, fragmentations.

Vertices and edges carry string ids. Loops and parallel edges are allowed.
The boundary convention throughout the package is d(e) = [head(e)] - [tail(e)].
All graph values are immutable; every operation returns a new graph.
"""

from __future__ import annotations

import itertools
import math
import os
from typing import Iterable, Mapping, NamedTuple, Sequence


class DomainError(ValueError):
    """Invalid input to a library operation. The CLI maps this to exit code 1."""


class UnknownEdgeError(DomainError):
    """An edge id that is not present in the graph."""


class LoopContractionError(DomainError):
    """Contraction of a loop is rejected; delete it instead."""


class BudgetExceededError(DomainError):
    """An enumeration would exceed the configured size budget."""


DEFAULT_BUDGET = 2_000_000


def enumeration_budget(budget: int | None = None) -> int:
    """Resolve the enumeration cap: explicit argument, then HYPERKIRCH_BUDGET, then default."""
    if budget is not None:
        if budget < 1:
            raise DomainError("budget must be a positive integer")
        return budget
    raw = os.environ.get("HYPERKIRCH_BUDGET")
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise DomainError(f"HYPERKIRCH_BUDGET is not an integer: {raw!r}") from exc
        if value < 1:
            raise DomainError("HYPERKIRCH_BUDGET must be a positive integer")
        return value
    return DEFAULT_BUDGET


class Edge(NamedTuple):
    id: str
    head: str
    tail: str


class Multigraph:
    """Oriented multigraph on string ids.

    Vertex ids and edge ids each live in their own namespace and must be
    unique within it. Insertion order of vertices and edges is preserved and
    participates in equality; all derived quantities are order independent.
    """

    __slots__ = ("vertices", "edges", "_by_id")

    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple]):
        vs = tuple(str(v) for v in vertices)
        if len(set(vs)) != len(vs):
            raise DomainError("duplicate vertex ids")
        vset = set(vs)
        es = []
        seen = set()
        for raw in edges:
            e = raw if isinstance(raw, Edge) else Edge(str(raw[0]), str(raw[1]), str(raw[2]))
            if e.id in seen:
                raise DomainError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.head not in vset or e.tail not in vset:
                raise DomainError(f"edge {e.id!r} has an endpoint outside the vertex set")
            es.append(e)
        self.vertices = vs
        self.edges = tuple(es)
        self._by_id = {e.id: e for e in self.edges}

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Multigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # basic accessors

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise UnknownEdgeError(f"unknown edge id {edge_id!r}") from None

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    # connectivity

    def components(self) -> list[frozenset[str]]:
        """Connected components as vertex sets, sorted by smallest member."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.head), find(e.tail)
            if a != b:
                parent[a] = b
        groups: dict[str, set[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def n_components(self) -> int:
        return len(self.components())

    def is_connected(self) -> bool:
        return self.n_components() <= 1

    def betti1(self) -> int:
        """First Betti number |E| - |V| + #components."""
        return len(self.edges) - len(self.vertices) + self.n_components()

    # minors

    def classify_edge(self, edge_id: str) -> str:
        """One of 'loop', 'bridge', 'ordinary'."""
        e = self.edge(edge_id)
        if e.head == e.tail:
            return "loop"
        if self.delete(edge_id).n_components() > self.n_components():
            return "bridge"
        return "ordinary"

    def delete(self, edge_id: str) -> "Multigraph":
        self.edge(edge_id)
        return Multigraph(self.vertices, (e for e in self.edges if e.id != edge_id))

    def contract(self, edge_id: str) -> "Multigraph":
        """Contract a non-loop edge, merging its endpoints into the smaller id."""
        e = self.edge(edge_id)
        if e.head == e.tail:
            raise LoopContractionError(f"edge {edge_id!r} is a loop and cannot be contracted")
        keep, drop = (e.head, e.tail) if e.head < e.tail else (e.tail, e.head)

        def m(v):
            return keep if v == drop else v

        vs = tuple(v for v in self.vertices if v != drop)
        es = (Edge(x.id, m(x.head), m(x.tail)) for x in self.edges if x.id != edge_id)
        return Multigraph(vs, es)

    # forests and cycles

    def spanning_forest(self) -> frozenset[str]:
        """The maximal spanning forest picked greedily in ascending edge id order."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        chosen = []
        for e in sorted(self.edges, key=lambda e: e.id):
            if e.head == e.tail:
                continue
            a, b = find(e.head), find(e.tail)
            if a != b:
                parent[a] = b
                chosen.append(e.id)
        return frozenset(chosen)

    def spanning_forests(self, budget: int | None = None) -> set[frozenset[str]]:
        """All maximal spanning forests, as sets of edge ids.

        A maximal forest has |V| - #components edges, never contains a loop,
        and restricts to a spanning tree of every component.
        """
        nonloop = [e for e in self.edges if e.head != e.tail]
        size = len(self.vertices) - self.n_components()
        cap = enumeration_budget(budget)
        candidates = math.comb(len(nonloop), size) if size <= len(nonloop) else 0
        if candidates > cap:
            raise BudgetExceededError(
                f"forest enumeration needs {candidates} candidate subsets, cap is {cap}"
            )
        forests: set[frozenset[str]] = set()
        for combo in itertools.combinations(nonloop, size):
            parent = {v: v for v in self.vertices}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            ok = True
            for e in combo:
                a, b = find(e.head), find(e.tail)
                if a == b:
                    ok = False
                    break
                parent[a] = b
            if ok:
                forests.add(frozenset(e.id for e in combo))
        return forests

    def _check_forest(self, forest: Iterable[str]) -> frozenset[str]:
        ids = frozenset(forest)
        for eid in ids:
            self.edge(eid)
        size = len(self.vertices) - self.n_components()
        if len(ids) != size:
            raise DomainError("not a maximal spanning forest: wrong edge count")
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in sorted(ids):
            e = self.edge(eid)
            if e.head == e.tail:
                raise DomainError("not a maximal spanning forest: contains a loop")
            a, b = find(e.head), find(e.tail)
            if a == b:
                raise DomainError("not a maximal spanning forest: contains a cycle")
            parent[a] = b
        return ids

    def cycle_basis(self, forest: Iterable[str] | None = None) -> list[dict[str, int]]:
        """Fundamental cycles of a maximal spanning forest.

        Returns betti1 integer edge vectors, each with keys exactly the edge
        ids. Cycles are listed by ascending non-forest edge id, and each
        carries coefficient +1 on its own non-forest edge and 0 on every
        other non-forest edge. Forest edges are signed so that the boundary
        of each cycle vanishes. When no forest is given the deterministic
        greedy forest is used.
        """
        ids = self.spanning_forest() if forest is None else self._check_forest(forest)
        adj: dict[str, list[tuple[str, Edge, int]]] = {v: [] for v in self.vertices}
        for eid in sorted(ids):
            e = self.edge(eid)
            adj[e.tail].append((e.head, e, 1))
            adj[e.head].append((e.tail, e, -1))
        chords = sorted(eid for eid in self._by_id if eid not in ids)
        cycles = []
        for ceid in chords:
            chord = self.edge(ceid)
            coeffs = {eid: 0 for eid in self._by_id}
            coeffs[ceid] = 1
            if chord.head != chord.tail:
                # walk the forest from head(chord) to tail(chord); a forest
                # edge crossed tail-to-head enters with +1, else -1
                prev: dict[str, tuple[str, Edge, int]] = {chord.head: (chord.head, chord, 0)}
                queue = [chord.head]
                while queue:
                    cur = queue.pop(0)
                    if cur == chord.tail:
                        break
                    for nxt, e, sign in adj[cur]:
                        if nxt not in prev:
                            prev[nxt] = (cur, e, sign)
                            queue.append(nxt)
                if chord.tail not in prev:
                    raise AssertionError("forest does not span the chord's component")
                cur = chord.tail
                while cur != chord.head:
                    back, e, sign = prev[cur]
                    coeffs[e.id] = sign
                    cur = back
            cycles.append(coeffs)
        return cycles

    def boundary(self, chain: Mapping[str, int]) -> dict[str, int]:
        """Boundary of an integer edge chain: d(e) = [head] - [tail], extended linearly.

        The chain must assign a coefficient to every edge id.
        """
        if set(chain) != set(self._by_id):
            raise DomainError("edge-chain keys must be exactly the edge ids")
        out = {v: 0 for v in self.vertices}
        for eid, a in chain.items():
            e = self._by_id[eid]
            out[e.head] += a
            out[e.tail] -= a
        return out

    # fragmentation

    def fragment(self, counts: Mapping[str, int]) -> "Multigraph":
        """Subdivide each edge e into counts[e] edges in series.

        counts must assign a positive integer to every edge id. An edge with
        count 1 is kept unchanged; an edge with count n is replaced by a path
        of n edges through n - 1 fresh interior vertices, oriented from the
        old tail to the old head. New ids are derived as '<edge>.<i>'.
        """
        if set(counts) != set(self._by_id):
            raise DomainError("fragmentation counts must cover exactly the edge ids")
        for eid, n in counts.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise DomainError(f"fragmentation count for {eid!r} must be a positive integer")
        vs = list(self.vertices)
        es: list[Edge] = []
        for e in self.edges:
            n = counts[e.id]
            if n == 1:
                es.append(e)
                continue
            inner = [f"{e.id}.{i}" for i in range(1, n)]
            vs.extend(inner)
            stops = [e.tail] + inner + [e.head]
            for i in range(n):
                es.append(Edge(f"{e.id}.{i + 1}", stops[i + 1], stops[i]))
        return Multigraph(vs, es)


# functional forms of the core operations, for callers that prefer them

def delete(graph: Multigraph, eid: str) -> Multigraph:
    return graph.delete(eid)


def contract(graph: Multigraph, eid: str) -> Multigraph:
    return graph.contract(eid)


def classify_edge(graph: Multigraph, eid: str) -> str:
    return graph.classify_edge(eid)


def betti1(graph: Multigraph) -> int:
    return graph.betti1()


def spanning_forests(graph: Multigraph) -> set:
    return graph.spanning_forests()


def cycle_basis(graph: Multigraph) -> list:
    return graph.cycle_basis()


def boundary(graph: Multigraph, chain) -> dict:
    return graph.boundary(chain)


def fragment(graph: Multigraph, counts) -> Multigraph:
    return graph.fragment(counts)
