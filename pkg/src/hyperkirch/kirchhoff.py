"""Four independent routes to the weighted spanning forest polynomial.

The polynomial of a multigraph is the sum, over maximal spanning forests,
of the product of the variables of the edges NOT in the forest. It is
multilinear with 0/1 coefficients and homogeneous of degree betti1.

Engines:
  psi_enum     direct forest enumeration
  psi_delcon   deletion-contraction recursion with memoization
  psi_det      evaluation as the cycle Gram determinant
  matrix_tree_dual   evaluation via the reciprocal-weight Laplacian
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .graphs import DomainError, Multigraph
from .lattice import _det_bareiss, tau_matrix
from .poly import MultilinearPoly

FrozenTerms = dict


def psi_enum(graph: Multigraph) -> MultilinearPoly:
    """Forest-complement polynomial by direct enumeration of maximal forests."""
    all_ids = frozenset(graph.edge_ids)
    terms = {all_ids - forest: 1 for forest in graph.spanning_forests()}
    return MultilinearPoly.from_terms(all_ids, terms)


def _delcon(graph: Multigraph, memo: dict) -> FrozenTerms:
    key = (tuple(sorted(graph.vertices)), tuple(sorted(graph.edges)))
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not graph.edges:
        result = {frozenset(): 1}
        memo[key] = result
        return result
    loops = sorted(e.id for e in graph.edges if e.head == e.tail)
    if loops:
        e = loops[0]
        sub = _delcon(graph.delete(e), memo)
        result = {mono | {e}: c for mono, c in sub.items()}
    else:
        bridges = sorted(eid for eid in graph.edge_ids if graph.classify_edge(eid) == "bridge")
        if bridges:
            result = dict(_delcon(graph.contract(bridges[0]), memo))
        else:
            e = min(graph.edge_ids)
            deleted = _delcon(graph.delete(e), memo)
            contracted = _delcon(graph.contract(e), memo)
            # monomials from the deleted branch all contain e, those from the
            # contracted branch never do, so the union is collision free
            result = {mono | {e}: c for mono, c in deleted.items()}
            result.update(contracted)
    memo[key] = result
    return result


def psi_delcon(graph: Multigraph) -> MultilinearPoly:
    """Forest-complement polynomial by deletion and contraction.

    A loop e contributes the factor x_e to every monomial of the graph with
    e deleted; a bridge is contracted outright; otherwise the smallest
    ordinary edge e splits the recursion into x_e * P(delete) + P(contract).
    Repeated minors are shared through a per-call memo keyed on the labeled
    minor, which is well defined because deletions and contractions preserve
    the surviving ids and commute.
    """
    terms = _delcon(graph, {})
    return MultilinearPoly.from_terms(frozenset(graph.edge_ids), terms)


def psi_det(graph: Multigraph, weights: Mapping[str, int]) -> int:
    """Value of the forest-complement polynomial as the cycle Gram determinant."""
    return tau_matrix(graph, weights).det()


def matrix_tree_dual(graph: Multigraph, weights: Mapping[str, Fraction]) -> Fraction:
    """Value of the forest-complement polynomial via the weighted matrix-tree theorem.

    For a connected graph and positive rational weights, the spanning tree
    sum with reciprocal weights 1/x_e times the product P of all x_e equals
    the forest-complement sum. Loops drop out of the Laplacian but their
    variables still multiply every monomial.

    Computed exactly: with A = P * L the reduced block of A has entries that
    are signed sums of products of all-but-one weight, so after clearing one
    common denominator the determinant is a fraction-free integer problem,
    and the answer is det(A_reduced) / P^(n-2).
    """
    if not graph.is_connected():
        raise DomainError("matrix_tree_dual requires a connected graph")
    if set(weights) != set(graph.edge_ids):
        raise DomainError("weight keys must be exactly the edge ids")
    w: dict[str, Fraction] = {}
    for eid, x in weights.items():
        fx = Fraction(x)
        if fx <= 0:
            raise DomainError(f"weight for {eid!r} must be positive")
        w[eid] = fx
    prod = Fraction(1)
    for x in w.values():
        prod *= x
    verts = sorted(graph.vertices)
    n = len(verts)
    if n <= 1:
        return prod
    idx = {v: i for i, v in enumerate(verts)}
    scaled = [[Fraction(0)] * n for _ in range(n)]
    for e in graph.edges:
        if e.head == e.tail:
            continue
        r = prod / w[e.id]
        i, j = idx[e.head], idx[e.tail]
        scaled[i][i] += r
        scaled[j][j] += r
        scaled[i][j] -= r
        scaled[j][i] -= r
    block = [row[1:] for row in scaled[1:]]
    common = math.lcm(*(x.denominator for row in block for x in row)) if block else 1
    ints = [[int(x * common) for x in row] for row in block]
    det_block = Fraction(_det_bareiss(ints), common ** (n - 1))
    return det_block / prod ** (n - 2)
