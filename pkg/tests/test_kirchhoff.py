"""Forest-complement polynomial engines checked against each other and brute force."""

import random
from fractions import Fraction

import pytest

from conftest import (
    brute_psi_terms,
    brute_psi_value,
    cycle_graph,
    disjoint_union,
    iso_catalog,
    loop_graph,
    path_graph,
    random_connected_multigraph,
    random_multigraph,
    theta_graph,
)
from hyperkirch import (
    DomainError,
    Edge,
    Multigraph,
    matrix_tree_dual,
    psi_delcon,
    psi_det,
    psi_enum,
)


def test_theta_polynomial_frozen():
    p = psi_enum(theta_graph())
    assert p.terms == {
        frozenset({"e1", "e2"}): 1,
        frozenset({"e1", "e3"}): 1,
        frozenset({"e2", "e3"}): 1,
    }
    assert p.equal(psi_delcon(theta_graph()))


def test_cycle_polynomial_is_sum_of_variables():
    for n in range(1, 7):
        p = psi_delcon(cycle_graph(n))
        assert p.terms == {frozenset({f"e{i}"}): 1 for i in range(1, n + 1)}


def test_edgeless_and_tree_polynomials_are_one():
    empty = Multigraph(["v1", "v2"], [])
    assert psi_enum(empty).terms == {frozenset(): 1}
    assert psi_delcon(empty).terms == {frozenset(): 1}
    tree = path_graph(5)
    assert psi_delcon(tree).terms == {frozenset(): 1}


def test_engines_match_brute_force_on_catalog():
    for g in iso_catalog(5):
        expected = brute_psi_terms(g)
        assert psi_enum(g).terms == expected
        assert psi_delcon(g).terms == expected


def test_engines_agree_on_random_graphs():
    rng = random.Random(0xABCD)
    for _ in range(60):
        g = random_multigraph(rng, rng.randint(2, 6), rng.randint(0, 8))
        a = psi_enum(g)
        b = psi_delcon(g)
        assert a.equal(b)
        assert b.is_homogeneous()
        assert b.coefficients_are_01()
        assert b.degree() == g.betti1() or not b.terms


def test_psi_det_agrees_at_integer_points():
    rng = random.Random(0x1E57)
    for g in iso_catalog(6):
        p = psi_enum(g)
        for _ in range(8):
            w = {e: rng.randint(-10, 10) for e in g.edge_ids}
            assert psi_det(g, w) == p.evaluate(w)


def test_matrix_tree_dual_agrees_at_positive_rationals():
    rng = random.Random(0x3A7)
    theta = theta_graph()
    assert matrix_tree_dual(
        theta, {"e1": Fraction(2), "e2": Fraction(3), "e3": Fraction(5)}
    ) == 31
    for g in iso_catalog(6, connected_only=True):
        p = psi_enum(g)
        for _ in range(4):
            w = {
                e: Fraction(rng.randint(1, 12), rng.randint(1, 7))
                for e in g.edge_ids
            }
            expected = sum(
                (
                    _product(w[e] for e in mono)
                    for mono in p.terms
                ),
                Fraction(0),
            )
            assert matrix_tree_dual(g, w) == expected


def _product(factors):
    out = Fraction(1)
    for f in factors:
        out *= f
    return out


def test_matrix_tree_dual_requires_connected_positive():
    g = disjoint_union(loop_graph(), loop_graph())
    with pytest.raises(DomainError):
        matrix_tree_dual(g, {e: Fraction(1) for e in g.edge_ids})
    with pytest.raises(DomainError):
        matrix_tree_dual(theta_graph(), {"e1": Fraction(0), "e2": Fraction(1), "e3": Fraction(1)})


def test_orientation_invariance():
    rng = random.Random(0xF11B)
    for _ in range(30):
        g = random_multigraph(rng, rng.randint(2, 5), rng.randint(1, 7))
        flipped = Multigraph(
            g.vertices,
            [
                Edge(e.id, e.tail, e.head) if rng.random() < 0.5 else e
                for e in g.edges
            ],
        )
        assert psi_enum(g).equal(psi_enum(flipped))
        assert psi_delcon(g).equal(psi_delcon(flipped))
        w = {e: rng.randint(-6, 6) for e in g.edge_ids}
        assert psi_det(g, w) == psi_det(flipped, w)


def test_basis_invariance_of_psi_det():
    g = theta_graph()
    w = {"e1": 3, "e2": 4, "e3": 7}
    from hyperkirch import tau_matrix

    for forest in g.spanning_forests():
        basis = g.cycle_basis(forest)
        assert tau_matrix(g, w, basis).det() == psi_det(g, w)


def test_disjoint_union_multiplicativity():
    rng = random.Random(0xD15)
    for _ in range(15):
        a = random_multigraph(rng, rng.randint(1, 4), rng.randint(0, 4))
        b = random_multigraph(rng, rng.randint(1, 4), rng.randint(0, 4))
        u = disjoint_union(a, b)
        pu = psi_delcon(u)
        w = {e: rng.randint(1, 5) for e in u.edge_ids}
        wa = {e: w[f"a.{e}"] for e in a.edge_ids}
        wb = {e: w[f"b.{e}"] for e in b.edge_ids}
        assert pu.evaluate(w) == psi_delcon(a).evaluate(wa) * psi_delcon(b).evaluate(wb)


def test_deletion_contraction_identities():
    """x_e branch split for ordinary edges, drop for loops, contract for bridges."""
    rng = random.Random(0xDC0)
    for _ in range(60):
        g = random_multigraph(rng, rng.randint(2, 5), rng.randint(1, 8))
        p = psi_delcon(g)
        for eid in g.edge_ids:
            kind = g.classify_edge(eid)
            w = {e: rng.randint(1, 6) for e in g.edge_ids}
            rest = {e: v for e, v in w.items() if e != eid}
            if kind == "loop":
                assert p.evaluate(w) == w[eid] * psi_delcon(g.delete(eid)).evaluate(rest)
            elif kind == "bridge":
                assert p.evaluate(w) == psi_delcon(g.contract(eid)).evaluate(rest)
            else:
                assert p.evaluate(w) == (
                    w[eid] * psi_delcon(g.delete(eid)).evaluate(rest)
                    + psi_delcon(g.contract(eid)).evaluate(rest)
                )


def test_fragmentation_identity_small():
    rng = random.Random(0xF8A6)
    for g in iso_catalog(4):
        for _ in range(3):
            counts = {e: rng.randint(1, 3) for e in g.edge_ids}
            frag = g.fragment(counts)
            assert len(frag.spanning_forests()) == psi_enum(g).evaluate(counts)


def test_delcon_repeat_calls_are_stable():
    g = random_connected_multigraph(random.Random(5), 5, 8)
    first = psi_delcon(g)
    second = psi_delcon(g)
    assert first.equal(second)
    assert brute_psi_value(g, {e: 2 for e in g.edge_ids}) == first.evaluate(
        {e: 2 for e in g.edge_ids}
    )
