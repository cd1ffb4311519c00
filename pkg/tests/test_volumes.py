"""Residue volumes, forest counts, and the integration oracle."""

import random
from fractions import Fraction

import pytest

from conftest import (
    brute_forest_count,
    brute_psi_value,
    cycle_graph,
    disjoint_union,
    iso_catalog,
    loop_graph,
    path_graph,
    random_multigraph,
    theta_graph,
)
from hyperkirch import (
    DomainError,
    LocalFieldParams,
    central_fibre_point_count,
    fibre_volume,
    total_volume,
    total_volume_padic_oracle,
    trop_volume_check,
    valuation_stratum_measure,
    valuation_tail_measure,
)


def test_total_volume_loop_and_cycles():
    assert total_volume(loop_graph()) == 1
    for n in range(1, 11):
        assert total_volume(cycle_graph(n)) == n


def test_total_volume_is_forest_count():
    rng = random.Random(0x70)
    graphs = list(iso_catalog(6)) + [
        random_multigraph(rng, rng.randint(1, 6), rng.randint(0, 8))
        for _ in range(30)
    ]
    for g in graphs:
        assert total_volume(g) == brute_forest_count(g)


def test_total_volume_multiplicative_over_components():
    a = theta_graph()
    b = cycle_graph(4)
    assert total_volume(disjoint_union(a, b)) == total_volume(a) * total_volume(b)


def test_fibre_volume_frozen_examples():
    assert fibre_volume(loop_graph(), {"e1": 1}, 7) == Fraction(6, 7)
    assert fibre_volume(theta_graph(), {"e1": 1, "e2": 1, "e3": 1}, 2) == Fraction(3, 4)
    # trees have no cycles: volume 1 regardless of q
    assert fibre_volume(path_graph(4), {"e1": 2, "e2": 3, "e3": 4}, 5) == 1


def test_fibre_volume_formula_against_brute_force():
    rng = random.Random(0xFB)
    for g in iso_catalog(5):
        for _ in range(3):
            nu = {e: rng.randint(1, 5) for e in g.edge_ids}
            for q in (2, 3, 5, 7):
                expected = (
                    Fraction(q - 1, q) ** g.betti1() * brute_psi_value(g, nu)
                )
                assert fibre_volume(g, nu, q) == expected


def test_fibre_volume_multiplicative():
    a = cycle_graph(3)
    b = theta_graph()
    u = disjoint_union(a, b)
    nu_u = {e: 2 for e in u.edge_ids}
    prod = fibre_volume(a, {e: 2 for e in a.edge_ids}, 3) * fibre_volume(
        b, {e: 2 for e in b.edge_ids}, 3
    )
    assert fibre_volume(u, nu_u, 3) == prod


def test_fibre_volume_validation():
    g = loop_graph()
    with pytest.raises(DomainError):
        fibre_volume(g, {"e1": 0}, 3)
    with pytest.raises(DomainError):
        fibre_volume(g, {}, 3)
    with pytest.raises(DomainError):
        fibre_volume(g, {"e1": 1}, 1)


def test_point_count_theta_and_random():
    for q in (2, 3, 5, 7):
        assert central_fibre_point_count(theta_graph(), q) == 3 * q * q
    rng = random.Random(0x9C)
    for _ in range(20):
        g = random_multigraph(rng, rng.randint(1, 5), rng.randint(0, 7))
        q = rng.choice((2, 3, 4, 5))
        assert central_fibre_point_count(g, q) == brute_forest_count(g) * q ** g.betti1()


def test_trop_volume_check_small():
    rng = random.Random(0x7C)
    for g in iso_catalog(5):
        nu = {e: rng.randint(1, 5) for e in g.edge_ids}
        for q in (2, 5):
            assert trop_volume_check(g, nu, q)


def test_valuation_measures_sum_to_one():
    for q in (2, 3, 5):
        for cutoff in (0, 1, 4):
            partial = sum(
                (valuation_stratum_measure(q, n) for n in range(cutoff + 1)),
                Fraction(0),
            )
            assert partial + valuation_tail_measure(q, cutoff) == 1


def test_valuation_measure_matches_residue_counting():
    """Count residues of each valuation directly in Z/p^k."""
    for p in (2, 3):
        k = 5
        counts = {}
        for x in range(p**k):
            v = 0
            y = x
            while y and y % p == 0:
                v += 1
                y //= p
            v = k if x == 0 else v
            counts[v] = counts.get(v, 0) + 1
        for n in range(k):
            assert Fraction(counts[n], p**k) == valuation_stratum_measure(p, n)
        assert Fraction(counts[k], p**k) == valuation_tail_measure(p, k - 1)


def test_local_field_params_validation():
    LocalFieldParams(q=8, p=2, k=3)
    with pytest.raises(DomainError):
        LocalFieldParams(q=6, p=2, k=1)
    with pytest.raises(DomainError):
        LocalFieldParams(q=4, p=4, k=1)
    with pytest.raises(DomainError):
        LocalFieldParams(q=2, p=2, k=0)


def test_oracle_loop_closed_form():
    """One loop: estimate is exactly 1 - 2^-k and the bound 2^-k is tight."""
    for k in range(1, 8):
        est, bound = total_volume_padic_oracle(
            loop_graph(), LocalFieldParams(q=2, p=2, k=k)
        )
        assert est == 1 - Fraction(1, 2**k)
        assert bound == Fraction(1, 2**k)
        assert abs(est - 1) <= bound


def test_oracle_monotone_refinement():
    g = cycle_graph(3)
    true = total_volume(g)
    prev_est = None
    prev_bound = None
    for k in range(1, 7):
        est, bound = total_volume_padic_oracle(g, LocalFieldParams(q=3, p=3, k=k))
        assert abs(est - true) <= bound
        if prev_est is not None:
            assert est >= prev_est
            assert bound <= prev_bound
        prev_est, prev_bound = est, bound


def test_oracle_within_bound_on_small_graphs():
    rng = random.Random(0x0AC)
    graphs = [theta_graph(), cycle_graph(2), cycle_graph(4), path_graph(3)]
    for _ in range(10):
        graphs.append(random_multigraph(rng, rng.randint(1, 4), rng.randint(0, 4)))
    for g in graphs:
        for p in (2, 3):
            k = 3 if g.betti1() <= 2 else 2
            est, bound = total_volume_padic_oracle(g, LocalFieldParams(q=p, p=p, k=k))
            assert abs(est - total_volume(g)) <= bound


def test_oracle_requires_residue_prime_field():
    with pytest.raises(DomainError):
        total_volume_padic_oracle(loop_graph(), LocalFieldParams(q=4, p=2, k=2))


def test_oracle_budget():
    g = theta_graph()
    with pytest.raises(DomainError):
        total_volume_padic_oracle(g, LocalFieldParams(q=3, p=3, k=6), budget=100)


def test_oracle_worker_determinism():
    g = theta_graph()
    params = LocalFieldParams(q=2, p=2, k=5)
    single = total_volume_padic_oracle(g, params, workers=1)
    multi = total_volume_padic_oracle(g, params, workers=4)
    assert single == multi


def test_oracle_monte_carlo_seeded():
    g = theta_graph()
    params = LocalFieldParams(q=2, p=2, k=6)
    a = total_volume_padic_oracle(g, params, monte_carlo=True, samples=500, seed=11)
    b = total_volume_padic_oracle(g, params, monte_carlo=True, samples=500, seed=11)
    assert a == b
    exact_est, exact_bound = total_volume_padic_oracle(g, params)
    # the reported radius widens the proven truncation bound
    assert a[1] >= exact_bound
    assert a[0] >= 0
