import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from graphkam import (
    FiniteMeasure,
    alpha,
    alpha_circuit_oracle,
    beta,
    build_graph,
    check_graph_property,
    intrinsic_length,
    is_alpha_minimizer,
    mather_measures,
    quadratic_family,
    rotation_vector,
    subdifferential,
)
from graphkam.corpus import random_graph, random_quadratic, triangle
from graphkam.graph import Path
from graphkam.measures import action
from graphkam.mather import shifted


def test_alpha_examples(free, parallel):
    assert alpha([4.0], free) == pytest.approx(2.0, abs=1e-9)
    h = quadratic_family(parallel, 0.0, [0.0, -1.0])
    assert alpha([0.0], h) == h.a0()
    assert alpha_circuit_oracle([4.0], free) == pytest.approx(2.0, abs=1e-12)


def test_oracle_tree_only():
    g = build_graph(["a", "b", "c"], [("t1", "a", "b"), ("t2", "b", "c")])
    h = quadratic_family(g, [0.3, -0.2], [0.5, -0.4])
    assert alpha_circuit_oracle(np.zeros(0), h) == h.a0() == alpha(np.zeros(0), h)


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_alpha_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    h = random_quadratic(g, rng)
    c = rng.normal(0, 2, g.betti)
    assert abs(alpha(c, h) - alpha_circuit_oracle(c, h)) <= 1e-8
    assert alpha(c, h) >= h.a0()


@given(st.integers(0, 10_000))
def test_alpha_convex(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    h = random_quadratic(g, rng)
    c1, c2 = rng.normal(0, 3, (2, g.betti))
    assert alpha(0.5 * (c1 + c2), h) <= 0.5 * (alpha(c1, h) + alpha(c2, h)) + 1e-9


def test_mather_examples(free, parallel):
    ms = mather_measures([4.0], free)
    assert len(ms.irreducible_measures) == 1
    mu = ms.irreducible_measures[0]
    assert mu.points() == [("e1", pytest.approx(2.0)), ("-e2", pytest.approx(2.0))]
    assert action(shifted(free, [4.0]), mu) == pytest.approx(-2.0)
    assert np.allclose(ms.rotation_vectors, [[1.0]])

    ms = mather_measures([0.0], free)
    assert [m.points() for m in ms.irreducible_measures] == [[("e1", 0.0)], [("e2", 0.0)]]

    ms = mather_measures([0.0], quadratic_family(parallel, 0.0, [0.0, -1.0]))
    assert [m.points() for m in ms.irreducible_measures] == [[("e2", 0.0)]]
    assert np.all(ms.rotation_vectors == 0)


def test_subdifferential_examples(free):
    assert np.allclose(subdifferential([4.0], free).points, [[1.0]])
    assert np.allclose(subdifferential([0.0], free).points, [[0.0]])
    assert not subdifferential([4.0], free).hull_certified
    step = 1e-5
    slope = (alpha([4 + step], free) - alpha([4 - step], free)) / (2 * step)
    assert slope == pytest.approx(1.0, abs=1e-4)


@given(st.integers(0, 10_000))
def test_mather_properties(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    h = random_quadratic(g, rng)
    c = rng.normal(0, 2, g.betti)
    ms = mather_measures(c, h)
    hm = shifted(h, c)
    assert ms.irreducible_measures and ms.rejected == 0
    for mu, z in zip(ms.irreducible_measures, ms.circuits):
        assert abs(action(hm, mu) + ms.alpha) <= 1e-8
        assert abs(intrinsic_length(Path(g, z), ms.alpha, hm)) <= 1e-7
    for e, q in ms.mather_set:
        assert hm.lagrangian(e, q) == pytest.approx(hm.sigma(e, ms.alpha) * q - ms.alpha, abs=1e-8)
    assert check_graph_property(ms)


def test_graph_property_examples():
    assert not check_graph_property([("e", 1.0), ("e", 2.0)])
    assert check_graph_property([("e", 0.0), ("-e", 0.0)])
    assert not check_graph_property([("e", 1.0), ("-e", 1.0)])


def test_minimizer_examples(free, parallel):
    assert is_alpha_minimizer([0.0], free)
    assert not is_alpha_minimizer([4.0], free)


def test_beta_examples(free, parallel):
    res = beta([1.0], free)
    assert res.value == pytest.approx(2.0, abs=1e-9)
    assert res.optimal_c == pytest.approx([4.0], abs=1e-8)
    assert res.gap <= 1e-7
    assert res.irreducible_feasible
    res = beta([0.0], free)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    h = quadratic_family(parallel, 0.0, [0.0, -1.0])
    assert beta([0.0], h).value == pytest.approx(-1.0)


@pytest.mark.parametrize("hv", [-2.0, -0.3, 0.0, 0.4, 1.7])
def test_beta_matches_free_closed_form(free, hv):
    assert beta([hv], free).value == pytest.approx(2 * hv * hv, abs=1e-9)


@pytest.mark.parametrize("hv", [-1.5, 0.05, 0.8, 2.5])
def test_beta_matches_numeric_conjugate(hv):
    # independent oracle: maximize <c,h> - alpha(c) by scalar search on a betti-1 graph
    g = triangle()
    h = quadratic_family(g, [0.5, -0.3, 0.0], [0.2, 0.0, 0.5])
    res = minimize_scalar(lambda c: alpha([c], h) - c * hv, bounds=(-40, 40), method="bounded",
                          options={"xatol": 1e-9})
    assert beta([hv], h).value == pytest.approx(-res.fun, abs=1e-6)


@given(st.integers(0, 10_000))
def test_fenchel_young(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    h = random_quadratic(g, rng)
    hv, c = rng.normal(0, 1.5, (2, g.betti))
    res = beta(hv, h, cross_check=False)
    assert res.value + alpha(c, h) >= c @ hv - 1e-8
    assert res.gap <= 1e-7
    assert np.allclose(rotation_vector(res.measure).coords, hv, atol=1e-9)
    assert action(h, res.measure) == pytest.approx(res.value, abs=1e-9)


@given(st.integers(0, 10_000))
def test_beta_convex_superlinear(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    if g.betti == 0:
        return
    h = random_quadratic(g, rng)
    h1, h2 = rng.normal(0, 2, (2, g.betti))
    b = lambda x: beta(x, h, cross_check=False).value
    assert b(0.5 * (h1 + h2)) <= 0.5 * (b(h1) + b(h2)) + 1e-8
    d = h1 / np.linalg.norm(h1)
    ratios = [b(t * d) / t for t in (10.0, 100.0, 1000.0)]
    assert ratios[0] < ratios[1] < ratios[2]
