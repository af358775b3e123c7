import warnings

import networkx as nx
import numpy as np
import pytest
from scipy import special

from mixcascade.generators import (
    Family,
    GeneratorSpec,
    RewireSpec,
    _triangle_pairs,
    fit_power_law_exponent,
    gen_age_rank_sf,
    gen_ba,
    gen_er,
    gen_exp,
    generate,
    network_filename,
    rewire_assortativity,
)
from mixcascade.graph import (
    GraphError,
    build_network,
    degree_assortativity,
    degree_stats,
    is_connected,
    validate_network,
)


def _instances(family, n=100, **kw):
    return [generate(GeneratorSpec(family, rng_seed=s, **kw)) for s in range(n)]


@pytest.fixture(scope="module")
def variances():
    return {f: np.mean([degree_stats(g).degree_variance for g in _instances(f)]) for f in ("ER", "EXP", "SFBA")}


def test_triangle_index_decoding():
    n = 9
    i, j = np.triu_indices(n, 1)
    di, dj = _triangle_pairs(np.arange(i.size), n)
    assert np.array_equal(di, i) and np.array_equal(dj, j)


def test_er_mean_degree_and_poisson_variance():
    nets = _instances("ER")
    means = [degree_stats(g).mean_degree for g in nets]
    assert np.mean(means) == pytest.approx(4, abs=0.2)
    # Poisson(4) variance is 4
    assert np.mean([degree_stats(g).degree_variance for g in nets]) == pytest.approx(4, abs=0.5)
    assert all(is_connected(g) for g in nets)


def test_er_complete_graph_limit():
    net = gen_er(GeneratorSpec("ER", node_count=5, target_mean_degree=4))
    assert net.edge_count == 10


def test_er_regenerate_policy_gives_up_on_sparse_graphs():
    with pytest.raises(GraphError, match="100 attempts"):
        gen_er(GeneratorSpec("ER", node_count=1000, target_mean_degree=2), connect="regenerate")


def test_ba_edge_count_and_connectivity():
    net = gen_ba(GeneratorSpec("SFBA", rng_seed=3))
    assert net.edge_count == 2 * (1000 - 3) + 3
    assert degree_stats(net).mean_degree == pytest.approx(3.99, abs=0.01)
    assert is_connected(net)


@pytest.mark.parametrize("gen, family", [(gen_ba, "SFBA"), (gen_exp, "EXP"), (gen_age_rank_sf, "SF_ALPHA")])
def test_first_growth_step(gen, family):
    spec = GeneratorSpec(family, node_count=4, alpha=1.0 if family == "SF_ALPHA" else None)
    net = gen(spec)
    assert net.edge_count == 5
    assert {(0, 1), (0, 2), (1, 2)} <= set(map(tuple, net.edges().tolist()))
    assert net.degree(3) == 2


def test_variance_ordering(variances):
    assert variances["ER"] < variances["EXP"] < variances["SFBA"]


@pytest.mark.parametrize("family, kw", [("ER", {}), ("EXP", {}), ("SFBA", {}), ("SF_ALPHA", {"alpha": 0.5})])
def test_reproducible_and_valid(family, kw):
    a = generate(GeneratorSpec(family, rng_seed=11, **kw))
    b = generate(GeneratorSpec(family, rng_seed=11, **kw))
    assert a == b
    validate_network(a)
    assert is_connected(a)
    assert a != generate(GeneratorSpec(family, rng_seed=12, **kw))


def test_growth_models_always_connected():
    for family, kw in (("EXP", {}), ("SFBA", {}), ("SF_ALPHA", {"alpha": 1.0})):
        assert all(is_connected(g) for g in _instances(family, n=30, **kw))


def test_age_rank_variance_monotone_in_alpha():
    alphas = np.linspace(1 / 3, 1.0, 5)
    v = [np.mean([degree_stats(g).degree_variance for g in _instances("SF_ALPHA", n=40, alpha=a)]) for a in alphas]
    assert all(x < y for x, y in zip(v, v[1:]))


def test_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec("SF_ALPHA", alpha=0.2)
    with pytest.raises(ValueError):
        GeneratorSpec("SFBA", target_mean_degree=3)
    with pytest.raises(ValueError):
        GeneratorSpec("ER", node_count=3)
    with pytest.raises(ValueError):
        RewireSpec("assortative", max_attempts=0)


def test_filename_convention():
    spec = GeneratorSpec(Family.SF_ALPHA, alpha=0.5, rng_seed=7)
    assert network_filename(spec) == "SF_ALPHA_Z1000_k4_a0.5_s7.edges"


# --- rewiring ---


@pytest.fixture(scope="module")
def ba():
    return generate(GeneratorSpec("SFBA", rng_seed=5))


@pytest.mark.parametrize("mode, sign", [("assortative", 1), ("disassortative", -1)])
def test_rewire_changes_mixing_and_preserves_degrees(ba, mode, sign):
    out = rewire_assortativity(ba, RewireSpec(mode, target_assortativity=None), np.random.default_rng(1))
    validate_network(out)
    assert out.edge_count == ba.edge_count
    assert np.array_equal(out.degrees, ba.degrees)
    assert is_connected(out)
    r = degree_assortativity(out)
    assert sign * r > 0
    assert sign * r > sign * degree_assortativity(ba)


def test_rewire_stops_at_target(ba):
    out = rewire_assortativity(ba, RewireSpec("assortative", target_assortativity=0.1), 2)
    r = degree_assortativity(out)
    assert 0.1 <= r < 0.15


def test_rewire_warns_when_target_missed(ba):
    with pytest.warns(RuntimeWarning, match="stopped at r="):
        rewire_assortativity(ba, RewireSpec("disassortative", max_attempts=5, target_assortativity=0.9), 3)


def test_rewire_keeps_small_graph_connected():
    # a path can only be rewired into disconnected pieces or itself
    g = nx.path_graph(8)
    net = build_network(list(g.edges()), 8)
    for seed in range(5):
        out = rewire_assortativity(net, RewireSpec("assortative", max_attempts=200, target_assortativity=None), seed)
        assert is_connected(out)
        assert np.array_equal(out.degrees, net.degrees)


def test_rewire_requires_connected_input():
    with pytest.raises(GraphError):
        rewire_assortativity(build_network([(0, 1), (2, 3)], 4), RewireSpec("assortative"))


# --- exponent fitting ---


def _discrete_power_law_sample(gamma, k_min, n, rng, k_max=10**6):
    ks = np.arange(k_min, k_max, dtype=float)
    p = ks**-gamma
    p /= p.sum()
    return rng.choice(ks, size=n, p=p)


def test_fit_recovers_synthetic_exponent():
    sample = _discrete_power_law_sample(2.5, 2, 10**5, np.random.default_rng(0))
    assert fit_power_law_exponent(sample, k_min=2) == pytest.approx(2.5, abs=0.05)


def test_fit_score_equation_holds_at_optimum():
    # derivative of the log-likelihood vanishes: -zeta'(g)/zeta(g) = mean log k
    sample = _discrete_power_law_sample(3.0, 5, 20000, np.random.default_rng(1))
    g = fit_power_law_exponent(sample, k_min=5)
    h = 1e-5
    dlogz = (np.log(special.zeta(g + h, 5)) - np.log(special.zeta(g - h, 5))) / (2 * h)
    assert -dlogz == pytest.approx(np.log(sample).mean(), rel=1e-5)


def test_fit_rejects_degenerate_input():
    with pytest.raises(ValueError):
        fit_power_law_exponent(np.full(500, 6))
    with pytest.raises(ValueError):
        fit_power_law_exponent(np.full(50, 8))


def test_fitted_exponents_track_alpha():
    g_lo = np.mean([fit_power_law_exponent(g) for g in _instances("SF_ALPHA", n=30, alpha=1 / 3)])
    g_hi = np.mean([fit_power_law_exponent(g) for g in _instances("SF_ALPHA", n=30, alpha=1.0)])
    assert 2.9 <= g_lo <= 3.7
    assert 2.0 <= g_hi <= 2.5
