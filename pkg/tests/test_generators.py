from __future__ import annotations

import io

import numpy as np
import pytest

import resolv as rv


def serialize(g: rv.Graph) -> bytes:
    buf = io.StringIO()
    for u, v, w in g.edges():
        buf.write(f"{u} {v} {w}\n")
    return buf.getvalue().encode()


def two_block_params(omega_in=5.0, omega_out=0.2, size=50, k=10.0) -> rv.DcsbmParams:
    n = 2 * size
    return rv.DcsbmParams(
        block_assignment=np.repeat([0, 1], size),
        target_degrees=np.full(n, k),
        omega=np.array([[omega_in, omega_out], [omega_out, omega_in]]),
    )


def test_sample_is_deterministic_per_seed():
    params = two_block_params()
    for method in ("exact", "fast"):
        a = rv.sample_dcsbm(params, seed=9, method=method)
        b = rv.sample_dcsbm(params, seed=9, method=method)
        c = rv.sample_dcsbm(params, seed=10, method=method)
        assert serialize(a) == serialize(b)
        assert serialize(a) != serialize(c)


def test_degree_sum_identity_on_every_sample():
    params = two_block_params()
    for s in range(10):
        g = rv.sample_dcsbm(params, seed=s)
        assert int(g.degrees.sum()) == 2 * g.m


def test_block_pair_counts_concentrate():
    # mean inter/intra block edge counts over many samples vs their design values
    params = two_block_params(omega_in=5.0, omega_out=0.2, size=50, k=10.0)
    truth = np.repeat([0, 1], 50)
    samples = 1000
    inter = np.empty(samples)
    intra0 = np.empty(samples)
    for s in range(samples):
        g = rv.sample_dcsbm(params, seed=20_000 + s)
        p = rv.partition_stats(g, truth)
        inter[s] = p.m_rs(0, 1)
        intra0[s] = p.m_r[0]
    # kappa_r = 500, 2m = 1000
    expect_inter = 0.2 * 500 * 500 / 1000          # 50
    expect_intra = 5.0 * 500 * 500 / (2 * 1000)    # 625
    for observed, expect in ((inter, expect_inter), (intra0, expect_intra)):
        se = np.sqrt(expect / samples)  # Poisson variance equals the mean
        assert abs(observed.mean() - expect) <= 3 * se


def test_fast_and_exact_paths_agree_in_distribution():
    params = two_block_params(size=30, k=8.0)
    truth = np.repeat([0, 1], 30)
    samples = 400
    means = {}
    for method in ("exact", "fast"):
        inter = np.empty(samples)
        total = np.empty(samples)
        for s in range(samples):
            g = rv.sample_dcsbm(params, seed=31_000 + s, method=method)
            total[s] = g.m
            inter[s] = rv.partition_stats(g, truth).m_rs(0, 1)
        means[method] = (total.mean(), inter.mean())
    # each mean concentrates around the same model value; allow 4 joint se
    expect_inter = 0.2 * 240 * 240 / 480
    se_inter = np.sqrt(2 * expect_inter / samples)
    assert abs(means["exact"][1] - means["fast"][1]) <= 4 * se_inter
    assert abs(means["exact"][0] - means["fast"][0]) <= 4 * np.sqrt(2 * means["exact"][0] / samples)


def test_uniform_density_reproduces_configuration_expectation():
    # omega identically 1: multiplicity mean between two nodes is k_i k_j / 2m
    k = np.array([1.0, 2.0, 3.0, 4.0, 10.0, 10.0, 20.0, 30.0])
    params = rv.DcsbmParams(block_assignment=np.zeros(8, dtype=int),
                            target_degrees=k,
                            omega=np.ones((1, 1)))
    samples = 2000
    mult = np.empty(samples)
    for s in range(samples):
        g = rv.sample_dcsbm(params, seed=47_000 + s)
        mult[s] = g.multiplicity(6, 7)
    expect = 20.0 * 30.0 / k.sum()
    se = np.sqrt(expect / samples)
    assert abs(mult.mean() - expect) <= 3 * se


def test_zero_density_gives_empty_graph():
    params = rv.DcsbmParams(block_assignment=np.zeros(5, dtype=int),
                            target_degrees=np.full(5, 3.0),
                            omega=np.zeros((1, 1)))
    g = rv.sample_dcsbm(params, seed=0)
    assert g.m == 0
    assert g.n == 5


def test_dcsbm_validation_errors():
    good = two_block_params()
    with pytest.raises(rv.ValidationError):
        rv.DcsbmParams(good.block_assignment, -np.ones(100), good.omega).validate()
    with pytest.raises(rv.ValidationError):
        rv.DcsbmParams(good.block_assignment, good.target_degrees,
                       np.array([[1.0, 0.2], [0.3, 1.0]])).validate()
    with pytest.raises(rv.ValidationError):
        rv.DcsbmParams(np.repeat([0, 2], 50), good.target_degrees, good.omega).validate()
    with pytest.raises(rv.ValidationError):
        rv.sample_dcsbm(good, seed=0, method="typo")
    big = rv.DcsbmParams(np.zeros(2001, dtype=int), np.full(2001, 2.0), np.ones((1, 1)))
    with pytest.raises(rv.ValidationError):
        rv.sample_dcsbm(big, seed=0, method="exact")


def test_extended_ppm_requires_assortative_diagonals():
    with pytest.raises(rv.ValidationError):
        rv.ExtendedPpmParams([5, 5], np.full(10, 4.0), 0.5, [0.5, 2.0]).validate()


def test_extended_ppm_single_community_allowed():
    params = rv.ExtendedPpmParams([12], np.full(12, 5.0), 0.0, [1.0])
    g, truth = rv.sample_extended_ppm(params, seed=3)
    assert truth.B == 1
    assert g.n == 12


def test_extended_ppm_ground_truth_layout():
    params = rv.ExtendedPpmParams([3, 4, 5], np.full(12, 6.0), 0.2, [2.0, 3.0, 4.0])
    g, truth = rv.sample_extended_ppm(params, seed=1)
    assert truth.n_r.tolist() == [3, 4, 5]
    assert truth.assignment.tolist() == [0] * 3 + [1] * 4 + [2] * 5


def test_er_exact_edge_count_and_simplicity():
    g = rv.sample_er(50, 200, seed=4)
    assert g.m == 200
    assert (g.edge_w == 1).all()
    assert (g.edge_u != g.edge_v).all()


def test_er_complete_and_empty_and_overfull():
    g = rv.sample_er(4, 6, seed=0)
    assert sorted((u, v) for u, v, _ in g.edges()) == [(0, 1), (0, 2), (0, 3),
                                                       (1, 2), (1, 3), (2, 3)]
    assert rv.sample_er(4, 0, seed=0).m == 0
    with pytest.raises(rv.ValidationError):
        rv.sample_er(4, 7, seed=0)


def test_er_determinism():
    assert serialize(rv.sample_er(30, 100, seed=8)) == serialize(rv.sample_er(30, 100, seed=8))


def test_make_clique():
    g = rv.make_clique(6)
    assert g.n == 6 and g.m == 15
    assert (g.degrees == 5).all()
    with pytest.raises(rv.ValidationError):
        rv.make_clique(0)


def test_plateau_fixture_shape():
    g, truth = rv.make_plateau_fixture(seed=0)
    assert g.n == 112
    assert g.m == 989
    assert truth.B == 3
    assert truth.n_r.tolist() == [100, 6, 6]
    assert truth.kappa_r.tolist()[1:] == [32, 32]
    assert truth.m_r.tolist()[1:] == [15, 15]
    assert truth.m_rs(1, 2) == 1


def test_plateau_fixture_deterministic():
    a, _ = rv.make_plateau_fixture(seed=5)
    b, _ = rv.make_plateau_fixture(seed=5)
    c, _ = rv.make_plateau_fixture(seed=6)
    assert serialize(a) == serialize(b)
    assert serialize(a) != serialize(c)
