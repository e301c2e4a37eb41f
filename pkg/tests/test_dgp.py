import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from taildep import (
    DGP_NAMES,
    DGP_TABLE,
    DgpSpec,
    RngStream,
    compute_ranks,
    empirical_stdf,
    mc_stdf_oracle,
    sample_dgp,
    student_t_cdf,
    tail_uniforms,
    true_stdf,
)
from taildep.dgp import _positive_stable, joint_tail_fraction


def test_student_t_cdf_known_values():
    assert student_t_cdf(0.0, 0.7) == 0.5
    assert_allclose(student_t_cdf(1.0, 1.0), 0.75, atol=1e-14)
    assert_allclose(student_t_cdf(np.sqrt(2.0), 2.0), 0.5 + np.sqrt(2) / (2 * 2), atol=1e-13)


def test_student_t_cdf_against_scipy():
    rng = np.random.default_rng(0)
    z = rng.normal(scale=3, size=200)
    for nu in (0.5, 1.0, 2.0, 4.0, 11.5):
        assert_allclose(student_t_cdf(z, nu), stats.t(nu).cdf(z), atol=1e-12)


def test_student_t_cdf_extremes():
    assert student_t_cdf(np.inf, 3.0) == 1.0
    assert student_t_cdf(-np.inf, 3.0) == 0.0


@pytest.mark.parametrize(
    "name, point, expected",
    [
        ("archimax-logistic", (1.0, 1.0), np.sqrt(2.0)),
        ("archimax-mixed", (1.0, 1.0), 1.5),
        ("bpii3", (1.0, 1.0), 2.0 - 2.0**-3),
        ("cauchy", (1.0, 1.0), 1.0 + 1.0 / np.sqrt(2.0)),
        ("logistic", (1.0, 1.0), 2.0 ** (1.0 / 3.0)),
    ],
)
def test_true_stdf_anchor_values(name, point, expected):
    assert_allclose(true_stdf(DGP_TABLE[name], point), expected, atol=1e-12)


def test_true_stdf_boundary_is_identity():
    for name in DGP_NAMES:
        spec = DGP_TABLE[name]
        assert true_stdf(spec, (0.8, 0.0)) == 0.8
        assert true_stdf(spec, (0.0, 1.3)) == 1.3
        assert true_stdf(spec, (0.0, 0.0)) == 0.0


def test_true_stdf_bounds_and_homogeneity():
    rng = np.random.default_rng(1)
    for name in DGP_NAMES:
        spec = DGP_TABLE[name]
        for _ in range(100):
            x = rng.random(2) * 2.0
            v = true_stdf(spec, x)
            assert max(x) - 1e-12 <= v <= x.sum() + 1e-12
            for a in (0.5, 2.0):
                assert_allclose(true_stdf(spec, a * x), a * v, rtol=1e-12)


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        DgpSpec("t_copula", df=-1.0, theta=0.0)
    with pytest.raises(ValueError):
        DgpSpec("t_copula", df=2.0, theta=1.5)
    with pytest.raises(ValueError):
        DgpSpec("bpii", beta=0.0)
    with pytest.raises(ValueError):
        DgpSpec("symmetric_logistic", s=1.5)
    with pytest.raises(ValueError):
        DgpSpec("archimax", generator="clayton")
    with pytest.raises(ValueError):
        DgpSpec("gaussian")


def test_reproducibility_bit_exact():
    for name in ("t4", "bpii3", "logistic", "archimax-mixed"):
        spec = DGP_TABLE[name]
        a = sample_dgp(spec, 500, RngStream(42, 1, 7))
        b = sample_dgp(spec, 500, RngStream(42, 1, 7))
        c = sample_dgp(spec, 500, RngStream(42, 1, 8))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


def test_t_copula_marginals_uniform():
    sample = sample_dgp(DGP_TABLE["t2"], 20000, RngStream(5, 0, 0))
    for j in (0, 1):
        stat = stats.kstest(sample[:, j], "uniform").statistic
        assert stat < 0.02


def test_t_copula_kendall_tau_matches_arcsine_law():
    sample = sample_dgp(DGP_TABLE["t2"], 20000, RngStream(6, 0, 0))
    tau = stats.kendalltau(sample[:, 0], sample[:, 1]).statistic
    assert abs(tau - (2.0 / np.pi) * np.arcsin(0.5)) < 0.02


def test_logistic_s_one_is_independence():
    spec = DgpSpec("symmetric_logistic", s=1.0)
    sample = sample_dgp(spec, 20000, RngStream(7, 0, 0))
    corr = np.corrcoef(sample[:, 0], sample[:, 1])[0, 1]
    assert abs(corr) < 0.03
    for j in (0, 1):
        assert stats.kstest(sample[:, j], "uniform").statistic < 0.02


def test_logistic_marginals_uniform():
    sample = sample_dgp(DGP_TABLE["logistic"], 20000, RngStream(8, 0, 0))
    for j in (0, 1):
        assert stats.kstest(sample[:, j], "uniform").statistic < 0.02


def test_positive_stable_laplace_transform():
    g = np.random.default_rng(9)
    alpha = 1.0 / 3.0
    s = _positive_stable(alpha, 300_000, g)
    for t in (0.5, 1.0, 2.0):
        emp = np.exp(-t * s)
        want = np.exp(-(t**alpha))
        se = emp.std() / np.sqrt(len(s))
        assert abs(emp.mean() - want) < 5 * se + 1e-4


def test_archimax_marginals_uniform():
    for name in ("archimax-logistic", "archimax-mixed"):
        sample = sample_dgp(DGP_TABLE[name], 20000, RngStream(10, 0, 0))
        for j in (0, 1):
            assert stats.kstest(sample[:, j], "uniform").statistic < 0.02


def test_archimax_conditional_cdf_monotone():
    from taildep.dgp import _archimax_conditional_cdf

    u = np.full(50, 0.37)
    v = np.linspace(1e-6, 1 - 1e-6, 50)
    for tag in ("logistic", "mixed"):
        f = _archimax_conditional_cdf(tag, u, v)
        assert (np.diff(f) > -1e-12).all()
        assert f[0] < 1e-3 and f[-1] > 1 - 1e-3


def test_bpii_joint_survival():
    # gamma frailty construction: P(X1 > x, X2 > y) = (1 + x + y)^(-beta)
    sample = sample_dgp(DGP_TABLE["bpii3"], 200_000, RngStream(11, 0, 0))
    for x, y in [(0.2, 0.1), (0.5, 0.5), (1.0, 0.3)]:
        emp = ((sample[:, 0] > x) & (sample[:, 1] > y)).mean()
        want = (1.0 + x + y) ** -3.0
        assert abs(emp - want) < 4 * np.sqrt(want * (1 - want) / len(sample)) + 1e-4


def test_oracle_counts_match_mock_limits():
    g = np.random.default_rng(12)
    t = 100.0
    m = 400_000
    # independence: t * P(U1 <= 1/t or U2 <= 1/t) = 2 - 1/t
    u = g.random((m, 2))
    frac = joint_tail_fraction(u, np.array([1.0, 1.0]), t) / m
    assert abs(t * frac - (2.0 - 1.0 / t)) < 0.03
    # comonotone: exactly 1
    w = g.random(m)
    frac = joint_tail_fraction(np.column_stack([w, w]), np.array([1.0, 1.0]), t) / m
    assert abs(t * frac - 1.0) < 0.03


def test_oracle_matches_archimax_anchor():
    est = mc_stdf_oracle(
        DGP_TABLE["archimax-logistic"], (1.0, 1.0), t=200.0, m=300_000, rng=RngStream(13, 0, 0)
    )
    assert abs(est.value - np.sqrt(2.0)) < max(0.02, 5 * est.se)
    assert est.se > 0


def test_tail_uniforms_are_uniform_for_bpii():
    sample = sample_dgp(DGP_TABLE["bpii3"], 20000, RngStream(14, 0, 0))
    u = tail_uniforms(DGP_TABLE["bpii3"], sample)
    for j in (0, 1):
        assert stats.kstest(u[:, j], "uniform").statistic < 0.02


def test_sampler_oracle_first_order_consistency():
    # a single large sample's empirical stdf should sit near the closed form
    for di, name in enumerate(DGP_NAMES):
        spec = DGP_TABLE[name]
        sample = sample_dgp(spec, 50_000, RngStream(15, di, 0))
        ranks = compute_ranks(sample)
        got = empirical_stdf(ranks, 2000, (0.5, 0.5))
        assert abs(got - true_stdf(spec, (0.5, 0.5))) < 0.05
