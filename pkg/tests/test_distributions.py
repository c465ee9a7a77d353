from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplex_spectra import distributions as d


class TestMoments:
    def test_bernoulli_half(self):
        spec = d.bernoulli(0.5)
        assert spec.mean == 0.5
        assert spec.variance == 0.25
        assert spec.sup_centered == 0.5

    def test_bernoulli_quarter_third_moment(self):
        # E[(chi-p)^3] = p(1-p)^3 - (1-p)p^3 = q(1-2p) = (3/16)(1/2) = 3/32
        spec = d.bernoulli(0.25)
        assert spec.central_moment(3) == pytest.approx(3 / 32, rel=1e-14)

    def test_rademacher_moments(self):
        spec = d.rademacher()
        for m in range(10):
            want = 0.0 if m % 2 else 1.0
            assert spec.central_moment(m) == want
            assert spec.abs_central_moment(m) == 1.0

    def test_uniform_moments(self):
        spec = d.uniform(0.0, 1.0)
        assert spec.mean == 0.5
        assert spec.variance == pytest.approx(1 / 12, rel=1e-14)
        assert spec.sup_centered == 0.5
        # E[(U-1/2)^m] = (1/2)^m/(m+1) for even m
        assert spec.central_moment(2) == pytest.approx(1 / 12)
        assert spec.central_moment(3) == 0.0
        assert spec.central_moment(4) == pytest.approx((0.5) ** 4 / 5)
        assert spec.abs_central_moment(3) == pytest.approx((0.5) ** 3 / 4)

    def test_twopoint(self):
        spec = d.twopoint(-1.0, 2.0, 2 / 3)
        assert spec.mean == pytest.approx(0.0)
        assert spec.variance == pytest.approx(2.0)
        assert spec.sup_centered == pytest.approx(2.0)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError):
            d.bernoulli(0.0)
        with pytest.raises(ValueError):
            d.uniform(1.0, 1.0)
        with pytest.raises(ValueError):
            d.twopoint(3.0, 3.0, 0.5)

    @given(st.floats(0.01, 0.99))
    @settings(max_examples=50, deadline=None)
    def test_moment_consistency(self, p):
        spec = d.bernoulli(p)
        assert spec.central_moment(2) == pytest.approx(spec.variance)
        assert spec.central_moment(0) == 1.0
        assert spec.central_moment(1) == pytest.approx(0.0, abs=1e-15)
        # abs moment dominates signed moment
        for m in range(2, 8):
            assert abs(spec.central_moment(m)) <= \
                spec.abs_central_moment(m) + 1e-15

    @given(st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=30, deadline=None)
    def test_abs_moments_are_supermultiplicative(self, a, c):
        # b^(a) b^(c) <= b^(a+c): powers of |Z-EZ| are positively associated
        for spec in (d.bernoulli(0.3), d.rademacher(), d.uniform(0, 1)):
            lhs = spec.abs_central_moment(a) * spec.abs_central_moment(c)
            assert lhs <= spec.abs_central_moment(a + c) * (1 + 1e-12)


class TestSampling:
    def test_bernoulli_coupling_convention(self):
        u = np.array([0.0, 0.29, 0.3, 0.31, 0.999])
        z = d.bernoulli(0.3).from_uniforms(u)
        assert list(z) == [1.0, 1.0, 0.0, 0.0, 0.0]

    def test_uniform_identity(self):
        u = np.linspace(0, 1, 11)
        assert np.array_equal(d.uniform(0, 1).from_uniforms(u), u)

    def test_empirical_moments(self):
        rng = np.random.default_rng(0)
        u = rng.random(200_000)
        for spec in (d.bernoulli(0.3), d.rademacher(),
                     d.uniform(-1, 2), d.twopoint(0.0, 3.0, 0.25)):
            z = spec.from_uniforms(u)
            assert z.mean() == pytest.approx(spec.mean, abs=0.01)
            assert z.var() == pytest.approx(spec.variance, abs=0.02)
            assert np.abs(z - spec.mean).max() <= spec.sup_centered + 1e-12


class TestParsing:
    def test_forms(self):
        assert d.parse_dist("bernoulli:0.3") == d.bernoulli(0.3)
        assert d.parse_dist("rademacher") == d.rademacher()
        assert d.parse_dist("uniform:0,1") == d.uniform(0, 1)
        assert d.parse_dist("twopoint:1,2,0.5") == d.twopoint(1, 2, 0.5)

    def test_errors(self):
        with pytest.raises(ValueError):
            d.parse_dist("gaussian:0,1")
        with pytest.raises(ValueError):
            d.parse_dist("bernoulli")
        with pytest.raises(ValueError):
            d.parse_dist("uniform:1")


def test_dist_stats_tuple():
    spec = d.bernoulli(0.25)
    mean, var, sup, mu4, absmu4 = d.dist_stats(spec, 4)
    assert (mean, var) == (0.25, pytest.approx(3 / 16))
    assert sup == 0.75
    # E[(chi-p)^4] = p(1-p)^4 + (1-p)p^4
    want = 0.25 * 0.75**4 + 0.75 * 0.25**4
    assert mu4 == pytest.approx(want, rel=1e-14)
    assert absmu4 == pytest.approx(want, rel=1e-14)
