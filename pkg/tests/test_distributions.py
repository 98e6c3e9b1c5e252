import math

import numpy as np
import pytest

from telefid.core import PolarCap, Uniform, VonMisesFisher, BlochDirection
from telefid.distributions import (cos_moments, density, mean_polar_angle,
                                   qutrit_cap_volume, sample,
                                   sample_directions, sample_qutrit_inputs,
                                   spread_moments)
from telefid.qutrit import participation_moment

# Reference moments computed with 50-digit arithmetic, then rounded.
VMF_MOMENTS = {
    0.0001: (0.0000333333333111111111, 0.333333333777777777,
             0.0000199999999904761905, 0.200000000380952381),
    0.01: (0.00333331111132274921, 0.333337777735450159,
           0.00199999047627513144, 0.200003809489947423),
    0.15: (0.0499251603534985379, 0.334331195286686161,
           0.0299679212864419899, 0.200855432361546936),
    0.3: (0.0994050969884082561, 0.337299353410611626,
          0.0597448962156253311, 0.203401383791662252),
    0.7: (0.226050207231200833, 0.354142265053711905,
          0.136869071286721241, 0.217891021218735767),
    2.0: (0.537314720727548096, 0.462685279272451904,
          0.34328680181887024, 0.313426396362259521),
    5.0: (0.800090803982019376, 0.67996367840719225,
          0.592112596937704026, 0.526309922449836779),
    10.0: (0.900000004122307253, 0.819999999175538549,
           0.754000004369645689, 0.698399998252141725),
    50.0: (0.98, 0.9608, 0.942352, 0.92461184),
    300.0: (0.996666666666666667, 0.993355555555555556,
            0.990066444444444444, 0.986799114074074074),
    1000.0: (0.999, 0.998002, 0.997005994, 0.996011976024),
}


class TestCosMoments:
    @pytest.mark.parametrize("kappa", sorted(VMF_MOMENTS))
    def test_vmf_against_reference(self, kappa):
        m = cos_moments(VonMisesFisher(kappa))
        for k, expected in enumerate(VMF_MOMENTS[kappa], start=1):
            assert math.isclose(m[k], expected, rel_tol=1e-12), (kappa, k)

    def test_cap_closed_forms(self):
        m = cos_moments(PolarCap(math.pi / 3))
        assert math.isclose(m[1], 0.75, abs_tol=1e-15)
        assert math.isclose(m[2], 7.0 / 12.0, abs_tol=1e-15)
        m = cos_moments(PolarCap(math.pi / 2))
        for k, expected in enumerate((0.5, 1 / 3, 0.25, 0.2), start=1):
            assert math.isclose(m[k], expected, abs_tol=1e-15)

    def test_full_cap_matches_uniform(self):
        full = cos_moments(PolarCap(math.pi))
        unif = cos_moments(Uniform())
        for k in range(1, 5):
            assert math.isclose(full[k], unif[k], abs_tol=1e-15)
        assert unif[1] == 0.0
        assert math.isclose(unif[2], 1 / 3, abs_tol=1e-16)
        assert math.isclose(unif[4], 0.2, abs_tol=1e-16)

    def test_vmf_zero_matches_uniform(self):
        m = cos_moments(VonMisesFisher(0.0))
        unif = cos_moments(Uniform())
        for k in range(1, 5):
            assert math.isclose(m[k], unif[k], abs_tol=1e-14)

    def test_zeroth_moment(self):
        assert cos_moments(Uniform())[0] == 1.0

    def test_narrow_cap_stays_finite(self):
        m = cos_moments(PolarCap(1e-7))
        assert 0.0 < 1.0 - m[1] < 1e-13
        assert m[4] <= m[3] <= m[2] <= m[1]


class TestSpreadMoments:
    def test_uniform_values(self):
        v2c, s4 = spread_moments(Uniform())
        assert math.isclose(v2c, 4.0 / 45.0, rel_tol=1e-14)
        assert math.isclose(s4, 8.0 / 15.0, rel_tol=1e-14)

    @pytest.mark.parametrize("dist", [PolarCap(2.0), VonMisesFisher(1.0),
                                      VonMisesFisher(30.0)])
    def test_consistency_with_raw_moments(self, dist):
        # v2c is the variance of cos^2 theta; s4 is <sin^4 theta>
        m = cos_moments(dist)
        v2c, s4 = spread_moments(dist)
        assert math.isclose(v2c, m[4] - m[2] ** 2, rel_tol=1e-10, abs_tol=1e-14)
        assert math.isclose(s4, 1 - 2 * m[2] + m[4], rel_tol=1e-10)

    def test_series_seam_is_smooth(self):
        below = spread_moments(VonMisesFisher(0.2499))
        above = spread_moments(VonMisesFisher(0.2501))
        assert abs(below[0] - above[0]) < 1e-6
        # a straddle is not a match; check each side against raw moments
        for kappa in (0.2499, 0.2501):
            m = cos_moments(VonMisesFisher(kappa))
            v2c, _ = spread_moments(VonMisesFisher(kappa))
            assert math.isclose(v2c, m[4] - m[2] ** 2, rel_tol=1e-10)


class TestMeanPolarAngle:
    @pytest.mark.parametrize("theta0,expected", [
        (0.5, 0.331931939489109756),
        (1.5, 0.959243376257214898),
        (math.pi, math.pi / 2),
    ])
    def test_cap(self, theta0, expected):
        assert math.isclose(mean_polar_angle(PolarCap(theta0)), expected,
                            rel_tol=1e-12)

    @pytest.mark.parametrize("kappa,expected", [
        (0.5, 1.37744407296612828),
        (2.0, 0.92867650666785195),
        (10.0, 0.401600267268949178),
        (100.0, 0.125488968558246353),
    ])
    def test_vmf(self, kappa, expected):
        assert math.isclose(mean_polar_angle(VonMisesFisher(kappa)), expected,
                            rel_tol=1e-12)

    def test_uniform(self):
        assert math.isclose(mean_polar_angle(Uniform()), math.pi / 2,
                            rel_tol=1e-15)


class TestDensity:
    def test_cap_is_flat_inside_zero_outside(self):
        cap = PolarCap(1.0)
        inside = density(cap, BlochDirection(0.5, 0.0))
        inside2 = density(cap, BlochDirection(0.99, 2.0))
        outside = density(cap, BlochDirection(1.01, 0.0))
        assert inside == inside2
        assert outside == 0.0
        area = 2 * math.pi * (1 - math.cos(1.0))
        assert math.isclose(inside, 1.0 / area, rel_tol=1e-14)

    def test_vmf_ratio(self):
        kappa = 3.0
        d = VonMisesFisher(kappa)
        top = density(d, BlochDirection(0.0, 0.0))
        mid = density(d, BlochDirection(math.pi / 2, 1.0))
        assert math.isclose(top / mid, math.exp(kappa), rel_tol=1e-12)

    def test_uniform_density(self):
        assert math.isclose(density(Uniform(), BlochDirection(2.0, 0.3)),
                            1.0 / (4 * math.pi), rel_tol=1e-15)


class TestSamplers:
    def test_cap_support_and_mean(self):
        rng = np.random.default_rng(11)
        cap = PolarCap(1.2)
        pts = sample_directions(cap, 40000, rng)
        assert pts.shape == (40000, 2)
        assert np.all(pts[:, 0] <= 1.2 + 1e-12)
        m = cos_moments(cap)
        c = np.cos(pts[:, 0])
        z = (c.mean() - m[1]) / (c.std(ddof=1) / math.sqrt(len(c)))
        assert abs(z) < 4.0

    def test_vmf_mean_cos(self):
        rng = np.random.default_rng(12)
        d = VonMisesFisher(4.0)
        pts = sample_directions(d, 40000, rng)
        m = cos_moments(d)
        c = np.cos(pts[:, 0])
        z = (c.mean() - m[1]) / (c.std(ddof=1) / math.sqrt(len(c)))
        assert abs(z) < 4.0

    def test_single_sample_type(self):
        rng = np.random.default_rng(0)
        b = sample(Uniform(), rng)
        assert isinstance(b, BlochDirection)

    def test_seeded_reproducibility(self):
        a = sample_directions(PolarCap(2.0), 100, np.random.default_rng(5))
        b = sample_directions(PolarCap(2.0), 100, np.random.default_rng(5))
        assert np.array_equal(a, b)


class TestQutritSampling:
    def test_norms(self):
        rng = np.random.default_rng(3)
        v = sample_qutrit_inputs(math.pi / 3, 2000, rng)
        assert v.shape == (2000, 3)
        norms = np.linalg.norm(v, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-12

    def test_full_range_fourth_moment(self):
        # chart measure at theta4_max=pi matches the Haar value E|x_i|^4 = 1/6
        rng = np.random.default_rng(7)
        v = sample_qutrit_inputs(math.pi, 120000, rng)
        q = np.abs(v[:, 0]) ** 4
        z = (q.mean() - 1 / 6) / (q.std(ddof=1) / math.sqrt(len(q)))
        assert abs(z) < 4.0

    def test_restricted_participation(self):
        rng = np.random.default_rng(9)
        v = sample_qutrit_inputs(math.pi / 4, 150000, rng)
        p4 = np.sum(np.abs(v) ** 4, axis=1)
        expected = participation_moment(math.pi / 4)
        z = (p4.mean() - expected) / (p4.std(ddof=1) / math.sqrt(len(p4)))
        assert abs(z) < 4.0

    def test_volume(self):
        assert math.isclose(qutrit_cap_volume(math.pi), math.pi ** 3,
                            rel_tol=1e-12)
        assert qutrit_cap_volume(1.0) < qutrit_cap_volume(2.0)
