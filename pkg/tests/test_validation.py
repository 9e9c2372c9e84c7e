import numpy as np
import pytest
import scipy.stats

from sectionlab.validation import (
    check_ball_section_law,
    check_brunn_concavity,
    check_inclusion_bound,
    check_section_oracle,
    ks_two_sample,
    ks_vs_cdf,
)


class TestKsHelpers:
    def test_two_sample_matches_scipy(self):
        gen = np.random.default_rng(0)
        x = gen.standard_normal(500)
        y = gen.standard_normal(700) + 0.1
        ours = ks_two_sample(x, y)
        ref = scipy.stats.ks_2samp(x, y).statistic
        assert ours == pytest.approx(ref, abs=1e-12)

    def test_identical_samples(self):
        x = np.array([1.0, 2.0, 3.0])
        assert ks_two_sample(x, x) == 0.0

    def test_vs_cdf_matches_scipy(self):
        gen = np.random.default_rng(1)
        x = gen.uniform(0, 1, 400)
        ours = ks_vs_cdf(x, lambda t: np.clip(t, 0, 1))
        ref = scipy.stats.kstest(x, "uniform").statistic
        assert ours == pytest.approx(ref, abs=1e-12)


class TestChecks:
    def test_ball_law_small(self):
        result = check_ball_section_law(n=100_000, seed=0)
        assert result.passed, result.line()

    def test_brunn(self, dodecahedron):
        result = check_brunn_concavity(dodecahedron, seed=2)
        assert result.passed, result.line()

    def test_oracle_small(self, random_hull20):
        result = check_section_oracle(random_hull20, n_planes=500, seed=3)
        assert result.passed, result.line()

    def test_inclusion_small(self):
        result = check_inclusion_bound(n=50_000, seed=1, slack=0.02)
        assert result.passed, result.line()

    def test_line_format(self):
        result = check_ball_section_law(n=10_000, seed=0)
        line = result.line()
        assert line.startswith(("PASS", "FAIL"))
        assert "statistic=" in line
