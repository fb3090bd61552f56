import itertools
import math

import numpy as np
import pytest
from scipy import stats as sps

from evorot import io
from evorot.rotation import relative_rotation
from evorot.stats import (
    kruskal_wallis,
    midranks,
    one_sample_t,
    sign_test,
    spearman_rank,
    two_sample_t,
)


def benchmark_phi():
    _, table = io.load_l_table(io.data_path("rotation_table.csv"))
    return relative_rotation({g: table[g] for g in ("3", "5", "6", "7")})


def benchmark_abs(games):
    _, table = io.load_l_table(io.data_path("rotation_table.csv"))
    return [abs(float(v)) for g in games for v in table[g]]


class TestKruskalWallis:
    def test_hand_computed_example(self):
        res = kruskal_wallis([[1, 2], [3, 4], [5, 6]])
        assert res.statistic == pytest.approx(32 / 7)
        assert res.df == 2

    def test_identical_groups_zero(self):
        res = kruskal_wallis([[4.0, 4.0], [4.0, 4.0]])
        assert res.statistic == 0.0 and res.pvalue == 1.0

    def test_benchmark_phi_matrix(self):
        phi = benchmark_phi()
        groups = [[float(phi[g][j]) for g in phi] for j in range(13)]
        res = kruskal_wallis(groups)
        assert res.statistic == pytest.approx(21.2531, abs=1e-3)
        assert res.df == 12
        assert res.pvalue < 0.05

    def test_matches_scipy_with_ties(self):
        rng = np.random.default_rng(40)
        for _ in range(30):
            sizes = rng.integers(2, 7, size=int(rng.integers(2, 5)))
            gs = [rng.integers(0, 6, size=s).astype(float) for s in sizes]
            if len(np.unique(np.concatenate(gs))) == 1:
                continue
            mine = kruskal_wallis(gs)
            ref = sps.kruskal(*gs)
            assert mine.statistic == pytest.approx(ref.statistic)
            assert mine.pvalue == pytest.approx(ref.pvalue)

    def test_invariant_under_monotone_transforms(self):
        rng = np.random.default_rng(41)
        gs = [rng.normal(size=5), rng.normal(size=4), rng.normal(size=6)]
        base = kruskal_wallis(gs).statistic
        for f in (np.exp, lambda x: x**3, lambda x: np.arctan(x) * 7 - 2):
            assert kruskal_wallis([f(g) for g in gs]).statistic == pytest.approx(base)

    def test_validation(self):
        with pytest.raises(ValueError):
            kruskal_wallis([[1.0, 2.0]])
        with pytest.raises(ValueError):
            kruskal_wallis([[1.0], []])


def exact_permutation_pvalue(groups):
    """Brute-force oracle: the permutation distribution of the rank
    statistic over every assignment of the pooled values to the group
    layout, with scipy computing each statistic."""
    pooled = np.concatenate(groups)
    s1, s2, _ = (len(g) for g in groups)
    idx = range(len(pooled))
    h_obs = sps.kruskal(*groups).statistic
    hits = total = 0
    for c1 in itertools.combinations(idx, s1):
        rest = [i for i in idx if i not in c1]
        for c2 in itertools.combinations(rest, s2):
            c3 = [i for i in rest if i not in c2]
            h = sps.kruskal(pooled[list(c1)], pooled[list(c2)], pooled[c3]).statistic
            total += 1
            if h >= h_obs - 1e-12:
                hits += 1
    return hits / total


class TestKruskalWallisPermutationOracle:
    def test_chi_square_tracks_exact_distribution(self):
        # n = 8 in layout (3, 3, 2): the chi-square tail is an approximation;
        # measured error stays under 0.15 and the two p-values always order
        # the instances identically (both are monotone in the statistic)
        rng = np.random.default_rng(99)
        rows = []
        for _ in range(20):
            vals = rng.permutation(np.arange(1.0, 9.0))
            gs = [vals[:3], vals[3:6], vals[6:]]
            mine = kruskal_wallis(gs)
            rows.append((mine.statistic, mine.pvalue, exact_permutation_pvalue(gs)))
        print("\n  H      p_chi2   p_exact")
        for h, pc, pe in sorted(rows):
            print(f"  {h:6.3f}  {pc:.4f}   {pe:.4f}")
        assert max(abs(pc - pe) for _, pc, pe in rows) < 0.15
        ordered = sorted(rows)
        assert all(
            ordered[i][2] >= ordered[i + 1][2] - 1e-12 for i in range(len(ordered) - 1)
        )


class TestTwoSampleT:
    def test_benchmark_strength_separation(self):
        res = two_sample_t(benchmark_abs(("6", "7")), benchmark_abs(("3", "5")))
        assert res.pvalue < 0.01

    def test_identical_samples(self):
        res = two_sample_t([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert res.statistic == 0.0 and res.pvalue == 1.0

    def test_near_degenerate_separation(self):
        x = [0.0, 0.0, 0.0, 0.0]
        y = [1.0, 1.0 + 1e-9, 1.0 + 2e-9, 1.0 + 3e-9]
        assert two_sample_t(x, y).pvalue < 1e-6

    def test_both_constant(self):
        assert two_sample_t([2.0, 2.0], [2.0, 2.0]).pvalue == 1.0
        assert two_sample_t([2.0, 2.0], [3.0, 3.0]).pvalue == 0.0

    def test_antisymmetric_statistic(self):
        rng = np.random.default_rng(42)
        x, y = rng.normal(size=8), rng.normal(1.0, 2.0, size=5)
        fwd, rev = two_sample_t(x, y), two_sample_t(y, x)
        assert fwd.statistic == pytest.approx(-rev.statistic)
        assert fwd.pvalue == pytest.approx(rev.pvalue)

    def test_matches_scipy_welch(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            x = rng.normal(size=int(rng.integers(3, 12)))
            y = rng.normal(0.5, 1.7, size=int(rng.integers(3, 12)))
            mine = two_sample_t(x, y)
            ref = sps.ttest_ind(x, y, equal_var=False)
            assert mine.statistic == pytest.approx(ref.statistic)
            assert mine.pvalue == pytest.approx(ref.pvalue)


class TestOneSampleT:
    def test_constant_at_popmean(self):
        res = one_sample_t([1.0, 1.0, 1.0], 1.0)
        assert res.statistic == 0.0 and res.pvalue == 1.0

    def test_matches_scipy(self):
        rng = np.random.default_rng(44)
        x = rng.normal(1.2, 0.4, size=9)
        mine = one_sample_t(x, 1.0)
        ref = sps.ttest_1samp(x, 1.0)
        assert mine.statistic == pytest.approx(ref.statistic)
        assert mine.pvalue == pytest.approx(ref.pvalue)


class TestSignTest:
    def test_13_of_13(self):
        assert sign_test(13, 13) == pytest.approx(2 * 0.5**13)

    def test_52_of_52(self):
        p = sign_test(52, 52)
        assert p == pytest.approx(2.0**-51)
        assert p < 1e-15

    def test_even_split_is_one(self):
        assert sign_test(5, 10) == 1.0
        assert sign_test(0, 0) == 1.0

    def test_symmetry(self):
        for n in (7, 12, 30):
            for k in range(n + 1):
                assert sign_test(k, n) == sign_test(n - k, n)

    def test_matches_scipy_binomtest(self):
        rng = np.random.default_rng(45)
        for _ in range(100):
            n = int(rng.integers(1, 60))
            k = int(rng.integers(0, n + 1))
            assert sign_test(k, n) == pytest.approx(
                sps.binomtest(k, n, 0.5).pvalue, abs=1e-12
            )

    def test_bounds(self):
        with pytest.raises(ValueError):
            sign_test(5, 4)


class TestSpearman:
    def test_benchmark_eigenvalues_vs_rounded_means(self):
        lam = [5 / 36, math.sqrt(10) / 18, 2 / 9, 6 / 25]
        printed = [1.07, 1.07, 1.96, 2.28]  # one tie by rounding
        rho = spearman_rank(lam, printed)
        assert rho == pytest.approx(4.5 / math.sqrt(22.5))  # 0.9487 with mid-ranks

    def test_perfect_and_reversed(self):
        assert spearman_rank([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
        assert spearman_rank([1, 2, 3, 4], [8, 6, 4, 2]) == pytest.approx(-1.0)

    def test_invariant_under_increasing_transforms(self):
        rng = np.random.default_rng(46)
        x, y = rng.normal(size=10), rng.normal(size=10)
        base = spearman_rank(x, y)
        assert spearman_rank(np.exp(x), y) == pytest.approx(base)
        assert spearman_rank(x, y**3) == pytest.approx(base)

    def test_matches_scipy(self):
        rng = np.random.default_rng(47)
        for _ in range(20):
            x = rng.integers(0, 5, size=12).astype(float)  # ties likely
            y = rng.normal(size=12)
            ref = sps.spearmanr(x, y).statistic
            assert spearman_rank(x, y) == pytest.approx(ref)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            spearman_rank([1, 2], [1, 2, 3])


class TestMidranks:
    def test_ties_share_average_rank(self):
        assert midranks([10, 20, 20, 30]).tolist() == [1.0, 2.5, 2.5, 4.0]

    def test_matches_scipy_rankdata(self):
        rng = np.random.default_rng(48)
        x = rng.integers(0, 4, size=25).astype(float)
        assert np.allclose(midranks(x), sps.rankdata(x))
