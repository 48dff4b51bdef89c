import math

import numpy as np
import pytest
import scipy.stats

from evacsim.stochastic import (AttributeDistributions, LambdaOutOfRange,
                                make_rng, sample_door_delay, sample_max_speed,
                                sample_poisson, shuffle_order,
                                speed_from_count, split_seed)

N_BIG = 10 ** 6


class TestRng:
    def test_same_seed_same_stream(self):
        a = make_rng(0).random(100)
        b = make_rng(0).random(100)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        assert not np.array_equal(make_rng(0).random(100), make_rng(1).random(100))

    def test_uniform_mean(self):
        mean = make_rng(123).random(N_BIG).mean()
        assert abs(mean - 0.5) < 0.002


class TestSplitSeed:
    def test_deterministic(self):
        assert split_seed(7, 0) == split_seed(7, 0)

    def test_index_sensitivity(self):
        assert split_seed(7, 0) != split_seed(7, 1)

    def test_no_collisions_100k(self):
        seeds = {split_seed(99, i) for i in range(100_000)}
        assert len(seeds) == 100_000

    def test_64_bit_range(self):
        for i in (0, 1, 2 ** 31, 10 ** 5):
            assert 0 <= split_seed(12345, i) < 2 ** 64

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            split_seed(1, -1)


class TestPoisson:
    def test_lambda_zero_degenerate(self):
        rng = make_rng(5)
        assert all(sample_poisson(0.0, rng) == 0 for _ in range(1000))

    def test_lambda_out_of_range(self):
        rng = make_rng(5)
        with pytest.raises(LambdaOutOfRange):
            sample_poisson(-0.1, rng)
        with pytest.raises(LambdaOutOfRange):
            sample_poisson(100.5, rng)

    def test_moments_lambda_1_5(self):
        draws = make_rng(17).poisson(1.5, N_BIG)
        assert abs(draws.mean() - 1.5) < 0.01
        assert abs(draws.var(ddof=1) - 1.5) < 0.02

    def test_goodness_of_fit_lambda_7_5(self):
        lam = 7.5
        draws = make_rng(31).poisson(lam, N_BIG)
        ks = np.arange(0, 21)
        expected = scipy.stats.poisson.pmf(ks, lam) * N_BIG
        observed = np.array([(draws == k).sum() for k in ks], dtype=float)
        # fold the tail into a final bin so totals match
        tail_exp = N_BIG - expected.sum()
        tail_obs = N_BIG - observed.sum()
        chi = scipy.stats.chisquare(np.append(observed, tail_obs),
                                    np.append(expected, tail_exp))
        assert chi.pvalue > 0.01


class TestDoorDelay:
    def test_zero_mean_always_zero(self):
        dist = AttributeDistributions(mean_door_delay=0.0)
        rng = make_rng(1)
        assert all(sample_door_delay(dist, rng) == 0.0 for _ in range(1000))

    def test_mean_matches(self):
        dist = AttributeDistributions(mean_door_delay=1.5)
        rng = make_rng(2)
        draws = np.array([sample_door_delay(dist, rng) for _ in range(N_BIG)])
        assert abs(draws.mean() - 1.5) < 0.01

    def test_tick_grid_support(self):
        dist = AttributeDistributions(mean_door_delay=0.7)
        rng = make_rng(3)
        for _ in range(2000):
            v = sample_door_delay(dist, rng)
            assert v >= 0.0
            assert abs(v * 10 - round(v * 10)) < 1e-9


class TestMaxSpeed:
    def test_clamp_floor_and_cap(self):
        dist = AttributeDistributions()
        assert speed_from_count(dist, 0) == 0.3
        assert speed_from_count(dist, 15) == pytest.approx(1.05)
        assert speed_from_count(dist, 40) == pytest.approx(1.05)

    def test_bounds_always_hold(self):
        dist = AttributeDistributions()
        rng = make_rng(4)
        draws = np.array([sample_max_speed(dist, rng) for _ in range(200_000)])
        assert draws.min() >= 0.3 and draws.max() <= 1.05

    def test_mean_matches_pmf_oracle(self):
        dist = AttributeDistributions()  # speed_lambda 7.5
        ks = np.arange(0, 200)
        pmf = scipy.stats.poisson.pmf(ks, dist.speed_lambda)
        oracle = float(sum(p * speed_from_count(dist, int(k)) for k, p in zip(ks, pmf)))
        assert 0.655 <= oracle <= 0.695
        rng = make_rng(6)
        draws = np.array([sample_max_speed(dist, rng) for _ in range(N_BIG)])
        assert abs(draws.mean() - oracle) < 0.002

    def test_degenerate_lambda_zero(self):
        dist = AttributeDistributions(speed_lambda=0.0)
        rng = make_rng(8)
        assert all(sample_max_speed(dist, rng) == 0.3 for _ in range(100))

    def test_validation(self):
        with pytest.raises(ValueError):
            AttributeDistributions(mean_door_delay=-1.0)
        with pytest.raises(ValueError):
            AttributeDistributions(speed_floor=0.0)
        with pytest.raises(ValueError):
            AttributeDistributions(speed_floor=2.0, speed_cap=1.0)


class TestShuffle:
    def test_replay_identical(self):
        a = [shuffle_order(make_rng(9), 50) for _ in range(1)][0]
        b = shuffle_order(make_rng(9), 50)
        assert a == b

    def test_is_permutation(self):
        rng = make_rng(10)
        for n in (0, 1, 2, 7, 199):
            assert sorted(shuffle_order(rng, n)) == list(range(n))

    def test_uniform_over_small_n(self):
        rng = make_rng(11)
        counts = {}
        trials = 60_000
        for _ in range(trials):
            key = tuple(shuffle_order(rng, 3))
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        chi = scipy.stats.chisquare(list(counts.values()))
        assert chi.pvalue > 0.01
