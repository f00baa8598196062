import random

import pytest

from rifslab import DomainError, min_cover_cost
from _oracles import arbitrary_cover_min, consecutive_cover_min


def test_empty_set_costs_nothing():
    cc = min_cover_cost([], 0.5, 5)
    assert cc.cost == 0.0
    assert cc.optimal_partition == ()


def test_single_point():
    cc = min_cover_cost([3], 0.5, 5)
    assert cc.cost == (1 / 32) ** 0.5
    assert cc.optimal_partition == ((3, 3),)


def test_two_far_points_prefer_singletons():
    # alpha < 1 favors few blocks only when they are short
    cc = min_cover_cost([-10, 10], 0.5, 5)
    assert cc.optimal_partition == ((-10, -10), (10, 10))
    assert cc.cost == pytest.approx(2 * (1 / 32) ** 0.5)


def test_adjacent_points_merge():
    # one interval of length 2 costs (2/32)^0.5 < 2*(1/32)^0.5
    cc = min_cover_cost([4, 5], 0.5, 5)
    assert cc.optimal_partition == ((4, 5),)


def test_ties_prefer_fewer_intervals():
    # alpha = 1 makes {0}{1} and {0..1} both cost 2/32
    cc = min_cover_cost([0, 1], 1.0, 5)
    assert cc.cost == pytest.approx(2 / 32)
    assert cc.optimal_partition == ((0, 1),)


def test_rejects_points_outside_cube():
    with pytest.raises(DomainError, match="outside"):
        min_cover_cost([16], 0.5, 5)
    with pytest.raises(DomainError, match="outside"):
        min_cover_cost([-17], 0.5, 5)
    # half-open cube: -16 is inside, 16 is not
    assert min_cover_cost([-16, 15], 0.5, 5).cost > 0


def test_rejects_bad_parameters():
    with pytest.raises(DomainError):
        min_cover_cost([1], 0.0, 5)
    with pytest.raises(DomainError):
        min_cover_cost([1], -0.3, 5)
    with pytest.raises(DomainError):
        min_cover_cost([1], 0.5, -1)


def test_matches_exhaustive_partition_search():
    rng = random.Random(1234)
    for trial in range(100):
        count = rng.randint(1, 10)
        points = rng.sample(range(-16, 16), count)
        for alpha in (0.3, 0.5, 1.0):
            cc = min_cover_cost(points, alpha, 5)
            best, blocks = consecutive_cover_min(points, alpha, 5)
            assert cc.cost == pytest.approx(best, abs=1e-12), (points, alpha)
            assert len(cc.optimal_partition) == blocks, (points, alpha)


def test_partition_covers_and_prices_correctly():
    rng = random.Random(99)
    for _ in range(50):
        points = sorted(rng.sample(range(-16, 16), rng.randint(1, 8)))
        alpha = rng.choice((0.3, 0.5, 0.8, 1.0))
        cc = min_cover_cost(points, alpha, 5)
        covered = [p for a, b in cc.optimal_partition for p in points
                   if a <= p <= b]
        assert sorted(covered) == points
        priced = sum(((b - a + 1) / 32) ** alpha
                     for a, b in cc.optimal_partition)
        assert cc.cost == pytest.approx(priced, abs=1e-12)


def test_arbitrary_covers_never_beat_partitions():
    # small cube so the interval enumeration stays feasible
    rng = random.Random(7)
    for _ in range(12):
        points = sorted(rng.sample(range(-4, 4), rng.randint(1, 4)))
        for alpha in (0.4, 1.0):
            cc = min_cover_cost(points, alpha, 3)
            best = arbitrary_cover_min(points, alpha, 3,
                                       max_intervals=len(points))
            assert cc.cost <= best + 1e-12
            assert cc.cost == pytest.approx(best, abs=1e-9)
