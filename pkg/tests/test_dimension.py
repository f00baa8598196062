import math
import random
from fractions import Fraction

import pytest

from rifslab import (
    DomainError,
    attractor_box_counts,
    counting_profile,
    density_profile,
    digit_measure_cdf,
    dual_attractor_hull,
    enumerate_orbit,
    estimate_beurling_dimension,
    estimate_box_dimension,
    estimate_discrete_hausdorff,
    estimate_mass_dimension,
    integerize,
    make_system,
    renewal_constant,
    residual_points,
    solve_similarity_dimension,
    window_density_sup,
)
from _oracles import box_count_cylinders

LOG2_3 = math.log(2) / math.log(3)


# --------------------------------------------------------------------------
# similarity dimension


def test_similarity_cantor():
    sol = solve_similarity_dimension([Fraction(3), Fraction(3)])
    assert abs(sol.value - LOG2_3) <= 1e-9
    assert sol.residual <= 1e-12


def test_similarity_exact_one():
    for ratios in ([Fraction(2), Fraction(2)],
                   [Fraction(2), Fraction(4), Fraction(4)]):
        sol = solve_similarity_dimension(ratios)
        assert abs(sol.value - 1.0) <= 1e-12
        assert sol.residual <= 1e-12


def test_similarity_root_is_unique_zero():
    # the defining sum is strictly decreasing in s, so checking the
    # residual at the returned point certifies the root
    for ratios in ([Fraction(2), Fraction(3)],
                   [Fraction(-2), Fraction(5, 2), Fraction(7)],
                   [Fraction(10), Fraction(10), Fraction(10)]):
        sol = solve_similarity_dimension(ratios)
        excess = math.fsum(abs(float(r)) ** -sol.value for r in ratios) - 1.0
        assert abs(excess) <= 1e-12


def test_similarity_mixed_signs_use_magnitudes():
    plus = solve_similarity_dimension([Fraction(3), Fraction(3)])
    minus = solve_similarity_dimension([Fraction(-3), Fraction(3)])
    assert plus.value == minus.value


def test_similarity_rejects_weak_ratios():
    from rifslab import ConfigError
    with pytest.raises(ConfigError, match="exceed 1"):
        solve_similarity_dimension([Fraction(1), Fraction(3)])
    with pytest.raises(ConfigError, match="at least 2"):
        solve_similarity_dimension([])


# --------------------------------------------------------------------------
# mass and window fits


def test_mass_fit_exact_on_cantor(cantor_sample):
    grid = [Fraction(3) ** k for k in range(1, 16)]
    profile = counting_profile(cantor_sample, grid)
    fit = estimate_mass_dimension(profile, window=(7, 15))
    # N(3^k) = 2^k makes every pointwise exponent equal to log2/log3
    assert fit.slope == pytest.approx(LOG2_3, abs=1e-12)
    assert fit.lower == pytest.approx(LOG2_3, abs=1e-12)
    assert fit.upper == pytest.approx(LOG2_3, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_mass_fit_window_bounds(cantor_sample):
    grid = [Fraction(3) ** k for k in range(1, 16)]
    profile = counting_profile(cantor_sample, grid)
    fit = estimate_mass_dimension(profile, window=(7, 15))
    assert fit.window == (float(3**8), float(3**15))


def test_mass_fit_rejects_tiny_h(cantor_sample):
    profile = counting_profile(cantor_sample, [Fraction(1), Fraction(3)])
    with pytest.raises(DomainError, match="h >= 2"):
        estimate_mass_dimension(profile)


def test_mass_fit_rejects_empty_counts(cantor_system):
    sample = enumerate_orbit(cantor_system, 1, Fraction(9))
    profile = counting_profile(sample, [Fraction(2), Fraction(9)])
    with pytest.raises(DomainError, match="positive counts"):
        estimate_mass_dimension(profile)


def test_beurling_at_least_mass(cantor_sample):
    grid = [Fraction(3) ** k for k in range(1, 16)]
    profile = counting_profile(cantor_sample, grid)
    mass = estimate_mass_dimension(profile, window=(7, 15))
    beurling = estimate_beurling_dimension(cantor_sample, grid, window=(7, 15))
    # window maxima dominate central counts pointwise, hence so do the
    # pointwise exponents; the fitted slopes need not be ordered
    assert beurling.lower >= mass.lower - 1e-12
    assert beurling.upper >= mass.upper - 1e-12
    assert beurling.slope == pytest.approx(LOG2_3, abs=1e-3)


def test_fit_needs_two_entries(cantor_sample):
    profile = counting_profile(cantor_sample, [Fraction(9)])
    with pytest.raises(DomainError, match="at least 2"):
        estimate_mass_dimension(profile)


# --------------------------------------------------------------------------
# discrete Hausdorff table


def test_dhd_estimates_frozen(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 11)
    points, scale = integerize(sample)
    assert scale == 1
    alphas = [round(0.1 * i, 12) for i in range(1, 13)]
    report = estimate_discrete_hausdorff(points, alphas, range(0, 19),
                                         tau=0.05)
    assert report.dim_estimate == pytest.approx(0.9)
    assert report.decay_estimate == pytest.approx(1.0)
    assert len(report.rows) == 12 * 19


def test_dhd_costs_monotone_in_alpha(cantor_system):
    # (len/2^n)^alpha falls as alpha grows, term by term, so the minima do
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 8)
    points, _ = integerize(sample)
    report = estimate_discrete_hausdorff(points, [0.4, 0.7, 1.0],
                                         range(0, 9))
    for lo_a, hi_a in ((0.4, 0.7), (0.7, 1.0)):
        lo_costs = report.costs(lo_a)
        hi_costs = report.costs(hi_a)
        assert all(h <= l + 1e-12 for l, h in zip(lo_costs, hi_costs))


def test_dhd_partial_sums_accumulate(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 8)
    points, _ = integerize(sample)
    report = estimate_discrete_hausdorff(points, [0.5], range(0, 9))
    sums = report.partial_sums(0.5)
    costs = report.costs(0.5)
    assert sums[0] == pytest.approx(costs[0])
    for i in range(1, len(sums)):
        assert sums[i] == pytest.approx(sums[i - 1] + costs[i])


def test_dhd_empty_reports_zero():
    report = estimate_discrete_hausdorff([], [0.5], range(0, 7))
    assert report.dim_estimate == 0.0
    assert report.decay_estimate == 0.0


def test_dhd_needs_six_exponents():
    with pytest.raises(DomainError, match="6"):
        estimate_discrete_hausdorff([1], [0.5], range(0, 5))


def test_integerize_scales_by_lcm():
    points, scale = integerize([Fraction(1, 2), Fraction(1, 3), Fraction(2)])
    assert scale == 6
    assert points == [2, 3, 12]


# --------------------------------------------------------------------------
# attractor hull and box counts


def test_hull_cantor(cantor_system):
    assert dual_attractor_hull(cantor_system) == (Fraction(-1), Fraction(0))


def test_hull_binary_system():
    system = make_system([(Fraction(2), Fraction(0)), (Fraction(2), Fraction(1))])
    assert dual_attractor_hull(system) == (Fraction(-1), Fraction(0))


def test_hull_degenerate_origin():
    system = make_system([(Fraction(2), Fraction(0)), (Fraction(4), Fraction(0))])
    assert dual_attractor_hull(system) == (Fraction(0), Fraction(0))


def test_hull_invariance_random():
    rng = random.Random(31)
    built = 0
    while built < 25:
        try:
            system = make_system([
                (Fraction(rng.choice([-4, -3, -2, 2, 3, 4])),
                 Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
                for _ in range(rng.randint(2, 3))])
        except Exception:
            continue
        built += 1
        u, v = dual_attractor_hull(system)
        duals = system.dual_maps()
        images = [d(x) for d in duals for x in (u, v)]
        # the hull is the unique interval mapped onto its own extremes
        assert min(images) == u
        assert max(images) == v


def test_box_counts_cantor_exact(cantor_system):
    box = attractor_box_counts(cantor_system, 12)
    assert box.counts == tuple(2**k for k in range(1, 13))
    assert box.delta == 3


def test_box_counts_match_cylinder_oracle(cantor_system):
    for k in range(1, 9):
        assert box_count_cylinders(cantor_system, k) == \
            attractor_box_counts(cantor_system, k).counts[-1]


def test_box_counts_match_cylinder_oracle_other_digits():
    for digits in ((0, 1), (0, 1, 2)):
        system = make_system([(Fraction(3), Fraction(d)) for d in digits])
        box = attractor_box_counts(system, 8)
        for i, k in enumerate(box.ks):
            assert box.counts[i] == box_count_cylinders(system, k)


def test_box_dimension_fit_cantor(cantor_system):
    box = attractor_box_counts(cantor_system, 12)
    fit = estimate_box_dimension(box)
    assert fit.slope == pytest.approx(LOG2_3, abs=1e-12)


def test_box_counts_budget(cantor_system):
    from rifslab import BudgetExceededError
    with pytest.raises(BudgetExceededError):
        attractor_box_counts(cantor_system, 40, word_budget=10_000)


# --------------------------------------------------------------------------
# digit measure


def test_digit_measure_known_values():
    lo, hi = digit_measure_cdf(3, (0, 2), Fraction(1, 3))
    assert lo == hi == Fraction(1, 2)
    lo, hi = digit_measure_cdf(3, (0, 2), Fraction(2, 3))
    assert lo == hi == Fraction(1, 2)
    lo, hi = digit_measure_cdf(3, (0, 2), Fraction(1))
    assert lo == hi == 1
    lo, hi = digit_measure_cdf(3, (0, 2), Fraction(0))
    assert hi <= Fraction(1, 2**30)


def test_digit_measure_bracket_contains_enumeration():
    rng = random.Random(17)
    base, digits, depth = 3, (0, 2), 10
    # truncating every expansion misplaces at most the one cylinder that
    # straddles h, worth one cylinder of mass
    slack = Fraction(1, len(digits) ** depth)
    points = [Fraction(0)]
    for i in range(1, depth + 1):
        points = [p + d * Fraction(1, base**i) for p in points for d in digits]
    points.sort()
    total = len(points)
    for _ in range(40):
        h = Fraction(rng.randint(0, 3**6), 3**6)
        lo, hi = digit_measure_cdf(base, digits, h, depth=depth)
        empirical = Fraction(sum(1 for p in points if p <= h), total)
        assert lo - slack <= empirical <= hi + slack


def test_digit_measure_monotone():
    grid = [Fraction(k, 27) for k in range(28)]
    values = [digit_measure_cdf(3, (0, 2), h)[0] for h in grid]
    assert values == sorted(values)


# --------------------------------------------------------------------------
# density and renewal


def test_density_tail_extrema_no_period(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 10)
    grid = [Fraction(3) ** k for k in range(1, 11)]
    profile = counting_profile(sample, grid)
    report = density_profile(profile, LOG2_3)
    # N(3^k)/3^{ks} = 1 at every grid point
    assert report.sup_tail == pytest.approx(1.0, abs=1e-12)
    assert report.defect is None
    assert report.periodic_profile == ()
    # between 3^k and 3^{k+1} the normalized count dips to 2^k/3^{(k+1)s}
    assert report.inf_tail == pytest.approx(0.5, abs=1e-12)


def test_density_periodic_fold(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 10)
    pts = sample.points
    top = Fraction(3) ** 10
    grid = set()
    for t in range(3):
        lo = top / Fraction(3) ** (t + 1)
        for i in range(40):
            grid.add(lo + (i + 1) * lo * 2 / 40)
        grid.add(lo)
    jumps = {x for x in pts if top / 27 <= x <= top}
    grid |= jumps
    grid |= {3 * x for x in jumps if top / 9 <= x <= top / 3}
    profile = counting_profile(sample, sorted(grid))
    report = density_profile(profile, LOG2_3, period_ratio=Fraction(3))
    assert report.defect is not None
    # at this radius each matched pair can differ by one point in ~2^7
    assert report.defect <= 1e-2
    assert report.sup_tail == pytest.approx(1.0, abs=1e-3)
    assert report.sup_tail >= 1.0
    assert report.inf_tail == pytest.approx(2**-LOG2_3, rel=5e-3)
    assert all(0.0 <= phase < 1.0 for phase, _ in report.periodic_profile)


def test_density_profile_rejects_sparse_grid(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 6)
    profile = counting_profile(sample, [Fraction(3) ** k for k in range(1, 7)])
    with pytest.raises(DomainError, match="sparse"):
        density_profile(profile, LOG2_3, period_ratio=Fraction(3))


def test_density_profile_rejects_short_span(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 6)
    grid = [Fraction(3) ** 5 + k for k in range(100)]
    profile = counting_profile(sample, grid)
    with pytest.raises(DomainError, match="period"):
        density_profile(profile, LOG2_3, period_ratio=Fraction(3))


def test_window_density_sup_matches_scan(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 8)
    lo, hi = Fraction(10), Fraction(3) ** 8
    value = window_density_sup(sample, LOG2_3, lo, hi)
    # dense rational scan can only do worse or equal
    rng = random.Random(3)
    best = 0.0
    for _ in range(4000):
        h = Fraction(rng.randint(10 * 64, 3**8 * 64), 64)
        best = max(best, sample.count_within(h) / float(h) ** LOG2_3)
    assert value >= best - 1e-12
    # the sup sits at h = 26, the closed ball holding 0,2,6,8,18,20,24,26
    assert value == pytest.approx(8.0 / 26.0**LOG2_3, abs=1e-12)


def test_window_density_sup_guards(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(27))
    with pytest.raises(DomainError, match="0 < lo < hi"):
        window_density_sup(sample, LOG2_3, Fraction(5), Fraction(5))
    with pytest.raises(DomainError, match="radius"):
        window_density_sup(sample, LOG2_3, Fraction(5), Fraction(28))


def test_renewal_rejects_degenerate():
    system = make_system([(Fraction(2), Fraction(0)), (Fraction(4), Fraction(0))])
    sample = enumerate_orbit(system, 1, Fraction(2) ** 12)
    with pytest.raises(DomainError, match="degenerate"):
        renewal_constant(system, sample, [], 0.5, Fraction(100))


def test_renewal_demands_radius(renewal_system):
    sample = enumerate_orbit(renewal_system, 5, Fraction(100))
    with pytest.raises(DomainError, match="radius"):
        renewal_constant(renewal_system, sample, [], 0.78, Fraction(100))


def test_renewal_value_reasonable(renewal_system):
    s = solve_similarity_dimension([m.ratio for m in renewal_system.maps]).value
    sample = enumerate_orbit(renewal_system, 5, Fraction(10) ** 4)
    residuals = residual_points(sample)
    estimate = renewal_constant(renewal_system, sample, residuals, s,
                                Fraction(1000))
    empirical = sample.count_within(Fraction(10) ** 4) / float(10**4) ** s
    assert estimate.value == pytest.approx(empirical, rel=0.2)
    assert estimate.tail_bound > 0
    assert estimate.cutoff == 1000.0
