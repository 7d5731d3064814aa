// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/parallel.hpp"
#include "pvlab/point_io.hpp"
#include "pvlab/poisson.hpp"
#include "pvlab/random.hpp"
#include "pvlab/stats.hpp"
#include "pvlab/window.hpp"

using namespace pvlab;

TEST_CASE("counter rng streams are pure functions of the seed")
{
    SeedSpec const a{42, {1, 2}};
    CounterRng r1(a);
    CounterRng r2(a);
    for (int i = 0; i < 100; ++i)
    {
        CHECK(r1() == r2());
    }
    CounterRng r3(a.with_replication(3));
    CounterRng r4(a);
    CHECK(r3() != r4());
    CounterRng r5(SeedSpec{43, {1, 2}});
    CounterRng r6(a);
    CHECK(r5() != r6());
}

TEST_CASE("uniform draws lie in [0, 1) with the right mean")
{
    CounterRng rng(SeedSpec{1, {0, 0}});
    double sum = 0;
    for (int i = 0; i < 100000; ++i)
    {
        double const u = rng.uniform();
        REQUIRE(u >= 0);
        REQUIRE(u < 1);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("ball volumes")
{
    CHECK(ball_volume(1, 2.0) == doctest::Approx(4.0));
    CHECK(ball_volume(2, 1.0) == doctest::Approx(std::numbers::pi));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
    CHECK(ball_volume(2, 0.0) == 0.0);
}

TEST_CASE("windows validate their input and contain their samples")
{
    CHECK_THROWS_AS(Window::box({0, 0}, {1}), Error);
    CHECK_THROWS_AS(Window::box({0, 1}, {1, 0}), Error);
    CHECK_THROWS_AS(Window::ball({0, 0}, -1), Error);

    Window const box = Window::box({-1, 2}, {1, 5});
    CHECK(box.volume() == doctest::Approx(6));
    Window const ball = Window::ball({1, 1, 1}, 2);
    CounterRng rng(SeedSpec{5, {0, 0}});
    for (int i = 0; i < 1000; ++i)
    {
        CHECK(box.contains(box.sample_uniform(rng)));
        CHECK(ball.contains(ball.sample_uniform(rng)));
    }
}

TEST_CASE("poisson samples are reproducible and have the right mean count")
{
    Window const w = Window::unit_cube(2);
    SeedSpec const seed{9, {0, 0}};
    CHECK(sample_poisson(w, 50, seed) == sample_poisson(w, 50, seed));
    double total = 0;
    int const reps = 2000;
    for (int r = 0; r < reps; ++r)
    {
        total += static_cast<double>(
            sample_poisson(w, 50, seed.with_replication(r)).size());
    }
    double const mean = total / reps;
    CHECK(std::abs(mean - 50) < 4 * std::sqrt(50.0 / reps));
    CHECK_THROWS_AS(sample_poisson(w, 0, seed), Error);
    CHECK_THROWS_AS(sample_poisson(w, -1, seed), Error);
    CHECK_THROWS_AS(sample_poisson(w, std::nan(""), seed), Error);
}

TEST_CASE("poisson counts pass a chi-squared goodness-of-fit test")
{
    Window const w = Window::box({0, 0}, {2, 1});
    double const mu = 8;
    int const reps = 100000;
    std::vector<double> observed(20, 0);
    for (int r = 0; r < reps; ++r)
    {
        std::size_t const n
            = sample_poisson(w, mu / 2, SeedSpec{21, {0, std::uint64_t(r)}}).size();
        observed[std::min<std::size_t>(n, observed.size() - 1)] += 1;
    }
    // Bins 0..18 plus a tail bin; merge the sparse left bins into bin 2.
    boost::math::poisson_distribution<> const pois(mu);
    std::vector<double> expected(observed.size());
    for (std::size_t k = 0; k + 1 < expected.size(); ++k)
    {
        expected[k] = reps * boost::math::pdf(pois, double(k));
    }
    expected.back() = reps * boost::math::cdf(boost::math::complement(pois, double(expected.size() - 2)));
    double const low_obs = observed[0] + observed[1] + observed[2];
    double const low_exp = expected[0] + expected[1] + expected[2];
    double chi2 = (low_obs - low_exp) * (low_obs - low_exp) / low_exp;
    for (std::size_t k = 3; k < expected.size(); ++k)
    {
        chi2 += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
    }
    double const dof = double(expected.size() - 3 - 1);
    double const crit = boost::math::quantile(
        boost::math::complement(boost::math::chi_squared_distribution<>(dof), 0.01));
    CHECK(chi2 < crit);
}

TEST_CASE("counts in disjoint sub-boxes are uncorrelated")
{
    Window const w = Window::unit_cube(2);
    Window const left = Window::box({0, 0}, {0.5, 1});
    Window const corner = Window::box({0.6, 0.6}, {1, 1});
    int const reps = 20000;
    std::vector<double> a(reps), b(reps);
    for (int r = 0; r < reps; ++r)
    {
        PointConfiguration const c = sample_poisson(w, 20, SeedSpec{22, {0, std::uint64_t(r)}});
        for (std::size_t i = 0; i < c.size(); ++i)
        {
            a[r] += left.contains(c.point(i));
            b[r] += corner.contains(c.point(i));
        }
    }
    double const ma = sample_mean(a);
    double const mb = sample_mean(b);
    CHECK(ma == doctest::Approx(10).epsilon(0.02));
    CHECK(mb == doctest::Approx(3.2).epsilon(0.03));
    double cov = 0;
    for (int r = 0; r < reps; ++r)
    {
        cov += (a[r] - ma) * (b[r] - mb);
    }
    cov /= reps - 1;
    double const corr = cov / std::sqrt(sample_variance(a) * sample_variance(b));
    CHECK(std::abs(corr) < 3 / std::sqrt(double(reps)));
}

TEST_CASE("point csv round trip is exact")
{
    PointConfiguration c(3, {{0.1, 1e-300, -2.5}, {1.0 / 3.0, 7, 8}});
    std::stringstream ss;
    write_points_csv(ss, c);
    CHECK(ss.str().rfind("x1,x2,x3\n", 0) == 0);
    PointConfiguration const back = read_points_csv(ss);
    CHECK(back == c);
}

TEST_CASE("point csv rejects malformed input")
{
    std::stringstream bad("x1,x2\n1,2\n3\n");
    CHECK_THROWS_AS(read_points_csv(bad), Error);
    std::stringstream text("x1\nabc\n");
    CHECK_THROWS_AS(read_points_csv(text), Error);
}

TEST_CASE("point configuration enforces its dimension")
{
    PointConfiguration c(2);
    CHECK_THROWS_AS(c.push_back(Point{1, 2, 3}), Error);
    c.push_back(Point{3, 4});
    CHECK(norm(c.point(0)) == doctest::Approx(5));
    PointConfiguration const d = add_point(c, Point{0, 0});
    CHECK(d.size() == 2);
    CHECK(c.size() == 1);
}

TEST_CASE("sample statistics")
{
    std::vector<double> const v{1, 2, 3, 4};
    CHECK(sample_mean(v) == doctest::Approx(2.5));
    CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0));
    CHECK(normal_critical_value(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
    EstimateWithCI const e = mean_estimate(v);
    CHECK(e.ci_lo < 2.5);
    CHECK(e.ci_hi > 2.5);
}

TEST_CASE("bootstrap variance interval covers the estimate and is reproducible")
{
    CounterRng data(SeedSpec{3, {0, 0}});
    std::vector<double> v(500);
    for (double& x : v)
    {
        x = data.uniform();
    }
    CounterRng b1(SeedSpec{4, {0, 0}});
    CounterRng b2(SeedSpec{4, {0, 0}});
    EstimateWithCI const e1 = bootstrap_variance(v, b1);
    EstimateWithCI const e2 = bootstrap_variance(v, b2);
    CHECK(e1.estimate == e2.estimate);
    CHECK(e1.ci_lo == e2.ci_lo);
    CHECK(e1.ci_lo <= e1.estimate);
    CHECK(e1.estimate <= e1.ci_hi);
    CHECK(e1.estimate == doctest::Approx(1.0 / 12).epsilon(0.15));
}

TEST_CASE("minimum eigenvalue of a singular covariance is near zero")
{
    Eigen::MatrixXd s(400, 2);
    CounterRng rng(SeedSpec{8, {0, 0}});
    for (Eigen::Index i = 0; i < s.rows(); ++i)
    {
        s(i, 0) = rng.uniform();
        s(i, 1) = 2 * s(i, 0);
    }
    Eigen::MatrixXd const cov = sample_covariance(s);
    CHECK(std::abs(min_eigenvalue(cov)) < 1e-12);
}

TEST_CASE("scaling regression recovers an exact power law")
{
    std::vector<ScalePoint> pts;
    for (double s : {50.0, 100.0, 200.0, 400.0})
    {
        pts.push_back({s, 7 * s});
    }
    ScalingFit const fit = scaling_regression(pts);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(fit.slope_se < 1e-10);
    std::vector<ScalePoint> two{{1, 1}, {2, 2}};
    CHECK_THROWS_AS(scaling_regression(two), Error);
}

TEST_CASE("estimate json round trip")
{
    EstimateWithCI e;
    e.label = "x";
    e.estimate = 1.5;
    e.std_error = 0.25;
    e.n_reps = 10;
    e.ci_lo = 1;
    e.ci_hi = 2;
    e.seed = 99;
    EstimateWithCI const back = estimate_from_json(to_json(e));
    CHECK(back.label == "x");
    CHECK(back.estimate == 1.5);
    CHECK(back.n_reps == 10);
    CHECK(back.seed == 99);
}

TEST_CASE("parallel_for covers every index and rethrows")
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(100,
                                 [](std::size_t i) {
                                     if (i == 37)
                                     {
                                         fail(ErrorCode::numeric, "boom");
                                     }
                                 }),
                    Error);
}
