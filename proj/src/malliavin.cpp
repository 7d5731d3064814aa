// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/malliavin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "pvlab/error.hpp"
#include "pvlab/parallel.hpp"
#include "pvlab/poisson.hpp"

namespace pvlab
{
namespace
{
// Stream reserved for bootstrap resampling of an estimator's replications.
constexpr std::uint64_t bootstrap_replication
    = std::numeric_limits<std::uint64_t>::max();

double evaluate(Functional const& f, PointConfiguration const& config,
                char const* which)
{
    try
    {
        return f(config);
    }
    catch (Error const& e)
    {
        throw Error(e.code(), "evaluating '" + f.label() + "' on " + which
                                  + " (" + std::to_string(config.size())
                                  + " points): " + e.what());
    }
    catch (std::exception const& e)
    {
        throw Error(ErrorCode::numeric,
                    "evaluating '" + f.label() + "' on " + which + " ("
                        + std::to_string(config.size())
                        + " points): " + e.what());
    }
}

void check_dim(PointConfiguration const& config, std::span<double const> x)
{
    if (x.size() != config.dim())
    {
        fail(ErrorCode::dimension_mismatch,
             "difference point has dimension " + std::to_string(x.size())
                 + ", configuration has " + std::to_string(config.dim()));
    }
}

std::string seed_text(SeedSpec const& seed)
{
    return "seed " + std::to_string(seed.master_seed) + " stream ("
           + std::to_string(seed.stream.experiment) + ", "
           + std::to_string(seed.stream.replication) + ")";
}

void check_finite(double v, Functional const& f, SeedSpec const& seed)
{
    if (!std::isfinite(v))
    {
        fail(ErrorCode::numeric, "non-finite value of '" + f.label()
                                     + "' in replication with "
                                     + seed_text(seed));
    }
}

void check_reps(std::size_t n_reps)
{
    require(n_reps >= 2, "estimators need n_reps >= 2");
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}
}  // namespace

double difference(Functional const& f, PointConfiguration const& config,
                  std::span<double const> x)
{
    check_dim(config, x);
    double const base = evaluate(f, config, "eta");
    double const plus = evaluate(f, add_point(config, x), "eta+x");
    return plus - base;
}

double second_difference(Functional const& f, PointConfiguration const& config,
                         std::span<double const> x, std::span<double const> y)
{
    check_dim(config, x);
    check_dim(config, y);
    PointConfiguration with_x = add_point(config, x);
    PointConfiguration with_y = add_point(config, y);
    PointConfiguration with_xy = add_point(with_x, y);
    double const fxy = evaluate(f, with_xy, "eta+x+y");
    double const fx = evaluate(f, with_x, "eta+x");
    double const fy = evaluate(f, with_y, "eta+y");
    double const f0 = evaluate(f, config, "eta");
    // Grouped so that swapping x and y gives the same rounding.
    return (fxy + f0) - (fx + fy);
}

std::vector<double> sample_values(Functional const& f, Window const& window,
                                  double intensity, std::size_t n_reps,
                                  SeedSpec const& seed)
{
    std::vector<double> values(n_reps);
    parallel_for(n_reps, [&](std::size_t r) {
        SeedSpec const rs = seed.with_replication(r);
        double const v = evaluate(f, sample_poisson(window, intensity, rs),
                                  "eta");
        check_finite(v, f, rs);
        values[r] = v;
    });
    return values;
}

DirichletEstimate estimate_dirichlet(Functional const& f, Window const& window,
                                     double intensity, std::size_t n_reps,
                                     SeedSpec const& seed,
                                     EstimatorOptions const& options)
{
    check_reps(n_reps);
    auto const start = std::chrono::steady_clock::now();
    double const mass = intensity * window.volume();

    std::vector<double> first(n_reps);
    std::vector<double> second(n_reps);
    parallel_for(n_reps, [&](std::size_t r) {
        SeedSpec const rs = seed.with_replication(r);
        CounterRng rng(rs);
        PointConfiguration const eta = sample_poisson(window, intensity, rng);
        Point const x = window.sample_uniform(rng);
        Point const y = window.sample_uniform(rng);
        Point const z = window.sample_uniform(rng);
        double const d1 = difference(f, eta, x);
        double const d2 = second_difference(f, eta, y, z);
        check_finite(d1, f, rs);
        check_finite(d2, f, rs);
        first[r] = mass * d1 * d1;
        second[r] = mass * mass * d2 * d2;
    });

    DirichletEstimate de;
    de.first_order = mean_estimate(first, options.ci_level);
    de.second_order = mean_estimate(second, options.ci_level);
    double const m1 = de.first_order.estimate;
    double const m2 = de.second_order.estimate;
    double cov = 0;
    for (std::size_t r = 0; r < n_reps; ++r)
    {
        cov += (first[r] - m1) * (second[r] - m2);
    }
    de.mean_covariance = cov / static_cast<double>(n_reps - 1)
                         / static_cast<double>(n_reps);
    de.alpha_hat = m1 > 0 ? m2 / m1 : std::numeric_limits<double>::infinity();

    double const ms = elapsed_ms(start);
    for (auto* e : {&de.first_order, &de.second_order})
    {
        e->seed = seed.master_seed;
        e->wall_time_ms = ms;
    }
    de.first_order.label = f.label() + ":dirichlet_first";
    de.second_order.label = f.label() + ":dirichlet_second";
    return de;
}

double theorem1_lower_bound(DirichletEstimate const& de)
{
    require(std::isfinite(de.first_order.estimate),
            "lower bound needs a finite first-order estimate");
    if (!std::isfinite(de.alpha_hat))
    {
        return 0;
    }
    double const a = de.alpha_hat + 2;
    return 4 / (a * a) * de.first_order.estimate;
}

double theorem1_lower_bound_std_error(DirichletEstimate const& de)
{
    // L(A, B) = 4 A^3 / (B + 2A)^2 with A, B the two replication means.
    double const a = de.first_order.estimate;
    double const b = de.second_order.estimate;
    if (!(a > 0))
    {
        return 0;
    }
    double const den = std::pow(b + 2 * a, 3);
    double const ga = (12 * a * a * b + 8 * a * a * a) / den;
    double const gb = -8 * a * a * a / den;
    double const va = de.first_order.std_error * de.first_order.std_error;
    double const vb = de.second_order.std_error * de.second_order.std_error;
    double const var = ga * ga * va + gb * gb * vb
                       + 2 * ga * gb * de.mean_covariance;
    return std::sqrt(std::max(0.0, var));
}

double poincare_upper_bound(DirichletEstimate const& de)
{
    return de.first_order.estimate;
}

EstimateWithCI first_chaos_bound(Functional const& f, Window const& window,
                                 double intensity, std::size_t n_reps,
                                 SeedSpec const& seed, std::size_t inner_count,
                                 EstimatorOptions const& options)
{
    check_reps(n_reps);
    require(inner_count >= 2, "first_chaos_bound needs inner_count >= 2");
    auto const start = std::chrono::steady_clock::now();
    double const mass = intensity * window.volume();
    auto const m = static_cast<double>(inner_count);

    std::vector<double> outer(n_reps);
    parallel_for(n_reps, [&](std::size_t r) {
        SeedSpec const rs = seed.with_replication(r);
        CounterRng rng(rs);
        Point const x = window.sample_uniform(rng);
        double s = 0;
        double ss = 0;
        for (std::size_t i = 0; i < inner_count; ++i)
        {
            double const d = difference(
                f, sample_poisson(window, intensity, rng), x);
            check_finite(d, f, rs);
            s += d;
            ss += d * d;
        }
        double const mean = s / m;
        double const var = (ss - m * mean * mean) / (m - 1);
        outer[r] = mass * (mean * mean - var / m);
    });

    EstimateWithCI e = mean_estimate(outer, options.ci_level);
    e.label = f.label() + ":first_chaos";
    e.seed = seed.master_seed;
    e.wall_time_ms = elapsed_ms(start);
    return e;
}

EstimateWithCI estimate_variance(Functional const& f, Window const& window,
                                 double intensity, std::size_t n_reps,
                                 SeedSpec const& seed,
                                 EstimatorOptions const& options)
{
    check_reps(n_reps);
    auto const start = std::chrono::steady_clock::now();
    std::vector<double> const values
        = sample_values(f, window, intensity, n_reps, seed);
    CounterRng boot_rng(seed.with_replication(bootstrap_replication));
    EstimateWithCI e = bootstrap_variance(
        values, boot_rng, {options.bootstrap_resamples, options.ci_level});
    e.label = f.label() + ":variance";
    e.seed = seed.master_seed;
    e.wall_time_ms = elapsed_ms(start);
    return e;
}

CovarianceEstimate estimate_covariance(std::span<Functional const> fs,
                                       Window const& window, double intensity,
                                       std::size_t n_reps,
                                       SeedSpec const& seed,
                                       EstimatorOptions const& options)
{
    require(fs.size() >= 2, "estimate_covariance needs at least two functionals");
    check_reps(n_reps);
    auto const start = std::chrono::steady_clock::now();
    auto const m = static_cast<Eigen::Index>(fs.size());
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_reps), m);
    parallel_for(n_reps, [&](std::size_t r) {
        SeedSpec const rs = seed.with_replication(r);
        PointConfiguration const eta = sample_poisson(window, intensity, rs);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            double const v = evaluate(fs[static_cast<std::size_t>(i)], eta,
                                      "eta");
            check_finite(v, fs[static_cast<std::size_t>(i)], rs);
            samples(static_cast<Eigen::Index>(r), i) = v;
        }
    });

    CovarianceEstimate out;
    out.matrix = sample_covariance(samples);
    CounterRng boot_rng(seed.with_replication(bootstrap_replication));
    out.min_eigenvalue = bootstrap_min_eigenvalue(
        samples, boot_rng, {options.bootstrap_resamples, options.ci_level});
    out.min_eigenvalue.label = "min_eigenvalue";
    out.min_eigenvalue.seed = seed.master_seed;
    out.min_eigenvalue.wall_time_ms = elapsed_ms(start);
    // Relative floor so that an exactly singular matrix is not declared
    // positive definite by rounding noise.
    double const floor = 1e-9 * out.matrix.diagonal().cwiseAbs().maxCoeff();
    out.positive_definite = out.min_eigenvalue.ci_lo > floor;
    return out;
}
}  // namespace pvlab
