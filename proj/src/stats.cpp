// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include "pvlab/error.hpp"

namespace pvlab
{
namespace
{
std::size_t draw_index(CounterRng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double percentile(std::vector<double>& sorted, double q)
{
    double const pos = q * static_cast<double>(sorted.size() - 1);
    auto const lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t const hi = std::min(lo + 1, sorted.size() - 1);
    double const t = pos - static_cast<double>(lo);
    return sorted[lo] * (1 - t) + sorted[hi] * t;
}

void fill_percentile_ci(EstimateWithCI& e, std::vector<double>& boot,
                        double ci_level)
{
    std::sort(boot.begin(), boot.end());
    double const alpha = 0.5 * (1 - ci_level);
    e.ci_lo = std::min(percentile(boot, alpha), e.estimate);
    e.ci_hi = std::max(percentile(boot, 1 - alpha), e.estimate);
    double const m = sample_mean(boot);
    double ss = 0;
    for (double b : boot)
    {
        ss += (b - m) * (b - m);
    }
    e.std_error = std::sqrt(ss / static_cast<double>(boot.size() - 1));
}

void check_level(double ci_level)
{
    require(ci_level > 0 && ci_level < 1, "confidence level must be in (0,1)");
}
}  // namespace

nlohmann::json to_json(EstimateWithCI const& e)
{
    auto finite_or_null = [](double v) -> nlohmann::json {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    };
    return {{"label", e.label},
            {"estimate", finite_or_null(e.estimate)},
            {"std_error", finite_or_null(e.std_error)},
            {"n_reps", e.n_reps},
            {"ci_level", e.ci_level},
            {"ci_lo", finite_or_null(e.ci_lo)},
            {"ci_hi", finite_or_null(e.ci_hi)},
            {"seed", e.seed},
            {"wall_time_ms", e.wall_time_ms}};
}

EstimateWithCI estimate_from_json(nlohmann::json const& j)
{
    auto num = [&](char const* key) {
        auto const& v = j.at(key);
        return v.is_null() ? std::nan("") : v.get<double>();
    };
    EstimateWithCI e;
    e.label = j.at("label").get<std::string>();
    e.estimate = num("estimate");
    e.std_error = num("std_error");
    e.n_reps = j.at("n_reps").get<std::size_t>();
    e.ci_level = num("ci_level");
    e.ci_lo = num("ci_lo");
    e.ci_hi = num("ci_hi");
    e.seed = j.at("seed").get<std::uint64_t>();
    e.wall_time_ms = num("wall_time_ms");
    return e;
}

double normal_critical_value(double ci_level)
{
    check_level(ci_level);
    boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 0.5 + 0.5 * ci_level);
}

double sample_mean(std::span<double const> values)
{
    require(!values.empty(), "mean of an empty sample");
    long double s = 0;
    for (double v : values)
    {
        s += v;
    }
    return static_cast<double>(s / static_cast<long double>(values.size()));
}

double sample_variance(std::span<double const> values)
{
    require(values.size() >= 2, "variance needs at least two samples");
    double const m = sample_mean(values);
    long double ss = 0;
    for (double v : values)
    {
        ss += (v - m) * (v - m);
    }
    return static_cast<double>(ss / static_cast<long double>(values.size() - 1));
}

EstimateWithCI mean_estimate(std::span<double const> values, double ci_level)
{
    check_level(ci_level);
    require(values.size() >= 2, "mean estimate needs at least two samples");
    EstimateWithCI e;
    e.estimate = sample_mean(values);
    e.std_error = std::sqrt(sample_variance(values)
                            / static_cast<double>(values.size()));
    e.n_reps = values.size();
    e.ci_level = ci_level;
    double const z = normal_critical_value(ci_level);
    e.ci_lo = e.estimate - z * e.std_error;
    e.ci_hi = e.estimate + z * e.std_error;
    return e;
}

EstimateWithCI bootstrap_variance(std::span<double const> values,
                                  CounterRng& rng,
                                  BootstrapOptions const& options)
{
    check_level(options.ci_level);
    require(values.size() >= 2, "variance needs at least two samples");
    require(options.resamples >= 2, "bootstrap needs at least two resamples");

    EstimateWithCI e;
    e.estimate = sample_variance(values);
    e.n_reps = values.size();
    e.ci_level = options.ci_level;

    std::size_t const n = values.size();
    std::vector<double> boot(options.resamples);
    for (auto& b : boot)
    {
        double s = 0;
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double const v = values[draw_index(rng, n)];
            s += v;
            ss += v * v;
        }
        double const m = s / static_cast<double>(n);
        b = std::max(0.0, (ss - static_cast<double>(n) * m * m)
                              / static_cast<double>(n - 1));
    }
    fill_percentile_ci(e, boot, options.ci_level);
    return e;
}

Eigen::MatrixXd sample_covariance(Eigen::MatrixXd const& samples)
{
    require(samples.rows() >= 2, "covariance needs at least two samples");
    Eigen::RowVectorXd const mean = samples.colwise().mean();
    Eigen::MatrixXd const centered = samples.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered)
                          / static_cast<double>(samples.rows() - 1);
    return 0.5 * (cov + cov.transpose());
}

double min_eigenvalue(Eigen::MatrixXd const& symmetric)
{
    require(symmetric.rows() == symmetric.cols() && symmetric.rows() > 0,
            "min_eigenvalue: need a non-empty square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        symmetric, Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, "eigenvalue solver failed",
            ErrorCode::numeric);
    return solver.eigenvalues().minCoeff();
}

EstimateWithCI bootstrap_min_eigenvalue(Eigen::MatrixXd const& samples,
                                        CounterRng& rng,
                                        BootstrapOptions const& options)
{
    check_level(options.ci_level);
    EstimateWithCI e;
    e.estimate = min_eigenvalue(sample_covariance(samples));
    e.n_reps = static_cast<std::size_t>(samples.rows());
    e.ci_level = options.ci_level;

    auto const n = static_cast<std::size_t>(samples.rows());
    Eigen::MatrixXd resample(samples.rows(), samples.cols());
    std::vector<double> boot(options.resamples);
    for (auto& b : boot)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            resample.row(static_cast<Eigen::Index>(i))
                = samples.row(static_cast<Eigen::Index>(draw_index(rng, n)));
        }
        b = min_eigenvalue(sample_covariance(resample));
    }
    fill_percentile_ci(e, boot, options.ci_level);
    return e;
}

ScalingFit scaling_regression(std::span<ScalePoint const> points)
{
    require(points.size() >= 3, "scaling regression needs at least 3 points");
    std::size_t const n = points.size();
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        require(points[i].scale > 0 && points[i].value > 0
                    && std::isfinite(points[i].scale)
                    && std::isfinite(points[i].value),
                "scaling regression needs positive finite scales and values");
        x[i] = std::log(points[i].scale);
        y[i] = std::log(points[i].value);
    }
    double const mx = sample_mean(x);
    double const my = sample_mean(y);
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0, "scaling regression needs distinct scales");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.resize(n);
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += fit.residuals[i] * fit.residuals[i];
    }
    double const sigma2 = rss / static_cast<double>(n - 2);
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se
        = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    return fit;
}
}  // namespace pvlab
