// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "random.hpp"

namespace pvlab
{
//! Monte Carlo point estimate with its uncertainty.
struct EstimateWithCI
{
    std::string label;
    double estimate = 0;
    double std_error = 0;
    std::size_t n_reps = 0;
    double ci_level = 0.95;
    double ci_lo = 0;
    double ci_hi = 0;
    std::uint64_t seed = 0;
    double wall_time_ms = 0;
};

//! {label, estimate, std_error, n_reps, ci_level, ci_lo, ci_hi, seed, wall_time_ms}
nlohmann::json to_json(EstimateWithCI const& e);
EstimateWithCI estimate_from_json(nlohmann::json const& j);

//! Two-sided standard normal quantile for a confidence level, e.g. 1.96.
double normal_critical_value(double ci_level);

double sample_mean(std::span<double const> values);
//! Unbiased (n - 1) sample variance.
double sample_variance(std::span<double const> values);

//! Mean with normal-approximation CI.
EstimateWithCI mean_estimate(std::span<double const> values,
                             double ci_level = 0.95);

struct BootstrapOptions
{
    std::size_t resamples = 1000;
    double ci_level = 0.95;
};

/*!
 * Unbiased sample variance with a percentile bootstrap CI.
 *
 * std_error is the bootstrap standard deviation. The interval is widened to
 * contain the point estimate if the percentile interval misses it.
 */
EstimateWithCI bootstrap_variance(std::span<double const> values,
                                  CounterRng& rng,
                                  BootstrapOptions const& options = {});

//! Rows are replications, columns are variables.
Eigen::MatrixXd sample_covariance(Eigen::MatrixXd const& samples);
double min_eigenvalue(Eigen::MatrixXd const& symmetric);

//! Minimum eigenvalue of the sample covariance with a bootstrap CI.
EstimateWithCI bootstrap_min_eigenvalue(Eigen::MatrixXd const& samples,
                                        CounterRng& rng,
                                        BootstrapOptions const& options = {});

struct ScalePoint
{
    double scale = 0;
    double value = 0;
};

//! Least squares line through (log scale, log value).
struct ScalingFit
{
    double slope = 0;
    double slope_se = 0;
    double intercept = 0;
    double intercept_se = 0;
    std::vector<double> residuals;
};

ScalingFit scaling_regression(std::span<ScalePoint const> points);
}  // namespace pvlab
