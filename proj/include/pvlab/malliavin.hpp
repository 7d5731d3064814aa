// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "functional.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace pvlab
{
//! D_x F = F(config + x) - F(config).
double difference(Functional const& f, PointConfiguration const& config,
                  std::span<double const> x);

//! D^2_{x,y} F = F(+x+y) - F(+x) - F(+y) + F.
double second_difference(Functional const& f, PointConfiguration const& config,
                         std::span<double const> x, std::span<double const> y);

struct EstimatorOptions
{
    double ci_level = 0.95;
    std::size_t bootstrap_resamples = 1000;
};

/*!
 * Monte Carlo estimates of E int (D_x F)^2 dlambda and
 * E int int (D^2_{x,y} F)^2 dlambda^2 with lambda = intensity * Lebesgue on
 * the window.
 */
struct DirichletEstimate
{
    EstimateWithCI first_order;
    EstimateWithCI second_order;
    //! second / first, +inf when first_order.estimate == 0.
    double alpha_hat = 0;
    //! Covariance of the two replication means (same replications).
    double mean_covariance = 0;
};

/*!
 * One configuration and one (resp. two) uniform integration points per
 * replication; weights intensity*vol and (intensity*vol)^2.
 */
DirichletEstimate estimate_dirichlet(Functional const& f, Window const& window,
                                     double intensity, std::size_t n_reps,
                                     SeedSpec const& seed,
                                     EstimatorOptions const& options = {});

//! Empirical reversed-Poincare bound 4/(alpha+2)^2 * first order.
double theorem1_lower_bound(DirichletEstimate const& de);
//! Delta-method standard error of theorem1_lower_bound.
double theorem1_lower_bound_std_error(DirichletEstimate const& de);

//! Poincare upper bound: the first-order Dirichlet estimate.
double poincare_upper_bound(DirichletEstimate const& de);

/*!
 * Estimate of int (E D_x F)^2 dlambda by nested sampling.
 *
 * Each outer replication draws x and inner_count independent
 * configurations; the squared inner mean is bias-corrected by subtracting
 * inner variance / inner_count. Near zero when E D_x F vanishes.
 */
EstimateWithCI first_chaos_bound(Functional const& f, Window const& window,
                                 double intensity, std::size_t n_reps,
                                 SeedSpec const& seed,
                                 std::size_t inner_count = 16,
                                 EstimatorOptions const& options = {});

//! Unbiased sample variance of i.i.d. replications, bootstrap CI.
EstimateWithCI estimate_variance(Functional const& f, Window const& window,
                                 double intensity, std::size_t n_reps,
                                 SeedSpec const& seed,
                                 EstimatorOptions const& options = {});

//! Raw replication values F(eta_r), r < n_reps.
std::vector<double> sample_values(Functional const& f, Window const& window,
                                  double intensity, std::size_t n_reps,
                                  SeedSpec const& seed);

struct CovarianceEstimate
{
    Eigen::MatrixXd matrix;
    EstimateWithCI min_eigenvalue;
    //! Bootstrap CI lower bound of the minimum eigenvalue exceeds 1e-9 times
    //! the largest variance.
    bool positive_definite = false;
};

//! Sample covariance of a vector of functionals on shared replications.
CovarianceEstimate estimate_covariance(std::span<Functional const> fs,
                                       Window const& window, double intensity,
                                       std::size_t n_reps,
                                       SeedSpec const& seed,
                                       EstimatorOptions const& options = {});
}  // namespace pvlab
