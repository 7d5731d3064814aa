// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "functional.hpp"
#include "point_configuration.hpp"
#include "random.hpp"
#include "stats.hpp"
#include "window.hpp"

namespace pvlab
{
//! Two-sided tail bounds c_lower |x|^-gamma <= |g(x)| <= c_upper |x|^-delta
//! for |x| >= c_g.
struct PowerLawTail
{
    double c_lower = 1;
    double c_upper = 1;
    double delta = 0;
    double gamma = 0;
    double c_g = 1;
};

/*!
 * Shot-noise kernel g on R^d.
 *
 * power_law: g(x) = c_upper * min(c_g^-delta, |x|^-delta).
 * compact_support: g(x) = amplitude * 1{|x| <= support_radius}.
 * custom: any callable that declares a support radius or a tail.
 */
class Kernel
{
  public:
    enum class Kind
    {
        power_law,
        compact_support,
        custom
    };
    using Callable = std::function<double(std::span<double const>)>;

    static Kernel power_law(std::size_t dim, PowerLawTail tail);
    static Kernel compact_indicator(std::size_t dim, double amplitude,
                                    double support_radius);
    static Kernel custom(std::size_t dim, Callable g,
                         std::optional<double> support_radius,
                         std::optional<PowerLawTail> tail);

    //! {kind: "power_law"|"compact", d, ...}; custom kernels have no JSON.
    static Kernel from_json(nlohmann::json const& j);
    nlohmann::json to_json() const;

    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::optional<double> support_radius() const { return support_; }
    std::optional<PowerLawTail> const& tail() const { return tail_; }
    double amplitude() const noexcept { return amplitude_; }

    double operator()(std::span<double const> x) const;
    //! Profile value at radius r for radial kernels (power law, compact).
    double radial(double r) const;

  private:
    Kernel() = default;

    Kind kind_ = Kind::compact_support;
    std::size_t dim_ = 2;
    double amplitude_ = 1;
    std::optional<double> support_;
    std::optional<PowerLawTail> tail_;
    Callable custom_;
};

struct AdmissibilityReport
{
    enum class Regime
    {
        power_law_tail,  //!< two-sided power tail with the exponent chain
        compact_support,
        rejected
    };
    bool admissible = false;
    Regime regime = Regime::rejected;
    std::vector<std::string> reasons;
};

/*!
 * Checks delta + d/2 > gamma >= delta > 3d, g(0) > 0, and samples |g| on a
 * log-radius grid beyond c_g against both power bounds.
 */
AdmissibilityReport validate_kernel(Kernel const& kernel);

//! f(x) = sum over points y of g(x - y).
double field_value(Kernel const& kernel, PointConfiguration const& config,
                   std::span<double const> x);

/*!
 * Smallest R with c_upper d kappa_d / (c3 (delta-d) (R-eps)^{delta-d})
 * <= target, floored at c_g + eps. Requires a declared tail with delta > d.
 */
double truncation_radius(Kernel const& kernel, double c3, double epsilon,
                         double target);

//! Level u, observation radius s, N quadrature nodes, sampling margin.
struct ExcursionSpec
{
    double level = 1;
    double radius = 1;
    std::size_t nodes = 4096;
    double margin = 0;

    void validate() const;
};

//! Margin used to enlarge the sampling window B(0, s + margin).
struct TruncationOptions
{
    double tolerance = 1e-3;  //!< exceedance probability target
    double c3_fraction = 0.05;  //!< c3 = c3_fraction * level
    double epsilon = 0;
};
double sampling_margin(Kernel const& kernel, double level,
                       TruncationOptions const& options = {});

//! Quasi-random (Halton) nodes uniformly covering B(0, radius).
std::vector<double> ball_quadrature_nodes(std::size_t dim, double radius,
                                          std::size_t count);

/*!
 * Excursion-set volume estimator with a fixed node set.
 *
 * Returns vol(B(0,s)) * fraction of nodes with f >= u. Kernels with a
 * support radius use a point grid; others sum over all points.
 */
class ExcursionVolume
{
  public:
    ExcursionVolume(Kernel kernel, ExcursionSpec spec);

    double operator()(PointConfiguration const& config) const;
    ExcursionSpec const& spec() const noexcept { return spec_; }
    Kernel const& kernel() const noexcept { return kernel_; }
    std::span<double const> nodes() const noexcept { return nodes_; }

  private:
    Kernel kernel_;
    ExcursionSpec spec_;
    std::vector<double> nodes_;
    double window_volume_;
};

double excursion_volume(Kernel const& kernel, PointConfiguration const& config,
                        ExcursionSpec const& spec);

//! F_s as a functional plus the Poisson model on B(0, s + margin).
PoissonModel shotnoise_functional(Kernel const& kernel,
                                  ExcursionSpec const& spec,
                                  double intensity = 1);

/*!
 * P(f(0) >= u, f(z) >= u) - P(f(0) >= u) P(f(z) >= u) estimated as the
 * sample covariance of the two exceedance indicators on common fields.
 */
EstimateWithCI pair_probability_variance_density(
    Kernel const& kernel, double level, std::span<double const> z,
    std::size_t n_reps, SeedSpec const& seed, double margin,
    double intensity = 1, double ci_level = 0.95);
}  // namespace pvlab
