// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <utility>

#include "point_configuration.hpp"
#include "window.hpp"

namespace pvlab
{
/*!
 * Deterministic, permutation-invariant map from configurations to reals.
 */
class Functional
{
  public:
    using Evaluator = std::function<double(PointConfiguration const&)>;

    Functional(std::string label, Evaluator evaluate)
        : label_(std::move(label)), evaluate_(std::move(evaluate))
    {
    }

    std::string const& label() const noexcept { return label_; }
    double operator()(PointConfiguration const& config) const
    {
        return evaluate_(config);
    }

    //! a*F + b*G, used by linearity checks and linear combinations.
    static Functional linear_combination(double a, Functional const& f,
                                         double b, Functional const& g);
    //! c*F
    Functional scaled(double c) const;

  private:
    std::string label_;
    Evaluator evaluate_;
};

//! A functional together with the Poisson model it is meant to be run on.
struct PoissonModel
{
    Functional functional;
    Window window;
    double intensity;
};

// Elementary functionals used as exact references.
Functional count_functional();
Functional parity_functional();  // (-1)^{|eta|}
Functional nonempty_functional();  // 1{|eta| >= 1}
Functional constant_functional(double value);
Functional subwindow_count_functional(Window const& sub);
}  // namespace pvlab
