// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "point_configuration.hpp"
#include "random.hpp"

namespace pvlab
{
//! Volume of the d-dimensional ball of radius r, kappa_d * r^d.
double ball_volume(std::size_t d, double r);

//! Sampling region: an axis-aligned box or a closed ball.
class Window
{
  public:
    enum class Kind
    {
        box,
        ball
    };

    static Window box(Point lo, Point hi);
    static Window ball(Point center, double radius);
    static Window unit_cube(std::size_t d);
    static Window unit_ball(std::size_t d);

    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return lo_.size(); }
    double volume() const noexcept { return volume_; }
    bool contains(std::span<double const> x) const;

    //! Bounding box (equal to the window for boxes).
    Point const& lower() const noexcept { return lo_; }
    Point const& upper() const noexcept { return hi_; }
    Point const& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

    //! Write a uniform point of the window into out (rejection for balls).
    void sample_uniform(CounterRng& rng, std::span<double> out) const;
    Point sample_uniform(CounterRng& rng) const;

    std::string describe() const;

  private:
    Window() = default;

    Kind kind_ = Kind::box;
    Point lo_;
    Point hi_;
    Point center_;
    double radius_ = 0;
    double volume_ = 0;
};
}  // namespace pvlab
