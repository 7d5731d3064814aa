// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/window.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pvlab/error.hpp"

namespace pvlab
{
double ball_volume(std::size_t d, double r)
{
    require(d >= 1, "ball_volume: dimension must be positive");
    require(std::isfinite(r) && r >= 0, "ball_volume: radius must be >= 0");
    double const half = 0.5 * static_cast<double>(d);
    double const kappa = std::pow(std::numbers::pi, half) / std::tgamma(half + 1);
    return kappa * std::pow(r, static_cast<double>(d));
}

Window Window::box(Point lo, Point hi)
{
    require(!lo.empty() && lo.size() == hi.size(),
            "box window: corners must have equal positive dimension");
    Window w;
    w.kind_ = Kind::box;
    w.volume_ = 1;
    w.center_.resize(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a)
    {
        require(std::isfinite(lo[a]) && std::isfinite(hi[a]) && lo[a] < hi[a],
                "box window: need lo < hi in every coordinate");
        w.volume_ *= hi[a] - lo[a];
        w.center_[a] = 0.5 * (lo[a] + hi[a]);
    }
    w.lo_ = std::move(lo);
    w.hi_ = std::move(hi);
    return w;
}

Window Window::ball(Point center, double radius)
{
    require(!center.empty(), "ball window: empty center");
    require(std::isfinite(radius) && radius > 0,
            "ball window: radius must be positive");
    Window w;
    w.kind_ = Kind::ball;
    w.radius_ = radius;
    w.lo_.resize(center.size());
    w.hi_.resize(center.size());
    for (std::size_t a = 0; a < center.size(); ++a)
    {
        require(std::isfinite(center[a]), "ball window: non-finite center");
        w.lo_[a] = center[a] - radius;
        w.hi_[a] = center[a] + radius;
    }
    w.volume_ = ball_volume(center.size(), radius);
    w.center_ = std::move(center);
    return w;
}

Window Window::unit_cube(std::size_t d)
{
    return box(Point(d, 0.0), Point(d, 1.0));
}

Window Window::unit_ball(std::size_t d)
{
    return ball(Point(d, 0.0), 1.0);
}

bool Window::contains(std::span<double const> x) const
{
    if (x.size() != dim())
    {
        return false;
    }
    if (kind_ == Kind::ball)
    {
        return squared_distance(x, center_) <= radius_ * radius_;
    }
    for (std::size_t a = 0; a < x.size(); ++a)
    {
        if (x[a] < lo_[a] || x[a] > hi_[a])
        {
            return false;
        }
    }
    return true;
}

void Window::sample_uniform(CounterRng& rng, std::span<double> out) const
{
    while (true)
    {
        for (std::size_t a = 0; a < out.size(); ++a)
        {
            out[a] = rng.uniform(lo_[a], hi_[a]);
        }
        if (kind_ == Kind::box || contains(out))
        {
            return;
        }
    }
}

Point Window::sample_uniform(CounterRng& rng) const
{
    Point x(dim());
    sample_uniform(rng, x);
    return x;
}

std::string Window::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (kind_ == Kind::ball)
    {
        os << "ball(d=" << dim() << ",r=" << radius_ << ")";
    }
    else
    {
        os << "box(d=" << dim() << ",vol=" << volume_ << ")";
    }
    return os.str();
}
}  // namespace pvlab
