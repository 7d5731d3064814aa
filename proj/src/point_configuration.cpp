// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/point_configuration.hpp"

#include <cmath>
#include <string>

#include "pvlab/error.hpp"

namespace pvlab
{
PointConfiguration::PointConfiguration(std::size_t dim) : dim_(dim)
{
    require(dim >= 1, "point dimension must be positive");
}

PointConfiguration::PointConfiguration(std::size_t dim,
                                       std::initializer_list<Point> points)
    : PointConfiguration(dim)
{
    reserve(points.size());
    for (auto const& p : points)
    {
        push_back(p);
    }
}

void PointConfiguration::push_back(std::span<double const> x)
{
    if (x.size() != dim_)
    {
        fail(ErrorCode::dimension_mismatch,
             "point of dimension " + std::to_string(x.size())
                 + " added to a configuration of dimension "
                 + std::to_string(dim_));
    }
    coords_.insert(coords_.end(), x.begin(), x.end());
}

void PointConfiguration::pop_back()
{
    require(!coords_.empty(), "pop_back on an empty configuration");
    coords_.resize(coords_.size() - dim_);
}

PointConfiguration add_points(PointConfiguration const& config,
                              std::span<Point const> extra)
{
    PointConfiguration out = config;
    out.reserve(config.size() + extra.size());
    for (auto const& x : extra)
    {
        out.push_back(x);
    }
    return out;
}

PointConfiguration add_point(PointConfiguration const& config,
                             std::span<double const> x)
{
    PointConfiguration out = config;
    out.push_back(x);
    return out;
}

double squared_distance(std::span<double const> a, std::span<double const> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        double const d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(std::span<double const> a, std::span<double const> b)
{
    return std::sqrt(squared_distance(a, b));
}

double norm(std::span<double const> a)
{
    double s = 0;
    for (double v : a)
    {
        s += v * v;
    }
    return std::sqrt(s);
}
}  // namespace pvlab
