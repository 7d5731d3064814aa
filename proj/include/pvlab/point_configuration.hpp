// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pvlab
{
using Point = std::vector<double>;

/*!
 * Finite counting measure on R^d stored as a flat coordinate array.
 *
 * Points keep insertion order and duplicates are allowed (multiset).
 */
class PointConfiguration
{
  public:
    explicit PointConfiguration(std::size_t dim);
    PointConfiguration(std::size_t dim, std::initializer_list<Point> points);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coords_.size() / dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<double const> point(std::size_t i) const
    {
        return {coords_.data() + i * dim_, dim_};
    }
    double coord(std::size_t i, std::size_t axis) const
    {
        return coords_[i * dim_ + axis];
    }
    std::span<double const> coords() const noexcept { return coords_; }

    void reserve(std::size_t n) { coords_.reserve(n * dim_); }
    void push_back(std::span<double const> x);
    void pop_back();
    void clear() noexcept { coords_.clear(); }

    friend bool operator==(PointConfiguration const&,
                           PointConfiguration const&) = default;

  private:
    std::size_t dim_;
    std::vector<double> coords_;
};

//! Copy of config with the extra points appended; config is untouched.
PointConfiguration add_points(PointConfiguration const& config,
                              std::span<Point const> extra);
PointConfiguration add_point(PointConfiguration const& config,
                             std::span<double const> x);

double squared_distance(std::span<double const> a, std::span<double const> b);
double distance(std::span<double const> a, std::span<double const> b);
double norm(std::span<double const> a);
}  // namespace pvlab
