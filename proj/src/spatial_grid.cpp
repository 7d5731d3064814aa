// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/spatial_grid.hpp"

#include <cmath>
#include <limits>

#include "pvlab/error.hpp"

namespace pvlab
{
namespace
{
constexpr double cells_per_point = 4;

double cell_total(std::span<double const> span, double width)
{
    double total = 1;
    for (double len : span)
    {
        total *= std::floor(len / width) + 1;
    }
    return total;
}
}  // namespace

UniformGrid::UniformGrid(PointConfiguration const& config, double cell_width)
    : width_(cell_width)
{
    require(std::isfinite(cell_width) && cell_width > 0,
            "grid cell width must be positive and finite");
    std::size_t const d = config.dim();
    std::size_t const n = config.size();
    lo_.assign(d, 0);
    Point hi(d, 0);
    if (n > 0)
    {
        for (std::size_t a = 0; a < d; ++a)
        {
            lo_[a] = std::numeric_limits<double>::infinity();
            hi[a] = -std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t a = 0; a < d; ++a)
            {
                double const v = config.coord(i, a);
                require(std::isfinite(v), "grid points must be finite");
                lo_[a] = std::min(lo_[a], v);
                hi[a] = std::max(hi[a], v);
            }
        }
    }

    Point span(d);
    for (std::size_t a = 0; a < d; ++a)
    {
        span[a] = hi[a] - lo_[a];
    }
    double const budget
        = std::max(1.0, cells_per_point * static_cast<double>(n));
    while (cell_total(span, width_) > budget)
    {
        width_ *= std::max(1.5, std::pow(cell_total(span, width_) / budget,
                                         1.0 / static_cast<double>(d)));
    }

    extent_.resize(d);
    stride_.resize(d);
    std::int64_t cells = 1;
    for (std::size_t a = 0; a < d; ++a)
    {
        extent_[a] = static_cast<std::int64_t>(std::floor(span[a] / width_)) + 1;
        stride_[a] = cells;
        cells *= extent_[a];
    }

    std::vector<std::int64_t> flat(n);
    std::vector<std::int64_t> c(d);
    start_.assign(static_cast<std::size_t>(cells) + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        cell_of(config.point(i), c);
        for (std::size_t a = 0; a < d; ++a)
        {
            c[a] = std::clamp<std::int64_t>(c[a], 0, extent_[a] - 1);
        }
        flat[i] = flat_index(c);
        ++start_[static_cast<std::size_t>(flat[i]) + 1];
    }
    for (std::size_t k = 1; k < start_.size(); ++k)
    {
        start_[k] += start_[k - 1];
    }
    index_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        index_[fill[static_cast<std::size_t>(flat[i])]++] = i;
    }
}

void UniformGrid::cell_of(std::span<double const> x,
                          std::span<std::int64_t> out) const
{
    if (x.size() != dim() || out.size() != dim())
    {
        fail(ErrorCode::dimension_mismatch, "grid query has wrong dimension");
    }
    for (std::size_t a = 0; a < dim(); ++a)
    {
        out[a] = static_cast<std::int64_t>(std::floor((x[a] - lo_[a]) / width_));
    }
}

std::int64_t UniformGrid::flat_index(std::span<std::int64_t const> c) const
{
    std::int64_t f = 0;
    for (std::size_t a = 0; a < dim(); ++a)
    {
        f += c[a] * stride_[a];
    }
    return f;
}

std::span<std::size_t const>
UniformGrid::cell(std::span<std::int64_t const> c) const
{
    for (std::size_t a = 0; a < dim(); ++a)
    {
        if (c[a] < 0 || c[a] >= extent_[a])
        {
            return {};
        }
    }
    auto const f = static_cast<std::size_t>(flat_index(c));
    return std::span<std::size_t const>(index_).subspan(
        start_[f], start_[f + 1] - start_[f]);
}
}  // namespace pvlab
