// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "point_configuration.hpp"

namespace pvlab
{
/*!
 * Uniform bucket grid over the bounding box of a configuration.
 *
 * Cells are stored in CSR form (counting sort of point indices), so
 * indices inside a cell are increasing. The requested width is enlarged
 * when the cell count would exceed a budget proportional to the point
 * count; width() reports the actual value.
 */
class UniformGrid
{
  public:
    UniformGrid(PointConfiguration const& config, double cell_width);

    double width() const noexcept { return width_; }
    std::size_t dim() const noexcept { return lo_.size(); }

    //! Integer cell coordinates of x; may lie outside the grid.
    void cell_of(std::span<double const> x, std::span<std::int64_t> out) const;

    //! Point indices in the cell, empty when the cell is outside the grid.
    std::span<std::size_t const> cell(std::span<std::int64_t const> c) const;

    /*!
     * Visit every cell whose Chebyshev offset from center is exactly ring
     * (ring 0 is the center cell). Returns false when no cell of the ring
     * lies inside the grid.
     */
    template<class F>
    bool visit_ring(std::span<std::int64_t const> center, std::int64_t ring,
                    F&& visit) const;

    //! Visit all cells with Chebyshev offset <= reach.
    template<class F>
    void visit_block(std::span<std::int64_t const> center, std::int64_t reach,
                     F&& visit) const
    {
        for (std::int64_t r = 0; r <= reach; ++r)
        {
            visit_ring(center, r, visit);
        }
    }

  private:
    std::int64_t flat_index(std::span<std::int64_t const> c) const;

    double width_;
    Point lo_;
    std::vector<std::int64_t> extent_;
    std::vector<std::int64_t> stride_;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> index_;
};

template<class F>
bool UniformGrid::visit_ring(std::span<std::int64_t const> center,
                             std::int64_t ring, F&& visit) const
{
    std::size_t const d = dim();
    bool intersects = true;
    bool covered = ring > 0;
    for (std::size_t a = 0; a < d; ++a)
    {
        intersects = intersects && center[a] + ring >= 0
                     && center[a] - ring < extent_[a];
        covered = covered && center[a] - (ring - 1) <= 0
                  && center[a] + (ring - 1) >= extent_[a] - 1;
    }
    if (!intersects || covered)
    {
        return false;
    }

    std::vector<std::int64_t> off(d, -ring);
    std::vector<std::int64_t> c(d);
    while (true)
    {
        std::int64_t cheb = 0;
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a)
        {
            cheb = std::max(cheb, off[a] < 0 ? -off[a] : off[a]);
            c[a] = center[a] + off[a];
            inside = inside && c[a] >= 0 && c[a] < extent_[a];
        }
        if (cheb == ring && inside)
        {
            visit(cell(c));
        }
        std::size_t a = 0;
        for (; a < d; ++a)
        {
            if (++off[a] <= ring)
            {
                break;
            }
            off[a] = -ring;
        }
        if (a == d)
        {
            break;
        }
    }
    return true;
}
}  // namespace pvlab
