// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/rgg.hpp"

#include <cmath>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/spatial_grid.hpp"

namespace pvlab
{
double RggParams::radius() const
{
    require(std::isfinite(rho) && rho > 0, "rgg rho must be positive");
    require(dim >= 1, "rgg dimension must be >= 1", ErrorCode::dimension_mismatch);
    require(std::isfinite(intensity) && intensity > 0,
            "rgg intensity must be positive");
    return rho * std::pow(intensity, -1.0 / static_cast<double>(dim));
}

GraphView build_rgg(PointConfiguration const& config, double radius)
{
    require(std::isfinite(radius) && radius > 0, "rgg radius must be positive");
    std::size_t const n = config.size();
    std::vector<Edge> edges;
    if (n < 2)
    {
        return GraphView::from_edges(n, {});
    }
    UniformGrid const grid(config, radius);
    double const r2 = radius * radius;
    std::vector<std::int64_t> c(config.dim());
    for (std::size_t i = 0; i < n; ++i)
    {
        auto const pi = config.point(i);
        grid.cell_of(pi, c);
        grid.visit_block(c, 1, [&](std::span<std::size_t const> cell) {
            for (std::size_t j : cell)
            {
                if (j <= i)
                {
                    continue;
                }
                double const d2 = squared_distance(pi, config.point(j));
                if (d2 > 0 && d2 <= r2)
                {
                    edges.emplace_back(i, j);
                }
            }
        });
    }
    return GraphView::from_edges(n, std::move(edges));
}

GraphView build_rgg(PointConfiguration const& config, RggParams const& params)
{
    if (config.dim() != params.dim)
    {
        fail(ErrorCode::dimension_mismatch,
             "rgg configured for dimension " + std::to_string(params.dim)
                 + ", configuration has " + std::to_string(config.dim()));
    }
    return build_rgg(config, params.radius());
}

Functional rgg_functional(RggStatistic stat, std::size_t j,
                          RggParams const& params)
{
    bool const degree = stat == RggStatistic::degree_count;
    require(degree || j >= 1, "component size must be >= 1");
    params.radius();
    std::ostringstream label;
    label << (degree ? "rgg_V" : "rgg_C") << j << "[rho=" << params.rho
          << ",s=" << params.intensity << ",d=" << params.dim << "]";
    return Functional(label.str(), [degree, j, params](PointConfiguration const& c) {
        GraphView const g = build_rgg(c, params);
        return static_cast<double>(degree ? degree_count(g, j)
                                          : component_count(g, j));
    });
}
}  // namespace pvlab
