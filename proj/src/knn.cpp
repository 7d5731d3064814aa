// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/knn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/spatial_grid.hpp"

namespace pvlab
{
namespace
{
using Candidate = std::pair<double, std::size_t>;

std::vector<std::size_t> all_others(PointConfiguration const& config,
                                    std::size_t i)
{
    std::vector<Candidate> cands;
    for (std::size_t j = 0; j < config.size(); ++j)
    {
        if (j != i)
        {
            cands.emplace_back(
                squared_distance(config.point(i), config.point(j)), j);
        }
    }
    std::sort(cands.begin(), cands.end());
    std::vector<std::size_t> out;
    for (auto const& c : cands)
    {
        out.push_back(c.second);
    }
    return out;
}

double initial_width(PointConfiguration const& config, std::size_t k)
{
    std::size_t const d = config.dim();
    double widest = 0;
    for (std::size_t a = 0; a < d; ++a)
    {
        double lo = config.coord(0, a);
        double hi = lo;
        for (std::size_t i = 1; i < config.size(); ++i)
        {
            lo = std::min(lo, config.coord(i, a));
            hi = std::max(hi, config.coord(i, a));
        }
        widest = std::max(widest, hi - lo);
    }
    if (!(widest > 0))
    {
        return 1;
    }
    double const frac = static_cast<double>(k + 1)
                        / static_cast<double>(config.size());
    return widest * std::pow(frac, 1.0 / static_cast<double>(d));
}

void require_q(double q)
{
    require(std::isfinite(q) && q >= 0, "edge-length exponent q must be >= 0");
}
}  // namespace

std::vector<std::vector<std::size_t>>
nearest_neighbours(PointConfiguration const& config, std::size_t k)
{
    require(k >= 1, "knn needs k >= 1");
    std::size_t const n = config.size();
    std::vector<std::vector<std::size_t>> out(n);
    if (n <= k + 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            out[i] = all_others(config, i);
        }
        return out;
    }

    UniformGrid const grid(config, initial_width(config, k));
    double const w = grid.width();
    std::vector<std::int64_t> c(config.dim());
    std::vector<Candidate> best;
    for (std::size_t i = 0; i < n; ++i)
    {
        auto const pi = config.point(i);
        grid.cell_of(pi, c);
        best.clear();
        auto const consider = [&](std::span<std::size_t const> cell) {
            for (std::size_t j : cell)
            {
                if (j == i)
                {
                    continue;
                }
                Candidate const cand{squared_distance(pi, config.point(j)), j};
                if (best.size() == k && !(cand < best.back()))
                {
                    continue;
                }
                best.insert(std::upper_bound(best.begin(), best.end(), cand),
                            cand);
                if (best.size() > k)
                {
                    best.pop_back();
                }
            }
        };
        for (std::int64_t ring = 0;; ++ring)
        {
            if (!grid.visit_ring(c, ring, consider))
            {
                break;
            }
            // The margin absorbs rounding in the cell assignment.
            double const reach = static_cast<double>(ring) * w * (1 - 1e-9);
            if (best.size() == k && best.back().first < reach * reach)
            {
                break;
            }
        }
        out[i].reserve(k);
        for (auto const& b : best)
        {
            out[i].push_back(b.second);
        }
    }
    return out;
}

GraphView build_knn(PointConfiguration const& config, std::size_t k)
{
    auto const nn = nearest_neighbours(config, k);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nn.size(); ++i)
    {
        for (std::size_t j : nn[i])
        {
            edges.emplace_back(i, j);
        }
    }
    return GraphView::from_edges(config.size(), std::move(edges));
}

double edge_length_functional(GraphView const& graph,
                              PointConfiguration const& config, double q)
{
    require_q(q);
    require(graph.vertex_count() == config.size(),
            "graph and configuration sizes differ");
    double sum = 0;
    for (auto const& [u, v] : graph.edges())
    {
        sum += std::pow(distance(config.point(u), config.point(v)), q);
    }
    return sum;
}

double edge_length_functional(PointConfiguration const& config, std::size_t k,
                              double q)
{
    return edge_length_functional(build_knn(config, k), config, q);
}

double scaled_edge_length(double l_q, double q, double s, std::size_t d)
{
    require_q(q);
    require(std::isfinite(s) && s > 0, "scale s must be positive");
    require(d >= 1, "dimension must be >= 1", ErrorCode::dimension_mismatch);
    return std::pow(s, q / static_cast<double>(d)) * l_q;
}

double scaled_edge_length(PointConfiguration const& config, std::size_t k,
                          double q, double s)
{
    return scaled_edge_length(edge_length_functional(config, k, q), q, s,
                              config.dim());
}

std::size_t knn_degree_count(PointConfiguration const& config, std::size_t k,
                             std::size_t j)
{
    return degree_count(build_knn(config, k), j);
}

std::vector<std::size_t> knn_degree_histogram(PointConfiguration const& config,
                                              std::size_t k, std::size_t k_max)
{
    GraphView const g = build_knn(config, k);
    std::vector<std::size_t> hist(k_max + 1, 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        ++hist[std::min(g.degree(v), k_max)];
    }
    return hist;
}

Functional knn_length_functional(std::size_t k, double q, double intensity,
                                 bool scaled)
{
    require(k >= 1, "knn needs k >= 1");
    require_q(q);
    require(std::isfinite(intensity) && intensity > 0,
            "knn intensity must be positive");
    std::ostringstream label;
    label << (scaled ? "knn_F" : "knn_L") << "[k=" << k << ",q=" << q;
    if (scaled)
    {
        label << ",s=" << intensity;
    }
    label << "]";
    return Functional(label.str(), [k, q, intensity, scaled](
                                       PointConfiguration const& c) {
        double const l = edge_length_functional(c, k, q);
        return scaled ? scaled_edge_length(l, q, intensity, c.dim()) : l;
    });
}

Functional knn_degree_functional(std::size_t k, std::size_t j)
{
    require(k >= 1, "knn needs k >= 1");
    return Functional("knn_V" + std::to_string(j) + "[k=" + std::to_string(k)
                          + "]",
                      [k, j](PointConfiguration const& c) {
                          return static_cast<double>(knn_degree_count(c, k, j));
                      });
}
}  // namespace pvlab
