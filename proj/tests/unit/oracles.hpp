// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "pvlab/graph.hpp"
#include "pvlab/point_configuration.hpp"
#include "pvlab/random.hpp"
#include "pvlab/window.hpp"

namespace oracle
{
using pvlab::Edge;
using pvlab::PointConfiguration;

inline double sq_dist(PointConfiguration const& c, std::size_t i, std::size_t j)
{
    double s = 0;
    for (std::size_t a = 0; a < c.dim(); ++a)
    {
        double const d = c.coord(i, a) - c.coord(j, a);
        s += d * d;
    }
    return s;
}

inline std::vector<Edge> rgg_edges(PointConfiguration const& c, double r)
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        for (std::size_t j = i + 1; j < c.size(); ++j)
        {
            double const d2 = sq_dist(c, i, j);
            if (d2 > 0 && d2 <= r * r)
            {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> knn_lists(PointConfiguration const& c,
                                                       std::size_t k)
{
    std::vector<std::vector<std::size_t>> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < c.size(); ++j)
        {
            if (j != i)
            {
                all.emplace_back(sq_dist(c, i, j), j);
            }
        }
        std::sort(all.begin(), all.end());
        for (std::size_t m = 0; m < std::min(k, all.size()); ++m)
        {
            out[i].push_back(all[m].second);
        }
    }
    return out;
}

inline std::vector<Edge> knn_edges(PointConfiguration const& c, std::size_t k)
{
    std::set<Edge> edges;
    auto const lists = knn_lists(c, k);
    for (std::size_t i = 0; i < lists.size(); ++i)
    {
        for (std::size_t j : lists[i])
        {
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    }
    return {edges.begin(), edges.end()};
}

//! Component size of every vertex by breadth-first search.
inline std::vector<std::size_t> bfs_component_sizes(std::size_t n,
                                                    std::vector<Edge> const& edges)
{
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto const& [u, v] : edges)
    {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::size_t> label(n, n);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < n; ++s)
    {
        if (label[s] != n)
        {
            continue;
        }
        std::size_t const id = sizes.size();
        sizes.push_back(0);
        std::queue<std::size_t> q;
        q.push(s);
        label[s] = id;
        while (!q.empty())
        {
            std::size_t const v = q.front();
            q.pop();
            ++sizes[id];
            for (std::size_t w : adj[v])
            {
                if (label[w] == n)
                {
                    label[w] = id;
                    q.push(w);
                }
            }
        }
    }
    std::vector<std::size_t> out(n);
    for (std::size_t v = 0; v < n; ++v)
    {
        out[v] = sizes[label[v]];
    }
    return out;
}

//! Facets of the 2-d hull as ordered pairs (i, j) with all points left of i->j.
inline std::set<std::set<std::size_t>> hull_facets_2d(PointConfiguration const& c)
{
    std::set<std::set<std::size_t>> out;
    std::size_t const n = c.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i == j)
            {
                continue;
            }
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k)
            {
                if (k == i || k == j)
                {
                    continue;
                }
                double const cr = (c.coord(j, 0) - c.coord(i, 0))
                                      * (c.coord(k, 1) - c.coord(i, 1))
                                  - (c.coord(j, 1) - c.coord(i, 1))
                                        * (c.coord(k, 0) - c.coord(i, 0));
                ok = cr > 0;
            }
            if (ok)
            {
                out.insert({i, j});
            }
        }
    }
    return out;
}

inline double det3(double const* a, double const* b, double const* c)
{
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

//! Facets of the 3-d hull (general position) by exhaustive plane tests.
inline std::set<std::set<std::size_t>> hull_facets_3d(PointConfiguration const& c)
{
    std::set<std::set<std::size_t>> out;
    std::size_t const n = c.size();
    auto p = [&](std::size_t i) { return c.point(i).data(); };
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 1; j < n; ++j)
        {
            for (std::size_t k = j + 1; k < n; ++k)
            {
                int pos = 0;
                int neg = 0;
                for (std::size_t m = 0; m < n; ++m)
                {
                    if (m == i || m == j || m == k)
                    {
                        continue;
                    }
                    double u[3], v[3], w[3];
                    for (int a = 0; a < 3; ++a)
                    {
                        u[a] = p(j)[a] - p(i)[a];
                        v[a] = p(k)[a] - p(i)[a];
                        w[a] = p(m)[a] - p(i)[a];
                    }
                    double const s = det3(u, v, w);
                    pos += s > 0;
                    neg += s < 0;
                }
                if (pos == 0 || neg == 0)
                {
                    out.insert({i, j, k});
                }
            }
        }
    }
    return out;
}

//! Area of B(0, r1) intersected with B(z, r2), |z| = d, in the plane.
inline double lens_area(double r1, double r2, double d)
{
    if (d >= r1 + r2)
    {
        return 0;
    }
    if (d <= std::abs(r1 - r2))
    {
        double const r = std::min(r1, r2);
        return std::numbers::pi * r * r;
    }
    double const a1 = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
    double const a2 = r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
    double const k = std::sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2)
                               * (d + r1 + r2));
    return a1 + a2 - 0.5 * k;
}

inline PointConfiguration uniform_points(std::size_t n, std::size_t d,
                                         std::uint64_t seed,
                                         double side = 1.0)
{
    pvlab::CounterRng rng(pvlab::SeedSpec{seed, {77, 0}});
    PointConfiguration c(d);
    for (std::size_t i = 0; i < n; ++i)
    {
        pvlab::Point x(d);
        for (double& v : x)
        {
            v = side * rng.uniform();
        }
        c.push_back(x);
    }
    return c;
}
}  // namespace oracle
