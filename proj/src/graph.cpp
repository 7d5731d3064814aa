// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "pvlab/error.hpp"

namespace pvlab
{
DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1)
{
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t v)
{
    while (parent_[v] != v)
    {
        parent_[v] = parent_[parent_[v]];
        v = parent_[v];
    }
    return v;
}

bool DisjointSets::unite(std::size_t a, std::size_t b)
{
    a = find(a);
    b = find(b);
    if (a == b)
    {
        return false;
    }
    if (size_[a] < size_[b])
    {
        std::swap(a, b);
    }
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::size_t GraphView::edge_count() const
{
    std::size_t twice = 0;
    for (auto const& adj : adjacency)
    {
        twice += adj.size();
    }
    return twice / 2;
}

std::vector<Edge> GraphView::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < adjacency.size(); ++u)
    {
        for (std::size_t v : adjacency[u])
        {
            if (u < v)
            {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

GraphView GraphView::from_edges(std::size_t n, std::vector<Edge> edges)
{
    for (auto& [u, v] : edges)
    {
        require(u < n && v < n, "edge endpoint out of range");
        if (u > v)
        {
            std::swap(u, v);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    GraphView g;
    g.adjacency.resize(n);
    DisjointSets sets(n);
    for (auto const& [u, v] : edges)
    {
        if (u == v)
        {
            continue;
        }
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
        sets.unite(u, v);
    }
    for (auto& adj : g.adjacency)
    {
        std::sort(adj.begin(), adj.end());
    }
    g.component_size.resize(n);
    for (std::size_t v = 0; v < n; ++v)
    {
        g.component_size[v] = sets.size_of(v);
    }
    return g;
}

std::size_t degree_count(GraphView const& graph, std::size_t j)
{
    return static_cast<std::size_t>(
        std::count_if(graph.adjacency.begin(), graph.adjacency.end(),
                      [j](auto const& adj) { return adj.size() == j; }));
}

std::size_t component_count(GraphView const& graph, std::size_t j)
{
    require(j >= 1, "component size must be >= 1");
    auto const members = static_cast<std::size_t>(
        std::count(graph.component_size.begin(), graph.component_size.end(), j));
    return members / j;
}

void write_edges_csv(std::ostream& os, GraphView const& graph)
{
    os << "u,v\n";
    for (auto const& [u, v] : graph.edges())
    {
        os << u << ',' << v << '\n';
    }
}
}  // namespace pvlab
