// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace pvlab
{
//! Union-find with path halving and union by size.
class DisjointSets
{
  public:
    explicit DisjointSets(std::size_t n);

    std::size_t find(std::size_t v);
    bool unite(std::size_t a, std::size_t b);
    std::size_t size_of(std::size_t v) { return size_[find(v)]; }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

using Edge = std::pair<std::size_t, std::size_t>;

/*!
 * Undirected simple graph on vertices 0..n-1.
 *
 * Adjacency lists are sorted; component_size[v] is the size of v's
 * connected component.
 */
struct GraphView
{
    std::vector<std::vector<std::size_t>> adjacency;
    std::vector<std::size_t> component_size;

    std::size_t vertex_count() const noexcept { return adjacency.size(); }
    std::size_t degree(std::size_t v) const { return adjacency[v].size(); }
    std::size_t edge_count() const;

    //! Edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    static GraphView from_edges(std::size_t n, std::vector<Edge> edges);
};

//! |{v : deg(v) = j}|
std::size_t degree_count(GraphView const& graph, std::size_t j);

//! Number of connected components with exactly j vertices (j >= 1).
std::size_t component_count(GraphView const& graph, std::size_t j);

//! Debug dump: header "u,v", one edge per row.
void write_edges_csv(std::ostream& os, GraphView const& graph);
}  // namespace pvlab
