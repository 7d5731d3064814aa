// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "functional.hpp"
#include "graph.hpp"
#include "point_configuration.hpp"

namespace pvlab
{
struct KnnParams
{
    std::size_t k = 1;
    std::vector<double> q_exponents;
    std::size_t dim = 2;
    double intensity = 1;
};

/*!
 * The k nearest neighbours of every point, ordered by (distance, index).
 *
 * Uses a uniform grid and ring search: after scanning rings 0..m around the
 * query cell every unvisited point is at least m cell widths away, so the
 * search stops once the k-th best distance is below m * width (less a
 * rounding margin). With n <= k every point gets all others.
 */
std::vector<std::vector<std::size_t>>
nearest_neighbours(PointConfiguration const& config, std::size_t k);

//! Undirected union of the directed k-NN relation.
GraphView build_knn(PointConfiguration const& config, std::size_t k);

//! L_q: sum of |e|^q over undirected edges.
double edge_length_functional(PointConfiguration const& config, std::size_t k,
                              double q);
double edge_length_functional(GraphView const& graph,
                              PointConfiguration const& config, double q);

//! F_q = s^{q/d} L_q.
double scaled_edge_length(double l_q, double q, double s, std::size_t d);
double scaled_edge_length(PointConfiguration const& config, std::size_t k,
                          double q, double s);

//! V_j^k: number of vertices of degree j in the k-NN graph.
std::size_t knn_degree_count(PointConfiguration const& config, std::size_t k,
                             std::size_t j);

/*!
 * Degree histogram 0..k_max; degrees above k_max are clamped into the last
 * bin.
 */
std::vector<std::size_t> knn_degree_histogram(PointConfiguration const& config,
                                              std::size_t k,
                                              std::size_t k_max);

//! F_q (scaled) or L_q as a functional.
Functional knn_length_functional(std::size_t k, double q, double intensity,
                                 bool scaled = true);
Functional knn_degree_functional(std::size_t k, std::size_t j);
}  // namespace pvlab
