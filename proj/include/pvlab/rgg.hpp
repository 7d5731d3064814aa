// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "functional.hpp"
#include "graph.hpp"
#include "point_configuration.hpp"

namespace pvlab
{
//! Random geometric graph in the thermodynamic regime r_s = rho * s^{-1/d}.
struct RggParams
{
    double rho = 1;
    std::size_t dim = 2;
    double intensity = 1;

    double radius() const;
};

//! Edge {u, v} iff 0 < |u - v| <= radius, built with a grid of cell radius.
GraphView build_rgg(PointConfiguration const& config, double radius);
GraphView build_rgg(PointConfiguration const& config, RggParams const& params);

enum class RggStatistic
{
    degree_count,  //!< V_j: vertices of degree j
    component_count  //!< C_j: components with j vertices
};

Functional rgg_functional(RggStatistic stat, std::size_t j,
                          RggParams const& params);
}  // namespace pvlab
