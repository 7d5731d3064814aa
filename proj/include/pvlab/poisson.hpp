// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "point_configuration.hpp"
#include "random.hpp"
#include "window.hpp"

namespace pvlab
{
/*!
 * Homogeneous Poisson process on a window.
 *
 * The count is Poisson(intensity * volume) and points are i.i.d. uniform in
 * the window. The result is a pure function of the seed.
 */
PointConfiguration sample_poisson(Window const& window, double intensity,
                                  SeedSpec const& seed);

//! Same, drawing from an existing stream (used inside estimators).
PointConfiguration sample_poisson(Window const& window, double intensity,
                                  CounterRng& rng);
}  // namespace pvlab
