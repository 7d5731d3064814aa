// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "point_configuration.hpp"

namespace pvlab
{
// Point CSV: header "x1,...,xd", then one row of d decimal coordinates per
// point, written with 17 significant digits.
void write_points_csv(std::ostream& os, PointConfiguration const& config);
PointConfiguration read_points_csv(std::istream& is);

void save_points_csv(std::string const& path, PointConfiguration const& config);
PointConfiguration load_points_csv(std::string const& path);

//! "%.17g" rendering shared by every CSV writer; "nan" for NaN.
std::string format_double(double value);
}  // namespace pvlab
