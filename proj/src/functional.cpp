// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/functional.hpp"

#include <sstream>

namespace pvlab
{
Functional Functional::linear_combination(double a, Functional const& f,
                                          double b, Functional const& g)
{
    std::ostringstream label;
    label << a << "*" << f.label() << "+" << b << "*" << g.label();
    return Functional(label.str(), [a, f, b, g](PointConfiguration const& c) {
        return a * f(c) + b * g(c);
    });
}

Functional Functional::scaled(double c) const
{
    std::ostringstream label;
    label << c << "*" << label_;
    Functional self = *this;
    return Functional(label.str(), [c, self](PointConfiguration const& cfg) {
        return c * self(cfg);
    });
}

Functional count_functional()
{
    return Functional("count", [](PointConfiguration const& c) {
        return static_cast<double>(c.size());
    });
}

Functional parity_functional()
{
    return Functional("parity", [](PointConfiguration const& c) {
        return c.size() % 2 == 0 ? 1.0 : -1.0;
    });
}

Functional nonempty_functional()
{
    return Functional("nonempty", [](PointConfiguration const& c) {
        return c.empty() ? 0.0 : 1.0;
    });
}

Functional constant_functional(double value)
{
    return Functional("constant",
                      [value](PointConfiguration const&) { return value; });
}

Functional subwindow_count_functional(Window const& sub)
{
    return Functional("count[" + sub.describe() + "]",
                      [sub](PointConfiguration const& c) {
                          std::size_t n = 0;
                          for (std::size_t i = 0; i < c.size(); ++i)
                          {
                              n += sub.contains(c.point(i)) ? 1 : 0;
                          }
                          return static_cast<double>(n);
                      });
}
}  // namespace pvlab
