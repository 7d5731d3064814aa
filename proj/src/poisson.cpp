// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/poisson.hpp"

#include <cmath>
#include <random>

#include "pvlab/error.hpp"

namespace pvlab
{
PointConfiguration sample_poisson(Window const& window, double intensity,
                                  CounterRng& rng)
{
    require(std::isfinite(intensity) && intensity > 0,
            "sample_poisson: intensity must be positive and finite");
    double const mean = intensity * window.volume();
    require(std::isfinite(mean), "sample_poisson: mean count overflows");

    std::poisson_distribution<long long> count_dist(mean);
    auto const n = static_cast<std::size_t>(count_dist(rng));

    PointConfiguration config(window.dim());
    config.reserve(n);
    Point x(window.dim());
    for (std::size_t i = 0; i < n; ++i)
    {
        window.sample_uniform(rng, x);
        config.push_back(x);
    }
    return config;
}

PointConfiguration sample_poisson(Window const& window, double intensity,
                                  SeedSpec const& seed)
{
    CounterRng rng(seed);
    return sample_poisson(window, intensity, rng);
}
}  // namespace pvlab
