// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace pvlab
{
//! Identifies one independent random stream inside a run.
struct StreamId
{
    std::uint64_t experiment = 0;
    std::uint64_t replication = 0;

    friend bool operator==(StreamId const&, StreamId const&) = default;
};

//! Full seeding contract: a master seed plus the stream coordinates.
struct SeedSpec
{
    std::uint64_t master_seed = 0;
    StreamId stream{};

    SeedSpec with_experiment(std::uint64_t experiment) const
    {
        return {master_seed, {experiment, stream.replication}};
    }
    SeedSpec with_replication(std::uint64_t replication) const
    {
        return {master_seed, {stream.experiment, replication}};
    }

    friend bool operator==(SeedSpec const&, SeedSpec const&) = default;
};

//! SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * Counter-based generator keyed by a SeedSpec.
 *
 * Output i is mix64(key + (i + 1) * golden), so a stream is a pure function
 * of (master_seed, experiment, replication, i) and carries no shared state.
 * Satisfies UniformRandomBitGenerator, so it plugs into <random>.
 */
class CounterRng
{
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(SeedSpec const& seed) noexcept
        : key_(derive_key(seed))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        ++counter_;
        return mix64(key_ + counter_ * golden);
    }

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept
    {
        return lo + (hi - lo) * uniform();
    }

    std::uint64_t counter() const noexcept { return counter_; }

    static constexpr std::uint64_t derive_key(SeedSpec const& seed) noexcept
    {
        std::uint64_t k = mix64(seed.master_seed ^ 0x6a09e667f3bcc909ULL);
        k = mix64(k ^ mix64(seed.stream.experiment + 0x3c6ef372fe94f82bULL));
        k = mix64(k ^ mix64(seed.stream.replication + 0xa54ff53a5f1d36f1ULL));
        return k;
    }

  private:
    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};
}  // namespace pvlab
