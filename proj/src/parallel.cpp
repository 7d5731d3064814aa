// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pvlab
{
namespace
{
std::atomic<std::size_t> g_override{0};

std::size_t env_threads()
{
    char const* env = std::getenv("PVLAB_THREADS");
    if (env == nullptr || *env == '\0')
    {
        return 0;
    }
    try
    {
        long const n = std::stol(env);
        return n > 0 ? static_cast<std::size_t>(n) : 0;
    }
    catch (std::exception const&)
    {
        return 0;
    }
}
}  // namespace

std::size_t thread_count()
{
    if (std::size_t n = g_override.load(); n > 0)
    {
        return n;
    }
    if (std::size_t n = env_threads(); n > 0)
    {
        return n;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t n)
{
    g_override.store(n);
}

void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body)
{
    std::size_t const workers = std::min(thread_count(), n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            body(i);
        }
        return;
    }

    constexpr std::size_t block = 16;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto work = [&] {
        while (true)
        {
            std::size_t const begin = next.fetch_add(block);
            if (begin >= n)
            {
                return;
            }
            std::size_t const end = std::min(n, begin + block);
            for (std::size_t i = begin; i < end; ++i)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index)
                    {
                        error_index = i;
                        error = std::current_exception();
                    }
                    return;
                }
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t t = 1; t < workers; ++t)
        {
            pool.emplace_back(work);
        }
        work();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
}
}  // namespace pvlab
