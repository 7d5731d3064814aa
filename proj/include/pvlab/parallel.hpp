// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace pvlab
{
//! Worker count: explicit override, else PVLAB_THREADS, else hardware.
std::size_t thread_count();

//! Process-wide override; 0 restores the environment/hardware default.
void set_thread_count(std::size_t n);

/*!
 * Run body(i) for i in [0, n) on up to thread_count() workers.
 *
 * Bodies must write only to slot i of caller-owned storage so the result is
 * independent of scheduling. If any body throws, the exception from the
 * lowest failing index is rethrown after all workers join.
 */
void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body);
}  // namespace pvlab
