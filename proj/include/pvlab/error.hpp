// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pvlab
{
enum class ErrorCode
{
    invalid_argument = 1,
    dimension_mismatch = 2,
    degenerate = 3,
    numeric = 4,
    config = 5,
    io = 6,
    not_found = 7,
};

//! Exception thrown by every pvlab routine; the C API maps code() to a status.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string const& what)
{
    throw Error(code, what);
}

inline void require(bool condition, std::string const& what,
                    ErrorCode code = ErrorCode::invalid_argument)
{
    if (!condition)
    {
        throw Error(code, what);
    }
}
}  // namespace pvlab
