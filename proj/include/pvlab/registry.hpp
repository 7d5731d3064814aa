// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "functional.hpp"

namespace pvlab
{
struct ParamInfo
{
    std::string name;
    std::string type;  //!< "integer", "number", "boolean", "object"
    nlohmann::json default_value;
    std::string description;
};

struct FunctionalInfo
{
    std::string name;
    std::string family;  //!< e.g. "random-geometric-graph"
    std::string description;
    std::vector<ParamInfo> params;
};

/*!
 * Built-in catalogue of functionals. make() turns (name, params, s) into a
 * model: the functional plus its sampling window and intensity. For the
 * shot-noise entry s is the observation radius and the intensity is fixed.
 */
class FunctionalRegistry
{
  public:
    static FunctionalRegistry const& builtin();

    std::vector<FunctionalInfo> const& catalogue() const { return infos_; }
    FunctionalInfo const& info(std::string const& name) const;
    bool contains(std::string const& name) const;

    //! Throws ErrorCode::not_found naming the closest entry.
    PoissonModel make(std::string const& name, nlohmann::json const& params,
                      double s) const;

    std::string nearest(std::string const& name) const;

  private:
    FunctionalRegistry();
    std::vector<FunctionalInfo> infos_;
};

//! Human-readable catalogue, one block per functional.
std::string format_catalogue(FunctionalRegistry const& registry);

//! Edit distance, used for "did you mean" diagnostics.
std::size_t edit_distance(std::string const& a, std::string const& b);
}  // namespace pvlab
