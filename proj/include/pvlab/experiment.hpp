// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pvlab
{
enum class ExperimentKind
{
    sandwich,
    scaling,
    covariance,
    polytope_scaling,
    shotnoise_scaling,
    lemma43_sweep,
    delta_consistency
};

std::string to_string(ExperimentKind kind);

struct FunctionalSpec
{
    std::string name;
    nlohmann::json params = nlohmann::json::object();
};

/*!
 * One JSON document per experiment:
 *
 *   {"experiment": "sandwich", "functional": {"name": ..., "params": {...}},
 *    "s_grid": [...], "n_reps": 10000, "seed": 7,
 *    "output": {"csv": "...", "json": "..."}, "assertions": {...},
 *    "options": {...}}
 *
 * covariance takes "functionals": [...] instead of "functional".
 */
struct ExperimentConfig
{
    ExperimentKind kind = ExperimentKind::sandwich;
    std::vector<FunctionalSpec> functionals;
    std::vector<double> s_grid;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;
    std::string csv_path;
    std::string json_path;
    nlohmann::json assertions = nlohmann::json::object();
    nlohmann::json options = nlohmann::json::object();
};

//! Throws ErrorCode::config with line or field diagnostics.
ExperimentConfig parse_experiment_config(std::string const& text);
ExperimentConfig load_experiment_config(std::string const& path);

struct RuleResult
{
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult
{
    bool pass = false;
    std::vector<RuleResult> rules;
    std::string csv;
    nlohmann::json summary;
};

using LogSink = std::function<void(std::string const&)>;

//! Runs the experiment in memory; files are not written.
ExperimentResult run_experiment(ExperimentConfig const& config,
                                LogSink const& log = {});

/*!
 * Load, run, and write outputs. Returns the process exit code:
 * 0 all assertions pass, 1 an assertion failed, 2 usage/config error.
 */
int run_experiment_file(std::string const& path,
                        std::optional<std::uint64_t> seed_override,
                        LogSink const& log = {});

//! Runs a fixed config twice and compares the CSVs byte for byte.
int run_selftest(LogSink const& log = {});

//! Schema every JSON summary is validated against before it is written.
nlohmann::json const& summary_schema();

/*!
 * Validator for the JSON Schema subset used by summary_schema(): type,
 * required, properties, items, enum. Returns an empty string when valid.
 */
std::string validate_json(nlohmann::json const& value,
                          nlohmann::json const& schema,
                          std::string const& path = "$");
}  // namespace pvlab
