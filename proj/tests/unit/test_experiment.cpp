// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pvlab/error.hpp"
#include "pvlab/experiment.hpp"
#include "pvlab/registry.hpp"

using namespace pvlab;
using nlohmann::json;

namespace
{
std::string config_error_message(std::string const& text)
{
    try
    {
        (void)parse_experiment_config(text);
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::config);
        return e.what();
    }
    return {};
}

json base_config()
{
    return {{"experiment", "sandwich"},
            {"functional", {{"name", "count"}}},
            {"s_grid", {50}},
            {"n_reps", 2000},
            {"seed", 3}};
}

bool contains(std::string const& s, std::string const& part)
{
    return s.find(part) != std::string::npos;
}

std::filesystem::path temp_file(std::string const& name, std::string const& text)
{
    auto const p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}
}  // namespace

TEST_CASE("config parse errors carry a position")
{
    std::string const msg = config_error_message("{\n  \"experiment\": \"sandwich\",\n  oops\n}");
    CHECK(contains(msg, "line 3"));
}

TEST_CASE("config field diagnostics")
{
    json c = base_config();
    c["s_grid"] = {100, 50};
    CHECK(contains(config_error_message(c.dump()), "s_grid"));

    c = base_config();
    c["n_reps"] = 1;
    CHECK(contains(config_error_message(c.dump()), "n_reps"));

    c = base_config();
    c["colour"] = "blue";
    CHECK(contains(config_error_message(c.dump()), "colour"));

    c = base_config();
    c["experiment"] = "sandwhich";
    CHECK(contains(config_error_message(c.dump()), "experiment"));

    c = base_config();
    c["functional"]["params"] = {{"dim", "two"}};
    CHECK(contains(config_error_message(c.dump()), "dim"));

    c = base_config();
    c["assertions"] = {{"slope", 1}};
    CHECK(contains(config_error_message(c.dump()), "slope"));

    c = base_config();
    c["experiment"] = "polytope_scaling";
    c["functional"] = {{"name", "polytope_lp_area"}, {"params", {{"dim", 5}}}};
    CHECK_FALSE(config_error_message(c.dump()).empty());
}

TEST_CASE("unknown functional names the nearest entry")
{
    json c = base_config();
    c["functional"]["name"] = "rgg_degre_count";
    std::string const msg = config_error_message(c.dump());
    CHECK(contains(msg, "rgg_degree_count"));
    CHECK(FunctionalRegistry::builtin().nearest("parityy") == "parity");
    CHECK(edit_distance("kitten", "sitting") == 3);
}

TEST_CASE("catalogue lists every family")
{
    auto const& reg = FunctionalRegistry::builtin();
    CHECK(reg.catalogue().size() >= 9);
    std::string const text = format_catalogue(reg);
    for (char const* family : {"random-geometric-graph", "knn-graph", "random-polytope", "shot-noise"})
    {
        CHECK(contains(text, family));
    }
    CHECK_THROWS_AS(reg.make("nope", json::object(), 1), Error);
    CHECK_THROWS_AS(reg.make("count", {{"bogus", 1}}, 1), Error);
    CHECK_THROWS_AS(reg.make("shotnoise_excursion",
                             {{"kernel", {{"kind", "power_law"}, {"d", 2}, {"delta", 5}, {"gamma", 5}}}}, 2),
                    Error);
}

TEST_CASE("sandwich on the count functional passes with equal bounds")
{
    json c = base_config();
    c["assertions"] = {{"expected_variance", 50}, {"relative_tolerance", 0.1}};
    ExperimentResult const r = run_experiment(parse_experiment_config(c.dump()));
    CHECK(r.pass);
    auto const& row = r.summary["rows"][0];
    CHECK(row["lower_bound"].get<double>() == doctest::Approx(50).epsilon(1e-12));
    CHECK(row["upper_bound"].get<double>() == doctest::Approx(50).epsilon(1e-12));
    CHECK(contains(r.csv, "s,variance,var_ci_lo,var_ci_hi,lower_bound,upper_bound,alpha_hat,n_reps,seed\n"));
    CHECK(validate_json(r.summary, summary_schema()).empty());
}

TEST_CASE("scaling harness recovers an injected linear variance")
{
    json c = {{"experiment", "scaling"},
              {"functional", {{"name", "count"}, {"params", {{"weight", std::sqrt(7.0)}}}}},
              {"s_grid", {50, 100, 200, 400}},
              {"n_reps", 4000},
              {"seed", 11},
              {"assertions", {{"slope", 1.0}, {"slope_tolerance", 0.1}, {"positivity_exponent", 1.0}}}};
    ExperimentResult const r = run_experiment(parse_experiment_config(c.dump()));
    CHECK(r.pass);
    CHECK(r.summary["slope"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
    double const v = r.summary["rows"][0]["variance"]["estimate"].get<double>();
    CHECK(v == doctest::Approx(350).epsilon(0.1));
}

TEST_CASE("duplicated covariance functionals are singular and fail")
{
    json c = {{"experiment", "covariance"},
              {"functionals", {{{"name", "count"}}, {{"name", "count"}}}},
              {"s_grid", {30}},
              {"n_reps", 1000},
              {"seed", 5}};
    auto const cfg = temp_file("pvlab_dup_cov.json", c.dump());
    std::vector<std::string> lines;
    int const code = run_experiment_file(cfg.string(), std::nullopt,
                                         [&](std::string const& l) { lines.push_back(l); });
    CHECK(code == 1);
    bool named = false;
    for (auto const& l : lines)
    {
        named = named || contains(l, "positive_definite");
    }
    CHECK(named);
}

TEST_CASE("missing or broken config files exit with code 2")
{
    CHECK(run_experiment_file("/nonexistent/pvlab.json", std::nullopt) == 2);
    auto const bad = temp_file("pvlab_bad.json", "{\"experiment\": 3}");
    CHECK(run_experiment_file(bad.string(), std::nullopt) == 2);
}

TEST_CASE("experiment outputs are written and reproducible")
{
    auto const dir = std::filesystem::temp_directory_path();
    json c = base_config();
    c["functional"] = {{"name", "rgg_degree_count"}, {"params", {{"j", 1}}}};
    c["s_grid"] = {20, 40};
    c["n_reps"] = 300;
    c["output"] = {{"csv", (dir / "pvlab_repro.csv").string()},
                   {"json", (dir / "pvlab_repro.json").string()}};
    auto const cfg = temp_file("pvlab_repro_cfg.json", c.dump());
    auto slurp = [](std::filesystem::path const& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    int const first = run_experiment_file(cfg.string(), std::nullopt);
    std::string const csv1 = slurp(dir / "pvlab_repro.csv");
    int const second = run_experiment_file(cfg.string(), std::nullopt);
    CHECK(first == second);
    CHECK(first != 2);
    CHECK(csv1 == slurp(dir / "pvlab_repro.csv"));
    CHECK(csv1.size() > 80);
    json const summary = json::parse(slurp(dir / "pvlab_repro.json"));
    CHECK(validate_json(summary, summary_schema()).empty());

    run_experiment_file(cfg.string(), 99);
    CHECK(csv1 != slurp(dir / "pvlab_repro.csv"));
}

TEST_CASE("geometric sweeps run small case counts")
{
    json lemma = {{"experiment", "lemma43-sweep"},
                  {"s_grid", json::array()},
                  {"n_reps", 2},
                  {"seed", 1},
                  {"options", {{"cases", 50}, {"dims", {2, 3}}}}};
    ExperimentResult const lr = run_experiment(parse_experiment_config(lemma.dump()));
    CHECK(lr.pass);
    CHECK(contains(lr.csv, "dim,case,rho_base,apex_height,min_slack_first,min_slack_second\n"));

    json delta = {{"experiment", "delta-consistency"},
                  {"s_grid", json::array()},
                  {"n_reps", 2},
                  {"seed", 1},
                  {"options", {{"cases", 50}}}};
    ExperimentResult const dr = run_experiment(parse_experiment_config(delta.dump()));
    CHECK(dr.pass);
    CHECK(contains(dr.csv, "dim,case,delta_error,a0_error\n"));
}

TEST_CASE("schema validator")
{
    json const schema = {{"type", "object"},
                         {"required", {"a"}},
                         {"properties", {{"a", {{"type", "integer"}}}, {"b", {{"enum", {"x", "y"}}}}}}};
    CHECK(validate_json({{"a", 1}}, schema).empty());
    CHECK_FALSE(validate_json({{"b", "x"}}, schema).empty());
    CHECK_FALSE(validate_json({{"a", 1.5}}, schema).empty());
    CHECK_FALSE(validate_json({{"a", 1}, {"b", "z"}}, schema).empty());
}
