// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/malliavin.hpp"
#include "pvlab/parallel.hpp"
#include "pvlab/point_io.hpp"
#include "pvlab/polytope.hpp"
#include "pvlab/registry.hpp"

namespace pvlab
{
namespace
{
using nlohmann::json;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct KindName
{
    ExperimentKind kind;
    char const* name;
};

constexpr KindName kind_names[] = {
    {ExperimentKind::sandwich, "sandwich"},
    {ExperimentKind::scaling, "scaling"},
    {ExperimentKind::covariance, "covariance"},
    {ExperimentKind::polytope_scaling, "polytope-scaling"},
    {ExperimentKind::shotnoise_scaling, "shotnoise-scaling"},
    {ExperimentKind::lemma43_sweep, "lemma43-sweep"},
    {ExperimentKind::delta_consistency, "delta-consistency"},
};

[[noreturn]] void config_error(std::string const& field, std::string const& what)
{
    fail(ErrorCode::config, "field '" + field + "': " + what);
}

bool is_geometric(ExperimentKind k)
{
    return k == ExperimentKind::lemma43_sweep
           || k == ExperimentKind::delta_consistency;
}

//! Allowed keys with defaults for "assertions" and "options".
json assertion_defaults(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::sandwich:
        return {{"sandwich", true},
                {"sigma_slack", 3.0},
                {"expected_variance", nullptr},
                {"relative_tolerance", 0.02},
                {"first_chaos_ratio_below", nullptr},
                {"lower_bound_ratio_above", nullptr}};
    case ExperimentKind::scaling:
    case ExperimentKind::polytope_scaling:
    case ExperimentKind::shotnoise_scaling:
        return {{"slope", nullptr},
                {"slope_tolerance", 0.25},
                {"positivity_exponent", nullptr}};
    case ExperimentKind::covariance:
        return {{"positive_definite", true}};
    case ExperimentKind::lemma43_sweep:
        return {{"min_slack", -1e-9}};
    case ExperimentKind::delta_consistency:
        return {{"max_error", 1e-10}, {"a0_tolerance", 1e-12}};
    }
    return json::object();
}

json option_defaults(ExperimentKind k)
{
    json o = {{"bootstrap_resamples", 1000}, {"ci_level", 0.95}};
    switch (k)
    {
    case ExperimentKind::sandwich:
        o["first_chaos_inner"] = 0;
        o["first_chaos_reps"] = nullptr;
        break;
    case ExperimentKind::scaling:
    case ExperimentKind::polytope_scaling:
    case ExperimentKind::shotnoise_scaling:
        o["bounds"] = false;
        break;
    case ExperimentKind::covariance:
        o["scale_power"] = -0.5;
        break;
    case ExperimentKind::lemma43_sweep:
        o["dims"] = json::array({2});
        o["cases"] = 1000;
        o["p_values"] = json::array({0.0, 0.25, 0.5, 0.75, 1.0});
        break;
    case ExperimentKind::delta_consistency:
        o["dims"] = json::array({2, 3});
        o["cases"] = 1000;
        o["points"] = 30;
        o["p_values"] = json::array({0.0, 0.25, 0.5, 0.75, 1.0});
        break;
    }
    return o;
}

json merge_checked(json const& given, json defaults, std::string const& field)
{
    if (!given.is_object())
    {
        config_error(field, "must be an object");
    }
    for (auto const& [key, value] : given.items())
    {
        if (!defaults.contains(key))
        {
            std::string allowed;
            for (auto const& [k, v] : defaults.items())
            {
                allowed += (allowed.empty() ? "" : ", ") + k;
            }
            config_error(field + "." + key,
                         "unknown key for this experiment (allowed: " + allowed
                             + ")");
        }
        json const& d = defaults[key];
        bool const ok = d.is_null() || (d.is_boolean() && value.is_boolean())
                        || (d.is_number() && value.is_number())
                        || (d.is_array() && value.is_array());
        if (!ok)
        {
            config_error(field + "." + key, "has the wrong type");
        }
        defaults[key] = value;
    }
    return defaults;
}

std::pair<std::size_t, std::size_t> line_column(std::string const& text,
                                                std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()) && i + 1 < byte; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return {line, col};
}

FunctionalSpec parse_functional(json const& j, std::string const& field)
{
    if (!j.is_object())
    {
        config_error(field, "must be an object {name, params}");
    }
    for (auto const& [key, value] : j.items())
    {
        if (key != "name" && key != "params")
        {
            config_error(field + "." + key, "unknown key (allowed: name, params)");
        }
    }
    if (!j.contains("name") || !j.at("name").is_string())
    {
        config_error(field + ".name", "must be a string");
    }
    FunctionalSpec spec;
    spec.name = j.at("name").get<std::string>();
    if (j.contains("params"))
    {
        if (!j.at("params").is_object())
        {
            config_error(field + ".params", "must be an object");
        }
        spec.params = j.at("params");
    }
    auto const& reg = FunctionalRegistry::builtin();
    if (!reg.contains(spec.name))
    {
        fail(ErrorCode::config, "field '" + field + ".name': unknown functional '"
                                    + spec.name + "' (did you mean '"
                                    + reg.nearest(spec.name) + "'?)");
    }
    return spec;
}

double get_number(json const& o, char const* key)
{
    return o.at(key).get<double>();
}

std::size_t get_count(json const& o, char const* key, std::string const& field)
{
    json const& v = o.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
    {
        config_error(field + "." + key, "must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> get_numbers(json const& o, char const* key,
                                std::string const& field)
{
    std::vector<double> out;
    for (auto const& v : o.at(key))
    {
        if (!v.is_number())
        {
            config_error(field + "." + key, "must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

EstimatorOptions estimator_options(ExperimentConfig const& c)
{
    EstimatorOptions o;
    o.ci_level = get_number(c.options, "ci_level");
    o.bootstrap_resamples = get_count(c.options, "bootstrap_resamples", "options");
    require(o.ci_level > 0 && o.ci_level < 1, "ci_level must lie in (0, 1)",
            ErrorCode::config);
    require(o.bootstrap_resamples >= 2, "bootstrap_resamples must be >= 2",
            ErrorCode::config);
    return o;
}

std::string fmt(double v)
{
    return format_double(v);
}

std::string grid_tag(char const* name, double s)
{
    return std::string(name) + "[s=" + fmt(s) + "]";
}

//! One s-grid row in the standard CSV.
struct Row
{
    double s = 0;
    EstimateWithCI variance;
    double lower = nan;
    double lower_se = nan;
    double upper = nan;
    double upper_se = nan;
    double alpha = nan;
    json extra = json::object();
};

std::string standard_csv(std::vector<Row> const& rows, std::size_t n_reps,
                         std::uint64_t seed)
{
    std::ostringstream os;
    os << "s,variance,var_ci_lo,var_ci_hi,lower_bound,upper_bound,alpha_hat,"
          "n_reps,seed\n";
    for (auto const& r : rows)
    {
        os << fmt(r.s) << ',' << fmt(r.variance.estimate) << ','
           << fmt(r.variance.ci_lo) << ',' << fmt(r.variance.ci_hi) << ','
           << fmt(r.lower) << ',' << fmt(r.upper) << ',' << fmt(r.alpha) << ','
           << n_reps << ',' << seed << '\n';
    }
    return os.str();
}

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json row_json(Row const& r)
{
    json j = {{"s", r.s},
              {"variance", to_json(r.variance)},
              {"lower_bound", finite_or_null(r.lower)},
              {"lower_bound_se", finite_or_null(r.lower_se)},
              {"upper_bound", finite_or_null(r.upper)},
              {"upper_bound_se", finite_or_null(r.upper_se)},
              {"alpha_hat", finite_or_null(r.alpha)}};
    for (auto const& [k, v] : r.extra.items())
    {
        j[k] = v;
    }
    return j;
}

class Runner
{
  public:
    Runner(ExperimentConfig const& c, LogSink const& log)
        : c_(c), log_(log), opts_(estimator_options(c))
    {
    }

    ExperimentResult run()
    {
        summary_ = {{"experiment", to_string(c_.kind)},
                    {"seed", c_.seed},
                    {"n_reps", c_.n_reps},
                    {"s_grid", c_.s_grid},
                    {"functionals", json::array()},
                    {"rows", json::array()},
                    {"slope", nullptr},
                    {"slope_se", nullptr},
                    {"intercept", nullptr}};
        for (auto const& f : c_.functionals)
        {
            summary_["functionals"].push_back(
                {{"name", f.name}, {"params", f.params}});
        }
        switch (c_.kind)
        {
        case ExperimentKind::sandwich:
            sandwich();
            break;
        case ExperimentKind::scaling:
        case ExperimentKind::polytope_scaling:
        case ExperimentKind::shotnoise_scaling:
            scaling();
            break;
        case ExperimentKind::covariance:
            covariance();
            break;
        case ExperimentKind::lemma43_sweep:
            lemma43_sweep();
            break;
        case ExperimentKind::delta_consistency:
            delta_consistency();
            break;
        }
        result_.pass = std::all_of(result_.rules.begin(), result_.rules.end(),
                                   [](RuleResult const& r) { return r.pass; });
        json rules = json::array();
        for (auto const& r : result_.rules)
        {
            rules.push_back(
                {{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        }
        summary_["rules"] = rules;
        summary_["pass"] = result_.pass;
        std::string const problem = validate_json(summary_, summary_schema());
        if (!problem.empty())
        {
            fail(ErrorCode::numeric, "summary does not match schema: " + problem);
        }
        result_.summary = summary_;
        return result_;
    }

  private:
    SeedSpec seed(std::size_t grid_index, std::size_t estimator) const
    {
        return SeedSpec{c_.seed, {grid_index * 8 + estimator, 0}};
    }

    void log(std::string const& line) const
    {
        if (log_)
        {
            log_(line);
        }
    }

    void rule(std::string name, bool pass, std::string detail)
    {
        log(std::string(pass ? "PASS " : "FAIL ") + name + ": " + detail);
        result_.rules.push_back({std::move(name), pass, std::move(detail)});
    }

    PoissonModel model(std::size_t i, double s) const
    {
        return FunctionalRegistry::builtin().make(c_.functionals[i].name,
                                                  c_.functionals[i].params, s);
    }

    void finish_rows(std::vector<Row> const& rows)
    {
        for (auto const& r : rows)
        {
            summary_["rows"].push_back(row_json(r));
        }
        result_.csv = standard_csv(rows, c_.n_reps, c_.seed);
    }

    void fill_bounds(Row& row, PoissonModel const& m, std::size_t g)
    {
        DirichletEstimate const de
            = estimate_dirichlet(m.functional, m.window, m.intensity,
                                 c_.n_reps, seed(g, 1), opts_);
        row.lower = theorem1_lower_bound(de);
        row.lower_se = theorem1_lower_bound_std_error(de);
        row.upper = poincare_upper_bound(de);
        row.upper_se = de.first_order.std_error;
        row.alpha = de.alpha_hat;
        row.extra["dirichlet_second"] = to_json(de.second_order);
    }

    void sandwich()
    {
        json const& a = c_.assertions;
        double const slack = get_number(a, "sigma_slack");
        std::vector<double> expected;
        if (a["expected_variance"].is_number())
        {
            expected.assign(c_.s_grid.size(), a["expected_variance"].get<double>());
        }
        else if (a["expected_variance"].is_array())
        {
            expected = get_numbers(a, "expected_variance", "assertions");
            if (expected.size() != c_.s_grid.size())
            {
                config_error("assertions.expected_variance",
                             "needs one value per s_grid entry");
            }
        }
        std::size_t const fc_inner = get_count(c_.options, "first_chaos_inner",
                                               "options");
        std::size_t const fc_reps = c_.options["first_chaos_reps"].is_null()
                                        ? c_.n_reps
                                        : get_count(c_.options,
                                                    "first_chaos_reps",
                                                    "options");

        std::vector<Row> rows;
        for (std::size_t g = 0; g < c_.s_grid.size(); ++g)
        {
            double const s = c_.s_grid[g];
            PoissonModel const m = model(0, s);
            log("sandwich " + m.functional.label() + " s=" + fmt(s));
            Row row;
            row.s = s;
            row.variance = estimate_variance(m.functional, m.window,
                                             m.intensity, c_.n_reps,
                                             seed(g, 0), opts_);
            fill_bounds(row, m, g);
            double const v = row.variance.estimate;
            double const vse = row.variance.std_error;

            if (a["sandwich"].get<bool>())
            {
                double const tol_l = slack * std::hypot(row.lower_se, vse);
                double const tol_u = slack * std::hypot(row.upper_se, vse);
                rule(grid_tag("lower_le_variance", s), row.lower - v <= tol_l,
                     "lower " + fmt(row.lower) + " variance " + fmt(v)
                         + " slack " + fmt(tol_l));
                rule(grid_tag("variance_le_upper", s), v - row.upper <= tol_u,
                     "variance " + fmt(v) + " upper " + fmt(row.upper)
                         + " slack " + fmt(tol_u));
            }
            if (!expected.empty())
            {
                double const e = expected[g];
                double const tol = get_number(a, "relative_tolerance");
                for (auto const& [name, value] :
                     {std::pair<char const*, double>{"variance", v},
                      {"lower_bound", row.lower},
                      {"upper_bound", row.upper}})
                {
                    double const rel = std::abs(value - e) / std::abs(e);
                    rule(grid_tag((std::string("expected_") + name).c_str(), s),
                         rel <= tol,
                         std::string(name) + " " + fmt(value) + " expected "
                             + fmt(e) + " relative error " + fmt(rel));
                }
            }
            if (fc_inner > 0)
            {
                EstimateWithCI const fc = first_chaos_bound(
                    m.functional, m.window, m.intensity, fc_reps, seed(g, 2),
                    fc_inner, opts_);
                row.extra["first_chaos"] = to_json(fc);
                if (a["first_chaos_ratio_below"].is_number())
                {
                    double const r = get_number(a, "first_chaos_ratio_below");
                    rule(grid_tag("first_chaos_small", s), fc.ci_hi < r * v,
                         "first chaos " + fmt(fc.estimate) + " (ci_hi "
                             + fmt(fc.ci_hi) + ") vs " + fmt(r)
                             + " * variance " + fmt(v));
                }
            }
            else if (a["first_chaos_ratio_below"].is_number())
            {
                config_error("assertions.first_chaos_ratio_below",
                             "needs options.first_chaos_inner > 0");
            }
            if (a["lower_bound_ratio_above"].is_number())
            {
                double const r = get_number(a, "lower_bound_ratio_above");
                rule(grid_tag("lower_bound_large", s), row.lower > r * v,
                     "lower " + fmt(row.lower) + " vs " + fmt(r)
                         + " * variance " + fmt(v));
            }
            rows.push_back(std::move(row));
        }
        finish_rows(rows);
    }

    void scaling()
    {
        bool const bounds = c_.options["bounds"].get<bool>();
        std::vector<Row> rows;
        std::vector<ScalePoint> pts;
        for (std::size_t g = 0; g < c_.s_grid.size(); ++g)
        {
            double const s = c_.s_grid[g];
            PoissonModel const m = model(0, s);
            log(to_string(c_.kind) + " " + m.functional.label() + " s=" + fmt(s));
            Row row;
            row.s = s;
            row.variance = estimate_variance(m.functional, m.window,
                                             m.intensity, c_.n_reps,
                                             seed(g, 0), opts_);
            if (bounds)
            {
                fill_bounds(row, m, g);
            }
            pts.push_back({s, row.variance.estimate});
            rows.push_back(std::move(row));
        }

        json const& a = c_.assertions;
        bool const fit_ok = pts.size() >= 3
                            && std::all_of(pts.begin(), pts.end(),
                                           [](ScalePoint const& p) {
                                               return p.value > 0;
                                           });
        if (fit_ok)
        {
            ScalingFit const fit = scaling_regression(pts);
            summary_["slope"] = fit.slope;
            summary_["slope_se"] = fit.slope_se;
            summary_["intercept"] = fit.intercept;
            if (a["slope"].is_number())
            {
                double const target = get_number(a, "slope");
                double const tol = get_number(a, "slope_tolerance");
                rule("slope", std::abs(fit.slope - target) <= tol,
                     "slope " + fmt(fit.slope) + " (se " + fmt(fit.slope_se)
                         + ") target " + fmt(target) + " +- " + fmt(tol));
            }
        }
        else if (a["slope"].is_number())
        {
            rule("slope", false,
                 "needs at least three grid points with positive variance");
        }
        if (a["positivity_exponent"].is_number())
        {
            double const e = get_number(a, "positivity_exponent");
            double worst = std::numeric_limits<double>::infinity();
            for (auto const& r : rows)
            {
                worst = std::min(worst, r.variance.ci_lo / std::pow(r.s, e));
            }
            rule("positivity", worst > 0,
                 "min over grid of variance CI lower bound / s^" + fmt(e)
                     + " = " + fmt(worst));
        }
        finish_rows(rows);
    }

    void covariance()
    {
        double const power = get_number(c_.options, "scale_power");
        std::vector<Row> rows;
        for (std::size_t g = 0; g < c_.s_grid.size(); ++g)
        {
            double const s = c_.s_grid[g];
            std::vector<Functional> fs;
            std::optional<PoissonModel> first;
            for (std::size_t i = 0; i < c_.functionals.size(); ++i)
            {
                PoissonModel m = model(i, s);
                if (first
                    && (m.window.describe() != first->window.describe()
                        || m.intensity != first->intensity))
                {
                    config_error("functionals",
                                 "all functionals must share one sampling "
                                 "window and intensity");
                }
                fs.push_back(power == 0 ? m.functional
                                        : m.functional.scaled(std::pow(s, power)));
                if (!first)
                {
                    first = std::move(m);
                }
            }
            log("covariance of " + std::to_string(fs.size())
                + " functionals s=" + fmt(s));
            CovarianceEstimate const ce
                = estimate_covariance(fs, first->window, first->intensity,
                                      c_.n_reps, seed(g, 0), opts_);
            Row row;
            row.s = s;
            row.variance = ce.min_eigenvalue;
            json matrix = json::array();
            for (Eigen::Index r = 0; r < ce.matrix.rows(); ++r)
            {
                json line = json::array();
                for (Eigen::Index k = 0; k < ce.matrix.cols(); ++k)
                {
                    line.push_back(ce.matrix(r, k));
                }
                matrix.push_back(line);
            }
            row.extra["covariance"] = matrix;
            row.extra["positive_definite"] = ce.positive_definite;
            if (c_.assertions["positive_definite"].get<bool>())
            {
                rule(grid_tag("positive_definite", s), ce.positive_definite,
                     "min eigenvalue " + fmt(ce.min_eigenvalue.estimate) + " CI ["
                         + fmt(ce.min_eigenvalue.ci_lo) + ", "
                         + fmt(ce.min_eigenvalue.ci_hi) + "]");
            }
            rows.push_back(std::move(row));
        }
        finish_rows(rows);
    }

    std::vector<std::size_t> dims() const
    {
        std::vector<std::size_t> out;
        for (auto const& v : c_.options["dims"])
        {
            if (!v.is_number_integer()
                || (v.get<long long>() != 2 && v.get<long long>() != 3))
            {
                config_error("options.dims", "entries must be 2 or 3");
            }
            out.push_back(v.get<std::size_t>());
        }
        return out;
    }

    std::vector<double> p_values() const
    {
        std::vector<double> p = get_numbers(c_.options, "p_values", "options");
        for (double v : p)
        {
            if (!(v >= 0 && v <= 1))
            {
                config_error("options.p_values", "entries must lie in [0, 1]");
            }
        }
        std::sort(p.begin(), p.end());
        return p;
    }

    void lemma43_sweep()
    {
        std::size_t const cases = get_count(c_.options, "cases", "options");
        std::vector<double> const ps = p_values();
        double const min_slack = get_number(c_.assertions, "min_slack");
        std::ostringstream csv;
        csv << "dim,case,rho_base,apex_height,min_slack_first,"
               "min_slack_second\n";
        for (std::size_t d : dims())
        {
            CounterRng rng(SeedSpec{c_.seed, {1000 + d, 0}});
            double worst1 = std::numeric_limits<double>::infinity();
            double worst2 = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < cases; ++k)
            {
                SimplexUpdate const u = admissible_simplex(d, rng);
                double s1 = std::numeric_limits<double>::infinity();
                double s2 = std::numeric_limits<double>::infinity();
                for (double p : ps)
                {
                    for (std::size_t i = 0; i < ps.size(); ++i)
                    {
                        for (std::size_t j = i + 1; j < ps.size(); ++j)
                        {
                            Lemma43Report const r
                                = check_lemma43(u, p, ps[i], ps[j]);
                            s1 = std::min(s1, r.slack_first);
                            s2 = std::min(s2, r.slack_second);
                        }
                    }
                }
                worst1 = std::min(worst1, s1);
                worst2 = std::min(worst2, s2);
                csv << d << ',' << k << ',' << fmt(u.rho[d]) << ','
                    << fmt(u.apex_height) << ',' << fmt(s1) << ',' << fmt(s2)
                    << '\n';
            }
            std::string const tag = "[d=" + std::to_string(d) + "]";
            rule("slack_first" + tag, worst1 >= min_slack,
                 "min slack " + fmt(worst1) + " over " + std::to_string(cases)
                     + " simplices");
            rule("slack_second" + tag, worst2 >= min_slack,
                 "min slack " + fmt(worst2) + " over " + std::to_string(cases)
                     + " simplices");
            summary_["rows"].push_back({{"dim", d},
                                        {"cases", cases},
                                        {"min_slack_first", worst1},
                                        {"min_slack_second", worst2}});
        }
        result_.csv = csv.str();
    }

    SimplexUpdate admissible_simplex(std::size_t d, CounterRng& rng) const
    {
        Window const ball = Window::unit_ball(d);
        for (int attempt = 0; attempt < 1000; ++attempt)
        {
            Point u = ball.sample_uniform(rng);
            double const un = norm(u);
            if (!(un > 1e-3))
            {
                continue;
            }
            for (double& v : u)
            {
                v /= un;
            }
            double const rho = rng.uniform(0.2, 0.95);
            double const b = std::sqrt(1 - rho * rho) * rng.uniform(0.3, 0.95);
            std::vector<Point> dirs = plane_basis(u);
            std::vector<Point> base;
            for (std::size_t i = 0; i < d; ++i)
            {
                Point w(d, 0.0);
                if (d == 2)
                {
                    double const t = i == 0 ? -rng.uniform(0.05, 1)
                                            : rng.uniform(0.05, 1);
                    w = dirs[0];
                    for (double& v : w)
                    {
                        v *= t;
                    }
                }
                else
                {
                    double const theta = rng.uniform(0, 2 * std::numbers::pi);
                    for (std::size_t a = 0; a < d; ++a)
                    {
                        w[a] = std::cos(theta) * dirs[0][a]
                               + std::sin(theta) * dirs[1][a];
                    }
                }
                Point z(d);
                for (std::size_t a = 0; a < d; ++a)
                {
                    z[a] = rho * u[a] + b * w[a];
                }
                base.push_back(z);
            }
            std::vector<double> wts(d);
            double total = 0;
            for (double& w : wts)
            {
                w = -std::log(1 - rng.uniform());
                total += w;
            }
            Point foot(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
            {
                for (std::size_t a = 0; a < d; ++a)
                {
                    foot[a] += wts[i] / total * base[i][a];
                }
            }
            double const f2 = std::inner_product(foot.begin(), foot.end(),
                                                 foot.begin(), 0.0);
            double const proj = std::inner_product(foot.begin(), foot.end(),
                                                   u.begin(), 0.0);
            double const h_max = -proj + std::sqrt(proj * proj + 1 - f2);
            double const h = h_max * rng.uniform(1e-3, 1);
            Point apex(d);
            for (std::size_t a = 0; a < d; ++a)
            {
                apex[a] = foot[a] + h * u[a];
            }
            try
            {
                SimplexUpdate su = SimplexUpdate::make(base, apex);
                if (check_lemma43(su, 0, 0, 1).evaluated)
                {
                    return su;
                }
            }
            catch (Error const& e)
            {
                if (e.code() != ErrorCode::degenerate)
                {
                    throw;
                }
            }
        }
        fail(ErrorCode::numeric, "could not generate an admissible simplex");
    }

    static std::vector<Point> plane_basis(Point const& u)
    {
        if (u.size() == 2)
        {
            return {{-u[1], u[0]}};
        }
        std::size_t smallest = 0;
        for (std::size_t a = 1; a < 3; ++a)
        {
            if (std::abs(u[a]) < std::abs(u[smallest]))
            {
                smallest = a;
            }
        }
        Point e(3, 0.0);
        e[smallest] = 1;
        double const eu = u[smallest];
        Point w1(3);
        for (std::size_t a = 0; a < 3; ++a)
        {
            w1[a] = e[a] - eu * u[a];
        }
        double const n1 = norm(w1);
        for (double& v : w1)
        {
            v /= n1;
        }
        Point const w2 = {u[1] * w1[2] - u[2] * w1[1], u[2] * w1[0] - u[0] * w1[2],
                          u[0] * w1[1] - u[1] * w1[0]};
        return {w1, w2};
    }

    static double oracle_volume(HullPolytope const& hull)
    {
        double v = 0;
        for (auto const& f : hull.facets)
        {
            auto const a = hull.points.point(f.vertices[0]);
            auto const b = hull.points.point(f.vertices[1]);
            if (hull.dim == 2)
            {
                v += (a[0] * b[1] - b[0] * a[1]) / 2;
            }
            else
            {
                auto const c = hull.points.point(f.vertices[2]);
                v += (a[0] * (b[1] * c[2] - b[2] * c[1])
                      - a[1] * (b[0] * c[2] - b[2] * c[0])
                      + a[2] * (b[0] * c[1] - b[1] * c[0]))
                     / 6;
            }
        }
        return v;
    }

    void delta_consistency()
    {
        std::size_t const cases = get_count(c_.options, "cases", "options");
        std::size_t const n_points = get_count(c_.options, "points", "options");
        if (n_points < 4)
        {
            config_error("options.points", "must be >= 4");
        }
        std::vector<double> const ps = p_values();
        double const max_error = get_number(c_.assertions, "max_error");
        double const a0_tol = get_number(c_.assertions, "a0_tolerance");
        std::ostringstream csv;
        csv << "dim,case,delta_error,a0_error\n";
        for (std::size_t d : dims())
        {
            CounterRng rng(SeedSpec{c_.seed, {2000 + d, 0}});
            Window const ball = Window::unit_ball(d);
            double worst_delta = 0;
            double worst_a0 = 0;
            for (std::size_t k = 0; k < cases; ++k)
            {
                double delta_err = 0;
                double a0_err = 0;
                for (int attempt = 0;; ++attempt)
                {
                    if (attempt == 1000)
                    {
                        fail(ErrorCode::numeric,
                             "could not place a single-facet apex");
                    }
                    PointConfiguration config(d);
                    config.push_back(Point(d, 0.0));
                    for (std::size_t i = 0; i < n_points; ++i)
                    {
                        config.push_back(ball.sample_uniform(rng));
                    }
                    HullPolytope const hull = convex_hull(config);
                    a0_err = std::abs(lp_surface_area(hull, 0)
                                      - static_cast<double>(d)
                                            * oracle_volume(hull));
                    auto const fi = static_cast<std::size_t>(
                        rng.uniform() * static_cast<double>(hull.facets.size()));
                    Facet const& base = hull.facets[fi];
                    std::vector<Point> verts;
                    Point centroid(d, 0.0);
                    for (std::size_t id : base.vertices)
                    {
                        auto const x = config.point(id);
                        verts.emplace_back(x.begin(), x.end());
                        for (std::size_t a = 0; a < d; ++a)
                        {
                            centroid[a] += x[a] / static_cast<double>(d);
                        }
                    }
                    double t = rng.uniform(0.01, 0.2);
                    std::optional<Point> apex;
                    for (int shrink = 0; shrink < 30 && !apex; ++shrink, t /= 2)
                    {
                        Point x(d);
                        for (std::size_t a = 0; a < d; ++a)
                        {
                            x[a] = centroid[a] + t * base.normal[a];
                        }
                        bool single = true;
                        for (std::size_t g = 0; g < hull.facets.size() && single;
                             ++g)
                        {
                            auto const& f = hull.facets[g];
                            double const side
                                = std::inner_product(f.normal.begin(),
                                                     f.normal.end(), x.begin(),
                                                     0.0)
                                  - f.offset;
                            single = g == fi ? side > 1e-9 : side < -1e-9;
                        }
                        if (single)
                        {
                            apex = x;
                        }
                    }
                    if (!apex)
                    {
                        continue;
                    }
                    PointConfiguration grown = config;
                    grown.push_back(*apex);
                    HullPolytope const hull2 = convex_hull(grown);
                    SimplexUpdate const u = SimplexUpdate::make(verts, *apex);
                    for (double p : ps)
                    {
                        double const diff = lp_surface_area(hull2, p)
                                            - lp_surface_area(hull, p);
                        delta_err = std::max(delta_err,
                                             std::abs(diff - delta_p(u, p)));
                    }
                    break;
                }
                worst_delta = std::max(worst_delta, delta_err);
                worst_a0 = std::max(worst_a0, a0_err);
                csv << d << ',' << k << ',' << fmt(delta_err) << ','
                    << fmt(a0_err) << '\n';
            }
            std::string const tag = "[d=" + std::to_string(d) + "]";
            rule("delta_consistency" + tag, worst_delta <= max_error,
                 "max |A_p(new) - A_p(old) - delta_p| = " + fmt(worst_delta));
            rule("a0_volume" + tag, worst_a0 <= a0_tol,
                 "max |A_0 - d V| = " + fmt(worst_a0));
            summary_["rows"].push_back({{"dim", d},
                                        {"cases", cases},
                                        {"max_delta_error", worst_delta},
                                        {"max_a0_error", worst_a0}});
        }
        result_.csv = csv.str();
    }

    ExperimentConfig const& c_;
    LogSink const& log_;
    EstimatorOptions opts_;
    ExperimentResult result_;
    json summary_;
};

void write_file(std::string const& path, std::string const& content)
{
    std::filesystem::path const p(path);
    if (p.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
    {
        fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    }
    os << content;
    if (!os)
    {
        fail(ErrorCode::io, "failed writing '" + path + "'");
    }
}

std::string read_file(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
    {
        fail(ErrorCode::io, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool type_matches(json const& v, std::string const& t)
{
    if (t == "object")
        return v.is_object();
    if (t == "array")
        return v.is_array();
    if (t == "string")
        return v.is_string();
    if (t == "number")
        return v.is_number();
    if (t == "integer")
        return v.is_number_integer();
    if (t == "boolean")
        return v.is_boolean();
    if (t == "null")
        return v.is_null();
    return false;
}
}  // namespace

std::string to_string(ExperimentKind kind)
{
    for (auto const& k : kind_names)
    {
        if (k.kind == kind)
        {
            return k.name;
        }
    }
    return "unknown";
}

ExperimentConfig parse_experiment_config(std::string const& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        auto const [line, col] = line_column(text, e.byte);
        fail(ErrorCode::config, "line " + std::to_string(line) + ", column "
                                    + std::to_string(col)
                                    + ": invalid JSON: " + e.what());
    }
    if (!j.is_object())
    {
        fail(ErrorCode::config, "config must be a JSON object");
    }
    static std::set<std::string> const known
        = {"experiment", "functional", "functionals", "s_grid", "n_reps",
           "seed", "output", "assertions", "options"};
    for (auto const& [key, value] : j.items())
    {
        if (!known.contains(key))
        {
            config_error(key, "unknown top-level field");
        }
    }

    ExperimentConfig c;
    if (!j.contains("experiment") || !j["experiment"].is_string())
    {
        config_error("experiment", "must be a string");
    }
    std::string name = j["experiment"].get<std::string>();
    std::replace(name.begin(), name.end(), '_', '-');
    auto const it = std::find_if(std::begin(kind_names), std::end(kind_names),
                                 [&](KindName const& k) { return name == k.name; });
    if (it == std::end(kind_names))
    {
        std::string all;
        for (auto const& k : kind_names)
        {
            all += (all.empty() ? "" : ", ") + std::string(k.name);
        }
        config_error("experiment", "unknown experiment '"
                                       + j["experiment"].get<std::string>()
                                       + "' (expected one of " + all + ")");
    }
    c.kind = it->kind;

    bool const geometric = is_geometric(c.kind);
    if (c.kind == ExperimentKind::covariance)
    {
        if (j.contains("functional"))
        {
            config_error("functional", "covariance takes 'functionals'");
        }
        if (!j.contains("functionals") || !j["functionals"].is_array()
            || j["functionals"].size() < 2)
        {
            config_error("functionals", "must be an array of at least two");
        }
        for (std::size_t i = 0; i < j["functionals"].size(); ++i)
        {
            c.functionals.push_back(parse_functional(
                j["functionals"][i], "functionals[" + std::to_string(i) + "]"));
        }
    }
    else if (geometric)
    {
        if (j.contains("functional") || j.contains("functionals"))
        {
            config_error("functional", "not used by " + to_string(c.kind));
        }
    }
    else
    {
        if (j.contains("functionals"))
        {
            config_error("functionals", "use 'functional' for this experiment");
        }
        if (!j.contains("functional"))
        {
            config_error("functional", "is required");
        }
        c.functionals.push_back(parse_functional(j["functional"], "functional"));
    }
    if (c.kind == ExperimentKind::polytope_scaling
        && c.functionals[0].name != "polytope_lp_area")
    {
        config_error("functional.name",
                     "polytope-scaling needs 'polytope_lp_area'");
    }
    if (c.kind == ExperimentKind::shotnoise_scaling
        && c.functionals[0].name != "shotnoise_excursion")
    {
        config_error("functional.name",
                     "shotnoise-scaling needs 'shotnoise_excursion'");
    }

    if (j.contains("s_grid"))
    {
        if (!j["s_grid"].is_array())
        {
            config_error("s_grid", "must be an array of numbers");
        }
        for (std::size_t i = 0; i < j["s_grid"].size(); ++i)
        {
            json const& v = j["s_grid"][i];
            std::string const f = "s_grid[" + std::to_string(i) + "]";
            if (!v.is_number() || !std::isfinite(v.get<double>())
                || !(v.get<double>() > 0))
            {
                config_error(f, "must be a positive number");
            }
            if (!c.s_grid.empty() && !(v.get<double>() > c.s_grid.back()))
            {
                config_error(f, "s_grid must be strictly increasing");
            }
            c.s_grid.push_back(v.get<double>());
        }
    }
    if (!geometric && c.s_grid.empty())
    {
        config_error("s_grid", "is required and must be non-empty");
    }

    if (j.contains("n_reps"))
    {
        json const& v = j["n_reps"];
        if (!v.is_number_integer() || v.get<long long>() < 2)
        {
            config_error("n_reps", "must be an integer >= 2");
        }
        c.n_reps = v.get<std::size_t>();
    }
    else if (!geometric)
    {
        config_error("n_reps", "is required");
    }

    if (!j.contains("seed") || !j["seed"].is_number_integer()
        || (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()
            && j["seed"].get<long long>() < 0))
    {
        config_error("seed", "must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("output"))
    {
        json const& o = j["output"];
        if (!o.is_object())
        {
            config_error("output", "must be an object {csv, json}");
        }
        for (auto const& [key, value] : o.items())
        {
            if (key != "csv" && key != "json")
            {
                config_error("output." + key, "unknown key (allowed: csv, json)");
            }
            if (!value.is_string())
            {
                config_error("output." + key, "must be a path string");
            }
        }
        c.csv_path = o.value("csv", "");
        c.json_path = o.value("json", "");
    }

    c.assertions = merge_checked(j.value("assertions", json::object()),
                                 assertion_defaults(c.kind), "assertions");
    c.options = merge_checked(j.value("options", json::object()),
                              option_defaults(c.kind), "options");
    estimator_options(c);

    if (!geometric)
    {
        for (std::size_t i = 0; i < c.functionals.size(); ++i)
        {
            try
            {
                FunctionalRegistry::builtin().make(c.functionals[i].name,
                                                   c.functionals[i].params,
                                                   c.s_grid.front());
            }
            catch (Error const& e)
            {
                std::string const f = c.kind == ExperimentKind::covariance
                                          ? "functionals[" + std::to_string(i)
                                                + "]"
                                          : "functional";
                fail(ErrorCode::config, "field '" + f + "': " + e.what());
            }
        }
    }
    return c;
}

ExperimentConfig load_experiment_config(std::string const& path)
{
    std::string text;
    try
    {
        text = read_file(path);
    }
    catch (Error const& e)
    {
        fail(ErrorCode::config, e.what());
    }
    return parse_experiment_config(text);
}

ExperimentResult run_experiment(ExperimentConfig const& config,
                                LogSink const& log)
{
    return Runner(config, log).run();
}

int run_experiment_file(std::string const& path,
                        std::optional<std::uint64_t> seed_override,
                        LogSink const& log)
{
    auto emit = [&](std::string const& line) {
        if (log)
        {
            log(line);
        }
    };
    ExperimentConfig config;
    try
    {
        config = load_experiment_config(path);
    }
    catch (std::exception const& e)
    {
        emit(std::string("config error: ") + path + ": " + e.what());
        return 2;
    }
    if (seed_override)
    {
        config.seed = *seed_override;
    }
    try
    {
        ExperimentResult const result = run_experiment(config, log);
        if (!config.csv_path.empty())
        {
            write_file(config.csv_path, result.csv);
        }
        if (!config.json_path.empty())
        {
            write_file(config.json_path, result.summary.dump(2) + "\n");
        }
        if (result.pass)
        {
            emit("all " + std::to_string(result.rules.size())
                 + " assertions passed");
            return 0;
        }
        for (auto const& r : result.rules)
        {
            if (!r.pass)
            {
                emit("assertion failed: " + r.name + ": " + r.detail);
            }
        }
        return 1;
    }
    catch (std::exception const& e)
    {
        emit(std::string("error: ") + e.what());
        return 2;
    }
}

int run_selftest(LogSink const& log)
{
    auto emit = [&](std::string const& line) {
        if (log)
        {
            log(line);
        }
    };
    static char const* const config_text = R"({
  "experiment": "sandwich",
  "functional": {"name": "rgg_degree_count", "params": {"j": 1}},
  "s_grid": [20, 40],
  "n_reps": 2000,
  "seed": 20261016
})";
    namespace fs = std::filesystem;
    fs::path const dir = fs::temp_directory_path()
                         / ("pvlab-selftest-"
                            + std::to_string(std::chrono::steady_clock::now()
                                                 .time_since_epoch()
                                                 .count()));
    try
    {
        fs::create_directories(dir);
        ExperimentConfig const config = parse_experiment_config(config_text);
        std::size_t const threads = thread_count();
        std::string files[2];
        for (int run = 0; run < 2; ++run)
        {
            set_thread_count(run == 0 ? threads : 1);
            ExperimentResult const r = run_experiment(config);
            std::string const path
                = (dir / ("run" + std::to_string(run) + ".csv")).string();
            write_file(path, r.csv);
            files[run] = read_file(path);
            emit("selftest run " + std::to_string(run + 1) + ": "
                 + std::to_string(files[run].size()) + " bytes of CSV");
        }
        set_thread_count(0);
        fs::remove_all(dir);
        if (files[0] != files[1])
        {
            emit("selftest FAILED: CSV outputs differ");
            return 1;
        }
        emit("selftest passed: CSV outputs are byte-identical");
        return 0;
    }
    catch (std::exception const& e)
    {
        set_thread_count(0);
        std::error_code ec;
        fs::remove_all(dir, ec);
        emit(std::string("selftest error: ") + e.what());
        return 2;
    }
}

nlohmann::json const& summary_schema()
{
    static json const schema = json::parse(R"({
  "type": "object",
  "required": ["experiment", "seed", "n_reps", "s_grid", "functionals",
               "rows", "slope", "slope_se", "intercept", "rules", "pass"],
  "properties": {
    "experiment": {"type": "string",
                   "enum": ["sandwich", "scaling", "covariance",
                            "polytope-scaling", "shotnoise-scaling",
                            "lemma43-sweep", "delta-consistency"]},
    "seed": {"type": "integer"},
    "n_reps": {"type": "integer"},
    "s_grid": {"type": "array", "items": {"type": "number"}},
    "functionals": {"type": "array", "items": {
      "type": "object", "required": ["name", "params"],
      "properties": {"name": {"type": "string"}, "params": {"type": "object"}}}},
    "rows": {"type": "array", "items": {"type": "object"}},
    "slope": {"type": ["number", "null"]},
    "slope_se": {"type": ["number", "null"]},
    "intercept": {"type": ["number", "null"]},
    "rules": {"type": "array", "items": {
      "type": "object", "required": ["name", "pass", "detail"],
      "properties": {"name": {"type": "string"}, "pass": {"type": "boolean"},
                     "detail": {"type": "string"}}}},
    "pass": {"type": "boolean"}
  }
})");
    return schema;
}

std::string validate_json(nlohmann::json const& value,
                          nlohmann::json const& schema, std::string const& path)
{
    if (schema.contains("type"))
    {
        json const& t = schema["type"];
        bool ok = false;
        if (t.is_string())
        {
            ok = type_matches(value, t.get<std::string>());
        }
        else
        {
            for (auto const& alt : t)
            {
                ok = ok || type_matches(value, alt.get<std::string>());
            }
        }
        if (!ok)
        {
            return path + ": expected type " + t.dump();
        }
    }
    if (schema.contains("enum"))
    {
        auto const& e = schema["enum"];
        if (std::find(e.begin(), e.end(), value) == e.end())
        {
            return path + ": value " + value.dump() + " not in enum";
        }
    }
    if (value.is_object())
    {
        for (auto const& r : schema.value("required", json::array()))
        {
            if (!value.contains(r.get<std::string>()))
            {
                return path + ": missing required key '" + r.get<std::string>()
                       + "'";
            }
        }
        if (schema.contains("properties"))
        {
            for (auto const& [key, sub] : schema["properties"].items())
            {
                if (value.contains(key))
                {
                    std::string const err
                        = validate_json(value[key], sub, path + "." + key);
                    if (!err.empty())
                    {
                        return err;
                    }
                }
            }
        }
    }
    if (value.is_array() && schema.contains("items"))
    {
        for (std::size_t i = 0; i < value.size(); ++i)
        {
            std::string const err = validate_json(
                value[i], schema["items"], path + "[" + std::to_string(i) + "]");
            if (!err.empty())
            {
                return err;
            }
        }
    }
    return {};
}
}  // namespace pvlab
