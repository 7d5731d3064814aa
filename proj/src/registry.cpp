// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/knn.hpp"
#include "pvlab/polytope.hpp"
#include "pvlab/rgg.hpp"
#include "pvlab/shotnoise.hpp"

namespace pvlab
{
namespace
{
using nlohmann::json;

class Params
{
  public:
    Params(FunctionalInfo const& info, json const& given) : info_(info)
    {
        if (given.is_null())
        {
            return;
        }
        if (!given.is_object())
        {
            fail(ErrorCode::config,
                 "params of '" + info.name + "' must be a JSON object");
        }
        for (auto const& [key, value] : given.items())
        {
            auto const it = std::find_if(
                info.params.begin(), info.params.end(),
                [&](ParamInfo const& p) { return p.name == key; });
            if (it == info.params.end())
            {
                fail(ErrorCode::config, "unknown parameter '" + key + "' for '"
                                            + info.name + "'");
            }
            check_type(*it, value);
        }
        given_ = given;
    }

    json const& get(std::string const& name) const
    {
        if (given_.contains(name))
        {
            return given_.at(name);
        }
        for (auto const& p : info_.params)
        {
            if (p.name == name)
            {
                return p.default_value;
            }
        }
        fail(ErrorCode::not_found, "no parameter '" + name + "'");
    }

    double number(std::string const& name) const
    {
        return get(name).get<double>();
    }

    std::size_t integer(std::string const& name) const
    {
        return get(name).get<std::size_t>();
    }

    bool boolean(std::string const& name) const { return get(name).get<bool>(); }

  private:
    void check_type(ParamInfo const& p, json const& v) const
    {
        bool ok = false;
        if (p.type == "integer")
        {
            ok = v.is_number_unsigned()
                 || (v.is_number_integer() && v.get<long long>() >= 0);
        }
        else if (p.type == "number")
        {
            ok = v.is_number() && std::isfinite(v.get<double>());
        }
        else if (p.type == "boolean")
        {
            ok = v.is_boolean();
        }
        else if (p.type == "object")
        {
            ok = v.is_object();
        }
        if (!ok)
        {
            fail(ErrorCode::config, "parameter '" + p.name + "' of '"
                                        + info_.name + "' must be "
                                        + (p.type == "integer"
                                               ? "a non-negative integer"
                                               : "of type " + p.type));
        }
    }

    FunctionalInfo const& info_;
    json given_ = json::object();
};

Window unit_cube_of(std::size_t d)
{
    require(d >= 1, "dimension must be >= 1", ErrorCode::config);
    return Window::unit_cube(d);
}

void require_intensity(double s)
{
    require(std::isfinite(s) && s > 0, "s must be positive");
}

json default_kernel()
{
    return {{"kind", "compact"}, {"d", 2}, {"amplitude", 1.0}, {"radius", 1.0}};
}
}  // namespace

FunctionalRegistry::FunctionalRegistry()
{
    ParamInfo const dim{"dim", "integer", 2, "ambient dimension"};
    infos_ = {
        {"count", "core", "number of points in [0,1]^d, times weight",
         {dim, {"weight", "number", 1.0, "multiplier"}}},
        {"parity", "core", "(-1)^{number of points} on [0,1]^d", {dim}},
        {"nonempty", "core", "indicator that [0,1]^d contains a point", {dim}},
        {"rgg_degree_count", "random-geometric-graph",
         "V_j: vertices of degree j, radius rho s^{-1/d}, window [0,1]^d",
         {{"j", "integer", 0, "degree"},
          {"rho", "number", 1.0, "radius scale"},
          dim}},
        {"rgg_component_count", "random-geometric-graph",
         "C_j: components with j vertices, radius rho s^{-1/d}, window [0,1]^d",
         {{"j", "integer", 1, "component size"},
          {"rho", "number", 1.0, "radius scale"},
          dim}},
        {"knn_edge_length", "knn-graph",
         "F_q = s^{q/d} L_q (or L_q) of the k-NN graph, window [0,1]^d",
         {{"k", "integer", 1, "neighbours"},
          {"q", "number", 1.0, "edge-length power"},
          {"scaled", "boolean", true, "multiply by s^{q/d}"},
          dim}},
        {"knn_degree_count", "knn-graph",
         "V_j^k: vertices of degree j in the k-NN graph, window [0,1]^d",
         {{"k", "integer", 1, "neighbours"},
          {"j", "integer", 1, "degree"},
          dim}},
        {"polytope_lp_area", "random-polytope",
         "A_p of the convex hull of a sample in the unit ball (d = 2, 3)",
         {{"p", "number", 1.0, "exponent in [0, 1]"},
          {"scaled", "boolean", false, "multiply by s"},
          dim}},
        {"shotnoise_excursion", "shot-noise",
         "F_s: volume of {f >= level} in B(0, s); s is the radius",
         {{"kernel", "object", default_kernel(),
           "{kind: power_law|compact, d, ...}"},
          {"level", "number", 3.0, "excursion level u"},
          {"nodes", "integer", 2048, "quadrature nodes"},
          {"intensity", "number", 1.0, "Poisson intensity"},
          {"tolerance", "number", 1e-3, "far-field exceedance target"},
          {"c3_fraction", "number", 0.05, "c3 as a fraction of the level"}}},
    };
}

FunctionalRegistry const& FunctionalRegistry::builtin()
{
    static FunctionalRegistry const registry;
    return registry;
}

bool FunctionalRegistry::contains(std::string const& name) const
{
    return std::any_of(infos_.begin(), infos_.end(),
                       [&](FunctionalInfo const& f) { return f.name == name; });
}

FunctionalInfo const& FunctionalRegistry::info(std::string const& name) const
{
    for (auto const& f : infos_)
    {
        if (f.name == name)
        {
            return f;
        }
    }
    fail(ErrorCode::not_found, "unknown functional '" + name
                                   + "' (did you mean '" + nearest(name)
                                   + "'?)");
}

std::string FunctionalRegistry::nearest(std::string const& name) const
{
    std::string best;
    std::size_t best_d = std::string::npos;
    for (auto const& f : infos_)
    {
        std::size_t const d = edit_distance(name, f.name);
        if (d < best_d)
        {
            best_d = d;
            best = f.name;
        }
    }
    return best;
}

PoissonModel FunctionalRegistry::make(std::string const& name,
                                      json const& params, double s) const
{
    FunctionalInfo const& fi = info(name);
    Params const p(fi, params);
    require_intensity(s);

    if (name == "count" || name == "parity" || name == "nonempty")
    {
        Window w = unit_cube_of(p.integer("dim"));
        Functional f = name == "count"    ? count_functional()
                       : name == "parity" ? parity_functional()
                                          : nonempty_functional();
        if (name == "count" && p.number("weight") != 1)
        {
            f = f.scaled(p.number("weight"));
        }
        return {std::move(f), std::move(w), s};
    }
    if (name == "rgg_degree_count" || name == "rgg_component_count")
    {
        RggParams rp;
        rp.rho = p.number("rho");
        rp.dim = p.integer("dim");
        rp.intensity = s;
        Window w = unit_cube_of(rp.dim);
        auto const stat = name == "rgg_degree_count"
                              ? RggStatistic::degree_count
                              : RggStatistic::component_count;
        return {rgg_functional(stat, p.integer("j"), rp), std::move(w), s};
    }
    if (name == "knn_edge_length")
    {
        Window w = unit_cube_of(p.integer("dim"));
        return {knn_length_functional(p.integer("k"), p.number("q"), s,
                                      p.boolean("scaled")),
                std::move(w), s};
    }
    if (name == "knn_degree_count")
    {
        Window w = unit_cube_of(p.integer("dim"));
        return {knn_degree_functional(p.integer("k"), p.integer("j")),
                std::move(w), s};
    }
    if (name == "polytope_lp_area")
    {
        std::size_t const d = p.integer("dim");
        require(d == 2 || d == 3, "polytope_lp_area supports dim 2 or 3",
                ErrorCode::config);
        PolytopeFunctional pf
            = polytope_functional(p.number("p"), s, p.boolean("scaled"));
        return {std::move(pf.functional), Window::unit_ball(d), s};
    }
    // shotnoise_excursion
    Kernel const kernel = Kernel::from_json(p.get("kernel"));
    AdmissibilityReport const rep = validate_kernel(kernel);
    if (!rep.admissible)
    {
        fail(ErrorCode::config,
             "kernel is not admissible: " + rep.reasons.front());
    }
    ExcursionSpec spec;
    spec.level = p.number("level");
    spec.radius = s;
    spec.nodes = p.integer("nodes");
    TruncationOptions opts;
    opts.tolerance = p.number("tolerance");
    opts.c3_fraction = p.number("c3_fraction");
    spec.margin = sampling_margin(kernel, spec.level, opts);
    return shotnoise_functional(kernel, spec, p.number("intensity"));
}

std::string format_catalogue(FunctionalRegistry const& registry)
{
    std::ostringstream os;
    for (auto const& f : registry.catalogue())
    {
        os << f.name << "  [" << f.family << "]\n  " << f.description << '\n';
        for (auto const& p : f.params)
        {
            os << "    " << p.name << " (" << p.type
               << ", default " << p.default_value.dump() << "): "
               << p.description << '\n';
        }
    }
    return os.str();
}

std::size_t edit_distance(std::string const& a, std::string const& b)
{
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
    {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i)
    {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
        {
            std::size_t const sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}
}  // namespace pvlab
