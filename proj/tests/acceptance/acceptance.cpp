// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one PASS/FAIL line per criterion.
//   pvlab_acceptance            run all criteria
//   pvlab_acceptance 2 7        run the listed criteria

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pvlab/error.hpp"
#include "pvlab/experiment.hpp"
#include "pvlab/graph.hpp"
#include "pvlab/knn.hpp"
#include "pvlab/poisson.hpp"
#include "pvlab/polytope.hpp"
#include "pvlab/rgg.hpp"
#include "pvlab/shotnoise.hpp"

using namespace pvlab;

namespace
{
struct Outcome
{
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string const& note)
    {
        pass = pass && ok;
        notes.push_back((ok ? "ok   " : "FAIL ") + note);
    }
};

struct Run
{
    ExperimentResult result;
    double seconds = 0;
};

Run run_config(std::string const& name)
{
    std::string const path = std::string(PVLAB_CONFIG_DIR) + "/" + name + ".json";
    auto const t0 = std::chrono::steady_clock::now();
    Run r;
    r.result = run_experiment(load_experiment_config(path));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void experiment(Outcome& out, std::string const& name, double max_seconds = 0)
{
    Run const r = run_config(name);
    for (auto const& rule : r.result.rules)
    {
        out.require(rule.pass, name + ": " + rule.name + ": " + rule.detail);
    }
    std::ostringstream t;
    t << name << ": runtime " << r.seconds << " s";
    if (max_seconds > 0)
    {
        t << " (limit " << max_seconds << " s)";
        out.require(r.seconds < max_seconds, t.str());
    }
    else
    {
        out.notes.push_back("     " + t.str());
    }
}

Outcome exact_count()
{
    Outcome o;
    experiment(o, "count_exact", 60);
    return o;
}

Outcome sandwich()
{
    Outcome o;
    for (char const* name : {"sandwich_rgg_isolated", "sandwich_rgg_singletons",
                             "sandwich_knn_length", "sandwich_polytope",
                             "sandwich_shotnoise"})
    {
        experiment(o, name);
    }
    return o;
}

Outcome first_chaos()
{
    Outcome o;
    experiment(o, "parity_first_chaos");
    return o;
}

Outcome rgg_scaling()
{
    Outcome o;
    experiment(o, "scaling_rgg_isolated", 600);
    experiment(o, "scaling_rgg_singletons", 600);
    return o;
}

Outcome knn_scaling()
{
    Outcome o;
    experiment(o, "scaling_knn_length");
    experiment(o, "covariance_knn_degrees");
    return o;
}

Outcome polytope_order()
{
    Outcome o;
    experiment(o, "polytope_scaling");
    return o;
}

double shoelace(HullPolytope const& h)
{
    double a = 0;
    for (auto const& f : h.facets)
    {
        auto const p = h.points.point(f.vertices[0]);
        auto const q = h.points.point(f.vertices[1]);
        a += p[0] * q[1] - p[1] * q[0];
    }
    return 0.5 * a;
}

double divergence_volume(HullPolytope const& h)
{
    double v = 0;
    for (auto const& f : h.facets)
    {
        v += oracle::det3(h.points.point(f.vertices[0]).data(),
                          h.points.point(f.vertices[1]).data(),
                          h.points.point(f.vertices[2]).data());
    }
    return v / 6;
}

Outcome geometry()
{
    Outcome o;
    for (std::size_t d : {2, 3})
    {
        Window const ball = Window::unit_ball(d);
        double worst = 0;
        std::size_t used = 0;
        for (std::uint64_t r = 0; used < 1000; ++r)
        {
            PointConfiguration const c = sample_poisson(ball, 100, SeedSpec{31, {d, r}});
            if (c.size() < d + 1)
            {
                continue;
            }
            HullPolytope const h = convex_hull(c);
            double const vol = d == 2 ? shoelace(h) : divergence_volume(h);
            worst = std::max(worst, std::abs(lp_surface_area(h, 0) - d * vol));
            ++used;
        }
        std::ostringstream t;
        t << "A_0 = d V on 1000 samples, d=" << d << ": max error " << worst;
        o.require(worst <= 1e-12, t.str());
    }
    experiment(o, "delta_consistency");
    experiment(o, "lemma43_sweep");
    return o;
}

Outcome shot_noise()
{
    Outcome o;
    experiment(o, "shotnoise_compact");
    experiment(o, "shotnoise_power_law");
    Kernel const k = Kernel::compact_indicator(2, 1, 1);
    PointConfiguration const origin(2, {{0, 0}});
    double const v = excursion_volume(k, origin, ExcursionSpec{0.5, 2, 100000, 0});
    double const rel = std::abs(v - std::numbers::pi) / std::numbers::pi;
    std::ostringstream t;
    t << "single-ball excursion " << v << " vs pi, relative error " << rel;
    o.require(rel <= 0.01, t.str());
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    std::size_t rgg_bad = 0;
    std::size_t knn_bad = 0;
    std::size_t comp_bad = 0;
    for (std::uint64_t i = 0; i < 200; ++i)
    {
        std::size_t const n = 20 + (i * 37) % 181;
        std::size_t const d = 2 + i % 2;
        PointConfiguration const c = oracle::uniform_points(n, d, 1000 + i);
        double const r = 0.6 * std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d));
        GraphView const g = build_rgg(c, r);
        auto const edges = oracle::rgg_edges(c, r);
        rgg_bad += g.edges() != edges;
        comp_bad += g.component_size != oracle::bfs_component_sizes(n, edges);
        std::size_t const k = 1 + i % 5;
        knn_bad += build_knn(c, k).edges() != oracle::knn_edges(c, k)
                   || nearest_neighbours(c, k) != oracle::knn_lists(c, k);
    }
    o.require(rgg_bad == 0, "grid RGG vs O(n^2) oracle: " + std::to_string(rgg_bad) + " mismatches in 200");
    o.require(knn_bad == 0, "ring-search kNN vs O(n^2) oracle: " + std::to_string(knn_bad) + " mismatches in 200");
    o.require(comp_bad == 0, "union-find components vs BFS: " + std::to_string(comp_bad) + " mismatches in 200");
    return o;
}

Outcome determinism()
{
    Outcome o;
    std::string const cmd = std::string("\"") + PVLAB_CLI_PATH + "\" selftest";
    int const status = std::system(cmd.c_str());
    o.require(status == 0, "pvlab selftest exit status " + std::to_string(status));
    return o;
}

struct Criterion
{
    int id;
    char const* title;
    std::function<Outcome()> run;
};
}  // namespace

int main(int argc, char** argv)
{
    std::vector<Criterion> const all = {
        {1, "count functional: bounds and variance equal the intensity", exact_count},
        {2, "sandwich bounds hold for graph, polytope and shot-noise functionals", sandwich},
        {3, "parity functional: first-chaos bound vanishes, reversed Poincare bound does not", first_chaos},
        {4, "RGG isolated-vertex and singleton-component variances scale linearly", rgg_scaling},
        {5, "kNN edge length scales linearly; degree-count covariance is positive definite", knn_scaling},
        {6, "random polytope L^p area variance has order s^(-5/3)", polytope_order},
        {7, "polytope geometry: A_0 = dV, update consistency, simplex inequalities", geometry},
        {8, "excursion volume variance is of order s^d for both kernel regimes", shot_noise},
        {9, "graph constructions match brute-force oracles", oracle_equivalence},
        {10, "selftest reproduces CSV output byte for byte", determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
    {
        selected.push_back(std::atoi(argv[i]));
    }
    bool all_pass = true;
    for (auto const& c : all)
    {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
        {
            continue;
        }
        Outcome out;
        try
        {
            out = c.run();
        }
        catch (std::exception const& e)
        {
            out.require(false, std::string("error: ") + e.what());
        }
        for (auto const& n : out.notes)
        {
            std::cout << "  " << n << "\n";
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << std::endl;
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
