// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pvlab/error.hpp"
#include "pvlab/poisson.hpp"
#include "pvlab/polytope.hpp"

using namespace pvlab;

namespace
{
PointConfiguration diamond()
{
    return PointConfiguration(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

std::set<std::set<std::size_t>> facet_sets(HullPolytope const& h)
{
    std::set<std::set<std::size_t>> out;
    for (auto const& f : h.facets)
    {
        out.insert(std::set<std::size_t>(f.vertices.begin(), f.vertices.end()));
    }
    return out;
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

PointConfiguration ball_sample(std::size_t n, std::size_t d, std::uint64_t seed)
{
    CounterRng rng(SeedSpec{seed, {5, 0}});
    Window const w = Window::unit_ball(d);
    PointConfiguration c(d);
    for (std::size_t i = 0; i < n; ++i)
    {
        c.push_back(w.sample_uniform(rng));
    }
    return c;
}
}  // namespace

TEST_CASE("diamond hull")
{
    HullPolytope const h = convex_hull(diamond());
    REQUIRE(h.facets.size() == 4);
    for (auto const& f : h.facets)
    {
        CHECK(f.measure == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(f.dist0 == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
        CHECK(f.normal.size() == 2);
    }
    for (double p : {0.0, 0.25, 0.5, 1.0})
    {
        CHECK(lp_surface_area(h, p) == doctest::Approx(4 * std::pow(2.0, p / 2)).epsilon(1e-13));
    }
    CHECK(lp_surface_area(h, 0) == doctest::Approx(2 * shoelace(h)).epsilon(1e-14));
    CHECK_THROWS_AS(lp_surface_area(h, 1.5), Error);
}

TEST_CASE("interior points are not hull vertices")
{
    PointConfiguration c = diamond();
    c.push_back(Point{0, 0});
    HullPolytope const h = convex_hull(c);
    CHECK(h.vertices == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(h.facets.size() == 4);
}

TEST_CASE("regular tetrahedron")
{
    PointConfiguration const c(3, {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
    HullPolytope const h = convex_hull(c);
    REQUIRE(h.facets.size() == 4);
    for (auto const& f : h.facets)
    {
        CHECK(f.measure == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-13));
        CHECK(f.dist0 == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-13));
    }
    CHECK(divergence_volume(h) == doctest::Approx(8.0 / 3).epsilon(1e-13));
}

TEST_CASE("degenerate inputs are rejected")
{
    PointConfiguration const line(2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK_THROWS_AS(convex_hull(line), Error);
    PointConfiguration const plane(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
    CHECK_THROWS_AS(convex_hull(plane), Error);
    CHECK_THROWS_AS(convex_hull(PointConfiguration(4, {{0, 0, 0, 0}})), Error);
}

TEST_CASE("hulls match the exhaustive oracle")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
        auto const c2 = oracle::uniform_points(40, 2, seed);
        HullPolytope const h2 = convex_hull(c2);
        REQUIRE(facet_sets(h2) == oracle::hull_facets_2d(c2));
        auto const c3 = oracle::uniform_points(30, 3, seed);
        HullPolytope const h3 = convex_hull(c3);
        REQUIRE(facet_sets(h3) == oracle::hull_facets_3d(c3));
    }
}

TEST_CASE("hull invariants on random samples")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        for (std::size_t d : {2, 3})
        {
            auto const c = ball_sample(200, d, seed);
            HullPolytope const h = convex_hull(c);
            CHECK(h.max_violation() <= 1e-9 * h.diameter());
            for (auto const& f : h.facets)
            {
                CHECK(f.measure >= 0);
                CHECK(f.dist0 >= 0);
                double vmax = 0;
                for (auto v : f.vertices)
                {
                    vmax = std::max(vmax, norm(c.point(v)));
                }
                CHECK(f.dist0 <= vmax + 1e-15);
            }
            if (d == 3)
            {
                std::size_t const faces = h.facets.size();
                std::size_t const edges = 3 * faces / 2;
                CHECK(h.vertices.size() + faces - edges == 2);
            }

            PointConfiguration verts(d);
            for (auto v : h.vertices)
            {
                verts.push_back(c.point(v));
            }
            HullPolytope const again = convex_hull(verts);
            std::set<std::set<std::size_t>> mapped;
            for (auto const& f : again.facets)
            {
                std::set<std::size_t> s;
                for (auto v : f.vertices)
                {
                    s.insert(h.vertices[v]);
                }
                mapped.insert(s);
            }
            CHECK(mapped == facet_sets(h));
        }
    }
}

TEST_CASE("A_0 equals d times the volume")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        HullPolytope const h2 = convex_hull(ball_sample(100, 2, seed));
        double const v2 = shoelace(h2);
        CHECK(std::abs(lp_surface_area(h2, 0) - 2 * v2) <= 1e-12);
        HullPolytope const h3 = convex_hull(ball_sample(100, 3, seed));
        double const v3 = divergence_volume(h3);
        CHECK(std::abs(lp_surface_area(h3, 0) - 3 * v3) <= 1e-12);
    }
}

TEST_CASE("A_p is non-decreasing in p when the origin is inside")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        PointConfiguration c = ball_sample(80, 2, seed);
        c.push_back(Point{0, 0});
        HullPolytope const h = convex_hull(c);
        double prev = lp_surface_area(h, 0);
        for (double p : {0.25, 0.5, 0.75, 1.0})
        {
            double const a = lp_surface_area(h, p);
            CHECK(a >= prev - 1e-14);
            prev = a;
        }
    }
}

TEST_CASE("A_p does not depend on the triangulation of coplanar faces")
{
    PointConfiguration cube(3);
    for (int i = 0; i < 8; ++i)
    {
        cube.push_back(Point{i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
    }
    PointConfiguration reordered(3);
    for (int i = 7; i >= 0; --i)
    {
        reordered.push_back(cube.point(static_cast<std::size_t>((i * 3) % 8)));
    }
    PointConfiguration centred = cube;
    centred.push_back(Point{1, 0.2, -0.1});
    centred.push_back(Point{0.3, -1, 0.4});
    for (double p : {0.0, 0.5, 1.0})
    {
        double const a = lp_surface_area(convex_hull(cube), p);
        CHECK(a == doctest::Approx(24).epsilon(1e-13));
        CHECK(lp_surface_area(convex_hull(reordered), p) == doctest::Approx(a).epsilon(1e-13));
        CHECK(lp_surface_area(convex_hull(centred), p) == doctest::Approx(a).epsilon(1e-13));
    }
}

TEST_CASE("zero-distance facets use the 0^0 convention")
{
    PointConfiguration const c(2, {{0, 0}, {1, 0}, {0, 1}});
    HullPolytope const h = convex_hull(c);
    LpAreaDiagnostics diag;
    double const a = lp_surface_area(h, 1, &diag);
    CHECK(diag.zero_distance_facets == 2);
    CHECK(a == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("origin simplex distance")
{
    std::vector<Point> seg{{1, -1}, {1, 1}};
    CHECK(origin_simplex_distance(seg) == doctest::Approx(1));
    std::vector<Point> off{{1, 1}, {2, 1}};
    CHECK(origin_simplex_distance(off) == doctest::Approx(std::sqrt(2.0)));
    std::vector<Point> tri{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}};
    CHECK(origin_simplex_distance(tri) == doctest::Approx(std::sqrt(3.0)));
    std::vector<Point> face{{-1, -1, 2}, {3, -1, 2}, {-1, 3, 2}};
    CHECK(origin_simplex_distance(face) == doctest::Approx(2));
    CHECK(simplex_measure(face) == doctest::Approx(8));
}

TEST_CASE("simplex update over the diamond")
{
    std::vector<Point> const base{{1, 0}, {0, 1}};
    Point const apex{0.9, 0.9};
    SimplexUpdate const u = SimplexUpdate::make(base, apex);
    CHECK(u.apex_height == doctest::Approx(0.8 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(u.projection_inside_base);
    CHECK(delta_p(u, 0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(delta_p(u, 0.5) == doctest::Approx(0.6163229040580172).epsilon(1e-13));
    CHECK(delta_p(u, 1) == doctest::Approx(0.3968634652543883).epsilon(1e-13));
    CHECK(delta_p(u, 1) == doctest::Approx(delta_height_term(u)).epsilon(1e-13));

    PointConfiguration grown = diamond();
    grown.push_back(apex);
    HullPolytope const before = convex_hull(diamond());
    HullPolytope const after = convex_hull(grown);
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
    {
        double const diff = lp_surface_area(after, p) - lp_surface_area(before, p);
        CHECK(std::abs(diff - delta_p(u, p)) <= 1e-10);
    }
}

TEST_CASE("delta_1 equals the height term in three dimensions")
{
    std::vector<Point> const base{{0.5, 0, 0.3}, {0, 0.5, 0.3}, {-0.4, -0.4, 0.3}};
    SimplexUpdate const u = SimplexUpdate::make(base, Point{0.05, 0.02, 0.6});
    CHECK(u.projection_inside_base);
    CHECK(u.rho[3] == doctest::Approx(0.3));
    CHECK(u.apex_height == doctest::Approx(0.3));
    CHECK(delta_p(u, 1) == doctest::Approx(delta_height_term(u)).epsilon(1e-12));
    for (double h : u.heights)
    {
        CHECK(h >= 0);
    }
}

TEST_CASE("flat simplex updates are rejected")
{
    std::vector<Point> const base{{1, 0}, {0, 1}};
    CHECK_THROWS_AS(SimplexUpdate::make(base, Point{0.5, 0.5}), Error);
}

TEST_CASE("simplex update tends to zero as the apex approaches the base")
{
    std::vector<Point> const base{{1, 0}, {0, 1}};
    double prev = 1e300;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4})
    {
        double const dp = std::abs(delta_p(SimplexUpdate::make(base, Point{0.5 + t, 0.5 + t}), 0.5));
        CHECK(dp < prev);
        prev = dp;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("both inequalities hold on a hand-built simplex")
{
    std::vector<Point> const base{{-0.3, 0.5}, {0.3, 0.5}};
    SimplexUpdate const u = SimplexUpdate::make(base, Point{0.05, 0.7});
    for (double p : {0.0, 0.5, 1.0})
    {
        Lemma43Report const r = check_lemma43(u, p, 0.25, 0.75);
        REQUIRE(r.evaluated);
        CHECK(r.slack_first >= -1e-9);
        CHECK(r.slack_second >= -1e-9);
        CHECK(r.bound_first > 0);
    }
}

TEST_CASE("inequality check skips invalid inputs")
{
    std::vector<Point> const base{{-0.3, 0.5}, {0.3, 0.5}};
    SimplexUpdate const u = SimplexUpdate::make(base, Point{0.05, 0.7});
    CHECK_FALSE(check_lemma43(u, 0.5, 0.75, 0.25).evaluated);
    CHECK_FALSE(check_lemma43(u, 1.5, 0.25, 0.75).evaluated);

    SimplexUpdate const outside = SimplexUpdate::make(base, Point{0.6, 0.7});
    Lemma43Report const r = check_lemma43(outside, 0.5, 0.25, 0.75);
    CHECK_FALSE(r.evaluated);
    CHECK_FALSE(r.skip_reason.empty());

    std::vector<Point> const big{{-0.9, 0.9}, {0.9, 0.9}};
    CHECK_FALSE(check_lemma43(SimplexUpdate::make(big, Point{0, 1}), 0.5, 0.25, 0.75).evaluated);
}

TEST_CASE("polytope functional")
{
    PolytopeFunctional const pf = polytope_functional(1, 100, false);
    CHECK(pf.functional(PointConfiguration(2)) == 0.0);
    CHECK(pf.degenerate_samples->load() == 1);
    CHECK(pf.functional(diamond()) == doctest::Approx(4 * std::sqrt(2.0)));
    PolytopeFunctional const scaled = polytope_functional(1, 100, true);
    CHECK(scaled.functional(diamond()) == doctest::Approx(400 * std::sqrt(2.0)));
    CHECK(pf.functional.label().find("p=1") != std::string::npos);
    CHECK_THROWS_AS(polytope_functional(-0.1, 100, false), Error);

    PolytopeFunctional const a0 = polytope_functional(0, 100, false);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        PointConfiguration const c = ball_sample(100, 2, seed + 100);
        CHECK(std::abs(a0.functional(c) - 2 * shoelace(convex_hull(c))) <= 1e-12);
    }
}

TEST_CASE("hull json dump")
{
    auto const j = hull_to_json(convex_hull(diamond()));
    CHECK(j.at("vertices").size() == 4);
    REQUIRE(j.at("facets").size() == 4);
    CHECK(j.at("facets")[0].contains("ids"));
    CHECK(j.at("facets")[0].contains("measure"));
    CHECK(j.at("facets")[0].contains("dist0"));
}
