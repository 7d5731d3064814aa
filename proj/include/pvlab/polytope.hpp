// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "functional.hpp"
#include "point_configuration.hpp"

namespace pvlab
{
//! (d-1)-dimensional boundary simplex of a hull (segment or triangle).
struct Facet
{
    std::vector<std::size_t> vertices;  //!< indices into the input points
    double measure = 0;  //!< length (d=2) or area (d=3)
    double dist0 = 0;  //!< distance from the origin to the facet hyperplane
    Point normal;  //!< outward unit normal
    double offset = 0;  //!< normal . x = offset on the supporting hyperplane
};

//! Convex hull of a configuration in d = 2 or 3.
struct HullPolytope
{
    std::size_t dim = 0;
    PointConfiguration points{2};  //!< copy of the input
    std::vector<std::size_t> vertices;  //!< sorted input indices
    std::vector<Facet> facets;

    //! Max signed distance of any input point beyond a facet plane.
    double max_violation() const;
    //! Max pairwise distance between hull vertices.
    double diameter() const;
};

/*!
 * Convex hull: monotone chain for d = 2 (CCW edges), incremental
 * beneath-beyond with triangulated facets for d = 3.
 *
 * Throws ErrorCode::degenerate when the points are affinely dependent and
 * ErrorCode::invalid_argument for other dimensions.
 */
HullPolytope convex_hull(PointConfiguration const& config);

//! Distance from the origin to the simplex spanned by the given points.
double origin_simplex_distance(std::span<Point const> simplex);

//! (d-1)-volume of a simplex with d vertices embedded in R^d (d = 2, 3).
double simplex_measure(std::span<Point const> simplex);

//! Number of facets with dist0 == 0 hit by the 0^0 := 1 convention.
struct LpAreaDiagnostics
{
    std::size_t zero_distance_facets = 0;
};

//! A_p = sum over facets of dist0^{1-p} * measure, 0 <= p <= 1.
double lp_surface_area(HullPolytope const& hull, double p,
                       LpAreaDiagnostics* diagnostics = nullptr);

//! Hull debug dump {vertices: [...], facets: [{ids, measure, dist0}]}.
nlohmann::json hull_to_json(HullPolytope const& hull);

/*!
 * Simplex glued onto a base facet: base z_1..z_d plus apex z_{d+1}.
 *
 * Facet i (i < d) omits base vertex i and contains the apex; facet d is the
 * base. Face i (i < d) is the base face omitting vertex i. heights[i] is the
 * distance from the apex projection onto the base hyperplane to the affine
 * hull of face i.
 */
struct SimplexUpdate
{
    std::size_t dim = 0;
    std::vector<Point> base;
    Point apex;

    std::vector<double> rho;  //!< d + 1 facet hyperplane distances to the origin
    std::vector<double> facet_measure;  //!< d + 1 facet (d-1)-measures
    std::vector<double> face_measure;  //!< d face (d-2)-measures
    std::vector<double> heights;  //!< h_i
    double apex_height = 0;  //!< h-bar
    bool projection_inside_base = false;

    static SimplexUpdate make(std::span<Point const> base, Point apex);
};

//! Change of A_p when the simplex is added over its base facet.
double delta_p(SimplexUpdate const& update, double p);

//! (1/(d-1)) sum lambda(T_i) (sqrt(h_i^2 + hbar^2) - h_i).
double delta_height_term(SimplexUpdate const& update);

/*!
 * Both geometric inequalities bounding Delta_p for a simplex whose base is
 * the facet closest to the origin. slack = rhs - |lhs deviation|.
 */
struct Lemma43Report
{
    bool evaluated = false;
    std::string skip_reason;
    double deviation_first = 0;
    double bound_first = 0;
    double slack_first = 0;
    double deviation_second = 0;
    double bound_second = 0;
    double slack_second = 0;
};

Lemma43Report check_lemma43(SimplexUpdate const& update, double p, double p1,
                            double p2);

/*!
 * A_p (or s * A_p) of the hull of a sample in the unit ball.
 *
 * Configurations with fewer than d + 1 points or no full-dimensional hull
 * evaluate to 0 and bump degenerate_samples.
 */
struct PolytopeFunctional
{
    Functional functional;
    std::shared_ptr<std::atomic<std::size_t>> degenerate_samples;
};

PolytopeFunctional polytope_functional(double p, double intensity,
                                       bool scaled);
}  // namespace pvlab
