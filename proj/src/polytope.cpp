// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "pvlab/error.hpp"
#include "pvlab/window.hpp"

namespace pvlab
{
namespace
{
Point sub(std::span<double const> a, std::span<double const> b)
{
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        out[i] = a[i] - b[i];
    }
    return out;
}

double dot(std::span<double const> a, std::span<double const> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        s += a[i] * b[i];
    }
    return s;
}

Point cross(std::span<double const> a, std::span<double const> b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

Point to_point(std::span<double const> x)
{
    return Point(x.begin(), x.end());
}

//! Coefficients c with x ~ v0 + sum c_j (v_j - v0), plus the residual norm.
struct AffineFit
{
    Eigen::VectorXd coeff;
    double residual = 0;
};

AffineFit affine_fit(std::span<Point const> verts, std::span<double const> x)
{
    std::size_t const k = verts.size() - 1;
    std::size_t const d = x.size();
    AffineFit fit;
    Point r0 = sub(x, verts[0]);
    if (k == 0)
    {
        fit.residual = std::sqrt(dot(r0, r0));
        return fit;
    }
    Eigen::MatrixXd e(d, k);
    for (std::size_t j = 0; j < k; ++j)
    {
        for (std::size_t a = 0; a < d; ++a)
        {
            e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j))
                = verts[j + 1][a] - verts[0][a];
        }
    }
    Eigen::Map<Eigen::VectorXd const> rhs(r0.data(),
                                          static_cast<Eigen::Index>(d));
    fit.coeff = e.colPivHouseholderQr().solve(rhs);
    fit.residual = (rhs - e * fit.coeff).norm();
    return fit;
}

//! Closest point of a triangle to the origin (Ericson, dot products only).
Point closest_on_triangle(Point const& a, Point const& b, Point const& c)
{
    std::size_t const d = a.size();
    auto lerp = [&](Point const& base, Point const& e1, double t1,
                    Point const& e2, double t2) {
        Point out(d);
        for (std::size_t i = 0; i < d; ++i)
        {
            out[i] = base[i] + t1 * e1[i] + t2 * e2[i];
        }
        return out;
    };
    Point const ab = sub(b, a);
    Point const ac = sub(c, a);
    Point const zero(d, 0.0);
    Point const ap = sub(zero, a);
    double const d1 = dot(ab, ap);
    double const d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0)
    {
        return a;
    }
    Point const bp = sub(zero, b);
    double const d3 = dot(ab, bp);
    double const d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3)
    {
        return b;
    }
    double const vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0)
    {
        return lerp(a, ab, d1 / (d1 - d3), ac, 0);
    }
    Point const cp = sub(zero, c);
    double const d5 = dot(ab, cp);
    double const d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6)
    {
        return c;
    }
    double const vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0)
    {
        return lerp(a, ab, 0, ac, d2 / (d2 - d6));
    }
    double const va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    {
        Point const bc = sub(c, b);
        return lerp(b, bc, (d4 - d3) / ((d4 - d3) + (d5 - d6)), bc, 0);
    }
    double const denom = 1 / (va + vb + vc);
    return lerp(a, ab, vb * denom, ac, vc * denom);
}

void check_dim(std::size_t d)
{
    if (d != 2 && d != 3)
    {
        fail(ErrorCode::invalid_argument,
             "convex hulls are supported in dimension 2 and 3, got "
                 + std::to_string(d));
    }
}

Facet make_facet(PointConfiguration const& pts, std::vector<std::size_t> ids,
                 Point normal)
{
    std::vector<Point> verts;
    for (std::size_t id : ids)
    {
        verts.push_back(to_point(pts.point(id)));
    }
    double const len = std::sqrt(dot(normal, normal));
    for (double& v : normal)
    {
        v /= len;
    }
    Facet f;
    f.vertices = std::move(ids);
    f.measure = simplex_measure(verts);
    f.offset = dot(normal, verts[0]);
    f.dist0 = std::abs(f.offset);
    f.normal = std::move(normal);
    return f;
}

void hull_2d(HullPolytope& hull)
{
    PointConfiguration const& pts = hull.points;
    std::size_t const n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto const pa = pts.point(a);
        auto const pb = pts.point(b);
        if (pa[0] != pb[0])
        {
            return pa[0] < pb[0];
        }
        if (pa[1] != pb[1])
        {
            return pa[1] < pb[1];
        }
        return a < b;
    });
    auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
        auto const po = pts.point(o);
        auto const pa = pts.point(a);
        auto const pb = pts.point(b);
        return (pa[0] - po[0]) * (pb[1] - po[1])
               - (pa[1] - po[1]) * (pb[0] - po[0]);
    };
    std::vector<std::size_t> chain(2 * n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        while (m >= 2 && turn(chain[m - 2], chain[m - 1], order[i]) <= 0)
        {
            --m;
        }
        chain[m++] = order[i];
    }
    for (std::size_t i = n - 1, lower = m + 1; i-- > 0;)
    {
        while (m >= lower && turn(chain[m - 2], chain[m - 1], order[i]) <= 0)
        {
            --m;
        }
        chain[m++] = order[i];
    }
    chain.resize(m - 1);
    if (chain.size() < 3)
    {
        fail(ErrorCode::degenerate, "all points are collinear");
    }
    for (std::size_t i = 0; i < chain.size(); ++i)
    {
        std::size_t const a = chain[i];
        std::size_t const b = chain[(i + 1) % chain.size()];
        Point const e = sub(pts.point(b), pts.point(a));
        hull.facets.push_back(make_facet(pts, {a, b}, {e[1], -e[0]}));
    }
}

struct Face
{
    std::array<std::size_t, 3> v;
    Point normal;
    double offset;
};

void hull_3d(HullPolytope& hull)
{
    PointConfiguration const& pts = hull.points;
    std::size_t const n = pts.size();
    auto p = [&](std::size_t i) { return pts.point(i); };

    double scale = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        scale = std::max(scale, distance(p(i), p(0)));
    }
    if (!(scale > 0))
    {
        fail(ErrorCode::degenerate, "all points coincide");
    }
    double const eps = 1e-12 * scale;

    std::size_t i1 = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (distance(p(i), p(0)) > distance(p(i1), p(0)))
        {
            i1 = i;
        }
    }
    Point const u = sub(p(i1), p(0));
    std::size_t i2 = 0;
    double best = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        Point const c = cross(u, sub(p(i), p(0)));
        double const area = std::sqrt(dot(c, c));
        if (area > best)
        {
            best = area;
            i2 = i;
        }
    }
    if (!(best > eps * scale))
    {
        fail(ErrorCode::degenerate, "all points are collinear");
    }
    Point const nrm = cross(u, sub(p(i2), p(0)));
    std::size_t i3 = 0;
    best = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const h = std::abs(dot(nrm, sub(p(i), p(0))));
        if (h > best)
        {
            best = h;
            i3 = i;
        }
    }
    if (!(best > eps * scale * scale))
    {
        fail(ErrorCode::degenerate, "all points are coplanar");
    }

    Point centroid(3, 0.0);
    for (std::size_t id : {std::size_t{0}, i1, i2, i3})
    {
        for (std::size_t a = 0; a < 3; ++a)
        {
            centroid[a] += p(id)[a] / 4;
        }
    }
    auto make_face = [&](std::size_t a, std::size_t b, std::size_t c) {
        Point nn = cross(sub(p(b), p(a)), sub(p(c), p(a)));
        double const len = std::sqrt(dot(nn, nn));
        for (double& v : nn)
        {
            v /= len;
        }
        return Face{{a, b, c}, nn, dot(nn, p(a))};
    };
    std::vector<Face> faces;
    std::array<std::size_t, 4> const tet{0, i1, i2, i3};
    for (std::size_t skip = 0; skip < 4; ++skip)
    {
        std::array<std::size_t, 3> f{};
        std::size_t m = 0;
        for (std::size_t j = 0; j < 4; ++j)
        {
            if (j != skip)
            {
                f[m++] = tet[j];
            }
        }
        Face face = make_face(f[0], f[1], f[2]);
        if (dot(face.normal, centroid) - face.offset > 0)
        {
            face = make_face(f[0], f[2], f[1]);
        }
        faces.push_back(face);
    }

    std::vector<char> visible;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i == 0 || i == i1 || i == i2 || i == i3)
        {
            continue;
        }
        auto const x = p(i);
        visible.assign(faces.size(), 0);
        bool any = false;
        for (std::size_t f = 0; f < faces.size(); ++f)
        {
            if (dot(faces[f].normal, x) - faces[f].offset > eps)
            {
                visible[f] = 1;
                any = true;
            }
        }
        if (!any)
        {
            continue;
        }
        edges.clear();
        for (std::size_t f = 0; f < faces.size(); ++f)
        {
            if (visible[f])
            {
                auto const& v = faces[f].v;
                for (std::size_t e = 0; e < 3; ++e)
                {
                    edges.emplace(v[e], v[(e + 1) % 3]);
                }
            }
        }
        std::vector<Face> next;
        next.reserve(faces.size() + 2);
        for (std::size_t f = 0; f < faces.size(); ++f)
        {
            if (!visible[f])
            {
                next.push_back(faces[f]);
            }
        }
        for (auto const& [a, b] : edges)
        {
            if (!edges.contains({b, a}))
            {
                next.push_back(make_face(a, b, i));
            }
        }
        faces = std::move(next);
    }

    for (auto const& f : faces)
    {
        hull.facets.push_back(
            make_facet(pts, {f.v[0], f.v[1], f.v[2]}, f.normal));
    }
}

void require_p(double p)
{
    require(std::isfinite(p) && p >= 0 && p <= 1, "p must lie in [0, 1]");
}

double weight(double rho, double p)
{
    // pow(0, 0) == 1, which is the convention for p = 1.
    return std::pow(rho, 1 - p);
}
}  // namespace

double HullPolytope::max_violation() const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (auto const& f : facets)
    {
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            worst = std::max(worst, dot(f.normal, points.point(i)) - f.offset);
        }
    }
    return worst;
}

double HullPolytope::diameter() const
{
    double best = 0;
    for (std::size_t a = 0; a < vertices.size(); ++a)
    {
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
        {
            best = std::max(best, distance(points.point(vertices[a]),
                                           points.point(vertices[b])));
        }
    }
    return best;
}

HullPolytope convex_hull(PointConfiguration const& config)
{
    std::size_t const d = config.dim();
    check_dim(d);
    for (double v : config.coords())
    {
        require(std::isfinite(v), "hull points must be finite");
    }
    if (config.size() < d + 1)
    {
        fail(ErrorCode::degenerate,
             "a full-dimensional hull needs at least " + std::to_string(d + 1)
                 + " points, got " + std::to_string(config.size()));
    }
    HullPolytope hull;
    hull.dim = d;
    hull.points = config;
    if (d == 2)
    {
        hull_2d(hull);
    }
    else
    {
        hull_3d(hull);
    }
    std::set<std::size_t> verts;
    for (auto const& f : hull.facets)
    {
        verts.insert(f.vertices.begin(), f.vertices.end());
    }
    hull.vertices.assign(verts.begin(), verts.end());
    return hull;
}

double origin_simplex_distance(std::span<Point const> simplex)
{
    require(!simplex.empty() && simplex.size() <= 3,
            "origin distance supports simplices with 1 to 3 vertices");
    std::size_t const d = simplex[0].size();
    if (simplex.size() == 1)
    {
        return std::sqrt(dot(simplex[0], simplex[0]));
    }
    if (simplex.size() == 2)
    {
        Point const e = sub(simplex[1], simplex[0]);
        double const ee = dot(e, e);
        double t = ee > 0 ? -dot(simplex[0], e) / ee : 0;
        t = std::clamp(t, 0.0, 1.0);
        double s = 0;
        for (std::size_t a = 0; a < d; ++a)
        {
            double const c = simplex[0][a] + t * e[a];
            s += c * c;
        }
        return std::sqrt(s);
    }
    Point const c = closest_on_triangle(simplex[0], simplex[1], simplex[2]);
    return std::sqrt(dot(c, c));
}

double simplex_measure(std::span<Point const> simplex)
{
    require(!simplex.empty(), "empty simplex");
    std::size_t const k = simplex.size() - 1;
    if (k == 0)
    {
        return 1;
    }
    if (k == 1)
    {
        Point const e = sub(simplex[1], simplex[0]);
        return std::sqrt(dot(e, e));
    }
    if (k == 2 && simplex[0].size() == 3)
    {
        Point const c = cross(sub(simplex[1], simplex[0]),
                              sub(simplex[2], simplex[0]));
        return 0.5 * std::sqrt(dot(c, c));
    }
    std::size_t const d = simplex[0].size();
    Eigen::MatrixXd e(d, k);
    for (std::size_t j = 0; j < k; ++j)
    {
        for (std::size_t a = 0; a < d; ++a)
        {
            e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j))
                = simplex[j + 1][a] - simplex[0][a];
        }
    }
    double const gram = (e.transpose() * e).determinant();
    return std::sqrt(std::max(0.0, gram)) / std::tgamma(static_cast<double>(k) + 1);
}

double lp_surface_area(HullPolytope const& hull, double p,
                       LpAreaDiagnostics* diagnostics)
{
    require_p(p);
    double sum = 0;
    for (auto const& f : hull.facets)
    {
        if (f.dist0 == 0 && p == 1 && diagnostics != nullptr)
        {
            ++diagnostics->zero_distance_facets;
        }
        sum += weight(f.dist0, p) * f.measure;
    }
    return sum;
}

nlohmann::json hull_to_json(HullPolytope const& hull)
{
    nlohmann::json j;
    j["dim"] = hull.dim;
    j["vertices"] = nlohmann::json::array();
    for (std::size_t v : hull.vertices)
    {
        auto const x = hull.points.point(v);
        j["vertices"].push_back(
            {{"id", v}, {"x", std::vector<double>(x.begin(), x.end())}});
    }
    j["facets"] = nlohmann::json::array();
    for (auto const& f : hull.facets)
    {
        j["facets"].push_back(
            {{"ids", f.vertices}, {"measure", f.measure}, {"dist0", f.dist0}});
    }
    return j;
}

SimplexUpdate SimplexUpdate::make(std::span<Point const> base, Point apex)
{
    std::size_t const d = apex.size();
    check_dim(d);
    if (base.size() != d)
    {
        fail(ErrorCode::dimension_mismatch,
             "a simplex update in dimension " + std::to_string(d) + " needs "
                 + std::to_string(d) + " base vertices");
    }
    for (auto const& b : base)
    {
        if (b.size() != d)
        {
            fail(ErrorCode::dimension_mismatch, "base vertex has wrong dimension");
        }
    }

    SimplexUpdate u;
    u.dim = d;
    u.base.assign(base.begin(), base.end());
    u.apex = std::move(apex);

    double const base_size = simplex_measure(u.base);
    AffineFit const fit = affine_fit(u.base, u.apex);
    u.apex_height = fit.residual;
    double scale = 0;
    for (auto const& b : u.base)
    {
        scale = std::max(scale, distance(b, u.apex));
    }
    if (!(base_size > 1e-14 * std::pow(scale, static_cast<double>(d - 1)))
        || !(u.apex_height > 1e-12 * scale))
    {
        fail(ErrorCode::degenerate, "degenerate simplex");
    }

    Point proj = u.base[0];
    double bary0 = 1;
    u.projection_inside_base = true;
    for (std::size_t j = 0; j + 1 < d; ++j)
    {
        double const c = fit.coeff(static_cast<Eigen::Index>(j));
        for (std::size_t a = 0; a < d; ++a)
        {
            proj[a] += c * (u.base[j + 1][a] - u.base[0][a]);
        }
        bary0 -= c;
        u.projection_inside_base = u.projection_inside_base && c >= -1e-12;
    }
    u.projection_inside_base = u.projection_inside_base && bary0 >= -1e-12;

    for (std::size_t i = 0; i <= d; ++i)
    {
        std::vector<Point> facet;
        for (std::size_t j = 0; j < d; ++j)
        {
            if (j != i)
            {
                facet.push_back(u.base[j]);
            }
        }
        if (i < d)
        {
            facet.push_back(u.apex);
        }
        u.rho.push_back(affine_fit(facet, Point(d, 0.0)).residual);
        u.facet_measure.push_back(simplex_measure(facet));
    }
    for (std::size_t i = 0; i < d; ++i)
    {
        std::vector<Point> face;
        for (std::size_t j = 0; j < d; ++j)
        {
            if (j != i)
            {
                face.push_back(u.base[j]);
            }
        }
        u.face_measure.push_back(simplex_measure(face));
        u.heights.push_back(affine_fit(face, proj).residual);
    }
    return u;
}

double delta_p(SimplexUpdate const& update, double p)
{
    require_p(p);
    std::size_t const d = update.dim;
    require(update.rho.size() == d + 1, "simplex update is not initialised");
    double sum = 0;
    for (std::size_t i = 0; i < d; ++i)
    {
        sum += weight(update.rho[i], p) * update.facet_measure[i];
    }
    return sum - weight(update.rho[d], p) * update.facet_measure[d];
}

namespace
{
double height_sum(SimplexUpdate const& u)
{
    double sum = 0;
    double const hb = u.apex_height;
    for (std::size_t i = 0; i < u.dim; ++i)
    {
        double const h = u.heights[i];
        sum += u.face_measure[i] * (std::hypot(h, hb) - h);
    }
    return sum;
}
}  // namespace

double delta_height_term(SimplexUpdate const& update)
{
    return height_sum(update) / static_cast<double>(update.dim - 1);
}

Lemma43Report check_lemma43(SimplexUpdate const& update, double p, double p1,
                            double p2)
{
    Lemma43Report r;
    std::size_t const d = update.dim;
    auto skip = [&](std::string why) {
        r.skip_reason = std::move(why);
        return r;
    };
    if (!(p >= 0 && p <= 1 && p1 >= 0 && p1 <= 1 && p2 >= 0 && p2 <= 1))
    {
        return skip("exponents must lie in [0, 1]");
    }
    if (!(p1 < p2))
    {
        return skip("requires p1 < p2");
    }
    std::vector<Point> all(update.base);
    all.push_back(update.apex);
    for (auto const& z : all)
    {
        if (norm(z) > 1 + 1e-12)
        {
            return skip("vertex outside the unit ball");
        }
    }
    double const rb = update.rho[d];
    for (std::size_t i = 0; i < d; ++i)
    {
        if (update.rho[i] < rb)
        {
            return skip("base facet is not the facet closest to the origin");
        }
    }
    if (!(rb > 0))
    {
        return skip("base facet touches the origin");
    }
    if (!update.projection_inside_base)
    {
        return skip("apex projection lies outside the base facet");
    }

    double sum_all = 0;
    double sum_side = 0;
    double linear = 0;
    for (std::size_t i = 0; i <= d; ++i)
    {
        sum_all += update.facet_measure[i];
    }
    for (std::size_t i = 0; i < d; ++i)
    {
        sum_side += update.facet_measure[i];
        linear += (p2 - p1) * (update.rho[i] - rb) * update.facet_measure[i];
    }
    double const hs = height_sum(update);

    r.evaluated = true;
    r.deviation_first = std::abs(delta_p(update, p) - delta_height_term(update));
    r.bound_first = std::pow(rb, -p) * (1 - rb) * sum_all;
    r.slack_first = r.bound_first - r.deviation_first;

    r.deviation_second
        = std::abs(delta_p(update, p1) - delta_p(update, p2) - linear);
    r.bound_second = 2 * std::pow(rb, -p2 - 1) * (1 - rb) * (1 - rb) * sum_side
                     + std::pow(rb, -p2) * (1 - rb) * hs;
    r.slack_second = r.bound_second - r.deviation_second;
    return r;
}

PolytopeFunctional polytope_functional(double p, double intensity, bool scaled)
{
    require_p(p);
    require(std::isfinite(intensity) && intensity > 0,
            "polytope intensity must be positive");
    auto counter = std::make_shared<std::atomic<std::size_t>>(0);
    std::ostringstream label;
    label << (scaled ? "polytope_sA" : "polytope_A") << "[p=" << p
          << ",s=" << intensity << "]";
    Functional f(label.str(), [p, intensity, scaled, counter](
                                  PointConfiguration const& c) {
        if (c.size() < c.dim() + 1)
        {
            counter->fetch_add(1, std::memory_order_relaxed);
            return 0.0;
        }
        double a = 0;
        try
        {
            a = lp_surface_area(convex_hull(c), p);
        }
        catch (Error const& e)
        {
            if (e.code() != ErrorCode::degenerate)
            {
                throw;
            }
            counter->fetch_add(1, std::memory_order_relaxed);
            return 0.0;
        }
        return scaled ? intensity * a : a;
    });
    return {std::move(f), std::move(counter)};
}
}  // namespace pvlab
