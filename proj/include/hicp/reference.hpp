#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"
#include "hicp/geometry.hpp"
#include "hicp/solver.hpp"

namespace hicp {

// A face of the complex as seen by the reference construction: point[k] for vertex k,
// tangent[k] for the edge from vertex k to vertex k+1.
struct PolygonSpec {
    std::vector<bool> point;
    std::vector<bool> tangent;
    int size() const { return static_cast<int>(point.size()); }
};

inline PolygonSpec polygon_spec(const CellComplex& c, int f)
{
    PolygonSpec ps;
    for (std::size_t k = 0; k < c.faces[f].size(); ++k) {
        ps.point.push_back(c.is_point(c.faces[f][k]));
        ps.tangent.push_back(c.eclass[c.face_edges[f][k]] == EdgeClass::Tangent);
    }
    return ps;
}

// Edge length used by the reference pattern: 2r for tangent edges, 2(r + eps) otherwise.
// Using 2r on free edges at point vertices breaks the triangle inequality when two of them meet a free disk edge.
inline double reference_edge_length(bool tangent, Geometry g)
{
    auto [r, eps] = reference_radii(g);
    return tangent ? 2 * r : 2 * (r + eps);
}

// Distance from the face centre to a vertex when disk vertices sit at distance x.
inline double centre_distance(double x, bool point, Geometry g)
{
    if (!point)
        return x;
    double r = reference_radii(g).r;
    if (g == Geometry::Euclidean)
        return std::sqrt(std::max(0.0, (x - r) * (x + r)));
    return std::acosh(std::max(1.0, std::cosh(x) / std::cosh(r)));
}

// Angle at the centre subtended by a side of length L between vertices at distances d1, d2.
inline double central_angle(double d1, double d2, double L, Geometry g)
{
    double c = g == Geometry::Euclidean
                   ? (d1 * d1 + d2 * d2 - L * L) / (2 * d1 * d2)
                   : (std::cosh(d1) * std::cosh(d2) - std::cosh(L)) / (std::sinh(d1) * std::sinh(d2));
    return std::acos(clamp1(c));
}

inline double omega_total(const PolygonSpec& ps, double x, Geometry g)
{
    double s = 0;
    const int n = ps.size();
    for (int k = 0; k < n; ++k) {
        int j = (k + 1) % n;
        s += central_angle(centre_distance(x, ps.point[k], g), centre_distance(x, ps.point[j], g),
                           reference_edge_length(ps.tangent[k], g), g);
    }
    return s;
}

// Smallest x for which every side forms a nondegenerate triangle with the centre.
inline double omega_lower_bound(const PolygonSpec& ps, Geometry g)
{
    double r = reference_radii(g).r;
    const int n = ps.size();
    auto valid = [&](double x) {
        for (int k = 0; k < n; ++k) {
            int j = (k + 1) % n;
            double d1 = centre_distance(x, ps.point[k], g), d2 = centre_distance(x, ps.point[j], g);
            double L = reference_edge_length(ps.tangent[k], g);
            if (!(d1 + d2 > L) || !(std::abs(d1 - d2) < L))
                return false;
        }
        return true;
    };
    double lo = r, hi = 2 * r;
    while (!valid(hi))
        hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        double mid = (lo + hi) / 2;
        (valid(mid) ? hi : lo) = mid;
    }
    return hi;
}

// Side that degenerates first as x decreases; the centre crosses it when the angles cannot reach 2pi.
inline int outer_side(const PolygonSpec& ps, Geometry g)
{
    const int n = ps.size();
    double lo = omega_lower_bound(ps, g);
    if (omega_total(ps, lo, g) > 2 * std::numbers::pi)
        return -1;
    int best = 0;
    double widest = -1;
    for (int k = 0; k < n; ++k) {
        int j = (k + 1) % n;
        double a = central_angle(centre_distance(lo, ps.point[k], g), centre_distance(lo, ps.point[j], g),
                                 reference_edge_length(ps.tangent[k], g), g);
        if (a > widest) {
            widest = a;
            best = k;
        }
    }
    return best;
}

// Central angles in placement order; the outer side, if any, turns back by its own angle.
inline std::vector<double> central_angles(const PolygonSpec& ps, double x, Geometry g, int outer)
{
    const int n = ps.size();
    std::vector<double> a(n);
    for (int k = 0; k < n; ++k) {
        int j = (k + 1) % n;
        a[k] = central_angle(centre_distance(x, ps.point[k], g), centre_distance(x, ps.point[j], g),
                             reference_edge_length(ps.tangent[k], g), g);
        if (k == outer)
            a[k] = 2 * std::numbers::pi - a[k];
    }
    return a;
}

// Distance x* from the face centre to disk vertices for which the central angles close up.
inline double omega_solve(const PolygonSpec& ps, Geometry g)
{
    const int n = ps.size();
    if (n < 3)
        fail(ErrorKind::InvalidInput, "polygon needs at least three vertices");
    auto [r, eps] = reference_radii(g);
    bool all_tangent = true;
    for (int k = 0; k < n; ++k)
        all_tangent = all_tangent && ps.tangent[k];
    if (n == 4 && all_tangent)
        return g == Geometry::Euclidean ? std::sqrt(2.0) * r : std::asinh(std::sqrt(2.0) * std::sinh(r));
    if (n == 3) {
        TriLengths er;
        TriangleTags tags;
        for (int k = 0; k < 3; ++k) {
            tags.point[k] = ps.point[k];
            tags.tangent[k] = ps.tangent[k];
            er.r[k] = ps.point[k] ? 0 : r;
            er.l[k] = reference_edge_length(ps.tangent[k], g);
        }
        FaceCircleData fc = face_circle(er, tags, g);
        if (fc.kind != CircleKind::Circle)
            fail(ErrorKind::InvariantViolation, "reference triangle has no face circle");
        return vertex_dual_length(fc.R, r, g);
    }
    const double two_pi = 2 * std::numbers::pi;
    const int outer = outer_side(ps, g);
    auto f = [&](double x) {
        double s = -two_pi;
        for (double a : central_angles(ps, x, g, outer))
            s += a;
        return outer < 0 ? s : -s;
    };
    double lo = omega_lower_bound(ps, g);
    double hi = 2 * lo;
    while (f(hi) > 0)
        hi *= 2;
    if (!(f(lo * (1 + 1e-12)) > 0))
        fail(ErrorKind::InvariantViolation, "central angles cannot close the polygon");
    auto [a, b] = boost::math::tools::bisect(f, lo, hi, [](double u, double v) { return std::abs(v - u) <= 1e-15 * v; });
    return (a + b) / 2;
}

// Polygon vertices with the face centre at the origin (Poincare disk in hyperbolic geometry).
inline std::vector<cplx> reference_polygon(const PolygonSpec& ps, double x, Geometry g)
{
    const int n = ps.size();
    const int outer = outer_side(ps, g);
    std::vector<double> a = central_angles(ps, x, g, outer);
    std::vector<cplx> p(n);
    double phi = 0;
    for (int k = 0; k < n; ++k) {
        double d = centre_distance(x, ps.point[k], g);
        p[k] = std::polar(g == Geometry::Euclidean ? d : std::tanh(d / 2), phi);
        phi += a[k];
    }
    return p;
}

inline double model_distance(cplx p, cplx q, Geometry g)
{
    return g == Geometry::Euclidean ? std::abs(p - q) : hyp_distance(p, q);
}

// Lengths and radii of the reference pattern: every face is the regular-type polygon around its centre.
inline EdgeRadii reference_pattern(const Triangulation& t, Geometry g)
{
    const CellComplex& c = t.base;
    auto [r, eps] = reference_radii(g);
    EdgeRadii er;
    er.r.resize(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v)
        er.r[v] = t.is_point(v) ? 0 : r;
    er.l.assign(t.num_edges(), 0);
    for (int e = 0; e < c.num_edges(); ++e)
        er.l[e] = reference_edge_length(c.eclass[e] == EdgeClass::Tangent, g);
    for (int f = 0; f < c.num_faces(); ++f) {
        const auto& fv = c.faces[f];
        if (fv.size() == 3)
            continue;
        PolygonSpec ps = polygon_spec(c, f);
        std::vector<cplx> p = reference_polygon(ps, omega_solve(ps, g), g);
        for (int tri : t.face_tris[f]) {
            for (int k = 0; k < 3; ++k) {
                int e = t.tris[tri].e[k];
                if (e < c.num_edges())
                    continue;
                auto pos = [&](int v) {
                    for (std::size_t i = 0; i < fv.size(); ++i)
                        if (fv[i] == v)
                            return p[i];
                    fail(ErrorKind::InvariantViolation, "diagonal endpoint outside its face");
                };
                er.l[e] = model_distance(pos(t.edges[e][0]), pos(t.edges[e][1]), g);
            }
        }
    }
    return er;
}

// Solver starting point: the uniform reference lengths when they are admissible, else the reference pattern.
inline TetraCoords starting_coords(const Triangulation& t, Geometry g)
{
    if (in_er(t, reference_lengths(t, g)))
        return reference_coords(t, g);
    return project_gauge(t, psi_inv(t, reference_pattern(t, g), g), g);
}

} // namespace hicp
