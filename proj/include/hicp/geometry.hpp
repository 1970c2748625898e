#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"

namespace hicp {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Per-triangle data. Slot k of an edge array refers to the edge joining vertex k and vertex k+1.
struct TriTetra {
    std::array<double, 3> a{}; // truncated edge lengths, 0 on tangent edges
    std::array<double, 3> b{}; // vertex coordinates, 0 on point circles
};

struct TriLengths {
    std::array<double, 3> l{};
    std::array<double, 3> r{};
};

struct TriangleAngles {
    std::array<double, 3> alpha{};
    std::array<double, 3> beta{};
};

enum class CircleKind { Circle, Horocycle, Hypercycle };

inline const char* to_string(CircleKind k)
{
    switch (k) {
    case CircleKind::Circle: return "circle";
    case CircleKind::Horocycle: return "horocycle";
    case CircleKind::Hypercycle: return "hypercycle";
    }
    return "circle";
}

struct FaceCircleData {
    double R = 0;                  // NaN unless kind == Circle
    std::array<double, 3> dist{}; // centre-to-vertex distances, NaN unless kind == Circle
    CircleKind kind = CircleKind::Circle;
};

inline double acosh1p(double x) { return std::log1p(x + std::sqrt(x * (x + 2))); }
inline double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

// ---------------------------------------------------------------------------
// Inversive coordinates: oriented generalized circles of the plane as unit spacelike vectors of R^{3,1}.
// Disc with centre c, radius p: (c/p, (|c|^2-p^2-1)/(2p), (|c|^2-p^2+1)/(2p)); points are null vectors.
// For oriented discs D1, D2 meeting at a lens of angle g: <D1,D2> = -cos(g).

namespace inv {

using Vec4 = std::array<double, 4>;

inline double dot(const Vec4& x, const Vec4& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]; }

// Angle g with <x,y> = -cos(g) for unit spacelike x, y; half-angle forms near 0 and pi.
inline double lens_angle(const Vec4& x, const Vec4& y)
{
    double c = -dot(x, y);
    if (std::abs(c) <= 0.5)
        return std::acos(c);
    if (c > 0) {
        Vec4 s{x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]};
        return 2 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, dot(s, s))) / 2));
    }
    Vec4 d{x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]};
    return std::numbers::pi - 2 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, dot(d, d))) / 2));
}

inline Vec4 point(cplx z)
{
    double n = std::norm(z);
    return {z.real(), z.imag(), (n - 1) / 2, (n + 1) / 2};
}

inline constexpr Vec4 infinity{0, 0, 1, 1};
inline constexpr Vec4 unit_disk{0, 0, -1, 0};

inline Vec4 scale(const Vec4& v, double s) { return {v[0] * s, v[1] * s, v[2] * s, v[3] * s}; }

inline Vec4 add(const Vec4& x, const Vec4& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }

inline Vec4 disc(cplx c, double radius)
{
    double n = std::norm(c) - radius * radius;
    return {c.real() / radius, c.imag() / radius, (n - 1) / (2 * radius), (n + 1) / (2 * radius)};
}

// Vector orthogonal to a, b, c in the Lorentz form.
inline Vec4 kernel(Vec4 a, Vec4 b, Vec4 c)
{
    auto prep = [](Vec4& v) {
        v[3] = -v[3];
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
        if (n > 0)
            v = scale(v, 1 / n);
    };
    prep(a);
    prep(b);
    prep(c);
    auto det3 = [&](int i, int j, int k) {
        return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i]);
    };
    return {-det3(1, 2, 3), det3(0, 2, 3), -det3(0, 1, 3), det3(0, 1, 2)};
}

inline Vec4 normalized(const Vec4& v)
{
    double n = dot(v, v);
    if (!(n > 0))
        fail(ErrorKind::InvariantViolation, "degenerate circle vector");
    return scale(v, 1 / std::sqrt(n));
}

struct PlaneCircle {
    cplx center;
    double radius; // negative for the exterior orientation; infinite for lines
};

inline PlaneCircle to_plane(const Vec4& v)
{
    double s = v[3] - v[2];
    if (s == 0)
        return {cplx(0, 0), std::numeric_limits<double>::infinity()};
    return {cplx(v[0], v[1]) / s, 1 / s};
}

} // namespace inv

// ---------------------------------------------------------------------------
// Models

inline double hyp_distance(cplx z, cplx w)
{
    double q = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return 2 * std::atanh(std::min(q, 1.0));
}

// Disk automorphism sending p to 0.
inline cplx mobius_to_origin(cplx p, cplx z) { return (z - p) / (1.0 - std::conj(p) * z); }
inline cplx mobius_from_origin(cplx p, cplx z) { return (z + p) / (1.0 + std::conj(p) * z); }

// Euclidean circle in the disk of the hyperbolic circle with centre p and radius r.
inline inv::PlaneCircle hyperbolic_circle_in_disk(cplx p, double r)
{
    double d = hyp_distance(0, p);
    cplx u = std::abs(p) > 0 ? p / std::abs(p) : cplx(1, 0);
    double e1 = std::tanh((d - r) / 2), e2 = std::tanh((d + r) / 2);
    return {u * ((e1 + e2) / 2), (e2 - e1) / 2};
}

// Unnormalized inversive vector of a vertex circle; continuous as the radius tends to zero.
inline inv::Vec4 vertex_circle_vector(cplx p, double r, Geometry g)
{
    inv::Vec4 P = inv::point(p);
    if (r == 0)
        return P;
    if (g == Geometry::Euclidean)
        return inv::add(P, inv::scale(inv::infinity, -r * r / 2));
    double s = std::sinh(r / 2);
    return inv::add(P, inv::scale(inv::unit_disk, 2 * s * s * inv::dot(P, inv::unit_disk)));
}

// Oriented geodesic through p, q bounding the side that does not contain w.
inline inv::Vec4 edge_vector(cplx p, cplx q, cplx w, Geometry g)
{
    inv::Vec4 H;
    if (g == Geometry::Euclidean) {
        cplx d = q - p;
        d /= std::abs(d);
        cplx n(d.imag(), -d.real());
        double s = n.real() * p.real() + n.imag() * p.imag();
        H = {n.real(), n.imag(), s, s};
    } else {
        H = inv::normalized(inv::kernel(inv::point(p), inv::point(q), inv::unit_disk));
    }
    if (inv::dot(inv::point(w), H) > 0)
        H = inv::scale(H, -1);
    return H;
}

// Face circle of a placed decorated triangle, as a unit vector oriented towards its disc.
inline inv::Vec4 face_vector(const std::array<cplx, 3>& p, const std::array<double, 3>& r, Geometry g)
{
    inv::Vec4 F = inv::normalized(inv::kernel(vertex_circle_vector(p[0], r[0], g), vertex_circle_vector(p[1], r[1], g),
                                              vertex_circle_vector(p[2], r[2], g)));
    bool flip = g == Geometry::Euclidean ? (F[3] - F[2] < 0) : (inv::dot(F, inv::unit_disk) < 0);
    return flip ? inv::scale(F, -1) : F;
}

// ---------------------------------------------------------------------------
// Coordinate conversions (edge and vertex level)

inline double psi_radius(double b, bool point, Geometry g)
{
    if (point)
        return 0;
    if (g == Geometry::Euclidean)
        return std::exp(-b);
    if (!(b > 0))
        fail(ErrorKind::DomainError, "hyperbolic vertex coordinate must be positive");
    return std::asinh(1 / std::sinh(b));
}

inline double psi_length(double a, double bu, double bv, bool pu, bool pv, bool tangent, Geometry g)
{
    if (pv && !pu)
        return psi_length(a, bv, bu, pv, pu, tangent, g);
    if (g == Geometry::Euclidean) {
        if (pu && pv)
            return std::exp(a / 2);
        double rv = std::exp(-bv);
        if (pu)
            return std::sqrt(rv * rv + std::exp(a) * rv);
        double ru = std::exp(-bu);
        if (tangent)
            return ru + rv;
        double sh = std::sinh(a / 2);
        return std::sqrt((ru + rv) * (ru + rv) + 4 * ru * rv * sh * sh);
    }
    if (pu && pv)
        return 2 * std::asinh(std::exp(a / 2));
    double rv = psi_radius(bv, false, g);
    if (pu)
        return std::acosh((std::exp(a) + std::cosh(bv)) / std::sinh(bv));
    double ru = psi_radius(bu, false, g);
    if (tangent)
        return ru + rv;
    double sh = std::sinh(a / 2);
    return std::acosh(std::cosh(ru + rv) + 2 * sh * sh / (std::sinh(bu) * std::sinh(bv)));
}

inline double psi_inv_radius(double r, bool point, Geometry g)
{
    if (point)
        return 0;
    if (!(r > 0))
        fail(ErrorKind::InvariantViolation, "vertex radius must be positive");
    return g == Geometry::Euclidean ? -std::log(r) : std::asinh(1 / std::sinh(r));
}

inline double psi_inv_length(double l, double ru, double rv, bool pu, bool pv, bool tangent, Geometry g)
{
    if (pv && !pu)
        return psi_inv_length(l, rv, ru, pv, pu, tangent, g);
    if (!(l > 0))
        fail(ErrorKind::InvariantViolation, "edge length must be positive");
    if (tangent)
        return 0;
    if (g == Geometry::Euclidean) {
        if (pu && pv)
            return 2 * std::log(l);
        if (pu) {
            if (!(l > rv))
                fail(ErrorKind::InvariantViolation, "edge length must exceed the vertex radius");
            return std::log((l - rv) * (l + rv) / rv);
        }
        double s = ru + rv;
        if (!(l > s))
            fail(ErrorKind::InvariantViolation, "edge length must exceed the sum of radii");
        return acosh1p((l - s) * (l + s) / (2 * ru * rv));
    }
    if (pu && pv)
        return 2 * std::log(std::sinh(l / 2));
    if (pu) {
        if (!(l > rv))
            fail(ErrorKind::InvariantViolation, "edge length must exceed the vertex radius");
        return std::log(2 * std::sinh((l + rv) / 2) * std::sinh((l - rv) / 2) / std::sinh(rv));
    }
    double s = ru + rv;
    if (!(l > s))
        fail(ErrorKind::InvariantViolation, "edge length must exceed the sum of radii");
    return acosh1p(2 * std::sinh((l + s) / 2) * std::sinh((l - s) / 2) / (std::sinh(ru) * std::sinh(rv)));
}

inline TriLengths psi(const TriTetra& tc, const TriangleTags& tags, Geometry g)
{
    TriLengths er;
    for (int k = 0; k < 3; ++k)
        er.r[k] = psi_radius(tc.b[k], tags.point[k], g);
    for (int k = 0; k < 3; ++k) {
        int u = k, v = (k + 1) % 3;
        er.l[k] = psi_length(tags.tangent[k] ? 0.0 : tc.a[k], tc.b[u], tc.b[v], tags.point[u], tags.point[v],
                             tags.tangent[k], g);
    }
    return er;
}

inline TriTetra psi_inv(const TriLengths& er, const TriangleTags& tags, Geometry g)
{
    TriTetra tc;
    for (int k = 0; k < 3; ++k)
        tc.b[k] = psi_inv_radius(er.r[k], tags.point[k], g);
    for (int k = 0; k < 3; ++k) {
        int u = k, v = (k + 1) % 3;
        tc.a[k] = psi_inv_length(er.l[k], er.r[u], er.r[v], tags.point[u], tags.point[v], tags.tangent[k], g);
    }
    return tc;
}

// Membership in ER for one triangle, with relative strictness margin.
inline bool in_er(const TriLengths& er, const TriangleTags& tags, double margin = 1e-12)
{
    for (int k = 0; k < 3; ++k) {
        if (tags.point[k] ? er.r[k] != 0 : !(er.r[k] > 0 && std::isfinite(er.r[k])))
            return false;
        if (!(er.l[k] > 0 && std::isfinite(er.l[k])))
            return false;
    }
    for (int k = 0; k < 3; ++k) {
        double s = er.r[k] + er.r[(k + 1) % 3];
        if (tags.tangent[k]) {
            if (std::abs(er.l[k] - s) > 1e-12 * er.l[k])
                return false;
        } else if (!(er.l[k] - s > margin * er.l[k])) {
            return false;
        }
    }
    double sum = er.l[0] + er.l[1] + er.l[2];
    for (int k = 0; k < 3; ++k)
        if (!(sum - 2 * er.l[k] > margin * sum))
            return false;
    return true;
}

// Vertex angles from the law of cosines; beta[k] sits between edges k and k+2.
inline std::array<double, 3> corner_angles(const std::array<double, 3>& l, Geometry g)
{
    std::array<double, 3> beta{};
    for (int k = 0; k < 3; ++k) {
        double x = l[k], y = l[(k + 2) % 3], z = l[(k + 1) % 3];
        double c = g == Geometry::Euclidean ? ((x - z) * (x + z) + y * y) / (2 * x * y)
                                            : (std::cosh(x) * std::cosh(y) - std::cosh(z)) / (std::sinh(x) * std::sinh(y));
        beta[k] = std::acos(clamp1(c));
    }
    return beta;
}

struct PlacedTriangle {
    std::array<cplx, 3> p;
    std::array<double, 3> r;    // radii in model units (Euclidean: divided by scale)
    std::array<double, 3> beta;
    double scale = 1;           // Euclidean model unit
};

// Vertex 0 at the origin, vertex 1 on the positive real axis, vertex 2 in the upper half plane.
inline PlacedTriangle place_canonical(const TriLengths& er, Geometry g)
{
    PlacedTriangle pt;
    pt.beta = corner_angles(er.l, g);
    if (g == Geometry::Euclidean) {
        pt.scale = (er.l[0] + er.l[1] + er.l[2]) / 3;
        pt.p = {cplx(0, 0), cplx(er.l[0] / pt.scale, 0), std::polar(er.l[2] / pt.scale, pt.beta[0])};
        for (int k = 0; k < 3; ++k)
            pt.r[k] = er.r[k] / pt.scale;
    } else {
        pt.p = {cplx(0, 0), cplx(std::tanh(er.l[0] / 2), 0), std::polar(std::tanh(er.l[2] / 2), pt.beta[0])};
        pt.r = er.r;
    }
    return pt;
}

inline TriangleAngles triangle_angles(const TriLengths& er, const TriangleTags& tags, Geometry g)
{
    if (!in_er(er, tags, 0.0))
        fail(ErrorKind::InvariantViolation, "edge lengths and radii violate the triangle invariants");
    PlacedTriangle pt = place_canonical(er, g);
    inv::Vec4 F = face_vector(pt.p, pt.r, g);
    TriangleAngles ta;
    ta.beta = pt.beta;
    for (int k = 0; k < 3; ++k) {
        if (tags.tangent[k]) {
            ta.alpha[k] = 0;
            continue;
        }
        inv::Vec4 H = edge_vector(pt.p[k], pt.p[(k + 1) % 3], pt.p[(k + 2) % 3], g);
        ta.alpha[k] = inv::lens_angle(F, H);
    }
    return ta;
}

inline FaceCircleData face_circle(const TriLengths& er, const TriangleTags& tags, Geometry g)
{
    if (!in_er(er, tags, 0.0))
        fail(ErrorKind::InvariantViolation, "edge lengths and radii violate the triangle invariants");
    PlacedTriangle pt = place_canonical(er, g);
    inv::Vec4 F = face_vector(pt.p, pt.r, g);
    FaceCircleData fc;
    inv::PlaneCircle pc = inv::to_plane(F);
    if (g == Geometry::Euclidean) {
        fc.R = pc.radius * pt.scale;
        for (int k = 0; k < 3; ++k)
            fc.dist[k] = std::abs(pt.p[k] - pc.center) * pt.scale;
        return fc;
    }
    double tau = inv::dot(F, inv::unit_disk);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(tau - 1) <= 1e-12) {
        fc.kind = CircleKind::Horocycle;
    } else if (tau < 1) {
        fc.kind = CircleKind::Hypercycle;
    }
    if (fc.kind != CircleKind::Circle) {
        fc.R = nan;
        fc.dist = {nan, nan, nan};
        return fc;
    }
    double m = std::abs(pc.center);
    cplx u = m > 0 ? pc.center / m : cplx(1, 0);
    double d1 = 2 * std::atanh(m - pc.radius), d2 = 2 * std::atanh(m + pc.radius);
    fc.R = (d2 - d1) / 2;
    cplx centre = u * std::tanh((d1 + d2) / 4);
    for (int k = 0; k < 3; ++k)
        fc.dist[k] = hyp_distance(pt.p[k], centre);
    return fc;
}

inline TriangleAngles tetra_angles(const TriTetra& tc, const TriangleTags& tags, Geometry g)
{
    TriLengths er = psi(tc, tags, g);
    if (!in_er(er, tags))
        fail(ErrorKind::NotInTE, "coordinates leave the space of tetrahedral edge lengths");
    return triangle_angles(er, tags, g);
}

// Half-angle form of the law of cosines; stays accurate when the two face circles nearly coincide.
inline double dual_edge_length(double R, double R2, double theta, Geometry g)
{
    double c2 = std::cos(theta / 2);
    if (g == Geometry::Euclidean)
        return std::sqrt((R - R2) * (R - R2) + 4 * R * R2 * c2 * c2);
    double sh = std::sinh((R - R2) / 2);
    return 2 * std::asinh(std::sqrt(sh * sh + std::sinh(R) * std::sinh(R2) * c2 * c2));
}

inline double vertex_dual_length(double R, double r, Geometry g)
{
    if (g == Geometry::Euclidean)
        return std::sqrt(R * R + r * r);
    return std::acosh(std::cosh(R) * std::cosh(r));
}

// Euclidean scaling action on one triangle; hyperbolic coordinates have no gauge.
inline TriTetra act_local(const TriTetra& tc, const TriangleTags& tags, double t, Geometry g)
{
    if (g == Geometry::Hyperbolic)
        return tc;
    TriTetra out = tc;
    for (int k = 0; k < 3; ++k) {
        if (!tags.point[k])
            out.b[k] -= t;
        if (!tags.tangent[k])
            out.a[k] += t * (int(tags.point[k]) + int(tags.point[(k + 1) % 3]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Angle space, reduced coordinates and the inverse map

inline bool in_angle_space(const TriangleAngles& ta, const TriangleTags& tags, Geometry g, double tol = 1e-9)
{
    for (int k = 0; k < 3; ++k) {
        if (!(ta.alpha[k] >= -tol && ta.alpha[k] < pi) || !(ta.beta[k] > 0 && ta.beta[k] < pi))
            return false;
        if (tags.tangent[k] && std::abs(ta.alpha[k]) > tol)
            return false;
        double corner = ta.beta[k] + ta.alpha[k] + ta.alpha[(k + 2) % 3];
        if (tags.point[k] ? std::abs(corner - pi) > tol : corner > pi + tol)
            return false;
    }
    double s = ta.beta[0] + ta.beta[1] + ta.beta[2];
    return g == Geometry::Euclidean ? std::abs(s - pi) <= tol : s < pi;
}

struct ReducedLayout {
    std::vector<int> alpha_edges;   // edge slots carried as coordinates
    std::vector<int> beta_vertices; // vertex slots carried as coordinates
    int gauge_vertex = -1;          // Euclidean: b fixed to 0 here, beta eliminated
    int gauge_edge = -1;            // Euclidean all-point triangles: a fixed to 0 here, alpha eliminated
};

inline ReducedLayout reduced_layout(const TriangleTags& tags, Geometry g)
{
    ReducedLayout rl;
    if (g == Geometry::Euclidean) {
        for (int k = 0; k < 3; ++k)
            if (!tags.point[k]) {
                rl.gauge_vertex = k;
                break;
            }
        if (rl.gauge_vertex < 0)
            rl.gauge_edge = 2;
    }
    for (int k = 0; k < 3; ++k)
        if (!tags.tangent[k] && k != rl.gauge_edge)
            rl.alpha_edges.push_back(k);
    for (int k = 0; k < 3; ++k)
        if (!tags.point[k] && k != rl.gauge_vertex)
            rl.beta_vertices.push_back(k);
    return rl;
}

inline std::vector<double> to_reduced(const TriangleAngles& ta, const ReducedLayout& rl)
{
    std::vector<double> x;
    for (int k : rl.alpha_edges)
        x.push_back(ta.alpha[k]);
    for (int k : rl.beta_vertices)
        x.push_back(ta.beta[k]);
    return x;
}

inline TriangleAngles from_reduced(const std::vector<double>& x, const ReducedLayout& rl, const TriangleTags& tags,
                                   Geometry g)
{
    TriangleAngles ta;
    std::size_t i = 0;
    for (int k : rl.alpha_edges)
        ta.alpha[k] = x[i++];
    if (rl.gauge_edge >= 0)
        ta.alpha[rl.gauge_edge] = pi - ta.alpha[(rl.gauge_edge + 1) % 3] - ta.alpha[(rl.gauge_edge + 2) % 3];
    for (int k : rl.beta_vertices)
        ta.beta[k] = x[i++];
    for (int k = 0; k < 3; ++k)
        if (tags.point[k])
            ta.beta[k] = pi - ta.alpha[k] - ta.alpha[(k + 2) % 3];
    if (rl.gauge_vertex >= 0)
        ta.beta[rl.gauge_vertex] = pi - ta.beta[(rl.gauge_vertex + 1) % 3] - ta.beta[(rl.gauge_vertex + 2) % 3];
    (void)g;
    return ta;
}

// Shift a Euclidean triangle's coordinates into the gauge of the reduced layout.
inline TriTetra gauge_fix(const TriTetra& tc, const TriangleTags& tags, const ReducedLayout& rl, Geometry g)
{
    if (g == Geometry::Hyperbolic)
        return tc;
    if (rl.gauge_vertex >= 0)
        return act_local(tc, tags, tc.b[rl.gauge_vertex], g);
    return act_local(tc, tags, -tc.a[rl.gauge_edge] / 2, g);
}

// Coordinates dual to the reduced angles: dVol = -1/2 <reduced_dual, d reduced>.
inline std::vector<double> reduced_dual(const TriTetra& tc, const TriangleTags& tags, const ReducedLayout& rl, Geometry g)
{
    TriTetra f = gauge_fix(tc, tags, rl, g);
    std::vector<double> y;
    for (int k : rl.alpha_edges)
        y.push_back(f.a[k]);
    for (int k : rl.beta_vertices)
        y.push_back(f.b[k]);
    return y;
}

// Decorated triangle with prescribed angles (Euclidean result is normalized by the reduced gauge).
inline TriLengths angles_to_lengths(const TriangleAngles& ta, const TriangleTags& tags, Geometry g)
{
    const auto& be = ta.beta;
    TriLengths er;
    std::array<cplx, 3> p;
    if (g == Geometry::Euclidean) {
        for (int k = 0; k < 3; ++k)
            er.l[k] = std::sin(be[(k + 2) % 3]);
        p = {cplx(0, 0), cplx(er.l[0], 0), std::polar(er.l[2], be[0])};
        // face disc: centre c and radius q with n_k.c + q cos(alpha_k) = n_k.p_k
        double A[3][3], rhs[3];
        for (int k = 0; k < 3; ++k) {
            cplx d = p[(k + 1) % 3] - p[k];
            d /= std::abs(d);
            cplx n(d.imag(), -d.real());
            A[k][0] = n.real();
            A[k][1] = n.imag();
            A[k][2] = std::cos(ta.alpha[k]);
            rhs[k] = n.real() * p[k].real() + n.imag() * p[k].imag();
        }
        auto det = [](double M[3][3]) {
            return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                   M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
        };
        double D = det(A);
        double sol[3];
        for (int j = 0; j < 3; ++j) {
            double M[3][3];
            for (int i = 0; i < 3; ++i)
                for (int c = 0; c < 3; ++c)
                    M[i][c] = c == j ? rhs[i] : A[i][c];
            sol[j] = det(M) / D;
        }
        cplx centre(sol[0], sol[1]);
        double q = sol[2];
        if (!(q > 0))
            fail(ErrorKind::PathLeavesDomain, "angles do not determine a face circle");
        for (int k = 0; k < 3; ++k) {
            if (tags.point[k]) {
                er.r[k] = 0;
                continue;
            }
            double pw = std::norm(p[k] - centre) - q * q;
            if (!(pw > 0))
                fail(ErrorKind::PathLeavesDomain, "angles put a vertex inside the face circle");
            er.r[k] = std::sqrt(pw);
        }
        for (int k = 0; k < 3; ++k)
            if (tags.tangent[k])
                er.l[k] = er.r[k] + er.r[(k + 1) % 3];
        ReducedLayout rl = reduced_layout(tags, g);
        double s = rl.gauge_vertex >= 0 ? 1 / er.r[rl.gauge_vertex] : 1 / er.l[rl.gauge_edge];
        for (int k = 0; k < 3; ++k) {
            er.l[k] *= s;
            er.r[k] *= s;
        }
        return er;
    }
    for (int k = 0; k < 3; ++k) {
        double x = be[k], y = be[(k + 1) % 3], z = be[(k + 2) % 3];
        er.l[k] = std::acosh(std::max(1.0, (std::cos(x) * std::cos(y) + std::cos(z)) / (std::sin(x) * std::sin(y))));
    }
    p = {cplx(0, 0), cplx(std::tanh(er.l[0] / 2), 0), std::polar(std::tanh(er.l[2] / 2), be[0])};
    std::array<inv::Vec4, 3> H;
    for (int k = 0; k < 3; ++k)
        H[k] = edge_vector(p[k], p[(k + 1) % 3], p[(k + 2) % 3], g);
    // F = sum c_k H_k + tau U with <F, H_k> = -cos(alpha_k), <F, F> = 1
    double G[3][3], rhs[3];
    for (int i = 0; i < 3; ++i) {
        rhs[i] = -std::cos(ta.alpha[i]);
        for (int j = 0; j < 3; ++j)
            G[i][j] = inv::dot(H[i], H[j]);
    }
    auto det = [](double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double D = det(G);
    inv::Vec4 F{0, 0, 0, 0};
    for (int j = 0; j < 3; ++j) {
        double M[3][3];
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c)
                M[i][c] = c == j ? rhs[i] : G[i][c];
        F = inv::add(F, inv::scale(H[j], det(M) / D));
    }
    double t2 = 1 - inv::dot(F, F);
    if (!(t2 > 0))
        fail(ErrorKind::PathLeavesDomain, "angles do not determine a face circle");
    double tau = std::sqrt(t2);
    F = inv::add(F, inv::scale(inv::unit_disk, tau));
    for (int k = 0; k < 3; ++k) {
        if (tags.point[k]) {
            er.r[k] = 0;
            continue;
        }
        inv::Vec4 P = inv::point(p[k]);
        double x = -inv::dot(P, F) / (inv::dot(P, inv::unit_disk) * tau); // cosh r - 1
        if (!(x > 0))
            fail(ErrorKind::PathLeavesDomain, "angles put a vertex inside the face circle");
        er.r[k] = acosh1p(x);
    }
    for (int k = 0; k < 3; ++k)
        if (tags.tangent[k])
            er.l[k] = er.r[k] + er.r[(k + 1) % 3];
    return er;
}

inline TriTetra angles_to_tetra(const TriangleAngles& ta, const TriangleTags& tags, Geometry g)
{
    TriLengths er = angles_to_lengths(ta, tags, g);
    TriTetra tc;
    for (int k = 0; k < 3; ++k)
        tc.b[k] = psi_inv_radius(er.r[k], tags.point[k], g);
    for (int k = 0; k < 3; ++k) {
        int u = k, v = (k + 1) % 3;
        if (tags.tangent[k]) {
            tc.a[k] = 0;
            continue;
        }
        double s = er.r[u] + er.r[v];
        if (!tags.point[u] && !tags.point[v] && !(er.l[k] > s))
            fail(ErrorKind::PathLeavesDomain, "reconstructed vertex circles overlap");
        tc.a[k] = psi_inv_length(er.l[k], er.r[u], er.r[v], tags.point[u], tags.point[v], false, g);
    }
    return gauge_fix(tc, tags, reduced_layout(tags, g), g);
}

// ---------------------------------------------------------------------------
// Reference constants and volume

struct ReferenceRadii {
    double r;   // vertex radius
    double eps; // half the gap between neighbouring vertex circles
};

inline ReferenceRadii reference_radii(Geometry g)
{
    if (g == Geometry::Euclidean)
        return {1.0, 0.25};
    return {std::asinh(0.1), std::asinh(0.125)};
}

inline TriLengths reference_triangle(const TriangleTags& tags, Geometry g)
{
    auto [r, eps] = reference_radii(g);
    int tangent = int(tags.tangent[0]) + int(tags.tangent[1]) + int(tags.tangent[2]);
    // two tangent edges of length 2r leave room for less than 4r on the third
    double free = tangent == 2 ? std::min(2 * (r + eps), 3 * r) : 2 * (r + eps);
    TriLengths er;
    for (int k = 0; k < 3; ++k) {
        er.r[k] = tags.point[k] ? 0 : r;
        er.l[k] = tags.tangent[k] ? 2 * r : free;
    }
    return er;
}

// Volume of the regular ideal tetrahedron.
inline constexpr double regular_ideal_volume = 1.01494160640965362502;

struct VolumeOptions {
    double tol = 1e-9;
    unsigned max_depth = 15;
};

// Volume relative to the class reference triangle (absolute for all-point Euclidean triangles).
inline double tetra_volume(const TriangleAngles& ta, const TriangleTags& tags, Geometry g, const VolumeOptions& opt = {})
{
    if (!in_angle_space(ta, tags, g, 1e-9))
        fail(ErrorKind::DomainError, "angles are outside the decorated-triangle angle space");
    TriangleAngles ref = triangle_angles(reference_triangle(tags, g), tags, g);
    TriangleAngles d;
    for (int k = 0; k < 3; ++k) {
        d.alpha[k] = ta.alpha[k] - ref.alpha[k];
        d.beta[k] = ta.beta[k] - ref.beta[k];
    }
    auto integrand = [&](double s) {
        TriangleAngles x;
        for (int k = 0; k < 3; ++k) {
            x.alpha[k] = tags.tangent[k] ? 0 : ref.alpha[k] + s * d.alpha[k];
            x.beta[k] = ref.beta[k] + s * d.beta[k];
        }
        TriTetra tc = angles_to_tetra(x, tags, g);
        double w = 0;
        for (int k = 0; k < 3; ++k) {
            if (!tags.tangent[k])
                w += tc.a[k] * d.alpha[k];
            if (!tags.point[k])
                w += tc.b[k] * d.beta[k];
        }
        return -0.5 * w;
    };
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, opt.max_depth, opt.tol,
                                                                              &err);
    bool ideal = g == Geometry::Euclidean && tags.point[0] && tags.point[1] && tags.point[2];
    return ideal ? v + regular_ideal_volume : v;
}

} // namespace hicp
