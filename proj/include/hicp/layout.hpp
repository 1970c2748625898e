#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"
#include "hicp/geometry.hpp"
#include "hicp/solver.hpp"

namespace hicp {

struct ModelCircle {
    cplx center{0, 0};
    double radius = 0; // Euclidean radius in the model plane; infinite for lines
};

struct TriangleChart {
    int tri = -1;
    std::array<cplx, 3> p{};        // vertex positions in the development
    std::array<double, 3> r{};      // intrinsic vertex radii
    ModelCircle face;               // face circle drawn in the model
    CircleKind kind = CircleKind::Circle;
    cplx centre{0, 0};              // intrinsic centre of the face circle (NaN unless a circle)
    double R = 0;                   // intrinsic radius (NaN unless a circle)
    int parent = -1;                // development tree
    int via_edge = -1;
    double length_error = 0;        // chart edge lengths against l
    double orthogonality_error = 0; // centre-vertex distances against the dual length
};

struct EdgeRecord {
    int edge = -1;
    double theta = 0;     // from the two face circles
    double alpha_sum = 0; // from the triangle angles
    bool is_delaunay = false;
    bool is_redundant = false;
    double P_u = 0, P_v = 0; // limit points as distances from the first endpoint
    double dual_length = std::numeric_limits<double>::quiet_NaN();
    double dual_length_expected = std::numeric_limits<double>::quiet_NaN();
};

struct SurfaceLayout {
    Geometry geometry = Geometry::Euclidean;
    Triangulation tri;
    EdgeRadii lengths;
    std::vector<double> Theta; // cone angles
    std::vector<TriangleChart> charts;
    std::vector<EdgeRecord> edges;
    double merge_tol = 1e-6;
};

namespace detail {

// Canonical positions of a triangle read from slot s: vertex s at 0, vertex s+1 on the positive axis.
inline std::array<cplx, 3> canonical_positions(const TriLengths& er, int s, Geometry g, std::array<double, 3>& r)
{
    TriLengths rot;
    for (int k = 0; k < 3; ++k) {
        rot.l[k] = er.l[(s + k) % 3];
        rot.r[k] = er.r[(s + k) % 3];
    }
    PlacedTriangle pt = place_canonical(rot, g);
    std::array<cplx, 3> p;
    for (int k = 0; k < 3; ++k)
        p[k] = g == Geometry::Euclidean ? pt.p[k] * pt.scale : pt.p[k];
    r = rot.r;
    return p;
}

// Orientation-preserving isometry taking 0 to a and the positive axis towards b.
struct Isometry {
    Geometry g;
    cplx a, rot;
    cplx operator()(cplx z) const
    {
        return g == Geometry::Euclidean ? a + rot * z : mobius_from_origin(a, rot * z);
    }
};

inline Isometry frame(cplx a, cplx b, Geometry g)
{
    cplx d = g == Geometry::Euclidean ? b - a : mobius_to_origin(a, b);
    return {g, a, d / std::abs(d)};
}

inline ModelCircle circumcircle(cplx a, cplx b, cplx c)
{
    cplx ab = b - a, ac = c - a;
    double d = 2 * (ab.real() * ac.imag() - ab.imag() * ac.real());
    if (std::abs(d) < 1e-300)
        return {cplx(0, 0), std::numeric_limits<double>::infinity()};
    double nb = std::norm(ab), nc = std::norm(ac);
    cplx o(ac.imag() * nb - ab.imag() * nc, ab.real() * nc - ac.real() * nb);
    o /= d;
    return {a + o, std::abs(o)};
}

inline ModelCircle map_circle(const ModelCircle& m, const Isometry& f)
{
    if (f.g == Geometry::Euclidean)
        return {f(m.center), m.radius};
    if (!std::isfinite(m.radius))
        return m;
    std::array<cplx, 3> q;
    for (int k = 0; k < 3; ++k)
        q[k] = f(m.center + std::polar(m.radius, 2 * std::numbers::pi * k / 3));
    return circumcircle(q[0], q[1], q[2]);
}

inline double model_distance(cplx p, cplx q, Geometry g)
{
    return g == Geometry::Euclidean ? std::abs(p - q) : hyp_distance(p, q);
}

struct FaceGeometry {
    inv::Vec4 F;
    ModelCircle model;
    CircleKind kind;
    cplx centre;
    double R;
};

inline FaceGeometry face_geometry(const std::array<cplx, 3>& p, const std::array<double, 3>& r, Geometry g)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    FaceGeometry fg;
    fg.F = face_vector(p, r, g);
    inv::PlaneCircle pc = inv::to_plane(fg.F);
    fg.model = {pc.center, pc.radius};
    if (g == Geometry::Euclidean) {
        fg.kind = CircleKind::Circle;
        fg.centre = pc.center;
        fg.R = pc.radius;
        return fg;
    }
    double tau = inv::dot(fg.F, inv::unit_disk);
    fg.kind = std::abs(tau - 1) <= 1e-12 ? CircleKind::Horocycle : tau < 1 ? CircleKind::Hypercycle : CircleKind::Circle;
    if (fg.kind != CircleKind::Circle) {
        fg.centre = cplx(nan, nan);
        fg.R = nan;
        return fg;
    }
    double m = std::abs(pc.center);
    cplx u = m > 0 ? pc.center / m : cplx(1, 0);
    double d1 = 2 * std::atanh(m - pc.radius), d2 = 2 * std::atanh(m + pc.radius);
    fg.R = (d2 - d1) / 2;
    fg.centre = u * std::tanh((d1 + d2) / 4);
    return fg;
}

} // namespace detail

inline SurfaceLayout develop_lengths(const Triangulation& t, const EdgeRadii& er, Geometry g, double merge_tol = 1e-6)
{
    constexpr double pi = std::numbers::pi;
    if (!in_er(t, er))
        fail(ErrorKind::NotInTE, "lengths and radii leave the admissible region");
    SurfaceLayout sl;
    sl.geometry = g;
    sl.tri = t;
    sl.lengths = er;
    sl.merge_tol = merge_tol;
    RealizedAngles ra = realized_from_lengths(t, er, g);
    sl.Theta = ra.Theta;
    sl.charts.resize(t.num_tris());

    auto place = [&](int f, int slot, const detail::Isometry& iso) {
        TriangleChart& ch = sl.charts[f];
        ch.tri = f;
        std::array<double, 3> rr;
        std::array<cplx, 3> q = detail::canonical_positions(local_lengths(t, er, f), slot, g, rr);
        detail::FaceGeometry fg = detail::face_geometry(q, rr, g);
        for (int k = 0; k < 3; ++k) {
            ch.p[(slot + k) % 3] = iso(q[k]);
            ch.r[(slot + k) % 3] = rr[k];
        }
        ch.kind = fg.kind;
        ch.R = fg.R;
        ch.face = detail::map_circle(fg.model, iso);
        ch.centre = fg.kind == CircleKind::Circle ? iso(fg.centre) : fg.centre;
        for (int k = 0; k < 3; ++k) {
            double d = detail::model_distance(ch.p[k], ch.p[(k + 1) % 3], g);
            ch.length_error = std::max(ch.length_error, std::abs(d - er.l[t.tris[f].e[k]]));
            if (fg.kind == CircleKind::Circle) {
                double lam = detail::model_distance(ch.centre, ch.p[k], g);
                ch.orthogonality_error = std::max(ch.orthogonality_error, std::abs(lam - vertex_dual_length(ch.R, ch.r[k], g)));
            }
        }
    };

    // breadth-first development from triangle 0, crossing lower edge ids first
    std::vector<char> seen(t.num_tris(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    place(0, 0, {g, cplx(0, 0), cplx(1, 0)});
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int x, int y) { return t.tris[f].e[x] < t.tris[f].e[y]; });
        for (int k : order) {
            int e = t.tris[f].e[k];
            auto side = t.edge_tris[e][0][0] == f && t.edge_tris[e][0][1] == k ? t.edge_tris[e][1] : t.edge_tris[e][0];
            int nf = side[0], ns = side[1];
            if (seen[nf])
                continue;
            seen[nf] = 1;
            // the neighbour traverses the shared edge in the opposite direction
            cplx a = sl.charts[f].p[(k + 1) % 3], b = sl.charts[f].p[k];
            place(nf, ns, detail::frame(a, b, g));
            sl.charts[nf].parent = f;
            sl.charts[nf].via_edge = e;
            queue.push_back(nf);
        }
    }

    // per-edge records in a frame with the first endpoint at 0 and the second on the positive axis
    sl.edges.resize(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        EdgeRecord& rec = sl.edges[e];
        rec.edge = e;
        auto [fa, sa] = t.edge_tris[e][0];
        auto [fb, sb] = t.edge_tris[e][1];
        if (t.tris[fa].v[sa] != t.edges[e][0])
            std::swap(fa, fb), std::swap(sa, sb);
        std::array<double, 3> ra_, rb_;
        std::array<cplx, 3> pa = detail::canonical_positions(local_lengths(t, er, fa), sa, g, ra_);
        std::array<cplx, 3> pb = detail::canonical_positions(local_lengths(t, er, fb), sb, g, rb_);
        double L = pa[1].real();
        for (auto& z : pb)
            z = g == Geometry::Euclidean ? L - z : (L - z) / (1.0 - L * z);
        detail::FaceGeometry A = detail::face_geometry(pa, ra_, g), B = detail::face_geometry(pb, rb_, g);
        inv::Vec4 H = edge_vector(pa[0], pa[1], pa[2], g);
        TriangleAngles ta = triangle_angles(local_lengths(t, er, fa), t.tags(fa), g);
        TriangleAngles tb = triangle_angles(local_lengths(t, er, fb), t.tags(fb), g);
        rec.alpha_sum = ta.alpha[sa] + tb.alpha[sb];
        if (t.is_tangent(e)) {
            rec.theta = 0;
        } else {
            rec.theta = inv::lens_angle(A.F, B.F);
            inv::Vec4 d{B.F[0] - A.F[0], B.F[1] - A.F[1], B.F[2] - A.F[2], B.F[3] - A.F[3]};
            if (inv::dot(d, H) < 0)
                rec.theta = 2 * pi - rec.theta;
        }
        rec.is_delaunay = rec.theta >= 0 && rec.theta < pi;
        rec.is_redundant = std::abs(rec.theta - pi) <= merge_tol;
        // limit points of the two vertex circles: where the face circle meets the edge line
        const ModelCircle& m = A.model;
        double h2 = m.radius * m.radius - m.center.imag() * m.center.imag();
        double s = std::sqrt(std::max(0.0, h2));
        double x1 = m.center.real() - s, x2 = m.center.real() + s;
        auto along = [&](double x) { return g == Geometry::Euclidean ? x : 2 * std::atanh(x); };
        rec.P_u = along(x1);
        rec.P_v = along(x2);
        if (A.kind == CircleKind::Circle && B.kind == CircleKind::Circle) {
            rec.dual_length = detail::model_distance(A.centre, B.centre, g);
            rec.dual_length_expected = dual_edge_length(A.R, B.R, rec.theta, g);
        }
    }
    return sl;
}

inline SurfaceLayout develop(const Triangulation& t, const TetraCoords& tc, Geometry g, double merge_tol = 1e-6)
{
    return develop_lengths(t, psi(t, tc, g), g, merge_tol);
}

inline std::vector<EdgeRecord> delaunay_report(const SurfaceLayout& sl) { return sl.edges; }

// ---------------------------------------------------------------------------
// Merged pattern on the original cell complex

struct MergedFace {
    int face = -1;
    std::vector<cplx> p;     // vertex positions, in face order
    ModelCircle circle;
    CircleKind kind = CircleKind::Circle;
    cplx centre{0, 0};
    double R = 0;
    double circle_mismatch = 0; // spread of the fan triangles' face circles
    bool centre_inside = true;  // face centre in the closed polygon
};

struct MergedLayout {
    Geometry geometry = Geometry::Euclidean;
    CellComplex complex;
    std::vector<MergedFace> faces;
    std::vector<EdgeRecord> edges; // base edges
    std::vector<double> r, Theta;
};

inline MergedLayout merge_redundant(const SurfaceLayout& sl, double tol)
{
    const Triangulation& t = sl.tri;
    const Geometry g = sl.geometry;
    for (int e = t.base.num_edges(); e < t.num_edges(); ++e)
        if (std::abs(sl.edges[e].theta - std::numbers::pi) > tol)
            fail(ErrorKind::NonRedundantDiagonal,
                 "diagonal " + std::to_string(t.base.ids[t.edges[e][0]]) + "-" + std::to_string(t.base.ids[t.edges[e][1]]) +
                     " has theta " + std::to_string(sl.edges[e].theta));
    MergedLayout ml;
    ml.geometry = g;
    ml.complex = t.base;
    ml.edges.assign(sl.edges.begin(), sl.edges.begin() + t.base.num_edges());
    ml.r = sl.lengths.r;
    ml.Theta = sl.Theta;
    for (int f = 0; f < t.base.num_faces(); ++f) {
        MergedFace mf;
        mf.face = f;
        const auto& fv = t.base.faces[f];
        // fan triangles of a face are consecutive; develop them across the diagonals
        std::vector<std::array<cplx, 3>> pos;
        std::vector<detail::FaceGeometry> fgs;
        for (std::size_t i = 0; i < t.face_tris[f].size(); ++i) {
            int tr = t.face_tris[f][i];
            std::array<double, 3> rr;
            std::array<cplx, 3> q = detail::canonical_positions(local_lengths(t, sl.lengths, tr), 0, g, rr);
            detail::Isometry iso{g, cplx(0, 0), cplx(1, 0)};
            if (i > 0) {
                // shared diagonal: apex v0 and the previous triangle's last vertex
                iso = detail::frame(pos.back()[0], pos.back()[2], g);
            }
            std::array<cplx, 3> p;
            for (int k = 0; k < 3; ++k)
                p[k] = iso(q[k]);
            detail::FaceGeometry fg = detail::face_geometry(p, rr, g);
            pos.push_back(p);
            fgs.push_back(fg);
        }
        mf.p.resize(fv.size());
        for (std::size_t i = 0; i < pos.size(); ++i)
            for (int k = 0; k < 3; ++k) {
                int v = t.tris[t.face_tris[f][i]].v[k];
                mf.p[std::find(fv.begin(), fv.end(), v) - fv.begin()] = pos[i][k];
            }
        mf.circle = fgs[0].model;
        mf.kind = fgs[0].kind;
        mf.centre = fgs[0].centre;
        mf.R = fgs[0].R;
        for (const auto& fg : fgs) {
            double d = 0;
            for (int k = 0; k < 4; ++k)
                d = std::max(d, std::abs(fg.F[k] - fgs[0].F[k]));
            mf.circle_mismatch = std::max(mf.circle_mismatch, d);
        }
        if (mf.kind == CircleKind::Circle) {
            bool inside = false;
            for (std::size_t i = 0; i < pos.size() && !inside; ++i) {
                bool ok = true;
                for (int k = 0; k < 3; ++k) {
                    inv::Vec4 H = edge_vector(pos[i][k], pos[i][(k + 1) % 3], pos[i][(k + 2) % 3], g);
                    if (inv::dot(inv::point(mf.centre), H) > 1e-9)
                        ok = false;
                }
                inside = ok;
            }
            mf.centre_inside = inside;
        }
        ml.faces.push_back(std::move(mf));
    }
    return ml;
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet

struct GaussBonnet {
    double curvature_sum = 0; // sum of 2 pi - Theta
    double area = 0;          // hyperbolic: sum of triangle angle defects
    double expected = 0;      // 2 pi chi(S)
    double residual = 0;
};

inline GaussBonnet gauss_bonnet_check(const SurfaceLayout& sl)
{
    constexpr double pi = std::numbers::pi;
    const Triangulation& t = sl.tri;
    GaussBonnet gb;
    for (double th : sl.Theta)
        gb.curvature_sum += 2 * pi - th;
    gb.expected = 2 * pi * t.base.euler_characteristic();
    if (sl.geometry == Geometry::Hyperbolic)
        for (int f = 0; f < t.num_tris(); ++f) {
            std::array<double, 3> be = corner_angles(local_lengths(t, sl.lengths, f).l, Geometry::Hyperbolic);
            gb.area += pi - be[0] - be[1] - be[2];
        }
    gb.residual = gb.curvature_sum - gb.expected - gb.area;
    return gb;
}

// ---------------------------------------------------------------------------
// Export

struct SvgOptions {
    int size = 1000;
    bool face_circles = true;
    bool vertex_circles = true;
    bool labels = false;
};

namespace detail {

struct Viewport {
    double scale, ox, oy;
    double x(cplx z) const { return ox + scale * z.real(); }
    double y(cplx z) const { return oy - scale * z.imag(); }
};

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Poincare-disk geodesic between p and q as an SVG path segment.
inline std::string geodesic_path(cplx p, cplx q, const Viewport& vp)
{
    std::string s = "M" + fmt(vp.x(p)) + "," + fmt(vp.y(p)) + " ";
    double cross = p.real() * q.imag() - p.imag() * q.real();
    if (std::abs(cross) < 1e-9)
        return s + "L" + fmt(vp.x(q)) + "," + fmt(vp.y(q));
    // centre c of the orthogonal circle: 2 Re(conj(c) z) = |z|^2 + 1 for z = p, q
    double a1 = 2 * p.real(), b1 = 2 * p.imag(), c1 = std::norm(p) + 1;
    double a2 = 2 * q.real(), b2 = 2 * q.imag(), c2 = std::norm(q) + 1;
    double det = a1 * b2 - a2 * b1;
    cplx c((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
    double rad = std::sqrt(std::max(0.0, std::norm(c) - 1)) * vp.scale;
    int sweep = cross > 0 ? 0 : 1;
    return s + "A" + fmt(rad) + "," + fmt(rad) + " 0 0," + std::to_string(sweep) + " " + fmt(vp.x(q)) + "," + fmt(vp.y(q));
}

} // namespace detail

inline std::string export_svg(const SurfaceLayout& sl, const SvgOptions& opt = {})
{
    const Geometry g = sl.geometry;
    const double W = opt.size, margin = 0.05 * W;
    detail::Viewport vp{};
    if (g == Geometry::Hyperbolic) {
        vp = {(W - 2 * margin) / 2, W / 2, W / 2};
    } else {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (const auto& ch : sl.charts)
            for (cplx z : ch.p) {
                x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
                y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
            }
        double span = std::max(x1 - x0, y1 - y0);
        double sc = (W - 2 * margin) / (span > 0 ? span : 1);
        vp = {sc, margin - sc * x0 + (W - 2 * margin - sc * (x1 - x0)) / 2,
              W - margin + sc * y0 - (W - 2 * margin - sc * (y1 - y0)) / 2};
    }
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.size << "\" height=\"" << opt.size
       << "\" viewBox=\"0 0 " << opt.size << " " << opt.size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (g == Geometry::Hyperbolic)
        os << "<circle cx=\"" << detail::fmt(W / 2) << "\" cy=\"" << detail::fmt(W / 2) << "\" r=\""
           << detail::fmt(vp.scale) << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    const Triangulation& t = sl.tri;
    if (opt.face_circles) {
        os << "<g class=\"face-circles\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\">\n";
        for (const auto& ch : sl.charts) {
            if (!std::isfinite(ch.face.radius))
                continue;
            os << "<circle cx=\"" << detail::fmt(vp.x(ch.face.center)) << "\" cy=\"" << detail::fmt(vp.y(ch.face.center))
               << "\" r=\"" << detail::fmt(ch.face.radius * vp.scale) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "<g class=\"edges\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
    for (const auto& ch : sl.charts)
        for (int k = 0; k < 3; ++k) {
            int e = t.tris[ch.tri].e[k];
            // each chart draws its own sides; diagonals are dashed
            std::string dash = e >= t.base.num_edges() ? " stroke-dasharray=\"4,4\" stroke=\"#999\"" : "";
            cplx p = ch.p[k], q = ch.p[(k + 1) % 3];
            std::string d = g == Geometry::Hyperbolic
                                ? detail::geodesic_path(p, q, vp)
                                : "M" + detail::fmt(vp.x(p)) + "," + detail::fmt(vp.y(p)) + " L" + detail::fmt(vp.x(q)) +
                                      "," + detail::fmt(vp.y(q));
            os << "<path d=\"" << d << "\"" << dash << "/>\n";
        }
    os << "</g>\n";
    if (opt.vertex_circles) {
        os << "<g class=\"vertex-circles\" fill=\"#d62728\" fill-opacity=\"0.15\" stroke=\"#d62728\" stroke-width=\"1\">\n";
        for (const auto& ch : sl.charts)
            for (int k = 0; k < 3; ++k) {
                ModelCircle m{ch.p[k], ch.r[k]};
                if (g == Geometry::Hyperbolic) {
                    inv::PlaneCircle pc = hyperbolic_circle_in_disk(ch.p[k], ch.r[k]);
                    m = {pc.center, pc.radius};
                }
                double rad = std::max(m.radius * vp.scale, 1.5);
                os << "<circle cx=\"" << detail::fmt(vp.x(m.center)) << "\" cy=\"" << detail::fmt(vp.y(m.center))
                   << "\" r=\"" << detail::fmt(rad) << "\"/>\n";
            }
        os << "</g>\n";
    }
    if (opt.labels) {
        os << "<g class=\"labels\" font-size=\"10\" fill=\"#333\">\n";
        for (const auto& ch : sl.charts)
            for (int k = 0; k < 3; ++k)
                os << "<text x=\"" << detail::fmt(vp.x(ch.p[k]) + 3) << "\" y=\"" << detail::fmt(vp.y(ch.p[k]) - 3) << "\">"
                   << t.base.ids[t.tris[ch.tri].v[k]] << "</text>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

namespace detail {

inline nlohmann::ordered_json num(double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); }

inline double num_of(const nlohmann::ordered_json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline nlohmann::ordered_json point_json(cplx z) { return {num(z.real()), num(z.imag())}; }

inline cplx point_of(const nlohmann::ordered_json& j) { return {num_of(j.at(0)), num_of(j.at(1))}; }

} // namespace detail

inline nlohmann::ordered_json export_json(const SurfaceLayout& sl)
{
    using detail::num;
    using detail::point_json;
    using json = nlohmann::ordered_json;
    const Triangulation& t = sl.tri;
    json j;
    j["layout_version"] = 1;
    j["geometry"] = to_string(sl.geometry);
    j["merge_tol"] = sl.merge_tol;
    json verts = json::array();
    for (int v = 0; v < t.num_vertices(); ++v)
        verts.push_back({{"id", t.base.ids[v]}, {"circle", t.is_point(v) ? "point" : "disk"}, {"r", num(sl.lengths.r[v])},
                         {"Theta", num(sl.Theta[v])}});
    j["vertices"] = verts;
    json faces = json::array();
    for (const auto& f : t.base.faces) {
        json fj = json::array();
        for (int v : f)
            fj.push_back(t.base.ids[v]);
        faces.push_back(fj);
    }
    j["faces"] = faces;
    json edges = json::array();
    for (int e = 0; e < t.num_edges(); ++e) {
        const EdgeRecord& r = sl.edges[e];
        std::string cls = e >= t.base.num_edges() ? "diagonal" : t.is_tangent(e) ? "tangent" : "free";
        edges.push_back({{"u", t.base.ids[t.edges[e][0]]}, {"v", t.base.ids[t.edges[e][1]]}, {"class", cls},
                         {"l", num(sl.lengths.l[e])}, {"theta", num(r.theta)}, {"alpha_sum", num(r.alpha_sum)},
                         {"is_delaunay", r.is_delaunay}, {"is_redundant", r.is_redundant}, {"P_u", num(r.P_u)},
                         {"P_v", num(r.P_v)}, {"dual_length", num(r.dual_length)},
                         {"dual_length_expected", num(r.dual_length_expected)}});
    }
    j["edges"] = edges;
    json charts = json::array();
    for (const auto& ch : sl.charts) {
        json vs = json::array(), ps = json::array(), rs = json::array();
        for (int k = 0; k < 3; ++k) {
            vs.push_back(t.base.ids[t.tris[ch.tri].v[k]]);
            ps.push_back(point_json(ch.p[k]));
            rs.push_back(num(ch.r[k]));
        }
        charts.push_back({{"triangle", ch.tri}, {"face", t.tris[ch.tri].face}, {"vertices", vs}, {"positions", ps},
                          {"radii", rs}, {"face_circle", {{"kind", to_string(ch.kind)}, {"model_center", point_json(ch.face.center)},
                                                          {"model_radius", num(ch.face.radius)}, {"center", point_json(ch.centre)},
                                                          {"R", num(ch.R)}}},
                          {"parent", ch.parent}, {"via_edge", ch.via_edge}, {"length_error", num(ch.length_error)},
                          {"orthogonality_error", num(ch.orthogonality_error)}});
    }
    j["charts"] = charts;
    return j;
}

// Inverse of export_json. Vertex classes, faces and lengths determine the triangulation.
inline SurfaceLayout layout_from_json(const nlohmann::ordered_json& j)
{
    using detail::num_of;
    using detail::point_of;
    try {
        if (j.at("layout_version").get<int>() != 1)
            fail(ErrorKind::InvalidInput, "unsupported layout_version");
        SurfaceLayout sl;
        std::string geo = j.at("geometry").get<std::string>();
        sl.geometry = geo == "hyperbolic" ? Geometry::Hyperbolic : Geometry::Euclidean;
        sl.merge_tol = j.at("merge_tol").get<double>();
        RawComplex raw;
        for (const auto& v : j.at("vertices")) {
            raw.vertex_ids.push_back(v.at("id").get<int>());
            raw.vertex_class.push_back(v.at("circle").get<std::string>() == "point" ? VertexClass::Point : VertexClass::Disk);
        }
        raw.faces = j.at("faces").get<std::vector<std::vector<int>>>();
        for (const auto& e : j.at("edges"))
            if (e.at("class").get<std::string>() == "tangent")
                raw.tangent_edges.push_back({e.at("u").get<int>(), e.at("v").get<int>()});
        sl.tri = triangulate(build_complex(raw));
        const Triangulation& t = sl.tri;
        if (static_cast<int>(j.at("edges").size()) != t.num_edges() || static_cast<int>(j.at("charts").size()) != t.num_tris())
            fail(ErrorKind::InvalidInput, "layout does not match its complex");
        sl.lengths.r.resize(t.num_vertices());
        sl.Theta.resize(t.num_vertices());
        for (int v = 0; v < t.num_vertices(); ++v) {
            sl.lengths.r[v] = num_of(j["vertices"][v].at("r"));
            sl.Theta[v] = num_of(j["vertices"][v].at("Theta"));
        }
        sl.lengths.l.resize(t.num_edges());
        sl.edges.resize(t.num_edges());
        for (int e = 0; e < t.num_edges(); ++e) {
            const auto& ej = j["edges"][e];
            EdgeRecord& r = sl.edges[e];
            r.edge = e;
            sl.lengths.l[e] = num_of(ej.at("l"));
            r.theta = num_of(ej.at("theta"));
            r.alpha_sum = num_of(ej.at("alpha_sum"));
            r.is_delaunay = ej.at("is_delaunay").get<bool>();
            r.is_redundant = ej.at("is_redundant").get<bool>();
            r.P_u = num_of(ej.at("P_u"));
            r.P_v = num_of(ej.at("P_v"));
            r.dual_length = num_of(ej.at("dual_length"));
            r.dual_length_expected = num_of(ej.at("dual_length_expected"));
        }
        sl.charts.resize(t.num_tris());
        for (int f = 0; f < t.num_tris(); ++f) {
            const auto& cj = j["charts"][f];
            TriangleChart& ch = sl.charts[f];
            ch.tri = cj.at("triangle").get<int>();
            for (int k = 0; k < 3; ++k) {
                ch.p[k] = point_of(cj.at("positions").at(k));
                ch.r[k] = num_of(cj.at("radii").at(k));
            }
            const auto& fc = cj.at("face_circle");
            std::string kind = fc.at("kind").get<std::string>();
            ch.kind = kind == "horocycle" ? CircleKind::Horocycle : kind == "hypercycle" ? CircleKind::Hypercycle : CircleKind::Circle;
            ch.face = {point_of(fc.at("model_center")), num_of(fc.at("model_radius"))};
            ch.centre = point_of(fc.at("center"));
            ch.R = num_of(fc.at("R"));
            ch.parent = cj.at("parent").get<int>();
            ch.via_edge = cj.at("via_edge").get<int>();
            ch.length_error = num_of(cj.at("length_error"));
            ch.orthogonality_error = num_of(cj.at("orthogonality_error"));
        }
        return sl;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, e.what());
    }
}

} // namespace hicp
