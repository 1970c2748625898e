#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"
#include "hicp/geometry.hpp"
#include "hicp/polytope.hpp"

namespace hicp {

struct TetraCoords {
    std::vector<double> a; // per triangulation edge; 0 on tangent edges
    std::vector<double> b; // per vertex; 0 on point vertices
};

struct EdgeRadii {
    std::vector<double> l; // per triangulation edge
    std::vector<double> r; // per vertex
};

// Angles on the triangulation: theta per edge (pi on diagonals, 0 on tangent edges), Theta per vertex.
struct LiftedTarget {
    Geometry geometry = Geometry::Euclidean;
    std::vector<double> theta;
    std::vector<double> Theta;
};

inline LiftedTarget lift(const Triangulation& t, const AngleData& target)
{
    check_indices(t.base, target);
    LiftedTarget lt;
    lt.geometry = target.geometry;
    lt.theta.assign(t.num_edges(), std::numbers::pi);
    for (int e = 0; e < t.base.num_edges(); ++e)
        lt.theta[e] = edge_theta(t.base, target, e);
    lt.Theta = full_Theta(t.base, target);
    return lt;
}

inline TriTetra local_coords(const Triangulation& t, const TetraCoords& tc, int f)
{
    TriTetra x;
    for (int k = 0; k < 3; ++k) {
        x.a[k] = tc.a[t.tris[f].e[k]];
        x.b[k] = tc.b[t.tris[f].v[k]];
    }
    return x;
}

inline TriLengths local_lengths(const Triangulation& t, const EdgeRadii& er, int f)
{
    TriLengths x;
    for (int k = 0; k < 3; ++k) {
        x.l[k] = er.l[t.tris[f].e[k]];
        x.r[k] = er.r[t.tris[f].v[k]];
    }
    return x;
}

inline EdgeRadii psi(const Triangulation& t, const TetraCoords& tc, Geometry g)
{
    EdgeRadii er;
    er.r.resize(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v)
        er.r[v] = psi_radius(tc.b[v], t.is_point(v), g);
    er.l.resize(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        auto [u, v] = t.edges[e];
        er.l[e] = psi_length(t.is_tangent(e) ? 0.0 : tc.a[e], tc.b[u], tc.b[v], t.is_point(u), t.is_point(v),
                             t.is_tangent(e), g);
    }
    return er;
}

inline TetraCoords psi_inv(const Triangulation& t, const EdgeRadii& er, Geometry g)
{
    TetraCoords tc;
    tc.b.resize(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v)
        tc.b[v] = psi_inv_radius(er.r[v], t.is_point(v), g);
    tc.a.resize(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        auto [u, v] = t.edges[e];
        tc.a[e] = psi_inv_length(er.l[e], er.r[u], er.r[v], t.is_point(u), t.is_point(v), t.is_tangent(e), g);
    }
    return tc;
}

inline bool in_er(const Triangulation& t, const EdgeRadii& er, double margin = 1e-12)
{
    for (int f = 0; f < t.num_tris(); ++f)
        if (!in_er(local_lengths(t, er, f), t.tags(f), margin))
            return false;
    return true;
}

inline bool in_te(const Triangulation& t, const TetraCoords& tc, Geometry g)
{
    for (double x : tc.a)
        if (!std::isfinite(x))
            return false;
    for (int v = 0; v < t.num_vertices(); ++v)
        if (!std::isfinite(tc.b[v]) || (g == Geometry::Hyperbolic && !t.is_point(v) && !(tc.b[v] > 0)))
            return false;
    return in_er(t, psi(t, tc, g));
}

struct RealizedAngles {
    std::vector<double> theta; // alpha sums per triangulation edge
    std::vector<double> Theta; // beta sums per vertex
};

inline RealizedAngles realized_from_lengths(const Triangulation& t, const EdgeRadii& er, Geometry g)
{
    RealizedAngles ra;
    ra.theta.assign(t.num_edges(), 0);
    ra.Theta.assign(t.num_vertices(), 0);
    for (int f = 0; f < t.num_tris(); ++f) {
        TriLengths x = local_lengths(t, er, f);
        TriangleTags tags = t.tags(f);
        if (!in_er(x, tags))
            fail(ErrorKind::NotInTE, "triangle " + std::to_string(f) + " leaves the admissible lengths");
        TriangleAngles ta = triangle_angles(x, tags, g);
        for (int k = 0; k < 3; ++k) {
            ra.theta[t.tris[f].e[k]] += ta.alpha[k];
            ra.Theta[t.tris[f].v[k]] += ta.beta[k];
        }
    }
    return ra;
}

inline RealizedAngles realized_angles(const Triangulation& t, const TetraCoords& tc, Geometry g)
{
    return realized_from_lengths(t, psi(t, tc, g), g);
}

// Free variables: a on free edges and diagonals, then b on disk vertices.
struct VariableMap {
    std::vector<int> edge_var;   // per edge, -1 if fixed
    std::vector<int> vertex_var; // per vertex, -1 if fixed
    std::vector<int> edge_of;    // variable -> edge (a variables)
    std::vector<int> vertex_of;  // variable -> vertex (b variables)
    int size() const { return static_cast<int>(edge_of.size() + vertex_of.size()); }
};

inline VariableMap variable_map(const Triangulation& t)
{
    VariableMap vm;
    vm.edge_var.assign(t.num_edges(), -1);
    vm.vertex_var.assign(t.num_vertices(), -1);
    int n = 0;
    for (int e = 0; e < t.num_edges(); ++e)
        if (!t.is_tangent(e)) {
            vm.edge_var[e] = n++;
            vm.edge_of.push_back(e);
        }
    for (int v = 0; v < t.num_vertices(); ++v)
        if (!t.is_point(v)) {
            vm.vertex_var[v] = n++;
            vm.vertex_of.push_back(v);
        }
    return vm;
}

inline Eigen::VectorXd pack(const VariableMap& vm, const TetraCoords& tc)
{
    Eigen::VectorXd x(vm.size());
    int i = 0;
    for (int e : vm.edge_of)
        x[i++] = tc.a[e];
    for (int v : vm.vertex_of)
        x[i++] = tc.b[v];
    return x;
}

inline TetraCoords unpack(const Triangulation& t, const VariableMap& vm, const Eigen::VectorXd& x)
{
    TetraCoords tc;
    tc.a.assign(t.num_edges(), 0);
    tc.b.assign(t.num_vertices(), 0);
    int i = 0;
    for (int e : vm.edge_of)
        tc.a[e] = x[i++];
    for (int v : vm.vertex_of)
        tc.b[v] = x[i++];
    return tc;
}

inline Eigen::VectorXd grad_U(const Triangulation& t, const TetraCoords& tc, const LiftedTarget& target)
{
    VariableMap vm = variable_map(t);
    RealizedAngles ra = realized_angles(t, tc, target.geometry);
    Eigen::VectorXd g(vm.size());
    int i = 0;
    for (int e : vm.edge_of)
        g[i++] = ra.theta[e] - target.theta[e];
    for (int v : vm.vertex_of)
        g[i++] = ra.Theta[v] - target.Theta[v];
    return g;
}

// Jacobian of the realized angles, assembled from per-triangle central differences and symmetrized.
inline Eigen::MatrixXd hessian_U(const Triangulation& t, const TetraCoords& tc, Geometry g)
{
    VariableMap vm = variable_map(t);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(vm.size(), vm.size());
    for (int f = 0; f < t.num_tris(); ++f) {
        TriangleTags tags = t.tags(f);
        TriTetra x0 = local_coords(t, tc, f);
        const auto& tri = t.tris[f];
        std::array<int, 6> var;
        for (int k = 0; k < 3; ++k) {
            var[k] = vm.edge_var[tri.e[k]];
            var[3 + k] = vm.vertex_var[tri.v[k]];
        }
        auto eval = [&](const TriTetra& x, TriangleAngles& out) {
            try {
                out = tetra_angles(x, tags, g);
                return true;
            } catch (const Error&) {
                return false;
            }
        };
        TriangleAngles base;
        if (!eval(x0, base))
            fail(ErrorKind::NotInTE, "triangle " + std::to_string(f) + " leaves the admissible lengths");
        for (int j = 0; j < 6; ++j) {
            if (var[j] < 0)
                continue;
            double& slot = j < 3 ? x0.a[j] : x0.b[j - 3];
            double h = 1e-5 * (1 + std::abs(slot));
            TriTetra xp = x0, xm = x0;
            (j < 3 ? xp.a[j] : xp.b[j - 3]) += h;
            (j < 3 ? xm.a[j] : xm.b[j - 3]) -= h;
            TriangleAngles ap, am;
            bool okp = eval(xp, ap), okm = eval(xm, am);
            double denom = 2 * h;
            if (!okp && !okm)
                fail(ErrorKind::NotInTE, "finite-difference stencil leaves the admissible lengths");
            if (!okp) {
                ap = base;
                denom = h;
            } else if (!okm) {
                am = base;
                denom = h;
            }
            for (int k = 0; k < 3; ++k) {
                if (var[k] >= 0)
                    H(var[k], var[j]) += (ap.alpha[k] - am.alpha[k]) / denom;
                if (var[3 + k] >= 0)
                    H(var[3 + k], var[j]) += (ap.beta[k] - am.beta[k]) / denom;
            }
        }
    }
    return 0.5 * (H + H.transpose());
}

// Euclidean scaling orbit; the identity in hyperbolic geometry.
inline TetraCoords act(const Triangulation& t, const TetraCoords& tc, double s, Geometry g)
{
    if (g == Geometry::Hyperbolic)
        return tc;
    TetraCoords out = tc;
    for (int e = 0; e < t.num_edges(); ++e)
        if (!t.is_tangent(e))
            out.a[e] += s * (int(t.is_point(t.edges[e][0])) + int(t.is_point(t.edges[e][1])));
    for (int v = 0; v < t.num_vertices(); ++v)
        if (!t.is_point(v))
            out.b[v] -= s;
    return out;
}

inline Eigen::VectorXd gauge_direction(const Triangulation& t, const VariableMap& vm)
{
    Eigen::VectorXd v(vm.size());
    int i = 0;
    for (int e : vm.edge_of)
        v[i++] = int(t.is_point(t.edges[e][0])) + int(t.is_point(t.edges[e][1]));
    for (std::size_t k = 0; k < vm.vertex_of.size(); ++k)
        v[i++] = -1;
    return v;
}

// Normal of the section: sum of a over point-incident edges minus sum of b.
inline Eigen::VectorXd gauge_constraint(const Triangulation& t, const VariableMap& vm)
{
    Eigen::VectorXd c(vm.size());
    int i = 0;
    for (int e : vm.edge_of)
        c[i++] = (t.is_point(t.edges[e][0]) || t.is_point(t.edges[e][1])) ? 1 : 0;
    for (std::size_t k = 0; k < vm.vertex_of.size(); ++k)
        c[i++] = -1;
    return c;
}

inline TetraCoords project_gauge(const Triangulation& t, const TetraCoords& tc, Geometry g)
{
    if (g == Geometry::Hyperbolic)
        return tc;
    VariableMap vm = variable_map(t);
    Eigen::VectorXd c = gauge_constraint(t, vm), v = gauge_direction(t, vm);
    return act(t, tc, -c.dot(pack(vm, tc)) / c.dot(v), g);
}

inline EdgeRadii reference_lengths(const Triangulation& t, Geometry g)
{
    auto [r, eps] = reference_radii(g);
    EdgeRadii er;
    er.r.resize(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v)
        er.r[v] = t.is_point(v) ? 0 : r;
    er.l.resize(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e)
        er.l[e] = t.is_tangent(e) ? 2 * r : 2 * (r + eps);
    return er;
}

inline TetraCoords reference_coords(const Triangulation& t, Geometry g)
{
    return project_gauge(t, psi_inv(t, reference_lengths(t, g), g), g);
}

// Sup-norm distance after moving both coordinate sets to the gauge section.
inline double gauge_distance(const Triangulation& t, const TetraCoords& x, const TetraCoords& y, Geometry g)
{
    TetraCoords px = project_gauge(t, x, g), py = project_gauge(t, y, g);
    double d = 0;
    for (std::size_t i = 0; i < px.a.size(); ++i)
        d = std::max(d, std::abs(px.a[i] - py.a[i]));
    for (std::size_t i = 0; i < px.b.size(); ++i)
        d = std::max(d, std::abs(px.b[i] - py.b[i]));
    return d;
}

enum class SolveStatus { Converged, Infeasible, MaxIter, BoundaryDegeneration };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::BoundaryDegeneration: return "BoundaryDegeneration";
    }
    return "MaxIter";
}

struct SolveOptions {
    double grad_tol = 1e-10;
    int max_iter = 100;
    double backtrack = 0.5;
    double armijo = 1e-4;
    double min_step = 1e-12;
    int max_collapses = 5;
    double coord_bound = 40;
    bool precheck_domains = true;
    int enum_cap = 22;
    std::optional<TetraCoords> initial;
};

struct IterationRecord {
    int iter = 0;
    double residual = 0; // sup-norm
    double step = 0;
    double mu = 0;
};

struct Solution {
    TetraCoords coords;
    EdgeRadii lengths;
    RealizedAngles realized;
    double residual_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIter;
    std::vector<IterationRecord> trace;
    std::optional<FeasibilityReport> feasibility;
    std::string message;
};

inline Solution solve_lifted(const Triangulation& t, const LiftedTarget& target, const SolveOptions& opt = {})
{
    const Geometry g = target.geometry;
    VariableMap vm = variable_map(t);
    const int n = vm.size();
    Solution sol;
    TetraCoords tc = opt.initial ? project_gauge(t, *opt.initial, g) : reference_coords(t, g);
    if (!in_te(t, tc, g))
        fail(ErrorKind::NotInTE, "initial coordinates are outside the admissible region");
    const bool euc = g == Geometry::Euclidean;
    Eigen::VectorXd c = gauge_constraint(t, vm);
    Eigen::VectorXd x = pack(vm, tc);
    Eigen::VectorXd grad = grad_U(t, tc, target);
    double mu = 0;
    int collapses = 0;
    auto finish = [&](SolveStatus st) {
        sol.coords = unpack(t, vm, x);
        sol.status = st;
        sol.residual_norm = grad.lpNorm<Eigen::Infinity>();
        sol.lengths = psi(t, sol.coords, g);
        sol.realized = realized_from_lengths(t, sol.lengths, g);
        return sol;
    };
    sol.trace.push_back({0, grad.lpNorm<Eigen::Infinity>(), 0, 0});
    for (int it = 1; it <= opt.max_iter; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() <= opt.grad_tol)
            return finish(SolveStatus::Converged);
        sol.iterations = it;
        Eigen::MatrixXd H = hessian_U(t, unpack(t, vm, x), g);
        Eigen::VectorXd dx;
        Eigen::MatrixXd A = H + mu * Eigen::MatrixXd::Identity(n, n);
        if (euc) {
            Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
            K.topLeftCorner(n, n) = A;
            K.block(0, n, n, 1) = c;
            K.block(n, 0, 1, n) = c.transpose();
            Eigen::VectorXd rhs(n + 1);
            rhs.head(n) = -grad;
            rhs[n] = -c.dot(x);
            dx = K.fullPivLu().solve(rhs).head(n);
        } else {
            dx = A.ldlt().solve(-grad);
        }
        double g0 = grad.norm(), s = 1;
        bool accepted = false;
        Eigen::VectorXd xn, gn;
        if (dx.allFinite()) {
            while (s >= opt.min_step) {
                xn = x + s * dx;
                TetraCoords cand = unpack(t, vm, xn);
                if (in_te(t, cand, g)) {
                    gn = grad_U(t, cand, target);
                    if (gn.norm() <= (1 - opt.armijo * s) * g0) {
                        accepted = true;
                        break;
                    }
                }
                s *= opt.backtrack;
            }
        }
        if (!accepted) {
            mu = mu == 0 ? 1e-6 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff()) : mu * 10;
            sol.trace.push_back({it, grad.lpNorm<Eigen::Infinity>(), 0, mu});
            if (++collapses >= opt.max_collapses && grad.lpNorm<Eigen::Infinity>() > 1e3 * opt.grad_tol) {
                sol.message = "line search collapsed repeatedly";
                return finish(SolveStatus::BoundaryDegeneration);
            }
            continue;
        }
        collapses = 0;
        x = xn;
        if (euc) {
            Eigen::VectorXd v = gauge_direction(t, vm);
            x -= (c.dot(x) / c.dot(v)) * v;
            gn = grad_U(t, unpack(t, vm, x), target);
        }
        grad = gn;
        mu *= 0.1;
        if (mu < 1e-14)
            mu = 0;
        sol.trace.push_back({it, grad.lpNorm<Eigen::Infinity>(), s, mu});
        if (x.cwiseAbs().maxCoeff() > opt.coord_bound) {
            sol.message = "coordinates diverge towards the boundary";
            return finish(SolveStatus::BoundaryDegeneration);
        }
    }
    if (grad.lpNorm<Eigen::Infinity>() <= opt.grad_tol)
        return finish(SolveStatus::Converged);
    return finish(SolveStatus::MaxIter);
}

inline Solution solve(const Triangulation& t, const AngleData& target, const SolveOptions& opt = {})
{
    FeasibilityOptions fo;
    fo.cap = opt.enum_cap;
    fo.check_domains = opt.precheck_domains;
    FeasibilityReport rep = check_feasibility(t.base, target, fo);
    if (rep.verdict == Verdict::Infeasible) {
        Solution sol;
        sol.status = SolveStatus::Infeasible;
        sol.feasibility = rep;
        sol.message = "target fails " + rep.violations.front().condition + " at " + rep.violations.front().witness;
        return sol;
    }
    Solution sol = solve_lifted(t, lift(t, target), opt);
    sol.feasibility = rep;
    return sol;
}

// Angle data of the base complex read off a realized pattern.
inline AngleData extract_angle_data(const Triangulation& t, const RealizedAngles& ra, Geometry g)
{
    AngleData ad = make_angle_data(t.base, g);
    for (int e = 0; e < t.base.num_edges(); ++e)
        if (!t.is_tangent(e))
            ad.theta[e] = ra.theta[e];
    for (int v = 0; v < t.num_vertices(); ++v)
        if (!t.is_point(v))
            ad.Theta[v] = ra.Theta[v];
    return ad;
}

inline LiftedTarget as_target(const RealizedAngles& ra, Geometry g) { return {g, ra.theta, ra.Theta}; }

} // namespace hicp
