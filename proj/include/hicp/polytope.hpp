#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"

namespace hicp {

// Target angles indexed like the cell complex. Entries that are derived (tangent edges, point vertices)
// must be NaN; free edges and disk vertices must carry a value.
struct AngleData {
    Geometry geometry = Geometry::Euclidean;
    std::vector<double> theta; // per base edge
    std::vector<double> Theta; // per base vertex
};

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

inline AngleData make_angle_data(const CellComplex& c, Geometry g)
{
    return {g, std::vector<double>(c.num_edges(), nan_value), std::vector<double>(c.num_vertices(), nan_value)};
}

inline void check_indices(const CellComplex& c, const AngleData& t)
{
    if (static_cast<int>(t.theta.size()) != c.num_edges() || static_cast<int>(t.Theta.size()) != c.num_vertices())
        fail(ErrorKind::IndexMismatch, "angle data size does not match the complex");
    for (int e = 0; e < c.num_edges(); ++e) {
        bool tangent = c.eclass[e] == EdgeClass::Tangent;
        if (tangent != std::isnan(t.theta[e]))
            fail(ErrorKind::IndexMismatch, "edge " + c.edge_key(e) + (tangent ? ": tangent edge carries theta"
                                                                             : ": missing theta"));
    }
    for (int v = 0; v < c.num_vertices(); ++v) {
        bool point = c.is_point(v);
        if (point != std::isnan(t.Theta[v]))
            fail(ErrorKind::IndexMismatch, "vertex " + std::to_string(c.ids[v]) +
                                               (point ? ": Theta is derived for point vertices" : ": missing Theta"));
    }
}

inline double edge_theta(const CellComplex& c, const AngleData& t, int e)
{
    return c.eclass[e] == EdgeClass::Tangent ? 0.0 : t.theta[e];
}

// Theta on disk vertices as given; on point vertices the sum of pi - theta over incident edges.
inline std::vector<double> full_Theta(const CellComplex& c, const AngleData& t)
{
    std::vector<double> out(c.num_vertices());
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (!c.is_point(v)) {
            out[v] = t.Theta[v];
            continue;
        }
        double s = 0;
        for (int e : c.vertex_edges[v])
            s += std::numbers::pi - edge_theta(c, t, e);
        out[v] = s;
    }
    return out;
}

enum class Verdict { Feasible, Infeasible, FeasibleUnderPartialCheck };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::FeasibleUnderPartialCheck: return "FeasibleUnderPartialCheck";
    }
    return "Infeasible";
}

struct Violation {
    std::string condition;       // E1..E4 or H1..H4
    std::string witness;         // edge key, vertex id, or domain label
    std::vector<int> generators; // hat vertex ids of a witness domain
    double lhs = 0;
    double rhs = 0;
};

struct FeasibilityReport {
    Verdict verdict = Verdict::Feasible;
    std::vector<Violation> violations;
    double gauss_bonnet_residual = 0; // sum(2pi - Theta) - 2pi chi(S)
    int domains_checked = 0;
    bool partial = false;
    std::vector<std::string> notes;
};

inline std::string hat_vertex_label(const CellComplex& c, const HatTriangulation& h, int x)
{
    return h.is_base(x) ? "v" + std::to_string(c.ids[x]) : "O" + std::to_string(x - h.nv);
}

inline std::string domain_label(const CellComplex& c, const HatTriangulation& h, const std::vector<int>& gens)
{
    std::string s = "OStar(";
    for (std::size_t i = 0; i < gens.size(); ++i)
        s += (i ? "," : "") + hat_vertex_label(c, h, gens[i]);
    return s + ")";
}

inline int thread_count()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HICP_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0)
            n = n > 0 ? std::min(n, cap) : cap;
    }
    return std::max(n, 1);
}

struct FeasibilityOptions {
    int cap = 22;
    bool require_exhaustive = false;
    bool check_domains = true;
    int threads = 0; // 0: from HICP_THREADS / hardware
};

struct DomainBalance {
    double lhs = 0;
    double rhs = 0;
};

// Both sides of the domain inequality, in the form corrected by tangent dual edges on the boundary.
inline DomainBalance domain_balance(const CellComplex& c, const HatTriangulation& h, const Domain& d,
                                    const AngleData& t, const std::vector<double>& Theta)
{
    constexpr double pi = std::numbers::pi;
    BoundaryTrace bt = boundary(h, d);
    DomainBalance b;
    for (int e = 0; e < h.num_edges(); ++e) {
        int be = h.base_edge[e];
        if (be < 0 || bt.edge_multiplicity[e] == 0 || c.eclass[be] == EdgeClass::Tangent)
            continue;
        b.lhs += bt.edge_multiplicity[e] * (pi - t.theta[be]);
    }
    for (int v = 0; v < h.nv; ++v)
        if (d.in_vertex[v])
            b.lhs += 2 * pi - Theta[v];
    b.rhs = 2 * pi * euler_char(d) - pi * bt.boundary_vertex_count - pi * bt.tangent_dual_count;
    return b;
}

inline FeasibilityReport check_feasibility(const CellComplex& c, const AngleData& t, const FeasibilityOptions& opt = {})
{
    constexpr double pi = std::numbers::pi;
    check_indices(c, t);
    const bool euc = t.geometry == Geometry::Euclidean;
    const std::string p = euc ? "E" : "H";
    const double tol = 1e-12 * (1 + c.num_vertices());
    FeasibilityReport rep;

    for (int e = 0; e < c.num_edges(); ++e) {
        if (c.eclass[e] == EdgeClass::Tangent)
            continue;
        double th = t.theta[e];
        if (!(th > 0 && th < pi))
            rep.violations.push_back({p + "1", c.edge_key(e), {}, th, 0});
    }
    for (int v = 0; v < c.num_vertices(); ++v)
        if (!c.is_point(v) && !(t.Theta[v] > 0))
            rep.violations.push_back({p + "2", std::to_string(c.ids[v]), {}, t.Theta[v], 0});

    std::vector<double> Theta = full_Theta(c, t);
    double sum = 0;
    for (double x : Theta)
        sum += 2 * pi - x;
    double rhs = 2 * pi * c.euler_characteristic();
    rep.gauss_bonnet_residual = sum - rhs;
    if (euc ? std::abs(sum - rhs) > tol : !(sum - rhs > tol))
        rep.violations.push_back({p + "3", "S", {}, sum, rhs});

    if (opt.check_domains) {
        HatTriangulation h = hat_complex(c);
        DomainSet ds = admissible_domains(c, h, true, opt.cap, opt.require_exhaustive);
        rep.partial = ds.partial;
        std::vector<const Domain*> todo;
        for (const Domain& d : ds.domains) {
            if (d.generators.size() == 1 && h.is_base(d.generators[0]) && c.is_point(d.generators[0]))
                continue;
            todo.push_back(&d);
        }
        rep.domains_checked = static_cast<int>(todo.size());
        int nt = opt.threads > 0 ? opt.threads : thread_count();
        nt = std::max(1, std::min<int>(nt, static_cast<int>(todo.size() / 64) + 1));
        std::vector<Violation> found;
        std::mutex mu;
        auto work = [&](int w) {
            std::vector<Violation> local;
            for (std::size_t i = w; i < todo.size(); i += nt) {
                DomainBalance b = domain_balance(c, h, *todo[i], t, Theta);
                if (b.lhs - b.rhs <= tol)
                    local.push_back({p + "4", domain_label(c, h, todo[i]->generators), todo[i]->generators, b.lhs, b.rhs});
            }
            std::lock_guard<std::mutex> lock(mu);
            found.insert(found.end(), local.begin(), local.end());
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < nt; ++w)
            pool.emplace_back(work, w);
        work(0);
        for (auto& th : pool)
            th.join();
        std::sort(found.begin(), found.end(), [](const Violation& a, const Violation& b) {
            if (a.generators.size() != b.generators.size())
                return a.generators.size() < b.generators.size();
            return a.generators < b.generators;
        });
        rep.violations.insert(rep.violations.end(), found.begin(), found.end());
        rep.notes.push_back("open stars of disk vertices are held to the strict inequality");
        rep.notes.push_back("boundary vertex counts include multiplicity along boundary walks");
    }

    if (!rep.violations.empty())
        rep.verdict = Verdict::Infeasible;
    else if (rep.partial)
        rep.verdict = Verdict::FeasibleUnderPartialCheck;
    return rep;
}

} // namespace hicp
