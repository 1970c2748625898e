#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "hicp/complex.hpp"
#include "hicp/geometry.hpp"
#include "hicp/reference.hpp"
#include "hicp/solver.hpp"

namespace hicp {

// Slack of every strict inequality defining ER, triangle by triangle.
inline std::vector<double> er_slacks(const Triangulation& t, const EdgeRadii& er)
{
    std::vector<double> s;
    for (int f = 0; f < t.num_tris(); ++f) {
        TriLengths x = local_lengths(t, er, f);
        TriangleTags tags = t.tags(f);
        for (int k = 0; k < 3; ++k)
            if (!tags.tangent[k])
                s.push_back(x.l[k] - x.r[k] - x.r[(k + 1) % 3]);
        for (int k = 0; k < 3; ++k)
            s.push_back(x.l[(k + 1) % 3] + x.l[(k + 2) % 3] - x.l[k]);
    }
    return s;
}

struct SampleOptions {
    double radius_lo = 0.8, radius_hi = 1.1;  // relative to the reference radius
    double length_lo = 0.92, length_hi = 1.08; // relative to the reference pattern
    double min_slack = 0.1;                    // fraction of the reference slack that must survive
    int max_attempts = 10000;
};

// Random lengths and radii near the reference pattern, kept away from the boundary of ER.
inline EdgeRadii sample_er(const Triangulation& t, Geometry g, std::mt19937_64& rng, const SampleOptions& opt = {})
{
    EdgeRadii ref = reference_pattern(t, g);
    if (!in_er(t, ref))
        fail(ErrorKind::NotInTE, "reference pattern is not admissible");
    std::vector<double> ref_slack = er_slacks(t, ref);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        EdgeRadii er = ref;
        for (int v = 0; v < t.num_vertices(); ++v)
            if (!t.is_point(v))
                er.r[v] = ref.r[v] * (opt.radius_lo + (opt.radius_hi - opt.radius_lo) * unit(rng));
        for (int e = 0; e < t.num_edges(); ++e) {
            if (t.is_tangent(e)) {
                er.l[e] = er.r[t.edges[e][0]] + er.r[t.edges[e][1]];
                continue;
            }
            er.l[e] = ref.l[e] * (opt.length_lo + (opt.length_hi - opt.length_lo) * unit(rng));
        }
        std::vector<double> slack = er_slacks(t, er);
        bool ok = true;
        for (std::size_t i = 0; i < slack.size() && ok; ++i)
            ok = slack[i] >= opt.min_slack * ref_slack[i];
        if (ok)
            return er;
    }
    fail(ErrorKind::InvariantViolation, "no admissible sample found");
}

} // namespace hicp
