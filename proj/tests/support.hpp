#pragma once

#include <cmath>
#include <random>
#include <string>

#include "hicp/hicp.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(HICP_DATA_DIR) + "/" + name; }

inline hicp::Problem fixture(const std::string& name) { return hicp::load_problem(data_path(name)); }

inline hicp::Problem fixture(const std::string& name, hicp::Geometry g)
{
    hicp::Problem p = fixture(name);
    p.geometry = g;
    if (p.angles)
        p.angles->geometry = g;
    return p;
}

// Lobachevsky function by its Fourier series, summed from the small terms up (truncation error below 1e-13).
inline double lobachevsky(double x)
{
    const int n = 2000000;
    double s = 0;
    for (int k = n; k >= 1; --k)
        s += std::sin(2 * k * x) / (double(k) * k);
    return s / 2;
}

// Uniform random lengths and radii in a box around the reference triangle of its class.
inline hicp::TriLengths random_lengths(std::mt19937_64& rng, const hicp::TriangleTags& tags, hicp::Geometry g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    hicp::TriLengths ref = hicp::reference_triangle(tags, g);
    for (;;) {
        hicp::TriLengths er;
        for (int k = 0; k < 3; ++k)
            er.r[k] = tags.point[k] ? 0 : ref.r[k] * (0.8 + 0.3 * u(rng));
        for (int k = 0; k < 3; ++k)
            er.l[k] = tags.tangent[k] ? er.r[k] + er.r[(k + 1) % 3] : ref.l[k] * (0.85 + 0.3 * u(rng));
        if (hicp::in_er(er, tags, 1e-3))
            return er;
    }
}

// All tag combinations in which tangent edges join disk vertices.
inline std::vector<hicp::TriangleTags> all_classes()
{
    std::vector<hicp::TriangleTags> out;
    for (int pm = 0; pm < 8; ++pm)
        for (int tm = 0; tm < 8; ++tm) {
            hicp::TriangleTags tg;
            bool ok = true;
            for (int k = 0; k < 3; ++k) {
                tg.point[k] = (pm >> k) & 1;
                tg.tangent[k] = (tm >> k) & 1;
            }
            for (int k = 0; k < 3; ++k)
                if (tg.tangent[k] && (tg.point[k] || tg.point[(k + 1) % 3]))
                    ok = false;
            if (ok)
                out.push_back(tg);
        }
    return out;
}

inline std::string class_name(const hicp::TriangleTags& tg)
{
    std::string s;
    for (int k = 0; k < 3; ++k)
        s += tg.point[k] ? 'P' : 'D';
    s += '_';
    for (int k = 0; k < 3; ++k)
        s += tg.tangent[k] ? 'T' : 'F';
    return s;
}

} // namespace testing_support
