#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"
#include "hicp/polytope.hpp"
#include "hicp/solver.hpp"

namespace hicp {

using json = nlohmann::ordered_json;

struct Problem {
    RawComplex raw;
    CellComplex complex;
    Geometry geometry = Geometry::Euclidean;
    std::optional<AngleData> angles; // present when the input carries theta/Theta
};

inline Geometry parse_geometry(const std::string& s)
{
    if (s == "euclidean")
        return Geometry::Euclidean;
    if (s == "hyperbolic")
        return Geometry::Hyperbolic;
    fail(ErrorKind::InvalidInput, "unknown geometry '" + s + "'");
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::IoError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        fail(ErrorKind::IoError, "cannot write " + path);
}

// Edge key "i-j" in either order.
inline int edge_from_key(const CellComplex& c, const std::string& key)
{
    auto dash = key.find('-', 1);
    if (dash == std::string::npos)
        fail(ErrorKind::IndexMismatch, "bad edge key '" + key + "'");
    int i = c.index_of(std::stoi(key.substr(0, dash))), j = c.index_of(std::stoi(key.substr(dash + 1)));
    int e = (i < 0 || j < 0) ? -1 : c.edge_between(i, j);
    if (e < 0)
        fail(ErrorKind::IndexMismatch, "no edge " + key);
    return e;
}

inline Problem parse_problem(const json& j)
{
    try {
        Problem p;
        p.geometry = parse_geometry(j.value("geometry", std::string("euclidean")));
        for (const auto& v : j.at("vertices")) {
            p.raw.vertex_ids.push_back(v.at("id").get<int>());
            std::string cl = v.value("circle", std::string("disk"));
            if (cl != "disk" && cl != "point")
                fail(ErrorKind::InvalidInput, "unknown circle class '" + cl + "'");
            p.raw.vertex_class.push_back(cl == "point" ? VertexClass::Point : VertexClass::Disk);
        }
        p.raw.faces = j.at("faces").get<std::vector<std::vector<int>>>();
        if (j.contains("tangent_edges"))
            for (const auto& e : j.at("tangent_edges"))
                p.raw.tangent_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        p.complex = build_complex(p.raw);
        if (j.contains("theta") || j.contains("Theta")) {
            AngleData ad = make_angle_data(p.complex, p.geometry);
            if (j.contains("theta"))
                for (const auto& [k, v] : j.at("theta").items())
                    ad.theta[edge_from_key(p.complex, k)] = v.get<double>();
            if (j.contains("Theta"))
                for (const auto& [k, v] : j.at("Theta").items()) {
                    int idx = p.complex.index_of(std::stoi(k));
                    if (idx < 0)
                        fail(ErrorKind::IndexMismatch, "unknown vertex " + k);
                    ad.Theta[idx] = v.get<double>();
                }
            p.angles = ad;
        }
        return p;
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, e.what());
    } catch (const std::invalid_argument& e) {
        fail(ErrorKind::InvalidInput, e.what());
    }
}

inline Problem load_problem(const std::string& path) { return parse_problem(read_json_file(path)); }

inline json complex_to_json(const CellComplex& c, Geometry g)
{
    json j;
    j["geometry"] = to_string(g);
    json vs = json::array();
    for (int v = 0; v < c.num_vertices(); ++v)
        vs.push_back({{"id", c.ids[v]}, {"circle", c.is_point(v) ? "point" : "disk"}});
    j["vertices"] = vs;
    json fs = json::array();
    for (const auto& f : c.faces) {
        json fj = json::array();
        for (int v : f)
            fj.push_back(c.ids[v]);
        fs.push_back(fj);
    }
    j["faces"] = fs;
    json te = json::array();
    for (int e = 0; e < c.num_edges(); ++e)
        if (c.eclass[e] == EdgeClass::Tangent)
            te.push_back({c.ids[c.edges[e][0]], c.ids[c.edges[e][1]]});
    j["tangent_edges"] = te;
    return j;
}

inline void put_angles(json& j, const CellComplex& c, const AngleData& ad)
{
    json th = json::object(), Th = json::object();
    for (int e = 0; e < c.num_edges(); ++e)
        if (!std::isnan(ad.theta[e]))
            th[c.edge_key(e)] = ad.theta[e];
    for (int v = 0; v < c.num_vertices(); ++v)
        if (!std::isnan(ad.Theta[v]))
            Th[std::to_string(c.ids[v])] = ad.Theta[v];
    j["theta"] = th;
    j["Theta"] = Th;
}

inline json problem_to_json(const CellComplex& c, const AngleData& ad)
{
    json j = complex_to_json(c, ad.geometry);
    put_angles(j, c, ad);
    return j;
}

inline json report_to_json(const FeasibilityReport& r)
{
    json j;
    j["verdict"] = to_string(r.verdict);
    j["gauss_bonnet_residual"] = r.gauss_bonnet_residual;
    j["domains_checked"] = r.domains_checked;
    j["partial"] = r.partial;
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"condition", v.condition}, {"witness", v.witness}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    j["violations"] = vs;
    j["notes"] = r.notes;
    return j;
}

// Edge key on the triangulation (diagonals included).
inline std::string tri_edge_key(const Triangulation& t, int e)
{
    return std::to_string(t.base.ids[t.edges[e][0]]) + "-" + std::to_string(t.base.ids[t.edges[e][1]]);
}

inline json solution_to_json(const Triangulation& t, const AngleData& target, const Solution& s)
{
    json j;
    j["problem"] = problem_to_json(t.base, target);
    j["status"] = to_string(s.status);
    j["message"] = s.message;
    j["residual_norm"] = std::isfinite(s.residual_norm) ? json(s.residual_norm) : json(nullptr);
    j["iterations"] = s.iterations;
    if (s.feasibility)
        j["feasibility"] = report_to_json(*s.feasibility);
    if (!s.coords.a.empty()) {
        json a = json::object(), l = json::object(), th = json::object(), d = json::array();
        for (int e = 0; e < t.num_edges(); ++e) {
            std::string k = tri_edge_key(t, e);
            a[k] = s.coords.a[e];
            l[k] = s.lengths.l[e];
            th[k] = s.realized.theta[e];
            if (e >= t.base.num_edges())
                d.push_back({t.base.ids[t.edges[e][0]], t.base.ids[t.edges[e][1]]});
        }
        json b = json::object(), r = json::object(), Th = json::object();
        for (int v = 0; v < t.num_vertices(); ++v) {
            std::string k = std::to_string(t.base.ids[v]);
            b[k] = s.coords.b[v];
            r[k] = s.lengths.r[v];
            Th[k] = s.realized.Theta[v];
        }
        j["diagonals"] = d;
        j["coords"] = {{"a", a}, {"b", b}};
        j["lengths"] = {{"l", l}, {"r", r}};
        j["realized"] = {{"theta", th}, {"Theta", Th}};
    }
    json tr = json::array();
    for (const auto& it : s.trace)
        tr.push_back({{"iter", it.iter}, {"residual", it.residual}, {"step", it.step}, {"mu", it.mu}});
    j["trace"] = tr;
    return j;
}

struct LoadedSolution {
    Problem problem;
    Triangulation tri;
    TetraCoords coords;
    std::string status;
};

inline LoadedSolution parse_solution(const json& j)
{
    LoadedSolution ls;
    ls.problem = parse_problem(j.at("problem"));
    ls.tri = triangulate(ls.problem.complex);
    ls.status = j.value("status", std::string());
    if (!j.contains("coords"))
        fail(ErrorKind::InvalidInput, "solution carries no coordinates");
    const auto& a = j.at("coords").at("a");
    const auto& b = j.at("coords").at("b");
    ls.coords.a.assign(ls.tri.num_edges(), 0);
    ls.coords.b.assign(ls.tri.num_vertices(), 0);
    for (int e = 0; e < ls.tri.num_edges(); ++e)
        ls.coords.a[e] = a.at(tri_edge_key(ls.tri, e)).get<double>();
    for (int v = 0; v < ls.tri.num_vertices(); ++v)
        ls.coords.b[v] = b.at(std::to_string(ls.tri.base.ids[v])).get<double>();
    return ls;
}

} // namespace hicp
