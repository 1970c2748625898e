#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hicp/errors.hpp"

namespace hicp {

enum class Geometry { Euclidean, Hyperbolic };

// Disk = V1 (positive radius), Point = V0 (point circle).
enum class VertexClass { Disk, Point };

// Free = E1, Tangent = E0, Diagonal = E_pi (fan diagonal of the triangulation).
enum class EdgeClass { Free, Tangent, Diagonal };

inline const char* to_string(Geometry g) { return g == Geometry::Euclidean ? "euclidean" : "hyperbolic"; }

struct RawComplex {
    std::vector<int> vertex_ids;
    std::vector<VertexClass> vertex_class;
    std::vector<std::vector<int>> faces;          // external ids, cyclic, oriented
    std::vector<std::array<int, 2>> tangent_edges; // external ids
};

struct CellComplex {
    std::vector<int> ids;              // external id of each vertex index, ascending
    std::vector<VertexClass> vclass;
    std::vector<std::array<int, 2>> edges; // vertex indices, first < second, sorted
    std::vector<EdgeClass> eclass;
    std::vector<std::vector<int>> faces;      // vertex indices
    std::vector<std::vector<int>> face_edges; // face_edges[f][k] joins faces[f][k] and faces[f][k+1]
    std::vector<std::array<int, 2>> edge_faces; // {left, right}; left face traverses edges[e][0] -> edges[e][1]
    std::vector<std::vector<int>> vertex_edges;
    std::map<std::pair<int, int>, int> edge_lookup;

    int num_vertices() const { return static_cast<int>(ids.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

    bool is_point(int v) const { return vclass[v] == VertexClass::Point; }

    int edge_between(int u, int v) const
    {
        auto it = edge_lookup.find({std::min(u, v), std::max(u, v)});
        return it == edge_lookup.end() ? -1 : it->second;
    }

    int index_of(int id) const
    {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id)
            return -1;
        return static_cast<int>(it - ids.begin());
    }

    std::string edge_key(int e) const
    {
        return std::to_string(ids[edges[e][0]]) + "-" + std::to_string(ids[edges[e][1]]);
    }
};

inline CellComplex build_complex(const RawComplex& raw)
{
    CellComplex c;
    const std::size_t n = raw.vertex_ids.size();
    if (raw.vertex_class.size() != n)
        fail(ErrorKind::InvalidInput, "vertex id and class lists differ in length");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return raw.vertex_ids[a] < raw.vertex_ids[b]; });
    for (auto k : order) {
        if (!c.ids.empty() && c.ids.back() == raw.vertex_ids[k])
            fail(ErrorKind::InvalidInput, "duplicate vertex id " + std::to_string(raw.vertex_ids[k]));
        c.ids.push_back(raw.vertex_ids[k]);
        c.vclass.push_back(raw.vertex_class[k]);
    }
    if (raw.faces.empty())
        fail(ErrorKind::NotClosedSurface, "no faces");

    auto idx = [&](int id) {
        int v = c.index_of(id);
        if (v < 0)
            fail(ErrorKind::InvalidInput, "face refers to unknown vertex " + std::to_string(id));
        return v;
    };

    // directed sides: (u,v) -> face
    std::map<std::pair<int, int>, int> side;
    for (std::size_t f = 0; f < raw.faces.size(); ++f) {
        const auto& rf = raw.faces[f];
        if (rf.size() < 3)
            fail(ErrorKind::InvalidInput, "face " + std::to_string(f) + " has fewer than 3 vertices");
        std::vector<int> fv;
        for (int id : rf)
            fv.push_back(idx(id));
        for (std::size_t k = 0; k < fv.size(); ++k) {
            int u = fv[k], v = fv[(k + 1) % fv.size()];
            if (u == v)
                fail(ErrorKind::RegularityViolation, "loop edge at vertex " + std::to_string(c.ids[u]));
        }
        std::vector<int> sorted = fv;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail(ErrorKind::RegularityViolation, "face " + std::to_string(f) + " repeats a vertex");
        for (std::size_t k = 0; k < fv.size(); ++k) {
            int u = fv[k], v = fv[(k + 1) % fv.size()];
            if (!side.emplace(std::make_pair(u, v), static_cast<int>(f)).second)
                fail(ErrorKind::NotClosedSurface, "directed edge " + std::to_string(c.ids[u]) + "->" +
                                                      std::to_string(c.ids[v]) + " used twice (inconsistent orientation)");
        }
        c.faces.push_back(std::move(fv));
    }

    for (const auto& [uv, f] : side) {
        auto [u, v] = uv;
        if (u > v)
            continue;
        auto rev = side.find({v, u});
        if (rev == side.end())
            fail(ErrorKind::NotClosedSurface, "edge " + std::to_string(c.ids[u]) + "-" + std::to_string(c.ids[v]) +
                                                  " bounds only one face side");
        if (rev->second == f)
            fail(ErrorKind::RegularityViolation, "face " + std::to_string(f) + " is glued to itself");
        int e = static_cast<int>(c.edges.size());
        c.edges.push_back({u, v});
        c.eclass.push_back(EdgeClass::Free);
        c.edge_faces.push_back({f, rev->second});
        c.edge_lookup[{u, v}] = e;
    }
    for (const auto& [uv, f] : side) {
        if (uv.first > uv.second && side.find({uv.second, uv.first}) == side.end())
            fail(ErrorKind::NotClosedSurface, "edge bounds only one face side");
    }

    c.face_edges.resize(c.faces.size());
    for (std::size_t f = 0; f < c.faces.size(); ++f) {
        const auto& fv = c.faces[f];
        for (std::size_t k = 0; k < fv.size(); ++k)
            c.face_edges[f].push_back(c.edge_between(fv[k], fv[(k + 1) % fv.size()]));
    }

    // face intersections: empty, one vertex, or exactly one edge with its endpoints
    std::vector<std::set<int>> fverts(c.faces.size());
    for (std::size_t f = 0; f < c.faces.size(); ++f)
        fverts[f].insert(c.faces[f].begin(), c.faces[f].end());
    for (std::size_t f = 0; f < c.faces.size(); ++f) {
        for (std::size_t g = f + 1; g < c.faces.size(); ++g) {
            std::vector<int> common;
            std::set_intersection(fverts[f].begin(), fverts[f].end(), fverts[g].begin(), fverts[g].end(),
                                  std::back_inserter(common));
            if (common.size() <= 1)
                continue;
            int shared_edges = 0;
            for (int e : c.face_edges[f]) {
                auto [l, r] = c.edge_faces[e];
                if ((l == static_cast<int>(f) && r == static_cast<int>(g)) ||
                    (r == static_cast<int>(f) && l == static_cast<int>(g)))
                    ++shared_edges;
            }
            if (shared_edges != 1 || common.size() != 2)
                fail(ErrorKind::RegularityViolation,
                     "faces " + std::to_string(f) + " and " + std::to_string(g) + " intersect irregularly");
        }
    }

    // every vertex used, with a single cyclic link
    c.vertex_edges.assign(c.ids.size(), {});
    for (int e = 0; e < c.num_edges(); ++e) {
        c.vertex_edges[c.edges[e][0]].push_back(e);
        c.vertex_edges[c.edges[e][1]].push_back(e);
    }
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (c.vertex_edges[v].empty())
            fail(ErrorKind::NotClosedSurface, "vertex " + std::to_string(c.ids[v]) + " lies on no face");
        // corners at v: (prev, next) neighbours; walk next -> corner whose prev is that neighbour
        std::map<int, int> next_of_prev;
        for (const auto& fv : c.faces) {
            for (std::size_t k = 0; k < fv.size(); ++k) {
                if (fv[k] != v)
                    continue;
                int prev = fv[(k + fv.size() - 1) % fv.size()];
                int next = fv[(k + 1) % fv.size()];
                next_of_prev[prev] = next;
            }
        }
        int start = next_of_prev.begin()->first, cur = start;
        std::size_t steps = 0;
        do {
            auto it = next_of_prev.find(cur);
            if (it == next_of_prev.end())
                fail(ErrorKind::NotClosedSurface, "open link at vertex " + std::to_string(c.ids[v]));
            cur = it->second;
            ++steps;
        } while (cur != start && steps <= next_of_prev.size());
        if (steps != next_of_prev.size())
            fail(ErrorKind::NotClosedSurface, "vertex " + std::to_string(c.ids[v]) + " is not a manifold point");
    }

    // connectedness
    {
        std::vector<int> comp(c.faces.size(), -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int e : c.face_edges[f]) {
                for (int g : c.edge_faces[e]) {
                    if (comp[g] < 0) {
                        comp[g] = 0;
                        stack.push_back(g);
                    }
                }
            }
        }
        if (std::find(comp.begin(), comp.end(), -1) != comp.end())
            fail(ErrorKind::NotClosedSurface, "complex is disconnected");
    }

    for (const auto& te : raw.tangent_edges) {
        int u = idx(te[0]), v = idx(te[1]);
        int e = c.edge_between(u, v);
        if (e < 0)
            fail(ErrorKind::InvalidInput, "tangent edge " + std::to_string(te[0]) + "-" + std::to_string(te[1]) +
                                              " is not an edge of the complex");
        if (c.is_point(u) || c.is_point(v))
            fail(ErrorKind::E0EndpointInV0, "tangent edge " + std::to_string(te[0]) + "-" + std::to_string(te[1]) +
                                                " has a point-circle endpoint");
        c.eclass[e] = EdgeClass::Tangent;
    }

    int chi = c.euler_characteristic();
    if (chi > 2 || chi % 2 != 0)
        fail(ErrorKind::NotClosedSurface, "Euler characteristic " + std::to_string(chi) + " is not that of a closed orientable surface");
    return c;
}

// ---------------------------------------------------------------------------
// Fan triangulation

struct Triangle {
    std::array<int, 3> v{}; // counter-clockwise
    std::array<int, 3> e{}; // e[k] joins v[k] and v[(k+1)%3]
    int face = -1;
};

struct TriangleTags {
    std::array<bool, 3> point{};   // vertex k is a point circle
    std::array<bool, 3> tangent{}; // edge k is forced tangent
};

struct Triangulation {
    CellComplex base;
    std::vector<std::array<int, 2>> edges; // base edges first, then diagonals
    std::vector<EdgeClass> eclass;
    std::vector<Triangle> tris;
    std::vector<std::array<std::array<int, 2>, 2>> edge_tris; // {triangle, slot} for both sides
    std::vector<std::vector<int>> face_tris;
    std::vector<std::vector<int>> vertex_tris;

    int num_vertices() const { return base.num_vertices(); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_tris() const { return static_cast<int>(tris.size()); }
    bool is_point(int v) const { return base.is_point(v); }
    bool is_tangent(int e) const { return eclass[e] == EdgeClass::Tangent; }

    TriangleTags tags(int t) const
    {
        TriangleTags tg;
        for (int k = 0; k < 3; ++k) {
            tg.point[k] = is_point(tris[t].v[k]);
            tg.tangent[k] = is_tangent(tris[t].e[k]);
        }
        return tg;
    }

    int num_diagonals() const { return num_edges() - base.num_edges(); }
};

inline Triangulation triangulate(const CellComplex& c)
{
    Triangulation t;
    t.base = c;
    t.edges = c.edges;
    t.eclass = c.eclass;
    t.face_tris.resize(c.faces.size());
    t.vertex_tris.resize(c.ids.size());

    for (int f = 0; f < c.num_faces(); ++f) {
        std::vector<int> fv = c.faces[f];
        auto apex = std::min_element(fv.begin(), fv.end());
        std::rotate(fv.begin(), apex, fv.end());
        std::vector<int> fan(fv.size(), -1);
        for (std::size_t k = 2; k + 1 < fv.size(); ++k) {
            int e = static_cast<int>(t.edges.size());
            t.edges.push_back({std::min(fv[0], fv[k]), std::max(fv[0], fv[k])});
            t.eclass.push_back(EdgeClass::Diagonal);
            fan[k] = e;
        }
        for (std::size_t k = 1; k + 1 < fv.size(); ++k) {
            Triangle tr;
            tr.v = {fv[0], fv[k], fv[k + 1]};
            tr.e[0] = (k == 1) ? c.edge_between(fv[0], fv[1]) : fan[k];
            tr.e[1] = c.edge_between(fv[k], fv[k + 1]);
            tr.e[2] = (k + 2 == fv.size()) ? c.edge_between(fv[k + 1], fv[0]) : fan[k + 1];
            tr.face = f;
            int id = static_cast<int>(t.tris.size());
            t.tris.push_back(tr);
            t.face_tris[f].push_back(id);
            for (int v : tr.v)
                t.vertex_tris[v].push_back(id);
        }
    }

    t.edge_tris.assign(t.edges.size(), {{{-1, -1}, {-1, -1}}});
    for (int i = 0; i < t.num_tris(); ++i) {
        for (int k = 0; k < 3; ++k) {
            int e = t.tris[i].e[k];
            auto& slot = t.edge_tris[e];
            if (slot[0][0] < 0)
                slot[0] = {i, k};
            else
                slot[1] = {i, k};
        }
    }
    return t;
}

// The triangulation regarded as a cell complex on its own (diagonals become ordinary free edges).
inline CellComplex triangulation_complex(const Triangulation& t)
{
    RawComplex raw;
    raw.vertex_ids = t.base.ids;
    raw.vertex_class = t.base.vclass;
    for (const auto& tr : t.tris)
        raw.faces.push_back({t.base.ids[tr.v[0]], t.base.ids[tr.v[1]], t.base.ids[tr.v[2]]});
    for (int e = 0; e < t.base.num_edges(); ++e)
        if (t.eclass[e] == EdgeClass::Tangent)
            raw.tangent_edges.push_back({t.base.ids[t.edges[e][0]], t.base.ids[t.edges[e][1]]});
    return build_complex(raw);
}

// ---------------------------------------------------------------------------
// Hat triangulation

struct HatTriangulation {
    int nv = 0; // base vertices occupy [0, nv)
    int nf = 0; // dual vertex of face f is nv + f
    std::vector<std::array<int, 2>> edges;
    std::vector<int> base_edge; // dual edge: base edge id; corner edge: -1
    std::vector<std::array<int, 3>> tris;      // counter-clockwise; tris[2e] at edges[e][0], tris[2e+1] at edges[e][1]
    std::vector<std::array<int, 3>> tri_edges; // tri_edges[t][k] joins tris[t][k], tris[t][k+1]
    std::vector<std::array<int, 2>> edge_tris;
    std::vector<char> tangent_dual;          // dual edge of a tangent base edge
    std::vector<std::vector<int>> adj;       // neighbouring hat vertices
    std::vector<std::vector<int>> vert_tris; // incident hat triangles

    int num_vertices() const { return nv + nf; }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_tris() const { return static_cast<int>(tris.size()); }
    bool is_base(int x) const { return x < nv; }
    bool is_dual_edge(int e) const { return base_edge[e] >= 0; }
};

inline HatTriangulation hat_complex(const CellComplex& c)
{
    HatTriangulation h;
    h.nv = c.num_vertices();
    h.nf = c.num_faces();
    auto O = [&](int f) { return h.nv + f; };

    for (int e = 0; e < c.num_edges(); ++e) {
        auto [l, r] = c.edge_faces[e];
        h.edges.push_back({std::min(O(l), O(r)), std::max(O(l), O(r))});
        h.base_edge.push_back(e);
    }
    std::map<std::pair<int, int>, int> corner;
    auto corner_edge = [&](int v, int f) {
        auto key = std::make_pair(v, f);
        auto it = corner.find(key);
        if (it != corner.end())
            return it->second;
        int id = static_cast<int>(h.edges.size());
        h.edges.push_back({v, O(f)});
        h.base_edge.push_back(-1);
        corner[key] = id;
        return id;
    };
    for (int e = 0; e < c.num_edges(); ++e) {
        auto [u, v] = c.edges[e];
        auto [fl, fr] = c.edge_faces[e];
        h.tris.push_back({u, O(fr), O(fl)});
        h.tri_edges.push_back({corner_edge(u, fr), e, corner_edge(u, fl)});
        h.tris.push_back({v, O(fl), O(fr)});
        h.tri_edges.push_back({corner_edge(v, fl), e, corner_edge(v, fr)});
    }
    h.tangent_dual.assign(h.edges.size(), 0);
    for (int e = 0; e < c.num_edges(); ++e)
        h.tangent_dual[e] = c.eclass[e] == EdgeClass::Tangent;
    h.edge_tris.assign(h.edges.size(), {-1, -1});
    for (int t = 0; t < h.num_tris(); ++t) {
        for (int k = 0; k < 3; ++k) {
            auto& s = h.edge_tris[h.tri_edges[t][k]];
            (s[0] < 0 ? s[0] : s[1]) = t;
        }
    }
    h.adj.assign(h.num_vertices(), {});
    for (const auto& e : h.edges) {
        h.adj[e[0]].push_back(e[1]);
        h.adj[e[1]].push_back(e[0]);
    }
    for (auto& a : h.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    h.vert_tris.assign(h.num_vertices(), {});
    for (int t = 0; t < h.num_tris(); ++t)
        for (int x : h.tris[t])
            h.vert_tris[x].push_back(t);
    return h;
}

// ---------------------------------------------------------------------------
// Domains

struct Domain {
    std::vector<int> generators; // sorted hat vertex ids
    std::vector<char> in_vertex, in_edge, in_tri; // open cells contained in the domain
};

struct BoundaryWalk {
    std::vector<int> vertices; // closed: edge k runs vertices[k] -> vertices[(k+1) % n]
    std::vector<int> edges;
};

struct BoundaryTrace {
    std::vector<BoundaryWalk> walks;
    std::vector<int> edge_multiplicity; // per hat edge
    std::vector<int> vertex_occurrences; // per base vertex
    int boundary_vertex_count = 0;       // |dOmega cap V| with multiplicity
    int tangent_dual_count = 0;          // |dOmega cap E0| with multiplicity
};

inline Domain make_domain(const HatTriangulation& h, std::vector<int> gens)
{
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    Domain d;
    d.in_vertex.assign(h.num_vertices(), 0);
    for (int g : gens) {
        if (g < 0 || g >= h.num_vertices())
            fail(ErrorKind::InvalidInput, "generator out of range");
        d.in_vertex[g] = 1;
    }
    d.generators = std::move(gens);
    d.in_edge.assign(h.num_edges(), 0);
    for (int e = 0; e < h.num_edges(); ++e)
        d.in_edge[e] = d.in_vertex[h.edges[e][0]] || d.in_vertex[h.edges[e][1]];
    d.in_tri.assign(h.num_tris(), 0);
    for (int t = 0; t < h.num_tris(); ++t)
        for (int x : h.tris[t])
            d.in_tri[t] = d.in_tri[t] || d.in_vertex[x];
    return d;
}

inline Domain open_star(const HatTriangulation& h, int v) { return make_domain(h, {v}); }

inline int euler_char(const Domain& d)
{
    auto count = [](const std::vector<char>& x) { return static_cast<int>(std::count(x.begin(), x.end(), 1)); };
    return count(d.in_vertex) - count(d.in_edge) + count(d.in_tri);
}

inline bool generators_connected(const HatTriangulation& h, const std::vector<int>& gens)
{
    if (gens.empty())
        return false;
    std::set<int> in(gens.begin(), gens.end()), seen{gens[0]};
    std::vector<int> stack{gens[0]};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : h.adj[x])
            if (in.count(y) && seen.insert(y).second)
                stack.push_back(y);
    }
    return seen.size() == in.size();
}

inline bool is_admissible(const HatTriangulation& h, const Domain& d)
{
    if (d.generators.empty() || static_cast<int>(d.generators.size()) == h.num_vertices())
        return false;
    if (!std::any_of(d.generators.begin(), d.generators.end(), [&](int g) { return h.is_base(g); }))
        return false;
    return generators_connected(h, d.generators);
}

// Boundary of the domain as closed walks; edge-sides are oriented with the domain on the left.
inline BoundaryTrace boundary(const HatTriangulation& h, const Domain& d)
{
    BoundaryTrace bt;
    bt.edge_multiplicity.assign(h.num_edges(), 0);
    bt.vertex_occurrences.assign(h.nv, 0);

    auto pos = [&](int t, int x) {
        for (int k = 0; k < 3; ++k)
            if (h.tris[t][k] == x)
                return k;
        return -1;
    };
    auto other_tri = [&](int e, int t) { return h.edge_tris[e][0] == t ? h.edge_tris[e][1] : h.edge_tris[e][0]; };

    // sides: (triangle, slot) with the slot edge outside the domain and the triangle inside
    std::map<std::pair<int, int>, char> used;
    std::vector<std::pair<int, int>> sides;
    for (int t = 0; t < h.num_tris(); ++t) {
        if (!d.in_tri[t])
            continue;
        for (int k = 0; k < 3; ++k) {
            int e = h.tri_edges[t][k];
            if (d.in_edge[e])
                continue;
            sides.push_back({t, k});
            used[{t, k}] = 0;
            ++bt.edge_multiplicity[e];
        }
    }
    for (auto [t, k] : sides) {
        if (used[{t, k}])
            continue;
        BoundaryWalk w;
        int ct = t, ck = k;
        while (!used[{ct, ck}]) {
            used[{ct, ck}] = 1;
            int a = h.tris[ct][ck], b = h.tris[ct][(ck + 1) % 3];
            w.vertices.push_back(a);
            w.edges.push_back(h.tri_edges[ct][ck]);
            // rotate around b through inside triangles until the next outside edge
            int tt = ct;
            int pb = pos(tt, b);
            while (true) {
                int e = h.tri_edges[tt][pb]; // edge b -> next vertex in tt
                if (!d.in_edge[e]) {
                    ct = tt;
                    ck = pb;
                    break;
                }
                tt = other_tri(e, tt);
                pb = pos(tt, b);
            }
        }
        bt.walks.push_back(std::move(w));
    }
    for (const auto& w : bt.walks) {
        for (std::size_t k = 0; k < w.vertices.size(); ++k) {
            int x = w.vertices[k];
            if (h.is_base(x)) {
                ++bt.vertex_occurrences[x];
                ++bt.boundary_vertex_count;
            }
        }
    }
    for (int e = 0; e < h.num_edges(); ++e)
        if (h.tangent_dual[e])
            bt.tangent_dual_count += bt.edge_multiplicity[e];
    return bt;
}

// Strict domains avoid point-circle vertices on their (topological) boundary.
inline bool is_strict(const CellComplex& c, const HatTriangulation& h, const Domain& d)
{
    for (int v = 0; v < h.nv; ++v) {
        if (!c.is_point(v) || d.in_vertex[v])
            continue;
        for (int t : h.vert_tris[v])
            if (d.in_tri[t])
                return false;
    }
    return true;
}

struct GeneratorSets {
    std::vector<std::vector<int>> sets; // sorted, canonical order
    bool partial = false;
};

// Connected generator subsets of the hat graph that meet V and are not all of V-hat.
inline GeneratorSets enumerate_generator_sets(const HatTriangulation& h, int cap, bool require_exhaustive = false)
{
    GeneratorSets out;
    const int n = h.num_vertices();
    auto accept = [&](const std::vector<int>& s) {
        if (static_cast<int>(s.size()) == n)
            return false;
        return std::any_of(s.begin(), s.end(), [&](int g) { return h.is_base(g); });
    };
    if (n <= cap && n <= 63) {
        std::vector<std::uint64_t> nb(n, 0);
        for (int x = 0; x < n; ++x)
            for (int y : h.adj[x])
                nb[x] |= std::uint64_t{1} << y;
        std::vector<int> cur;
        // ESU-style enumeration: each connected set is emitted once, rooted at its least vertex.
        auto rec = [&](auto&& self, std::uint64_t sub, std::uint64_t ext, std::uint64_t nbh, int root) -> void {
            if (accept(cur))
                out.sets.push_back(cur);
            while (ext) {
                int w = __builtin_ctzll(ext);
                ext &= ext - 1;
                std::uint64_t excl = nb[w] & ~sub & ~nbh;
                std::uint64_t ext2 = ext;
                for (std::uint64_t m = excl; m; m &= m - 1) {
                    int u = __builtin_ctzll(m);
                    if (u > root)
                        ext2 |= std::uint64_t{1} << u;
                }
                cur.push_back(w);
                self(self, sub | (std::uint64_t{1} << w), ext2, nbh | nb[w], root);
                cur.pop_back();
            }
        };
        for (int v = 0; v < n; ++v) {
            std::uint64_t ext = 0;
            for (int u : h.adj[v])
                if (u > v)
                    ext |= std::uint64_t{1} << u;
            cur = {v};
            rec(rec, std::uint64_t{1} << v, ext, nb[v] | (std::uint64_t{1} << v), v);
        }
        for (auto& s : out.sets)
            std::sort(s.begin(), s.end());
        std::sort(out.sets.begin(), out.sets.end());
        return out;
    }
    if (require_exhaustive)
        fail(ErrorKind::CapExceeded, std::to_string(n) + " hat vertices exceed the enumeration cap " + std::to_string(cap));
    out.partial = true;
    for (int v = 0; v < n; ++v) {
        if (accept({v}))
            out.sets.push_back({v});
        for (int u : h.adj[v])
            if (u > v && accept({v, u}))
                out.sets.push_back({v, u});
    }
    std::sort(out.sets.begin(), out.sets.end());
    return out;
}

struct DomainSet {
    std::vector<Domain> domains;
    bool partial = false;
};

inline DomainSet admissible_domains(const CellComplex& c, const HatTriangulation& h, bool strict, int cap = 22,
                                    bool require_exhaustive = false)
{
    DomainSet ds;
    auto gs = enumerate_generator_sets(h, cap, require_exhaustive);
    ds.partial = gs.partial;
    for (auto& s : gs.sets) {
        Domain d = make_domain(h, s);
        if (strict && !is_strict(c, h, d))
            continue;
        ds.domains.push_back(std::move(d));
    }
    return ds;
}

} // namespace hicp
