#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace hicp;
using testing_support::fixture;

namespace {

// Open cells of the domain, read off from closed triangles: an open cell lies in the open star of x
// exactly when every hat triangle containing it contains x.
int euler_char_from_stars(const HatTriangulation& h, const std::vector<int>& gens)
{
    auto contains = [&](int t, int x) { return std::count(h.tris[t].begin(), h.tris[t].end(), x) > 0; };
    auto covered = [&](const std::vector<int>& around) {
        for (int x : gens) {
            bool all = true;
            for (int t : around)
                all = all && contains(t, x);
            if (all)
                return true;
        }
        return false;
    };
    int chi = 0;
    for (int v = 0; v < h.num_vertices(); ++v)
        chi += covered(h.vert_tris[v]);
    for (int e = 0; e < h.num_edges(); ++e)
        chi -= covered({h.edge_tris[e][0], h.edge_tris[e][1]});
    for (int t = 0; t < h.num_tris(); ++t)
        chi += covered({t});
    return chi;
}

// Boundary edges counted by their inside neighbours, and the number of connected boundary components.
struct BoundaryOracle {
    std::map<int, int> multiplicity;
    int components = 0;
};

BoundaryOracle boundary_oracle(const HatTriangulation& h, const Domain& d)
{
    BoundaryOracle o;
    for (int e = 0; e < h.num_edges(); ++e) {
        if (d.in_edge[e])
            continue;
        int m = d.in_tri[h.edge_tris[e][0]] + d.in_tri[h.edge_tris[e][1]];
        if (m)
            o.multiplicity[e] = m;
    }
    std::map<int, int> parent;
    auto find = [&](auto&& self, int x) -> int { return parent[x] == x ? x : parent[x] = self(self, parent[x]); };
    for (auto [e, m] : o.multiplicity)
        for (int x : h.edges[e])
            parent.emplace(x, x);
    for (auto [e, m] : o.multiplicity)
        parent[find(find, h.edges[e][0])] = find(find, h.edges[e][1]);
    std::set<int> roots;
    for (auto& [x, p] : parent)
        roots.insert(find(find, x));
    o.components = static_cast<int>(roots.size());
    return o;
}

} // namespace

TEST(Complex, GridTorusCounts)
{
    CellComplex c = fixture("grid_torus.json").complex;
    EXPECT_EQ(c.num_vertices(), 9);
    EXPECT_EQ(c.num_edges(), 18);
    EXPECT_EQ(c.num_faces(), 9);
    EXPECT_EQ(c.euler_characteristic(), 0);
}

TEST(Complex, TetrahedronIsSphere)
{
    CellComplex c = fixture("tetrahedron.json").complex;
    EXPECT_EQ(c.num_edges(), 6);
    EXPECT_EQ(c.euler_characteristic(), 2);
}

TEST(Complex, OneVertexTorusIsIrregular)
{
    try {
        fixture("one_vertex_torus.json");
        FAIL() << "expected RegularityViolation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RegularityViolation);
    }
}

TEST(Complex, Genus2Fixture)
{
    CellComplex c = fixture("genus2.json").complex;
    EXPECT_EQ(c.num_vertices(), 15);
    EXPECT_EQ(c.num_edges(), 51);
    EXPECT_EQ(c.num_faces(), 34);
    EXPECT_EQ(c.euler_characteristic(), -2);
}

TEST(Complex, RejectsBadInput)
{
    auto expect_kind = [](RawComplex raw, ErrorKind k) {
        try {
            build_complex(raw);
            ADD_FAILURE() << "expected " << to_string(k);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), k) << e.what();
        }
    };
    RawComplex tet = fixture("tetrahedron.json").raw;
    RawComplex open = tet;
    open.faces.pop_back();
    expect_kind(open, ErrorKind::NotClosedSurface);
    RawComplex tangent = tet;
    tangent.vertex_class[0] = VertexClass::Point;
    tangent.tangent_edges = {{0, 1}};
    expect_kind(tangent, ErrorKind::E0EndpointInV0);
    // two triangles glued along all three edges share more than one edge
    RawComplex pillow{{0, 1, 2}, {VertexClass::Disk, VertexClass::Disk, VertexClass::Disk}, {{0, 1, 2}, {0, 2, 1}}, {}};
    expect_kind(pillow, ErrorKind::RegularityViolation);
}

TEST(Complex, FaceDegreeSumIsTwiceEdges)
{
    for (const char* name : {"grid_torus.json", "tetrahedron.json", "hexagon_torus.json", "pentagon_torus.json", "genus2.json"}) {
        CellComplex c = fixture(name).complex;
        std::size_t s = 0;
        for (const auto& f : c.faces)
            s += f.size();
        EXPECT_EQ(s, 2u * c.num_edges()) << name;
        EXPECT_EQ(hat_complex(c).num_tris(), 2 * c.num_edges()) << name;
    }
}

TEST(Triangulate, GridTorus)
{
    Triangulation t = triangulate(fixture("grid_torus.json").complex);
    EXPECT_EQ(t.num_tris(), 18);
    EXPECT_EQ(t.num_diagonals(), 9);
}

TEST(Triangulate, AlreadyTriangular)
{
    CellComplex c = fixture("grid_torus_triangulated.json").complex;
    Triangulation t = triangulate(c);
    EXPECT_EQ(t.num_diagonals(), 0);
    ASSERT_EQ(t.num_tris(), c.num_faces());
    for (int f = 0; f < c.num_faces(); ++f) {
        std::multiset<int> a(c.faces[f].begin(), c.faces[f].end()), b(t.tris[f].v.begin(), t.tris[f].v.end());
        EXPECT_EQ(a, b);
    }
}

TEST(Triangulate, HexagonFace)
{
    CellComplex c = fixture("hexagon_torus.json").complex;
    Triangulation t = triangulate(c);
    int hex = -1;
    for (int f = 0; f < c.num_faces(); ++f)
        if (c.faces[f].size() == 6)
            hex = f;
    ASSERT_GE(hex, 0);
    EXPECT_EQ(t.face_tris[hex].size(), 4u);
    EXPECT_EQ(t.num_diagonals(), 3 + (c.num_faces() - 1));
    // the fan apex is the least vertex of the face
    int apex = *std::min_element(c.faces[hex].begin(), c.faces[hex].end());
    for (int tr : t.face_tris[hex])
        EXPECT_EQ(t.tris[tr].v[0], apex);
}

TEST(Triangulate, IsTriangulatedComplex)
{
    Triangulation t = triangulate(fixture("pentagon_torus.json").complex);
    CellComplex tc = triangulation_complex(t);
    EXPECT_EQ(tc.num_faces(), t.num_tris());
    EXPECT_EQ(tc.euler_characteristic(), 0);
}

TEST(Hat, Counts)
{
    HatTriangulation h = hat_complex(fixture("grid_torus.json").complex);
    EXPECT_EQ(h.num_vertices(), 18);
    EXPECT_EQ(h.num_tris(), 36);
    HatTriangulation ht = hat_complex(fixture("tetrahedron.json").complex);
    EXPECT_EQ(ht.num_vertices(), 8);
    EXPECT_EQ(ht.num_tris(), 12);
    for (int t = 0; t < h.num_tris(); ++t) {
        int base = 0;
        for (int x : h.tris[t])
            base += h.is_base(x);
        EXPECT_EQ(base, 1);
    }
}

TEST(Domain, OpenStarOfVertex)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    for (int k = 0; k < c.num_vertices(); ++k) {
        Domain d = open_star(h, k);
        EXPECT_EQ(std::count(d.in_tri.begin(), d.in_tri.end(), 1), 4);
        BoundaryTrace bt = boundary(h, d);
        ASSERT_EQ(bt.walks.size(), 1u);
        EXPECT_EQ(bt.walks[0].edges.size(), 4u);
        for (int e : bt.walks[0].edges) {
            EXPECT_TRUE(h.is_dual_edge(e));
            EXPECT_EQ(bt.edge_multiplicity[e], 1);
        }
        EXPECT_EQ(bt.boundary_vertex_count, 0);
        EXPECT_EQ(euler_char(d), 1);
        EXPECT_TRUE(is_admissible(h, d));
    }
}

TEST(Domain, OpenStarOfFace)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    Domain d = open_star(h, h.nv + 4);
    EXPECT_EQ(std::count(d.in_tri.begin(), d.in_tri.end(), 1), 8);
    BoundaryTrace bt = boundary(h, d);
    int n = 0;
    for (const auto& w : bt.walks)
        for (int e : w.edges) {
            EXPECT_FALSE(h.is_dual_edge(e));
            ++n;
        }
    EXPECT_EQ(n, 8);
    EXPECT_EQ(bt.boundary_vertex_count, 4);
    EXPECT_FALSE(is_admissible(h, d));
}

TEST(Domain, AdmissibilityRejections)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    std::vector<int> all(h.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_FALSE(is_admissible(h, make_domain(h, all)));
    EXPECT_FALSE(is_admissible(h, make_domain(h, {h.nv})));
    EXPECT_TRUE(is_admissible(h, make_domain(h, {0})));
}

TEST(Domain, AnnulusHasTwoWalks)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    // the three face centres of the bottom row plus one vertex on it
    std::vector<int> gens{0, h.nv + 0, h.nv + 1, h.nv + 2};
    Domain d = make_domain(h, gens);
    ASSERT_TRUE(is_admissible(h, d));
    BoundaryTrace bt = boundary(h, d);
    BoundaryOracle o = boundary_oracle(h, d);
    EXPECT_EQ(o.components, 2);
    EXPECT_EQ(static_cast<int>(bt.walks.size()), o.components);
    EXPECT_EQ(euler_char_from_stars(h, d.generators), 0);
    EXPECT_EQ(euler_char(d), 0);
}

TEST(Domain, SlitIsTracedTwice)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    // vertices 0 and 1 joined through the centres of faces 1 and 2; the dual edge of 0-1 stays outside
    Domain d = make_domain(h, {0, 1, h.nv + 1, h.nv + 2});
    ASSERT_TRUE(is_admissible(h, d));
    BoundaryTrace bt = boundary(h, d);
    BoundaryOracle o = boundary_oracle(h, d);
    int e01 = -1;
    for (int e = 0; e < h.num_edges(); ++e)
        if (h.base_edge[e] == c.edge_between(0, 1))
            e01 = e;
    ASSERT_GE(e01, 0);
    EXPECT_EQ(o.multiplicity[e01], 2);
    EXPECT_EQ(bt.edge_multiplicity[e01], 2);
    for (int e = 0; e < h.num_edges(); ++e)
        EXPECT_EQ(bt.edge_multiplicity[e], o.multiplicity.count(e) ? o.multiplicity[e] : 0) << e;
    EXPECT_EQ(euler_char(d), euler_char_from_stars(h, d.generators));
}

TEST(Domain, EulerCharMatchesStarOracle)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    DomainSet ds = admissible_domains(c, h, false);
    ASSERT_FALSE(ds.partial);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, ds.domains.size() - 1);
    for (int i = 0; i < 300; ++i) {
        const Domain& d = ds.domains[pick(rng)];
        EXPECT_EQ(euler_char(d), euler_char_from_stars(h, d.generators));
        BoundaryTrace bt = boundary(h, d);
        BoundaryOracle o = boundary_oracle(h, d);
        for (int e = 0; e < h.num_edges(); ++e)
            ASSERT_EQ(bt.edge_multiplicity[e], o.multiplicity.count(e) ? o.multiplicity[e] : 0);
        for (const auto& w : bt.walks)
            for (std::size_t k = 0; k < w.edges.size(); ++k) {
                auto ends = h.edges[w.edges[k]];
                int a = w.vertices[k], b = w.vertices[(k + 1) % w.vertices.size()];
                EXPECT_TRUE((ends[0] == a && ends[1] == b) || (ends[0] == b && ends[1] == a));
            }
    }
}

TEST(Domain, EnumerationCapAndStrictSubset)
{
    CellComplex c = fixture("grid_torus.json").complex;
    HatTriangulation h = hat_complex(c);
    DomainSet all = admissible_domains(c, h, false);
    DomainSet strict = admissible_domains(c, h, true);
    EXPECT_LE(strict.domains.size(), all.domains.size());
    std::set<std::vector<int>> a;
    for (const auto& d : all.domains)
        a.insert(d.generators);
    for (const auto& d : strict.domains)
        EXPECT_TRUE(a.count(d.generators));
    for (const auto& d : all.domains)
        ASSERT_TRUE(is_admissible(h, d));

    DomainSet small = admissible_domains(c, h, false, 10);
    EXPECT_TRUE(small.partial);
    for (int k = 0; k < c.num_vertices(); ++k)
        EXPECT_TRUE(std::any_of(small.domains.begin(), small.domains.end(),
                                [&](const Domain& d) { return d.generators == std::vector<int>{k}; }));
    try {
        admissible_domains(c, h, false, 10, true);
        FAIL() << "expected CapExceeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    }
}

TEST(Domain, EulerCharInvariantUnderRelabeling)
{
    Problem p = fixture("grid_torus.json");
    RawComplex raw = p.raw;
    for (auto& id : raw.vertex_ids)
        id = 100 - id;
    for (auto& f : raw.faces)
        for (auto& v : f)
            v = 100 - v;
    CellComplex c1 = p.complex, c2 = build_complex(raw);
    HatTriangulation h1 = hat_complex(c1), h2 = hat_complex(c2);
    std::map<int, int> chi1, chi2;
    for (int k = 0; k < c1.num_vertices(); ++k) {
        chi1[c1.ids[k]] = euler_char(open_star(h1, k));
        chi2[100 - c2.ids[k]] = euler_char(open_star(h2, k));
    }
    EXPECT_EQ(chi1, chi2);
    EXPECT_EQ(admissible_domains(c1, h1, true).domains.size(), admissible_domains(c2, h2, true).domains.size());
}
