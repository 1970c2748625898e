#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace hicp;
using testing_support::data_path;
using testing_support::fixture;

namespace {

namespace fs = std::filesystem;

fs::path scratch()
{
    fs::path d = fs::temp_directory_path() / ("hicp_io_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(HICP_CLI) + " " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Io, ProblemRoundTrip)
{
    for (const char* name : {"grid_torus.json", "genus2.json", "pentagon_torus.json", "hexagon_torus.json"}) {
        Problem p = fixture(name);
        AngleData ad = p.angles ? *p.angles : make_angle_data(p.complex, p.geometry);
        json j = problem_to_json(p.complex, ad);
        Problem q = parse_problem(j);
        EXPECT_EQ(q.complex.num_vertices(), p.complex.num_vertices()) << name;
        EXPECT_EQ(q.complex.num_edges(), p.complex.num_edges()) << name;
        EXPECT_EQ(q.complex.faces, p.complex.faces) << name;
        EXPECT_EQ(q.complex.eclass, p.complex.eclass) << name;
        EXPECT_EQ(problem_to_json(q.complex, *q.angles).dump(), j.dump()) << name;
    }
}

TEST(Io, EdgeKeysInEitherOrder)
{
    Problem p = fixture("grid_torus.json");
    std::string key = p.complex.edge_key(4);
    auto dash = key.find('-');
    std::string rev = key.substr(dash + 1) + "-" + key.substr(0, dash);
    EXPECT_EQ(edge_from_key(p.complex, key), 4);
    EXPECT_EQ(edge_from_key(p.complex, rev), 4);
    try {
        edge_from_key(p.complex, "0-99");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IndexMismatch);
    }
}

TEST(Io, MalformedInput)
{
    auto kind_of = [](const char* text) {
        try {
            parse_problem(json::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvariantViolation;
    };
    EXPECT_EQ(kind_of(R"({"faces": [[0,1,2]]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"geometry": "spherical", "vertices": [], "faces": []})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"vertices": [{"id": 0, "circle": "ring"}], "faces": []})"), ErrorKind::InvalidInput);
    try {
        read_json_file("/nonexistent/input.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
}

TEST(Io, SolutionRoundTrip)
{
    Problem p = fixture("grid_torus.json");
    Triangulation t = triangulate(p.complex);
    Solution s = solve(t, *p.angles);
    ASSERT_EQ(s.status, SolveStatus::Converged);
    json j = solution_to_json(t, *p.angles, s);
    LoadedSolution ls = parse_solution(json::parse(j.dump()));
    EXPECT_EQ(ls.status, "Converged");
    EXPECT_EQ(ls.coords.a, s.coords.a);
    EXPECT_EQ(ls.coords.b, s.coords.b);
}

TEST(Io, CliExitCodes)
{
    fs::path d = scratch();
    std::string out = " --output " + (d / "out.json").string();
    EXPECT_EQ(run_cli("validate --input " + data_path("grid_torus.json") + out), 0);
    EXPECT_EQ(run_cli("validate --input " + data_path("grid_torus_disk_vertex.json") + out), 2);
    Problem g2 = fixture("genus2.json");
    AngleData ad = make_angle_data(g2.complex, Geometry::Hyperbolic);
    for (int e = 0; e < g2.complex.num_edges(); ++e)
        if (g2.complex.eclass[e] != EdgeClass::Tangent)
            ad.theta[e] = pi / 2;
    for (int v = 0; v < g2.complex.num_vertices(); ++v)
        if (!g2.complex.is_point(v))
            ad.Theta[v] = 2 * pi;
    write_text_file((d / "g2.json").string(), problem_to_json(g2.complex, ad).dump());
    EXPECT_EQ(run_cli("validate --input " + (d / "g2.json").string() + out), 3);
    EXPECT_EQ(run_cli("validate --input " + data_path("genus2.json") + out), 1);
    EXPECT_EQ(run_cli("validate"), 1);
    EXPECT_EQ(run_cli("frobnicate --input " + data_path("grid_torus.json")), 1);
    EXPECT_EQ(run_cli("solve --input " + data_path("grid_torus.json") + " --geometry spherical"), 1);
    EXPECT_EQ(run_cli("validate --input " + (d / "missing.json").string()), 5);
    EXPECT_EQ(run_cli("solve --input " + data_path("grid_torus_disk_vertex.json") + out), 2);
    EXPECT_EQ(run_cli("solve --input " + data_path("grid_torus.json") + out + " --svg " + (d / "s.svg").string()), 0);
    EXPECT_EQ(run_cli("render --input " + (d / "out.json").string() + " --svg " + (d / "r.svg").string()), 0);
    EXPECT_EQ(slurp(d / "s.svg"), slurp(d / "r.svg"));
    EXPECT_EQ(run_cli("solve --input " + data_path("grid_torus.json") + " --output /nonexistent/dir/x.json"), 5);
    fs::remove_all(d);
}

TEST(Io, DemoAndRoundTripCommands)
{
    fs::path d = scratch();
    fs::path out = d / "demo.json";
    ASSERT_EQ(run_cli("demo --geometry hyperbolic --input " + data_path("pentagon_torus.json") + " --output " + out.string()), 0);
    json j = read_json_file(out.string());
    EXPECT_TRUE(j.at("delaunay").get<bool>());
    EXPECT_EQ(j.at("merge"), "ok");
    // the emitted angle data is a valid problem again
    Problem p = parse_problem(j.at("problem"));
    ASSERT_TRUE(p.angles.has_value());
    // the hat complex exceeds the enumeration cap, so the check is partial but must find nothing
    FeasibilityReport rep = check_feasibility(p.complex, *p.angles);
    EXPECT_NE(rep.verdict, Verdict::Infeasible);
    EXPECT_TRUE(rep.violations.empty());

    fs::path rt = d / "rt.json";
    ASSERT_EQ(run_cli("roundtrip --seed 7 --input " + data_path("grid_torus.json") + " --output " + rt.string()), 0);
    json r = read_json_file(rt.string());
    EXPECT_EQ(r.at("seed"), 7);
    EXPECT_EQ(r.at("samples").size(), 20u);
    EXPECT_LT(r.at("max_error").get<double>(), 1e-6);
    fs::remove_all(d);
}

TEST(Io, ByteIdenticalOutputs)
{
    fs::path d = scratch();
    for (const std::string& cmd : {"roundtrip --seed 7 --samples 5 --geometry hyperbolic --input " + data_path("genus2.json"),
                                   "solve --input " + data_path("grid_torus.json"),
                                   "demo --input " + data_path("hexagon_torus.json")}) {
        ASSERT_EQ(run_cli(cmd + " --output " + (d / "a.json").string()), 0) << cmd;
        ASSERT_EQ(run_cli(cmd + " --output " + (d / "b.json").string()), 0) << cmd;
        EXPECT_EQ(slurp(d / "a.json"), slurp(d / "b.json")) << cmd;
    }
    std::string base = "validate --input " + data_path("grid_torus_disk_vertex.json") + " --output ";
    ::setenv("HICP_THREADS", "1", 1);
    run_cli(base + (d / "t1.json").string());
    ::setenv("HICP_THREADS", "5", 1);
    run_cli(base + (d / "t5.json").string());
    ::unsetenv("HICP_THREADS");
    EXPECT_EQ(slurp(d / "t1.json"), slurp(d / "t5.json"));
    fs::remove_all(d);
}
