#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "hicp/hicp.hpp"

using namespace hicp;

namespace {

enum Exit { Ok = 0, Usage = 1, Infeasible = 2, Partial = 3, SolverFailure = 4, IoFailure = 5 };

struct Flags {
    std::string input, output, geometry, svg;
    double tol = 1e-10;
    int max_iter = 100;
    int enum_cap = 22;
    std::uint64_t seed = 7;
    int samples = 20;
};

void emit(const json& j, const std::string& path)
{
    std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

Problem load_input(const Flags& f)
{
    Problem p = load_problem(f.input);
    if (!f.geometry.empty()) {
        p.geometry = parse_geometry(f.geometry);
        if (p.angles)
            p.angles->geometry = p.geometry;
    }
    return p;
}

int run_validate(const Flags& f)
{
    Problem p = load_input(f);
    if (!p.angles)
        fail(ErrorKind::InvalidInput, "input carries no theta/Theta");
    FeasibilityOptions fo;
    fo.cap = f.enum_cap;
    FeasibilityReport r = check_feasibility(p.complex, *p.angles, fo);
    emit(report_to_json(r), f.output);
    if (r.verdict == Verdict::Infeasible)
        return Infeasible;
    return r.verdict == Verdict::FeasibleUnderPartialCheck ? Partial : Ok;
}

int run_solve(const Flags& f)
{
    Problem p = load_input(f);
    if (!p.angles)
        fail(ErrorKind::InvalidInput, "input carries no theta/Theta");
    Triangulation t = triangulate(p.complex);
    SolveOptions so;
    so.grad_tol = f.tol;
    so.max_iter = f.max_iter;
    so.enum_cap = f.enum_cap;
    so.initial = starting_coords(t, p.geometry);
    Solution s = solve(t, *p.angles, so);
    emit(solution_to_json(t, *p.angles, s), f.output);
    if (!f.svg.empty() && s.status == SolveStatus::Converged)
        write_text_file(f.svg, export_svg(develop(t, s.coords, p.geometry)));
    if (s.status == SolveStatus::Infeasible)
        return Infeasible;
    return s.status == SolveStatus::Converged ? Ok : SolverFailure;
}

int run_render(const Flags& f)
{
    LoadedSolution ls = parse_solution(read_json_file(f.input));
    SurfaceLayout sl = develop(ls.tri, ls.coords, ls.problem.geometry);
    if (f.svg.empty() && f.output.empty())
        fail(ErrorKind::InvalidInput, "render needs --svg or --output");
    if (!f.svg.empty())
        write_text_file(f.svg, export_svg(sl));
    if (!f.output.empty())
        emit(export_json(sl), f.output);
    return Ok;
}

int run_demo(const Flags& f)
{
    Problem p = load_input(f);
    Triangulation t = triangulate(p.complex);
    EdgeRadii er = reference_pattern(t, p.geometry);
    SurfaceLayout sl = develop_lengths(t, er, p.geometry);
    RealizedAngles ra = realized_from_lengths(t, er, p.geometry);
    AngleData ad = extract_angle_data(t, ra, p.geometry);
    bool delaunay = true;
    json edges = json::array();
    for (const EdgeRecord& rec : delaunay_report(sl)) {
        bool diag = rec.edge >= t.base.num_edges();
        bool ok = diag ? rec.is_redundant : rec.is_delaunay;
        delaunay = delaunay && ok;
        edges.push_back({{"edge", tri_edge_key(t, rec.edge)}, {"diagonal", diag}, {"theta", rec.theta}, {"ok", ok}});
    }
    std::string merge = "ok";
    try {
        merge_redundant(sl, sl.merge_tol);
    } catch (const Error& e) {
        merge = e.what();
        delaunay = false;
    }
    json out;
    out["problem"] = problem_to_json(p.complex, ad);
    out["delaunay"] = delaunay;
    out["merge"] = merge;
    out["edges"] = edges;
    out["layout"] = export_json(sl);
    emit(out, f.output);
    if (!f.svg.empty())
        write_text_file(f.svg, export_svg(sl));
    return delaunay ? Ok : SolverFailure;
}

int run_roundtrip(const Flags& f)
{
    Problem p = load_input(f);
    Triangulation t = triangulate(p.complex);
    const Geometry g = p.geometry;
    std::mt19937_64 rng(f.seed);
    SolveOptions so;
    so.grad_tol = f.tol;
    so.max_iter = f.max_iter;
    so.initial = starting_coords(t, g);
    double worst = 0;
    bool all_converged = true;
    json samples = json::array();
    for (int i = 0; i < f.samples; ++i) {
        EdgeRadii er = sample_er(t, g, rng);
        TetraCoords truth = project_gauge(t, psi_inv(t, er, g), g);
        Solution s = solve_lifted(t, as_target(realized_from_lengths(t, er, g), g), so);
        double err = s.status == SolveStatus::Converged ? gauge_distance(t, s.coords, truth, g)
                                                        : std::numeric_limits<double>::infinity();
        all_converged = all_converged && s.status == SolveStatus::Converged;
        worst = std::max(worst, err);
        samples.push_back({{"status", to_string(s.status)},
                           {"iterations", s.iterations},
                           {"error", std::isfinite(err) ? json(err) : json(nullptr)}});
    }
    json out;
    out["geometry"] = to_string(g);
    out["seed"] = f.seed;
    out["samples"] = samples;
    out["max_error"] = std::isfinite(worst) ? json(worst) : json(nullptr);
    emit(out, f.output);
    return all_converged && worst < 1e-6 ? Ok : SolverFailure;
}

int exit_for(const Error& e)
{
    switch (e.kind()) {
    case ErrorKind::IoError: return IoFailure;
    case ErrorKind::CapExceeded: return Partial;
    case ErrorKind::NotInTE:
    case ErrorKind::PathLeavesDomain:
    case ErrorKind::NonRedundantDiagonal:
    case ErrorKind::InvariantViolation: return SolverFailure;
    default: return Usage;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hyper-ideal circle patterns: feasibility, solving and layout"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sc, bool geometry) {
        sc->add_option("--input", f.input, "input JSON")->required();
        sc->add_option("--output", f.output, "output JSON (stdout if omitted)");
        if (geometry)
            sc->add_option("--geometry", f.geometry, "override geometry")->check(CLI::IsMember({"euclidean", "hyperbolic"}));
    };
    auto* validate = app.add_subcommand("validate", "check the angle data against the feasibility conditions");
    add_common(validate, true);
    validate->add_option("--enum-cap", f.enum_cap, "largest hat complex enumerated exhaustively")->check(CLI::PositiveNumber);

    auto* solve_cmd = app.add_subcommand("solve", "reconstruct the pattern with prescribed angles");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--tol", f.tol, "gradient tolerance")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-iter", f.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--enum-cap", f.enum_cap, "largest hat complex enumerated exhaustively")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--svg", f.svg, "also render the solution");

    auto* render = app.add_subcommand("render", "develop a solution and draw it");
    render->add_option("--input", f.input, "solution JSON")->required();
    render->add_option("--svg", f.svg, "SVG output");
    render->add_option("--output", f.output, "layout JSON output");

    auto* demo = app.add_subcommand("demo", "build the reference pattern of a complex");
    add_common(demo, true);
    demo->add_option("--svg", f.svg, "SVG output");

    auto* roundtrip = app.add_subcommand("roundtrip", "sample patterns, extract angles and solve again");
    add_common(roundtrip, true);
    roundtrip->add_option("--seed", f.seed, "PRNG seed");
    roundtrip->add_option("--samples", f.samples, "number of samples")->check(CLI::PositiveNumber);
    roundtrip->add_option("--tol", f.tol, "gradient tolerance")->check(CLI::PositiveNumber);
    roundtrip->add_option("--max-iter", f.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Usage;
    }

    try {
        if (*validate)
            return run_validate(f);
        if (*solve_cmd)
            return run_solve(f);
        if (*render)
            return run_render(f);
        if (*demo)
            return run_demo(f);
        return run_roundtrip(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return SolverFailure;
    }
}
