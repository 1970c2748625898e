#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace hicp;
using testing_support::fixture;

namespace {

struct Sampled {
    Triangulation t;
    EdgeRadii er;
    TetraCoords truth;
    LiftedTarget target;
};

Sampled sampled(const char* name, Geometry g, std::uint64_t seed)
{
    Sampled s{triangulate(fixture(name).complex), {}, {}, {}};
    std::mt19937_64 rng(seed);
    s.er = sample_er(s.t, g, rng);
    s.truth = project_gauge(s.t, psi_inv(s.t, s.er, g), g);
    s.target = as_target(realized_from_lengths(s.t, s.er, g), g);
    return s;
}

// Central differences of the gradient over all variables at once.
Eigen::MatrixXd fd_jacobian(const Triangulation& t, const TetraCoords& tc, const LiftedTarget& target)
{
    VariableMap vm = variable_map(t);
    Eigen::VectorXd x = pack(vm, tc);
    const double h = 1e-6;
    Eigen::MatrixXd J(vm.size(), vm.size());
    for (int i = 0; i < vm.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        J.col(i) = (grad_U(t, unpack(t, vm, xp), target) - grad_U(t, unpack(t, vm, xm), target)) / (2 * h);
    }
    return J;
}

} // namespace

TEST(Solver, GradientVanishesAtSynthesizedPattern)
{
    for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic}) {
        Sampled s = sampled("genus2.json", g, 3);
        EXPECT_LT(grad_U(s.t, s.truth, s.target).lpNorm<Eigen::Infinity>(), 1e-12) << to_string(g);
    }
}

TEST(Solver, HessianMatchesGradientDifferences)
{
    for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic}) {
        Sampled s = sampled("pentagon_torus.json", g, 5);
        Eigen::MatrixXd H = hessian_U(s.t, s.truth, g);
        Eigen::MatrixXd J = fd_jacobian(s.t, s.truth, s.target);
        EXPECT_LT((H - H.transpose()).lpNorm<Eigen::Infinity>(), 1e-14);
        // the realized angles are the gradient of a potential, so their Jacobian is symmetric too
        EXPECT_LT((J - J.transpose()).lpNorm<Eigen::Infinity>(), 1e-6) << to_string(g);
        EXPECT_LT((H - J).lpNorm<Eigen::Infinity>(), 1e-6) << to_string(g);
    }
}

TEST(Solver, HessianDefiniteTransverseToGauge)
{
    for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic}) {
        Sampled s = sampled("genus2.json", g, 9);
        VariableMap vm = variable_map(s.t);
        Eigen::MatrixXd H = hessian_U(s.t, s.truth, g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        const Eigen::VectorXd& ev = es.eigenvalues();
        if (g == Geometry::Hyperbolic) {
            EXPECT_GT(ev.minCoeff(), 1e-8);
            continue;
        }
        Eigen::VectorXd v = gauge_direction(s.t, vm);
        EXPECT_LT((H * v).lpNorm<Eigen::Infinity>(), 1e-6 * v.norm());
        // one eigenvalue sits at zero along the scaling orbit, the rest are positive
        EXPECT_LT(std::abs(ev[0]), 1e-6);
        EXPECT_GT(ev[1], 1e-8);
    }
}

TEST(Solver, ScalingOrbit)
{
    Sampled s = sampled("hexagon_torus.json", Geometry::Euclidean, 11);
    const Triangulation& t = s.t;
    EdgeRadii base = psi(t, s.truth, Geometry::Euclidean);
    for (double u : {-0.7, 0.3, 1.2}) {
        TetraCoords moved = act(t, s.truth, u, Geometry::Euclidean);
        EdgeRadii er = psi(t, moved, Geometry::Euclidean);
        double k = er.l[0] / base.l[0];
        for (int e = 0; e < t.num_edges(); ++e)
            EXPECT_NEAR(er.l[e], k * base.l[e], 1e-12 * er.l[e]);
        for (int v = 0; v < t.num_vertices(); ++v)
            EXPECT_NEAR(er.r[v], k * base.r[v], 1e-12 * std::max(1.0, er.r[v]));
        EXPECT_LT(grad_U(t, moved, s.target).lpNorm<Eigen::Infinity>(), 1e-12);
        TetraCoords twice = act(t, act(t, s.truth, u, Geometry::Euclidean), 0.5, Geometry::Euclidean);
        TetraCoords once = act(t, s.truth, u + 0.5, Geometry::Euclidean);
        EXPECT_LT(gauge_distance(t, twice, once, Geometry::Euclidean), 1e-14);
        EXPECT_LT(gauge_distance(t, moved, s.truth, Geometry::Euclidean), 1e-12);
    }
    TetraCoords same = act(t, s.truth, 0.8, Geometry::Hyperbolic);
    EXPECT_EQ(same.a, s.truth.a);
    EXPECT_EQ(same.b, s.truth.b);
}

TEST(Solver, GridTorusConverges)
{
    Problem p = fixture("grid_torus.json");
    Triangulation t = triangulate(p.complex);
    Solution s = solve(t, *p.angles);
    ASSERT_EQ(s.status, SolveStatus::Converged) << s.message;
    EXPECT_LT(s.residual_norm, 1e-10);
    EXPECT_LE(s.iterations, 20);
    for (int e = 0; e < t.base.num_edges(); ++e)
        EXPECT_NEAR(s.realized.theta[e], p.angles->theta[e], 1e-10);
    // the prescribed angles are all pi/2 on a square grid of point vertices
    SurfaceLayout sl = develop(t, s.coords, Geometry::Euclidean);
    EXPECT_NEAR(gauss_bonnet_check(sl).residual, 0, 1e-9);
    MergedLayout ml = merge_redundant(sl, 1e-6);
    EXPECT_EQ(ml.faces.size(), 9u);
}

TEST(Solver, InfeasibleTargetIsReported)
{
    Problem p = fixture("grid_torus_disk_vertex.json");
    Solution s = solve(triangulate(p.complex), *p.angles);
    EXPECT_EQ(s.status, SolveStatus::Infeasible);
    ASSERT_TRUE(s.feasibility.has_value());
    EXPECT_EQ(s.feasibility->violations.front().witness, "OStar(v0)");
}

TEST(Solver, RecoversSampledPatterns)
{
    for (const char* name : {"genus2.json", "pentagon_torus.json", "hexagon_torus.json", "tetrahedron.json"})
        for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic}) {
            if (g == Geometry::Euclidean && std::string(name) == "tetrahedron.json")
                continue; // a sphere carries no Euclidean pattern
            Sampled s = sampled(name, g, 17);
            SolveOptions so;
            so.initial = starting_coords(s.t, g);
            Solution sol = solve_lifted(s.t, s.target, so);
            ASSERT_EQ(sol.status, SolveStatus::Converged) << name << " " << to_string(g);
            EXPECT_LT(gauge_distance(s.t, sol.coords, s.truth, g), 1e-8) << name << " " << to_string(g);
        }
}

TEST(Solver, IndependentOfStartingPoint)
{
    for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic}) {
        Sampled s = sampled("genus2.json", g, 21);
        std::mt19937_64 rng(99);
        SolveOptions a, b;
        a.initial = starting_coords(s.t, g);
        b.initial = psi_inv(s.t, sample_er(s.t, g, rng), g);
        Solution sa = solve_lifted(s.t, s.target, a), sb = solve_lifted(s.t, s.target, b);
        ASSERT_EQ(sa.status, SolveStatus::Converged);
        ASSERT_EQ(sb.status, SolveStatus::Converged);
        EXPECT_LT(gauge_distance(s.t, sa.coords, sb.coords, g), 1e-8) << to_string(g);
    }
}

TEST(Solver, QuadraticTail)
{
    Sampled s = sampled("genus2.json", Geometry::Hyperbolic, 23);
    SolveOptions so;
    so.initial = starting_coords(s.t, Geometry::Hyperbolic);
    so.grad_tol = 1e-13;
    Solution sol = solve_lifted(s.t, s.target, so);
    ASSERT_EQ(sol.status, SolveStatus::Converged);
    const int n = variable_map(s.t).size();
    for (std::size_t k = 1; k < sol.trace.size(); ++k) {
        double prev = sol.trace[k - 1].residual, cur = sol.trace[k].residual;
        // Armijo decrease holds in the 2-norm, which bounds the sup-norm within sqrt(n)
        EXPECT_LE(cur, std::sqrt(double(n)) * prev);
        // below 1e-12 the residual is at the rounding floor of the angle evaluation
        if (prev < 1e-3 && cur > 1e-12)
            EXPECT_LT(cur, 100 * prev * prev) << "iteration " << k;
    }
}

TEST(Solver, RejectsStartOutsideDomain)
{
    Triangulation t = triangulate(fixture("genus2.json").complex);
    SolveOptions so;
    TetraCoords bad = starting_coords(t, Geometry::Hyperbolic);
    for (double& x : bad.b)
        if (x != 0)
            x = -50;
    so.initial = bad;
    LiftedTarget target = as_target(realized_from_lengths(t, reference_pattern(t, Geometry::Hyperbolic), Geometry::Hyperbolic),
                                    Geometry::Hyperbolic);
    try {
        solve_lifted(t, target, so);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotInTE);
    }
}
