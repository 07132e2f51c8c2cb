#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracground/solver.hpp"
#include "fracground/verify.hpp"
#include "support.hpp"

using namespace fracground;
using namespace testing_support;
constexpr double pi = std::numbers::pi;

TEST(Solver, BenchmarkGroundState) {
    const GroundState& gs = benchmark_state();
    ASSERT_TRUE(gs.converged) << gs.message;
    EXPECT_NEAR(gs.level, pi / 2, 1e-3);
    EXPECT_EQ(gs.monotonicity_violations, 0);
    const Field c = centered_on_peak(gs.u);
    double err = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) err = std::max(err, std::abs(c[i] - lorentzian(c.grid.coordinate(i, 0))));
    EXPECT_LE(err / 2.0, 1e-3);
    EXPECT_LE(std::abs(gs.nehari_res), 1e-10 * gs.e_norm_sq);
}

TEST(Solver, HistoryIsNonincreasing) {
    const GroundState& gs = benchmark_state();
    ASSERT_FALSE(gs.history.empty());
    for (std::size_t i = 1; i < gs.history.size(); ++i) EXPECT_LE(gs.history[i], gs.history[i - 1] + 1e-12 * std::abs(gs.history[i - 1]));
}

TEST(Solver, ConstantPotentialTwoScalesLevel) {
    const ModelProblem m = constant_model(160.0, 8192, 0.5, 2.0);
    const GroundState gs = solve_ground_state(m, SolverConfig{});
    ASSERT_TRUE(gs.converged);
    EXPECT_NEAR(gs.level, 2.0 * pi, 1e-2 * 2.0 * pi);
}

TEST(Solver, CoercivePotentialConverges) {
    const ModelProblem m(make_grid(1, 20.0, 512), FracOrder(0.5), Potential::coercive(1.0, 1.0), Nonlinearity{});
    const GroundState gs = solve_ground_state(m, SolverConfig{});
    ASSERT_TRUE(gs.converged) << gs.message;
    EXPECT_GT(gs.level, 0.0);
    // Localized: negligible mass near the box edge.
    double edge = 0.0;
    for (std::size_t i = 0; i < gs.u.size(); ++i)
        if (std::abs(gs.u.grid.coordinate(i, 0)) > 8.0) edge = std::max(edge, std::abs(gs.u[i]));
    EXPECT_LT(edge, 1e-2 * max_abs(gs.u));
}

TEST(Solver, TwoDimensionalGroundState) {
    const ModelProblem m = constant_model(30.0, 128, 0.75, 1.0, 3.0, 2);
    const GroundState gs = solve_ground_state(m, SolverConfig{});
    ASSERT_TRUE(gs.converged) << gs.message;
    EXPECT_GT(gs.level, 0.0);
    EXPECT_LE(std::abs(pohozaev_residual(m, gs.u).residual), 1e-2 * 2.0 * gs.energy.nonlinear);
}

TEST(Solver, PositiveModeFromFlippedGuess) {
    const ModelProblem m = constant_model(80.0, 2048).with_positive_mode(true);
    const Field start = axpy(0.5, gaussian_bump(m.grid(), -10.0, 0.0, 2.0), scaled(gaussian_bump(m.grid(), 10.0, 0.0, 2.0), -1.0));
    const GroundState gs = solve_positive(m, SolverConfig{}, start);
    ASSERT_TRUE(gs.converged) << gs.message;
    EXPECT_TRUE(gs.positivity_ok);
    EXPECT_GE(gs.min_value, -1e-8 * gs.max_value);
}

TEST(Solver, PositiveModeRejectsNegativeGuess) {
    const ModelProblem m = constant_model(40.0, 256);
    const Field neg = scaled(gaussian_bump(m.grid(), 0.0, 0.0, 1.0), -1.0);
    EXPECT_THROW(solve_positive(m, SolverConfig{}, neg), ProjectionError);
}

TEST(Solver, TranslatedStartGivesSameLevel) {
    const ModelProblem m = constant_model(80.0, 2048);
    const GroundState a = solve_ground_state(m, SolverConfig{});
    const GroundState b = solve_ground_state(m, SolverConfig{}, gaussian_bump(m.grid(), 13.0, 0.0, 1.0));
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_NEAR(a.level, b.level, 1e-8 * a.level);
}

TEST(Solver, DomainDoublingChangesLevelLittle) {
    const GroundState a = solve_ground_state(constant_model(80.0, 4096), SolverConfig{});
    const GroundState b = solve_ground_state(constant_model(160.0, 8192), SolverConfig{});
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LT(std::abs(b.level - pi / 2), std::abs(a.level - pi / 2));
    EXPECT_NEAR(a.level, b.level, 5e-3);
}

TEST(Solver, ConfigCheckRejectsBadValues) {
    SolverConfig cfg;
    cfg.backtrack = 1.5;
    EXPECT_THROW(cfg.check(), std::invalid_argument);
    cfg = {};
    cfg.tol_grad = 0.0;
    EXPECT_THROW(cfg.check(), std::invalid_argument);
}

TEST(Solver, PreconditionersAgree) {
    const ModelProblem m = constant_model(40.0, 512);
    double ref = 0.0;
    for (auto pc : {Preconditioner::sobolev, Preconditioner::spectral, Preconditioner::none}) {
        SolverConfig cfg;
        cfg.preconditioner = pc;
        cfg.tol_grad = 1e-7;
        if (pc == Preconditioner::none) cfg.step0 = 0.01;
        const GroundState gs = solve_ground_state(m, cfg);
        ASSERT_TRUE(gs.converged) << gs.message;
        if (ref == 0.0) ref = gs.level;
        EXPECT_NEAR(gs.level, ref, 1e-8 * ref);
    }
}

TEST(Sweep, PotentialShiftsAreMonotone) {
    const ModelProblem m(make_grid(1, 80.0, 2048), FracOrder(0.5), Potential::well(2.0, 1.0, 1.0), Nonlinearity{});
    const auto r = sweep_potential(m, {0.0, 0.5, 1.0}, SolverConfig{}, 2);
    ASSERT_TRUE(r.all_converged());
    const auto lv = r.levels();
    EXPECT_LT(lv[0], lv[1]);
    EXPECT_LT(lv[1], lv[2]);
}

TEST(Sweep, ResultsIndependentOfJobs) {
    const ModelProblem m = constant_model(40.0, 512);
    const auto a = sweep_potential(m, {0.0, 0.25, 0.5}, SolverConfig{}, 1);
    const auto b = sweep_potential(m, {0.0, 0.25, 0.5}, SolverConfig{}, 3);
    EXPECT_EQ(a.levels(), b.levels());
}

TEST(Sweep, EpsilonSweepBelowInfinity) {
    const ModelProblem m(make_grid(1, 80.0, 2048), FracOrder(0.5), Potential::well(2.0, 1.0, 1.0), Nonlinearity{});
    const auto r = sweep_epsilon(m, {1.0, 0.5}, SolverConfig{}, 2);
    ASSERT_TRUE(r.sweep.all_converged());
    EXPECT_GT(r.margin, 0.0);
    for (const auto& p : r.sweep.points)
        EXPECT_LE(singular_perturbation_residual(m.with_potential(Potential::rescaled(m.potential(), p.parameter)), p.state.u), 1e-6);
}

TEST(Sweep, EpsilonSweepNeedsWell) {
    const ModelProblem m = constant_model(40.0, 256);
    EXPECT_THROW(sweep_epsilon(m, {1.0}, SolverConfig{}), std::invalid_argument);
}
