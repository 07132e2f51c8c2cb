#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracground/report.hpp"
#include "fracground/verify.hpp"
#include "support.hpp"

using namespace fracground;
using namespace testing_support;
constexpr double pi = std::numbers::pi;

TEST(Pohozaev, BenchmarkResidualAndParts) {
    const auto r = pohozaev_residual(benchmark_model(), benchmark_state().u);
    EXPECT_LE(std::abs(r.residual), 1e-3 * r.nonlinear_part);
    EXPECT_NEAR(r.P, 2.0 * pi, 1e-3 * 2.0 * pi);
    EXPECT_NEAR(r.intF, pi, 1e-3 * pi);
    // K carries the periodic-truncation error of the box, about 1.5e-3 relative at L = 160.
    EXPECT_NEAR(r.K, pi, 2e-3 * pi);
    EXPECT_DOUBLE_EQ(r.kinetic_part, 0.0);
}

TEST(Pohozaev, KineticPartConvergesWithBox) {
    double prev = HUGE_VAL;
    for (double L : {80.0, 160.0, 320.0}) {
        const ModelProblem m = constant_model(L, static_cast<int>(L * 51.2));
        const GroundState gs = solve_ground_state(m, SolverConfig{});
        ASSERT_TRUE(gs.converged);
        const double err = std::abs(pohozaev_residual(m, gs.u).K - pi);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3 * pi);
}

TEST(Pohozaev, RejectsNonAutonomousModels) {
    const ModelProblem m(make_grid(1, 20.0, 64), FracOrder(0.5), Potential::well(2.0, 1.0, 1.0), Nonlinearity{});
    EXPECT_THROW(pohozaev_residual(m, Field(m.grid())), std::invalid_argument);
}

TEST(Decay, BenchmarkSlope) {
    const auto fit = decay_slope(benchmark_state().u);
    EXPECT_NEAR(fit.slope, -2.0, 0.1);
    EXPECT_DOUBLE_EQ(fit.window.lo, 20.0);
    EXPECT_DOUBLE_EQ(fit.window.hi, 36.0);
    ASSERT_EQ(fit.tail_slopes.size(), 2u);
    EXPECT_NEAR(fit.tail_slopes[0], fit.tail_slopes[1], 1e-6);
}

TEST(Decay, SyntheticPowerLaw) {
    const Grid g = make_grid(1, 4000.0, 8192);
    const Field u = sample(g, [](double x) { return std::pow(1.0 + std::abs(x), -3.0); });
    EXPECT_NEAR(decay_slope(u, std::nullopt, DecayModel::power_law).slope, -3.0, 0.05);
    EXPECT_NEAR(decay_slope(u).slope, -3.0, 0.05);
}

TEST(Decay, ImageModelCorrectsWrapBias) {
    const auto& u = benchmark_state().u;
    const double plain = decay_slope(u, std::nullopt, DecayModel::power_law).slope;
    const double images = decay_slope(u).slope;
    EXPECT_LT(std::abs(images + 2.0), std::abs(plain + 2.0));
}

TEST(Decay, RejectsWindowInWrapRegion) {
    EXPECT_THROW(decay_slope(benchmark_state().u, DecayWindow{20.0, 79.0}), std::invalid_argument);
    EXPECT_THROW(decay_slope(benchmark_state().u, DecayWindow{30.0, 20.0}), std::invalid_argument);
}

TEST(Inequalities, GagliardoNirenbergStable) {
    const Grid g = make_grid(1, 80.0, 2048);
    const auto fields = random_field_set(g, 2000, 0);
    const auto gn = gn_check(fields, FracOrder(0.5), 2.0);
    const auto st = stability(gn.ratios, 1000);
    EXPECT_TRUE(st.finite);
    EXPECT_LE(st.change, 0.1);
    EXPECT_GT(st.max_n, 0.0);
}

TEST(Inequalities, GnRatioIsScaleInvariant) {
    const Grid g = make_grid(1, 40.0, 512);
    const Field u = random_band_limited(g, 1, 0);
    EXPECT_NEAR(gn_ratio(scaled(u, 7.0), FracOrder(0.5), 2.0), gn_ratio(u, FracOrder(0.5), 2.0), 1e-12);
}

TEST(Inequalities, RandomFieldsAreReproducible) {
    const Grid g = make_grid(1, 40.0, 512);
    EXPECT_EQ(random_band_limited(g, 5, 3).values, random_band_limited(g, 5, 3).values);
    EXPECT_NE(random_band_limited(g, 5, 3).values, random_band_limited(g, 5, 4).values);
}

TEST(Commutator, ConstantMultiplierCommutes) {
    const Grid g = make_grid(1, 40.0, 512);
    const Field one = sample(g, [](double) { return 1.0; });
    const Field u = random_band_limited(g, 2, 0);
    EXPECT_LT(max_abs(commutator(one, u, FracOrder(0.5))), 1e-12 * max_abs(u));
}

TEST(Commutator, LinearInField) {
    const Grid g = make_grid(1, 40.0, 512);
    const Field phi = cutoff_field(g, 5.0);
    const Field u = random_band_limited(g, 3, 0), v = random_band_limited(g, 3, 1);
    const FracOrder s(0.5);
    const Field lhs = commutator(phi, axpy(2.0, u, v), s);
    const Field rhs = axpy(2.0, commutator(phi, u, s), commutator(phi, v, s));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
}

TEST(Commutator, EmpiricalConstantStable) {
    const Grid g = make_grid(1, 80.0, 2048);
    const auto fields = random_field_set(g, 2000, 0);
    const auto cc = commutator_check(cutoff_field(g, 10.0), fields, FracOrder(0.5));
    const auto st = stability(cc.ratios, 1000);
    EXPECT_TRUE(st.finite);
    EXPECT_LE(st.change, 0.1);
}

TEST(Cutoff, ProfileShape) {
    EXPECT_DOUBLE_EQ(cutoff_profile(0.5), 1.0);
    EXPECT_DOUBLE_EQ(cutoff_profile(1.0), 1.0);
    EXPECT_DOUBLE_EQ(cutoff_profile(3.0), 0.0);
    EXPECT_NEAR(cutoff_profile(2.0), 0.5, 1e-15);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const double t = 1.0 + 0.001 * k;
        worst = std::max(worst, std::abs(cutoff_profile(t + 1e-6) - cutoff_profile(t - 1e-6)) / 2e-6);
    }
    EXPECT_LE(worst, 15.0 / 16.0 + 1e-6);
}

TEST(Cutoff, DistanceDecreasesToZero) {
    const auto& u = benchmark_state().u;
    const std::vector<double> radii{5, 10, 20, 40, 80 * std::sqrt(2.0)};
    const auto d = cutoff_convergence(u, FracOrder(0.5), radii);
    for (std::size_t i = 1; i + 1 < d.size(); ++i) EXPECT_LT(d[i], d[i - 1]);
    EXPECT_EQ(d.back(), 0.0);
}

TEST(Cutoff, ShrinkingSupportForSmallOrder) {
    const Grid g = make_grid(1, 40.0, 16384);
    const Field u = sample(g, [](double x) { return std::exp(-x * x); });
    const auto n = cutoff_shrink(u, FracOrder(0.25), {0.4, 0.2, 0.1, 0.05});
    for (std::size_t i = 1; i < n.size(); ++i) EXPECT_LT(n[i], n[i - 1]);
    // ||(-Delta)^{s/2} chi(x/R)||_2 scales as R^{(N-2s)/2} = R^{1/4}.
    EXPECT_NEAR(n[3] / n[2], std::pow(0.5, 0.25), 0.05);
    EXPECT_THROW(cutoff_shrink(u, FracOrder(0.6), {1.0}), std::invalid_argument);
}

TEST(LevelCheck, BenchmarkIsFiberMaximum) {
    const auto lc = level_consistency(benchmark_model(), benchmark_state(), 0);
    EXPECT_TRUE(lc.pass);
    EXPECT_NEAR(lc.t_star, 1.0, 1e-6);
}

TEST(Report, JsonRoundTrip) {
    VerificationReport r;
    r.add(make_check("alpha", "0123456789abcdef", {{"x", 1.5}}, 1e-4, 1e-3, "note"));
    r.add(make_check("beta", "", {}, std::nan(""), 1.0));
    r.model = model_to_json(benchmark_model());
    r.versions = default_versions();
    EXPECT_FALSE(r.all_pass());
    const json j = r;
    const auto back = j.get<VerificationReport>();
    ASSERT_EQ(back.checks.size(), 2u);
    EXPECT_EQ(back.checks[0].name, "alpha");
    EXPECT_TRUE(back.checks[0].pass);
    EXPECT_FALSE(back.checks[1].pass);
    EXPECT_EQ(back.model["potential"]["kind"], "constant");
    EXPECT_EQ(back.checks[0].note, "note");
}

TEST(Report, DigestTracksContent) {
    const Grid g = make_grid(1, 10.0, 16);
    Field a(g), b(g);
    EXPECT_EQ(digest(a), digest(b));
    b[3] = 1e-300;
    EXPECT_NE(digest(a), digest(b));
    EXPECT_EQ(digest(a).size(), 16u);
}
