#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracground/evolve.hpp"
#include "fracground/solver.hpp"
#include "support.hpp"

using namespace fracground;
using namespace testing_support;
constexpr double pi = std::numbers::pi;

namespace {

double max_energy_drift(const ModelProblem& m, const WaveState& w, double dt, double T) {
    EvolveOptions opt;
    opt.diag_every = 1;
    const auto r = split_step(m, w, dt, static_cast<int>(std::lround(T / dt)), opt);
    double worst = 0.0;
    for (double e : r.diagnostics.energies) worst = std::max(worst, std::abs(e - r.diagnostics.energies.front()));
    return worst;
}

}  // namespace

TEST(Evolve, StandingWaveKeepsModulus) {
    const GroundState& gs = benchmark_state();
    const WaveState w0 = WaveState::from_field(gs.u);
    EvolveOptions opt;
    opt.diag_every = 1000;
    const auto r = split_step(benchmark_model(), w0, 1e-3, 10000, opt);
    ASSERT_FALSE(r.diagnostics.aborted);
    EXPECT_NEAR(r.state.time, 10.0, 1e-9);
    const Field mod = r.state.modulus();
    double drift = 0.0;
    for (std::size_t i = 0; i < mod.size(); ++i) drift = std::max(drift, std::abs(mod[i] - std::abs(gs.u[i])));
    EXPECT_LE(drift / max_abs(gs.u), 1e-5);
    EXPECT_LE(r.diagnostics.max_step_mass_drift, 1e-12);
    for (std::size_t i = 0; i < r.diagnostics.energies.size(); ++i)
        EXPECT_NEAR(r.diagnostics.energies[i], r.diagnostics.energies.front(), 1e-9);
}

TEST(Evolve, LinearPlaneWaveIsExact) {
    // Zero nonlinearity weight: e^{ikx} evolves as e^{i(kx - (|k|^{2s} + V) t)}.
    const Grid g = make_grid(1, 2.0 * pi, 64);
    const ModelProblem m(g, FracOrder(0.5), Potential::constant(1.0), Nonlinearity{2.0, Potential::constant(0.0)});
    WaveState w{g, std::vector<Complex>(g.size()), 0.0};
    for (std::size_t i = 0; i < g.size(); ++i) w.psi[i] = std::polar(1.0, 3.0 * g.coordinate(i, 0));
    const auto r = split_step(m, w, 0.01, 100);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex expect = std::polar(1.0, 3.0 * g.coordinate(i, 0) - 4.0 * 1.0);
        EXPECT_NEAR(std::abs(r.state.psi[i] - expect), 0.0, 1e-12);
    }
}

TEST(Evolve, MassConservedForLargeData) {
    const ModelProblem m = constant_model(40.0, 512);
    const WaveState w = WaveState::from_field(scaled(sample(m.grid(), [](double x) { return std::exp(-x * x); }), 3.0));
    const auto r = split_step(m, w, 1e-2, 500);
    EXPECT_LE(r.diagnostics.max_step_mass_drift, 1e-12);
    EXPECT_NEAR(r.diagnostics.masses.back(), r.diagnostics.masses.front(), 1e-10 * r.diagnostics.masses.front());
}

TEST(Evolve, GlobalPhaseCommutes) {
    const ModelProblem m = constant_model(40.0, 512);
    const Field u = sample(m.grid(), [](double x) { return 1.5 * std::exp(-x * x / 2); });
    WaveState a = WaveState::from_field(u), b = a;
    const Complex phase = std::polar(1.0, 0.7);
    for (auto& z : b.psi) z *= phase;
    const auto ra = split_step(m, a, 1e-2, 200), rb = split_step(m, b, 1e-2, 200);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(std::abs(ra.state.psi[i] * phase - rb.state.psi[i]), 0.0, 1e-12);
}

TEST(Evolve, TimeReversalRecoversInitialData) {
    const ModelProblem m = constant_model(40.0, 512);
    const WaveState w = WaveState::from_field(sample(m.grid(), [](double x) { return 1.3 * std::exp(-x * x / 3); }));
    const auto fwd = split_step(m, w, 1e-2, 300);
    const auto back = split_step(m, fwd.state, -1e-2, 300);
    for (std::size_t i = 0; i < w.psi.size(); ++i) EXPECT_NEAR(std::abs(back.state.psi[i] - w.psi[i]), 0.0, 1e-10);
    EXPECT_NEAR(back.state.time, 0.0, 1e-12);
}

TEST(Evolve, EnergyDriftIsSecondOrder) {
    const ModelProblem m = constant_model(80.0, 2048);
    const GroundState gs = solve_ground_state(m, SolverConfig{});
    ASSERT_TRUE(gs.converged);
    const WaveState w = WaveState::from_field(scaled(gs.u, 1.3));
    const double coarse = max_energy_drift(m, w, 0.02, 2.0);
    const double fine = max_energy_drift(m, w, 0.01, 2.0);
    EXPECT_GE(coarse / fine, 3.5);
    EXPECT_LE(coarse / fine, 4.5);
}

TEST(Evolve, BlowUpGuardAborts) {
    const ModelProblem m = constant_model(40.0, 512);
    const WaveState w = WaveState::from_field(sample(m.grid(), [](double x) { return std::exp(-x * x); }));
    EvolveOptions opt;
    opt.blowup_factor = 1.0 + 1e-9;  // any growth of the peak trips the guard
    const auto r = split_step(m, WaveState::from_field(scaled(w.modulus(), 5.0)), 1e-2, 100, opt);
    EXPECT_TRUE(r.diagnostics.aborted);
    EXPECT_NE(r.diagnostics.message.find("blow-up"), std::string::npos);
}

TEST(Evolve, RejectsZeroStep) {
    const ModelProblem m = constant_model(20.0, 64);
    EXPECT_THROW(split_step(m, WaveState::from_field(Field(m.grid())), 0.0, 1), std::invalid_argument);
}
