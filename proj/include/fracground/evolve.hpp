// Strang split-step integrator for i psi_t = (-Delta)^s psi + V psi - a|psi|^{p-1} psi.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "model.hpp"

namespace fracground {

struct WaveState {
    Grid grid;
    std::vector<Complex> psi;
    double time = 0.0;

    static WaveState from_field(const Field& u) { return {u.grid, std::vector<Complex>(u.values.begin(), u.values.end()), 0.0}; }

    Field modulus() const {
        Field out(grid);
        for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::abs(psi[i]);
        return out;
    }
};

inline double mass(const WaveState& w) {
    double acc = 0.0;
    for (const auto& z : w.psi) acc += std::norm(z);
    return acc * w.grid.cell_volume();
}

/// 1/2 int |xi|^{2s}|psi_hat|^2 + 1/2 int V |psi|^2 - int a |psi|^{p+1} / (p+1).
inline double energy_of_wave(const ModelProblem& m, const WaveState& w) {
    require_same_grid(m.grid(), w.grid);
    const auto spec = transform_complex(w.grid, w.psi);
    const auto& sym = m.kinetic_symbol();
    double kin = 0.0;
    for (std::size_t i = 0; i < spec.coeffs.size(); ++i) kin += sym[i] * std::norm(spec.coeffs[i]);
    kin /= w.grid.volume();
    const double p = m.nonlinearity().p;
    const Field& V = m.V();
    const Field& a = m.weight();
    double pot = 0.0, nl = 0.0;
    for (std::size_t i = 0; i < w.psi.size(); ++i) {
        const double r = std::abs(w.psi[i]);
        pot += V[i] * r * r;
        nl += a[i] * std::pow(r, p + 1.0) / (p + 1.0);
    }
    const double vol = w.grid.cell_volume();
    return 0.5 * kin + 0.5 * pot * vol - nl * vol;
}

struct EvolveOptions {
    int diag_every = 1;      ///< record (t, mass, energy) every this many steps; 0 disables
    int snapshot_every = 0;  ///< call on_snapshot every this many steps; 0 disables
    std::function<void(const WaveState&)> on_snapshot;
    double blowup_factor = 1e3;
};

struct EvolveDiagnostics {
    std::vector<double> times;
    std::vector<double> masses;
    std::vector<double> energies;
    double max_step_mass_drift = 0.0;  ///< max over steps of |mass_{n+1} - mass_n| / mass_n
    bool aborted = false;
    std::string message;
};

struct EvolveResult {
    WaveState state;
    EvolveDiagnostics diagnostics;
};

/// Advances psi0 by `steps` Strang steps of size dt: half pointwise phase rotation by
/// (V - a|psi|^{p-1}) dt/2, exact spectral step exp(-i |xi|^{2s} dt), half pointwise step.
/// A negative dt integrates backwards; each substep is exactly invertible.
inline EvolveResult split_step(const ModelProblem& m, const WaveState& psi0, double dt, int steps, const EvolveOptions& opt = {}) {
    require_same_grid(m.grid(), psi0.grid);
    if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("split_step needs a finite nonzero dt");
    if (steps < 0) throw std::invalid_argument("split_step needs steps >= 0");

    const Grid& g = psi0.grid;
    const std::size_t n = g.size();
    const double p = m.nonlinearity().p;
    const Field& V = m.V();
    const Field& a = m.weight();

    std::vector<Complex> spectral_phase(n);
    const auto& sym = m.kinetic_symbol();
    for (std::size_t i = 0; i < n; ++i) spectral_phase[i] = std::polar(1.0 / static_cast<double>(n), -sym[i] * dt);

    EvolveResult res;
    res.state = psi0;
    auto& psi = res.state.psi;
    auto& diag = res.diagnostics;

    double peak0 = 0.0;
    for (const auto& z : psi) peak0 = std::max(peak0, std::abs(z));

    auto half_nonlinear = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::abs(psi[i]);
            const double rate = V[i] - a[i] * abs_pow_pm1(r, p);
            psi[i] *= std::polar(1.0, -rate * 0.5 * dt);
        }
    };
    auto record = [&] {
        diag.times.push_back(res.state.time);
        diag.masses.push_back(mass(res.state));
        diag.energies.push_back(energy_of_wave(m, res.state));
    };

    if (opt.diag_every > 0) record();
    double mass_prev = mass(res.state);
    for (int step = 1; step <= steps; ++step) {
        half_nonlinear();
        g.plans().forward(psi);
        for (std::size_t i = 0; i < n; ++i) psi[i] *= spectral_phase[i];
        g.plans().backward(psi);
        half_nonlinear();
        res.state.time = psi0.time + step * dt;

        const double mass_now = mass(res.state);
        diag.max_step_mass_drift = std::max(diag.max_step_mass_drift, std::abs(mass_now - mass_prev) / mass_prev);
        mass_prev = mass_now;

        double peak = 0.0;
        for (const auto& z : psi) peak = std::max(peak, std::abs(z));
        if (!std::isfinite(peak) || peak > opt.blowup_factor * peak0) {
            diag.aborted = true;
            diag.message = "blow-up guard: max|psi| exceeded " + std::to_string(opt.blowup_factor) + " x initial at step " +
                           std::to_string(step);
            break;
        }
        if (opt.diag_every > 0 && step % opt.diag_every == 0) record();
        if (opt.snapshot_every > 0 && opt.on_snapshot && step % opt.snapshot_every == 0) opt.on_snapshot(res.state);
    }
    return res;
}

}  // namespace fracground
