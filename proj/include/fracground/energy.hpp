// The functional J(u) = 1/2 int |xi|^{2s}|u_hat|^2 + 1/2 int V u^2 - int F(x,u), its L2 gradient,
// the E^s norm and the Nehari residual G(u) = DJ(u)u.
#pragma once

#include <cmath>

#include "fraclap.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace fracground {

struct EnergyBreakdown {
    double kinetic = 0.0;
    double potential = 0.0;
    double nonlinear = 0.0;
    double total = 0.0;
};

/// 2/3-rule low-pass: zeroes modes with |k| > M/3 on any axis.
inline Field dealias_filter(const Field& u) {
    const Grid& g = u.grid;
    auto w = transform(u);
    const auto& k = g.axis_wavenumbers();
    const int cut = g.points() / 3;
    const auto m = static_cast<std::size_t>(g.points());
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        const bool drop = g.dim() == 1 ? std::abs(k[i]) > cut : (std::abs(k[i / m]) > cut || std::abs(k[i % m]) > cut);
        if (drop) w.coeffs[i] = 0.0;
    }
    return inverse_transform(w);
}

namespace detail {

// The field the nonlinearity sees: u itself, or its dealiased projection.
inline Field nonlinear_argument(const ModelProblem& m, const Field& u) { return m.dealias() ? dealias_filter(u) : u; }

}  // namespace detail

/// 1/2 ||u||_E^2 pieces: kinetic = 1/2 ||(-Delta)^{s/2}u||^2, potential = 1/2 int V u^2.
inline double kinetic_term(const ModelProblem& m, const Field& u) { return 0.5 * hs_seminorm_sq(u, m.kinetic_symbol()); }

inline double potential_term(const ModelProblem& m, const Field& u) {
    require_same_grid(m.grid(), u.grid);
    const Field& V = m.V();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += V[i] * u[i] * u[i];
    return 0.5 * acc * u.grid.cell_volume();
}

/// ||u||_E^2 = int |xi|^{2s}|u_hat|^2 + int V u^2.
inline double e_norm_sq(const ModelProblem& m, const Field& u) { return 2.0 * (kinetic_term(m, u) + potential_term(m, u)); }

inline EnergyBreakdown energy(const ModelProblem& m, const Field& u) {
    EnergyBreakdown e;
    e.kinetic = kinetic_term(m, u);
    e.potential = potential_term(m, u);
    e.nonlinear = integrate(eval_F(m, detail::nonlinear_argument(m, u)));
    e.total = e.kinetic + e.potential - e.nonlinear;
    return e;
}

/// The nonlinear term of the gradient: f(x,u), or P f(x, P u) when dealiasing.
inline Field nonlinear_source(const ModelProblem& m, const Field& u) {
    if (!m.dealias()) return eval_f(m, u);
    return dealias_filter(eval_f(m, dealias_filter(u)));
}

/// L2 gradient g = (-Delta)^s u + V u - f(x,u), so that DJ(u)v = int g v.
inline Field gradient(const ModelProblem& m, const Field& u) {
    Field g = apply_multiplier(u, m.kinetic_symbol());
    const Field f = nonlinear_source(m, u);
    const Field& V = m.V();
    for (std::size_t i = 0; i < u.size(); ++i) g[i] += V[i] * u[i] - f[i];
    return g;
}

/// int f(x,u) u.
inline double nonlinear_pairing(const ModelProblem& m, const Field& u) { return inner(nonlinear_source(m, u), u); }

/// G(u) = ||u||_E^2 - int f(x,u) u; zero on the Nehari manifold.
inline double nehari_residual(const ModelProblem& m, const Field& u) { return e_norm_sq(m, u) - nonlinear_pairing(m, u); }

}  // namespace fracground
