// Ground states by Nehari-constrained descent, positive solutions, and parameter sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "energy.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "nehari.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace fracground {

enum class Preconditioner {
    none,      ///< plain L2 gradient
    spectral,  ///< (|xi|^{2s} + mean V)^{-1} g
    sobolev,   ///< E^s Riesz representative: solve ((-Delta)^s + V) d = g by PCG
};

enum class InitialGuess {
    centered,  ///< Gaussian of unit width at the origin
    seeded,    ///< seeded_bump(grid, seed, 0)
};

struct SolverConfig {
    double tol_grad = 1e-8;     ///< ||g||_2 / ||u||_2
    double tol_nehari = 1e-10;  ///< |G(u)| / ||u||_E^2
    int max_iters = 50000;
    double step0 = 0.5;
    double backtrack = 0.5;
    double armijo = 1e-4;
    std::uint64_t seed = 0;
    Preconditioner preconditioner = Preconditioner::sobolev;
    InitialGuess initial = InitialGuess::centered;
    double cg_tol = 1e-8;
    int cg_max_iters = 500;

    void check() const {
        if (!(tol_grad > 0.0 && tol_nehari > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
        if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("solver.backtrack must lie in (0, 1)");
        if (!(step0 > 0.0)) throw std::invalid_argument("solver.step0 must be positive");
        if (max_iters < 1) throw std::invalid_argument("solver.max_iters must be at least 1");
    }
};

struct GroundState {
    Field u;
    double level = 0.0;
    EnergyBreakdown energy;
    double grad_norm = 0.0;   ///< ||g||_2 / ||u||_2
    double nehari_res = 0.0;  ///< G(u), absolute
    double e_norm_sq = 0.0;
    int iters = 0;
    bool converged = false;
    /// Accepted steps on which J rose by more than round-off (should stay 0).
    int monotonicity_violations = 0;
    /// Accepted steps whose predicted decrease was below round-off; accepted on gradient decrease.
    int roundoff_steps = 0;
    bool positivity_checked = false;
    bool positivity_ok = true;
    double min_value = 0.0;
    double max_value = 0.0;
    std::string message;
    std::vector<double> history;  ///< J after each accepted step
};

// ---------------------------------------------------------------------------
// Initial guesses.

/// Gaussian exp(-|x - c|^2 / w^2) normalized to unit L2 mass.
inline Field gaussian_bump(const Grid& grid, double cx, double cy, double width) {
    Field u = grid.dim() == 1 ? sample(grid, [&](double x) { return std::exp(-(x - cx) * (x - cx) / (width * width)); })
                              : sample(grid, [&](double x, double y) {
                                    return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (width * width));
                                });
    return scaled(u, 1.0 / l2_norm(u));
}

/// Start `index` of the multi-start family for `seed`: center uniform in the middle half of
/// the box, width uniform in [1, L/10], unit L2 mass.
inline Field seeded_bump(const Grid& grid, std::uint64_t seed, std::uint64_t index) {
    Rng rng(derive_seed(seed, index));
    const double quarter = 0.25 * grid.extent();
    const double cx = rng.uniform(-quarter, quarter);
    const double cy = grid.dim() == 2 ? rng.uniform(-quarter, quarter) : 0.0;
    const double width = rng.uniform(1.0, std::max(1.0, grid.extent() / 10.0));
    return gaussian_bump(grid, cx, cy, width);
}

inline Field initial_guess(const ModelProblem& m, const SolverConfig& cfg) {
    if (cfg.initial == InitialGuess::seeded) return seeded_bump(m.grid(), cfg.seed, 0);
    return gaussian_bump(m.grid(), 0.0, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Descent direction.

namespace detail {

inline Field apply_inverse_symbol(const Field& g, const Multiplier& kinetic, double shift) {
    auto w = transform(g);
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) w.coeffs[i] /= kinetic[i] + shift;
    return inverse_transform(w);
}

inline double mean_value(const Field& v) {
    double acc = 0.0;
    for (double x : v.values) acc += x;
    return acc / static_cast<double>(v.size());
}

// ((-Delta)^s + V) d = g by conjugate gradients preconditioned with (|xi|^{2s} + mean V)^{-1}.
// Any CG iterate from zero is a descent direction, so a loose tolerance is harmless.
inline Field sobolev_direction(const ModelProblem& m, const Field& g, double tol, int max_iters) {
    const double shift = mean_value(m.V());
    const Field& V = m.V();
    auto apply_A = [&](const Field& x) {
        Field y = apply_multiplier(x, m.kinetic_symbol());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] += V[i] * x[i];
        return y;
    };
    Field x(g.grid);
    Field r = g;
    Field z = apply_inverse_symbol(r, m.kinetic_symbol(), shift);
    Field p = z;
    double rz = inner(r, z);
    const double r0 = l2_norm(r);
    for (int it = 0; it < max_iters && l2_norm(r) > tol * r0; ++it) {
        const Field Ap = apply_A(p);
        const double alpha = rz / inner(p, Ap);
        x = axpy(alpha, p, x);
        r = axpy(-alpha, Ap, r);
        z = apply_inverse_symbol(r, m.kinetic_symbol(), shift);
        const double rz_new = inner(r, z);
        p = axpy(rz_new / rz, p, z);
        rz = rz_new;
    }
    return x;
}

}  // namespace detail

inline Field descent_direction(const ModelProblem& m, const Field& g, const SolverConfig& cfg) {
    switch (cfg.preconditioner) {
        case Preconditioner::none: return g;
        case Preconditioner::spectral: return detail::apply_inverse_symbol(g, m.kinetic_symbol(), detail::mean_value(m.V()));
        case Preconditioner::sobolev: return detail::sobolev_direction(m, g, cfg.cg_tol, cfg.cg_max_iters);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Post-processing.

/// Flips u so that int u^3 >= 0.
inline Field sign_normalized(const Field& u) {
    double acc = 0.0;
    for (double v : u.values) acc += v * v * v;
    return acc < 0.0 ? scaled(u, -1.0) : u;
}

/// Peak location per axis by quadratic interpolation around the largest sample.
inline std::vector<double> peak_location(const Field& u) {
    const Grid& g = u.grid;
    const auto it = std::max_element(u.values.begin(), u.values.end());
    const auto idx = static_cast<std::size_t>(std::distance(u.values.begin(), it));
    const int m = g.points();
    const double h = g.spacing();
    auto refine = [&](int j, auto at) {
        const double a = at((j - 1 + m) % m), b = at(j), c = at((j + 1) % m);
        const double denom = a - 2.0 * b + c;
        const double off = denom == 0.0 ? 0.0 : 0.5 * (a - c) / denom;
        return g.coordinate(j) + off * h;
    };
    if (g.dim() == 1) return {refine(static_cast<int>(idx), [&](int j) { return u[static_cast<std::size_t>(j)]; })};
    const int i0 = static_cast<int>(idx / m), j0 = static_cast<int>(idx % m);
    const auto mm = static_cast<std::size_t>(m);
    return {refine(i0, [&](int i) { return u[static_cast<std::size_t>(i) * mm + j0]; }),
            refine(j0, [&](int j) { return u[static_cast<std::size_t>(i0) * mm + j]; })};
}

/// Translates u (spectrally) so that its maximum sits at the origin.
inline Field centered_on_peak(const Field& u) {
    const auto peak = peak_location(u);
    return spectral_translate(u, peak);
}

// ---------------------------------------------------------------------------
// Solvers.

/// Nehari-projected descent: u <- phi(u - tau d) (u - tau d) with Armijo backtracking on J.
/// `initial` is projected onto the Nehari manifold first; ProjectionError propagates if it cannot be.
inline GroundState solve_ground_state(const ModelProblem& m, const SolverConfig& cfg, const Field& initial) {
    cfg.check();
    GroundState gs;
    Field u = project(m, initial).projected;
    double J = energy(m, u).total;
    gs.message = "iteration limit reached";

    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        const double enorm = e_norm_sq(m, u);
        if (std::sqrt(enorm) < 1e-10) {
            gs.message = "collapse: ||u||_E fell below 1e-10";
            break;
        }
        const Field g = gradient(m, u);
        const double gnorm = l2_norm(g) / l2_norm(u);
        gs.grad_norm = gnorm;
        if (gnorm <= cfg.tol_grad) {
            gs.message = "converged";
            break;
        }
        const Field d = descent_direction(m, g, cfg);
        const double slope = inner(g, d);
        const double roundoff = 1e-14 * std::max(1.0, std::abs(J));

        double tau = cfg.step0;
        bool accepted = false;
        while (tau > 1e-12 * cfg.step0) {
            Field trial = axpy(-tau, d, u);
            Field next;
            try {
                next = project(m, trial).projected;
            } catch (const ProjectionError&) {
                tau *= cfg.backtrack;
                continue;
            }
            const double J_next = energy(m, next).total;
            bool ok = J_next <= J - cfg.armijo * tau * slope;
            if (!ok && cfg.armijo * tau * slope < roundoff && J_next <= J + roundoff) {
                // Decrease below resolution of J: fall back to the stationarity measure.
                const Field g_next = gradient(m, next);
                if (l2_norm(g_next) / l2_norm(next) < gnorm) {
                    ok = true;
                    ++gs.roundoff_steps;
                }
            }
            if (ok) {
                if (J_next > J + roundoff) ++gs.monotonicity_violations;
                u = std::move(next);
                J = J_next;
                gs.history.push_back(J);
                accepted = true;
                break;
            }
            tau *= cfg.backtrack;
        }
        if (!accepted) {
            gs.message = "line search stalled";
            break;
        }
    }
    gs.iters = it;

    if (!m.positive_mode()) u = sign_normalized(u);
    gs.energy = energy(m, u);
    gs.level = gs.energy.total;
    gs.e_norm_sq = e_norm_sq(m, u);
    gs.nehari_res = nehari_residual(m, u);
    gs.grad_norm = l2_norm(gradient(m, u)) / l2_norm(u);
    gs.min_value = *std::min_element(u.values.begin(), u.values.end());
    gs.max_value = *std::max_element(u.values.begin(), u.values.end());
    gs.converged = gs.grad_norm <= cfg.tol_grad && std::abs(gs.nehari_res) <= cfg.tol_nehari * gs.e_norm_sq &&
                   std::isfinite(gs.level);
    if (gs.converged) gs.message = "converged";
    gs.u = std::move(u);
    return gs;
}

inline GroundState solve_ground_state(const ModelProblem& m, const SolverConfig& cfg) {
    return solve_ground_state(m, cfg, initial_guess(m, cfg));
}

/// Ground state of the f+ problem with the numerical maximum-principle witness
/// min u >= -1e-8 max u. The initial guess must have a positive part.
inline GroundState solve_positive(const ModelProblem& model, const SolverConfig& cfg, const Field& initial) {
    const ModelProblem m = model.positive_mode() ? model : model.with_positive_mode(true);
    GroundState gs = solve_ground_state(m, cfg, initial);
    gs.positivity_checked = true;
    gs.positivity_ok = gs.min_value >= -1e-8 * gs.max_value;
    if (!gs.positivity_ok) {
        gs.converged = false;
        gs.message = "positivity post-check failed: min u = " + std::to_string(gs.min_value);
    }
    return gs;
}

inline GroundState solve_positive(const ModelProblem& model, const SolverConfig& cfg) {
    return solve_positive(model, cfg, initial_guess(model, cfg));
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepPoint {
    double parameter = 0.0;
    GroundState state;
    std::string error;  ///< non-empty when the point threw
};

struct SweepResult {
    std::vector<SweepPoint> points;

    std::vector<double> parameters() const {
        std::vector<double> v;
        for (const auto& p : points) v.push_back(p.parameter);
        return v;
    }
    std::vector<double> levels() const {
        std::vector<double> v;
        for (const auto& p : points) v.push_back(p.state.level);
        return v;
    }
    bool all_converged() const {
        return std::all_of(points.begin(), points.end(), [](const auto& p) { return p.error.empty() && p.state.converged; });
    }
};

namespace detail {

template <typename MakeModel>
SweepResult run_sweep(const std::vector<double>& params, const SolverConfig& cfg, unsigned jobs, MakeModel&& make_model) {
    SweepResult r;
    r.points = parallel_map<SweepPoint>(params.size(), jobs, [&](std::size_t i) {
        SweepPoint pt;
        pt.parameter = params[i];
        try {
            const ModelProblem m = make_model(params[i]);
            SolverConfig c = cfg;
            c.seed = derive_seed(cfg.seed, i);
            pt.state = solve_ground_state(m, c);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        return pt;
    });
    return r;
}

}  // namespace detail

/// Levels c(V + delta) for each shift; the model's own potential is the base.
inline SweepResult sweep_potential(const ModelProblem& model, const std::vector<double>& shifts, const SolverConfig& cfg,
                                   unsigned jobs = 1) {
    return detail::run_sweep(shifts, cfg, jobs, [&](double delta) {
        ModelProblem m = model.with_potential(model.potential().shifted(delta));
        if (auto bad = blocking_failure(validate(m)))
            throw std::invalid_argument("shifted potential violates " + bad->name + " (witness " + std::to_string(bad->witness) + ")");
        return m;
    });
}

struct EpsilonSweep {
    SweepResult sweep;
    GroundState at_infinity;  ///< ground state of the constant-V_inf problem
    double c_inf = 0.0;
    /// c_inf - c_eps at the smallest epsilon; positive when the level sits below the problem at infinity.
    double margin = 0.0;
};

/// Levels c_eps of (-Delta)^s u + V(eps x) u = f(u), plus the level c_inf of the problem at infinity.
inline EpsilonSweep sweep_epsilon(const ModelProblem& model, const std::vector<double>& epsilons, const SolverConfig& cfg,
                                  unsigned jobs = 1) {
    const Potential& base = model.potential();
    const double vinf = base.vinf();
    if (!std::isfinite(vinf)) throw std::invalid_argument("sweep_epsilon needs a finite V_inf");
    if (!(base.at_origin() < vinf)) throw std::invalid_argument("sweep_epsilon needs V(0) < V_inf");

    EpsilonSweep out;
    out.sweep = detail::run_sweep(epsilons, cfg, jobs, [&](double eps) { return model.with_potential(Potential::rescaled(base, eps)); });
    out.at_infinity = solve_ground_state(model.with_potential(Potential::constant(vinf)), cfg);
    out.c_inf = out.at_infinity.level;
    if (!out.sweep.points.empty()) {
        const auto smallest = std::min_element(out.sweep.points.begin(), out.sweep.points.end(),
                                               [](const auto& a, const auto& b) { return a.parameter < b.parameter; });
        out.margin = out.c_inf - smallest->state.level;
    }
    return out;
}

/// Residual of eps^{2s} (-Delta)^s v + V(x) v - f(v) for v(x) = u(x / eps) on the box of extent
/// eps L, where u solved the problem with potential V(eps x) on extent L. Relative to ||v||_2.
inline double singular_perturbation_residual(const ModelProblem& rescaled_model, const Field& u) {
    const Potential& pot = rescaled_model.potential();
    if (pot.kind() != PotentialKind::rescaled) throw std::invalid_argument("model potential is not rescaled");
    const double eps = pot.epsilon();
    const Grid& g = rescaled_model.grid();
    const Grid fine = make_grid(g.dim(), eps * g.extent(), g.points());
    const Field v(fine, u.values);
    const double s = rescaled_model.s().value();
    Field r = apply_fraclap(v, rescaled_model.s());
    const Field V = pot.inner()->sample(fine);
    const Field& a = rescaled_model.weight();
    const double p = rescaled_model.nonlinearity().p;
    const double scale = std::pow(eps, 2.0 * s);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double f = a[i] * abs_pow_pm1(v[i], p) * v[i];
        if (rescaled_model.positive_mode() && v[i] < 0.0) f = 0.0;
        r[i] = scale * r[i] + (V[i] + pot.offset()) * v[i] - f;
    }
    return l2_norm(r) / l2_norm(v);
}

}  // namespace fracground
