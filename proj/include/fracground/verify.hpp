// Numerical checks of identities and inequalities on computed or supplied fields.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "fraclap.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "nehari.hpp"
#include "random.hpp"
#include "solver.hpp"

namespace fracground {

// ---------------------------------------------------------------------------
// Report records.

struct CheckRecord {
    std::string name;
    std::string inputs_digest;
    std::map<std::string, double> quantities;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// Builds a record with pass = (residual <= tolerance); NaN residuals fail.
inline CheckRecord make_check(std::string name, std::string digest, std::map<std::string, double> quantities, double residual,
                              double tolerance, std::string note = {}) {
    CheckRecord c;
    c.name = std::move(name);
    c.inputs_digest = std::move(digest);
    c.quantities = std::move(quantities);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    c.note = std::move(note);
    return c;
}

/// FNV-1a over the grid parameters and the raw bytes of the samples.
inline std::string digest(const Field& u) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    const int dim = u.grid.dim(), points = u.grid.points();
    const double extent = u.grid.extent();
    mix(&dim, sizeof dim);
    mix(&points, sizeof points);
    mix(&extent, sizeof extent);
    mix(u.values.data(), u.values.size() * sizeof(double));
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pohozaev identity, split form: ((N - 2s)/2) K + (N/2) P = N int F(u).

struct PohozaevResult {
    double residual = 0.0;
    double kinetic_part = 0.0;    ///< (N - 2s)/2 * K
    double potential_part = 0.0;  ///< N/2 * P
    double nonlinear_part = 0.0;  ///< N * int F
    double K = 0.0;               ///< ||(-Delta)^{s/2} u||_2^2
    double P = 0.0;               ///< int V u^2
    double intF = 0.0;
};

/// Requires an autonomous model (constant V and constant weight).
inline PohozaevResult pohozaev_residual(const ModelProblem& m, const Field& u) {
    if (!m.potential().is_constant()) throw std::invalid_argument("pohozaev_residual needs a constant potential");
    if (!m.nonlinearity().weight.is_constant()) throw std::invalid_argument("pohozaev_residual needs an x-independent nonlinearity");
    const double n = m.grid().dim();
    const double s = m.s().value();
    PohozaevResult r;
    r.K = hs_seminorm_sq(u, m.kinetic_symbol());
    r.P = 2.0 * potential_term(m, u);
    r.intF = energy(m, u).nonlinear;
    r.kinetic_part = 0.5 * (n - 2.0 * s) * r.K;
    r.potential_part = 0.5 * n * r.P;
    r.nonlinear_part = n * r.intF;
    r.residual = r.kinetic_part + r.potential_part - r.nonlinear_part;
    return r;
}

// ---------------------------------------------------------------------------
// Polynomial decay rate.

enum class DecayModel {
    power_law,        ///< least squares of log|u| against log|x|
    periodic_images,  ///< fit A * sum_n |x + nL|^{-alpha}: the power law as seen on the periodic box
};

struct DecayWindow {
    double lo = 0.0;
    double hi = 0.0;
};

inline DecayWindow default_decay_window(const Grid& g) { return {0.25 * 0.5 * g.extent(), 0.45 * 0.5 * g.extent()}; }

struct DecayFit {
    double slope = 0.0;              ///< averaged over tails (1D) or radial profile (2D)
    std::vector<double> tail_slopes;  ///< 1D: [left, right]
    DecayWindow window;
    std::size_t samples = 0;
};

namespace detail {

inline double image_sum_1d(double x, double L, double alpha) {
    constexpr int images = 50;
    double acc = 0.0;
    for (int n = -images; n <= images; ++n) acc += std::pow(std::abs(x + n * L), -alpha);
    return acc + 2.0 * std::pow(L, -alpha) * std::pow(images + 0.5, 1.0 - alpha) / (alpha - 1.0);
}

inline double image_sum_2d(double x, double y, double L, double alpha) {
    constexpr int images = 6;
    double acc = 0.0;
    for (int i = -images; i <= images; ++i)
        for (int j = -images; j <= images; ++j) acc += std::pow(std::hypot(x + i * L, y + j * L), -alpha);
    // Far lattice shell approximated by its continuum integral.
    const double rmin = (images + 0.5) * L;
    return acc + 2.0 * std::numbers::pi * std::pow(rmin, 2.0 - alpha) / ((alpha - 2.0) * L * L);
}

// Slope of the least-squares line through (xs, ys).
inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Best alpha for log u ~ log A + log model(alpha), A eliminated in closed form.
template <typename Model>
double fit_exponent(const std::vector<double>& log_u, Model&& log_model, double lo, double hi) {
    auto sse = [&](double alpha) {
        const auto lm = log_model(alpha);
        double mean = 0.0;
        for (std::size_t i = 0; i < lm.size(); ++i) mean += log_u[i] - lm[i];
        mean /= static_cast<double>(lm.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < lm.size(); ++i) {
            const double r = log_u[i] - lm[i] - mean;
            acc += r * r;
        }
        return acc;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = sse(c), fd = sse(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sse(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Tail decay exponent of u over radii in `window` (default [0.25, 0.45] * L/2).
/// Rejects windows reaching into the outer 5% of the half-box and fields vanishing on the window.
inline DecayFit decay_slope(const Field& u, std::optional<DecayWindow> window = std::nullopt,
                            DecayModel model = DecayModel::periodic_images) {
    const Grid& g = u.grid;
    const double half = 0.5 * g.extent();
    const DecayWindow w = window.value_or(default_decay_window(g));
    if (!(w.lo > 0.0 && w.lo < w.hi)) throw std::invalid_argument("decay window must satisfy 0 < lo < hi");
    if (w.hi > 0.95 * half) throw std::invalid_argument("decay window touches the periodic wrap region (outer 5%)");
    const double L = g.extent();

    DecayFit fit;
    fit.window = w;
    if (g.dim() == 1) {
        for (int side = 0; side < 2; ++side) {
            std::vector<double> r, log_u;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double x = g.coordinate(i, 0);
                if ((side == 0) != (x < 0.0)) continue;
                const double ax = std::abs(x);
                if (ax < w.lo || ax > w.hi) continue;
                if (u[i] == 0.0) throw std::invalid_argument("decay_slope: field vanishes inside the window");
                r.push_back(ax);
                log_u.push_back(std::log(std::abs(u[i])));
            }
            if (r.size() < 2) throw std::invalid_argument("decay window holds fewer than two samples");
            fit.samples += r.size();
            double slope = 0.0;
            if (model == DecayModel::power_law) {
                std::vector<double> log_r(r.size());
                std::transform(r.begin(), r.end(), log_r.begin(), [](double v) { return std::log(v); });
                slope = detail::ls_slope(log_r, log_u);
            } else {
                const auto log_model = [&](double alpha) {
                    std::vector<double> out(r.size());
                    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::log(detail::image_sum_1d(r[i], L, alpha));
                    return out;
                };
                slope = -detail::fit_exponent(log_u, log_model, 1.05, 12.0);
            }
            fit.tail_slopes.push_back(slope);
        }
        fit.slope = 0.5 * (fit.tail_slopes[0] + fit.tail_slopes[1]);
        return fit;
    }

    // 2D: radial average in shells of width h.
    const double h = g.spacing();
    const auto bins = static_cast<std::size_t>(std::ceil((w.hi - w.lo) / h));
    std::vector<double> sum_u(bins, 0.0), sum_r(bins, 0.0);
    std::vector<std::vector<std::size_t>> members(bins);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = g.radius(i);
        if (r < w.lo || r >= w.hi) continue;
        const auto b = std::min(bins - 1, static_cast<std::size_t>((r - w.lo) / h));
        if (u[i] == 0.0) throw std::invalid_argument("decay_slope: field vanishes inside the window");
        sum_u[b] += std::abs(u[i]);
        sum_r[b] += r;
        members[b].push_back(i);
    }
    std::vector<double> log_r, log_u;
    std::vector<std::size_t> used;
    for (std::size_t b = 0; b < bins; ++b) {
        if (members[b].empty()) continue;
        const auto n = static_cast<double>(members[b].size());
        log_r.push_back(std::log(sum_r[b] / n));
        log_u.push_back(std::log(sum_u[b] / n));
        used.push_back(b);
        fit.samples += members[b].size();
    }
    if (log_r.size() < 2) throw std::invalid_argument("decay window holds fewer than two radial shells");
    if (model == DecayModel::power_law) {
        fit.slope = detail::ls_slope(log_r, log_u);
    } else {
        const auto log_model = [&](double alpha) {
            std::vector<double> out;
            for (std::size_t b : used) {
                double acc = 0.0;
                for (std::size_t i : members[b]) acc += detail::image_sum_2d(g.coordinate(i, 0), g.coordinate(i, 1), L, alpha);
                out.push_back(std::log(acc / static_cast<double>(members[b].size())));
            }
            return out;
        };
        fit.slope = -detail::fit_exponent(log_u, log_model, 2.05, 12.0);
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Random band-limited fields for the inequality suites.

/// Field `index` of the family for `seed`: modes with |k| <= kmax (kmax uniform in [2, min(32, M/4)]
/// per field), coefficients e^{i theta} / (1 + |k|) with uniform random phases (random signs on
/// self-conjugate modes), Hermitian so the field is real.
inline Field random_band_limited(const Grid& grid, std::uint64_t seed, std::uint64_t index) {
    Rng rng(derive_seed(seed, index));
    const int kcap = std::min(32, grid.points() / 4);
    const int kmax = 2 + static_cast<int>(rng.uniform() * (kcap - 1));
    SpectralField w{grid, std::vector<Complex>(grid.size(), Complex(0.0, 0.0))};
    const auto& k = grid.axis_wavenumbers();
    const auto m = static_cast<std::size_t>(grid.points());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t j = grid.conjugate_index(i);
        if (j < i) continue;
        const int k0 = grid.dim() == 1 ? k[i] : k[i / m];
        const int k1 = grid.dim() == 1 ? 0 : k[i % m];
        const double kk = std::hypot(k0, k1);
        if (kk > kmax || std::abs(k0) == grid.points() / 2 || std::abs(k1) == grid.points() / 2) continue;
        const double amp = 1.0 / (1.0 + kk);
        if (j == i) {
            w.coeffs[i] = Complex(rng.uniform() < 0.5 ? -amp : amp, 0.0);
        } else {
            const Complex c = std::polar(amp, 2.0 * std::numbers::pi * rng.uniform());
            w.coeffs[i] = c;
            w.coeffs[j] = std::conj(c);
        }
    }
    return inverse_transform(w);
}

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg: ||u||_{q+1}^{q+1} <= C ||u||_{W^{s,2}}^theta ||u||_2^{q+1-theta},
// theta = (q - 1) N / (2 s).

inline double gn_ratio(const Field& u, FracOrder s, double q) {
    const double n = u.grid.dim();
    const double theta = (q - 1.0) * n / (2.0 * s.value());
    double lhs = 0.0;
    for (double v : u.values) lhs += std::pow(std::abs(v), q + 1.0);
    lhs *= u.grid.cell_volume();
    const double w = std::sqrt(ws2_norm_sq(u, s));
    const double l2 = l2_norm(u);
    return lhs / (std::pow(w, theta) * std::pow(l2, q + 1.0 - theta));
}

struct EmpiricalConstant {
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

inline EmpiricalConstant gn_check(const std::vector<Field>& fields, FracOrder s, double q) {
    if (!(q > 1.0)) throw std::invalid_argument("gn_check needs q > 1");
    const double n = fields.empty() ? 1.0 : fields.front().grid.dim();
    if ((q - 1.0) * n / (2.0 * s.value()) > q + 1.0) throw std::invalid_argument("gn_check: exponent (q-1)N/(2s) exceeds q+1");
    EmpiricalConstant out;
    for (const auto& u : fields) {
        const double r = gn_ratio(u, s, q);
        out.ratios.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

struct StabilityResult {
    double max_n = 0.0;   ///< empirical constant over the first `count` samples
    double max_2n = 0.0;  ///< over 2 * count samples (a superset)
    double change = 0.0;  ///< (max_2n - max_n) / max_n
    bool finite = false;
};

inline StabilityResult stability(const std::vector<double>& ratios, std::size_t count) {
    StabilityResult r;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (i < count) r.max_n = std::max(r.max_n, ratios[i]);
        r.max_2n = std::max(r.max_2n, ratios[i]);
    }
    r.change = (r.max_2n - r.max_n) / r.max_n;
    r.finite = std::isfinite(r.max_2n) && r.max_n > 0.0;
    return r;
}

inline std::vector<Field> random_field_set(const Grid& grid, std::size_t count, std::uint64_t seed) {
    std::vector<Field> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_band_limited(grid, seed, i));
    return out;
}

// ---------------------------------------------------------------------------
// Cutoffs: chi(t) = 1 on [0, 1], quintic smoothstep down to 0 on [1, 3], 0 beyond; |chi'| <= 15/16.

inline double cutoff_profile(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 3.0) return 0.0;
    const double z = 0.5 * (t - 1.0);
    return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
}

/// chi(|x| / R) sampled on the grid.
inline Field cutoff_field(const Grid& g, double R) {
    Field out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = cutoff_profile(g.radius(i) / R);
    return out;
}

/// d(R) = ||(-Delta)^{s/2}(chi_R u - u)||_2 for each radius.
inline std::vector<double> cutoff_convergence(const Field& u, FracOrder s, const std::vector<double>& radii) {
    std::vector<double> out;
    for (double R : radii) {
        const Field chi = cutoff_field(u.grid, R);
        Field diff(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i) diff[i] = chi[i] * u[i] - u[i];
        out.push_back(std::sqrt(hs_seminorm_sq(diff, s)));
    }
    return out;
}

/// ||(-Delta)^{s/2}(chi_R u)||_2 for each radius; tends to 0 as R -> 0 when s < N/2.
inline std::vector<double> cutoff_shrink(const Field& u, FracOrder s, const std::vector<double>& radii) {
    if (!(s.value() < 0.5 * u.grid.dim())) throw std::invalid_argument("cutoff_shrink needs s < N/2");
    std::vector<double> out;
    for (double R : radii) out.push_back(std::sqrt(hs_seminorm_sq(product(cutoff_field(u.grid, R), u), s)));
    return out;
}

// ---------------------------------------------------------------------------
// Commutator [phi, (-Delta)^{s/2}].

inline Field commutator(const Field& phi, const Field& u, FracOrder s) {
    const Multiplier half(u.grid, s.value());
    const Field a = product(phi, apply_multiplier(u, half));
    const Field b = apply_multiplier(product(phi, u), half);
    return axpy(-1.0, b, a);
}

inline double commutator_ratio(const Field& phi, const Field& u, FracOrder s) {
    return l2_norm(commutator(phi, u, s)) / std::sqrt(ws2_norm_sq(u, s));
}

inline EmpiricalConstant commutator_check(const Field& phi, const std::vector<Field>& fields, FracOrder s) {
    EmpiricalConstant out;
    for (const auto& u : fields) {
        const double r = commutator_ratio(phi, u, s);
        out.ratios.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Level consistency: a ground state maximizes J on its own fiber (phi(u) = 1).

struct LevelConsistency {
    double t_star = 0.0;
    double fiber_max = 0.0;
    double level = 0.0;
    double scan_max = 0.0;           ///< max J(theta u), theta in [0.5, 1.5]
    double perturbed_fiber_max = 0.0;
    bool pass = false;
};

inline LevelConsistency level_consistency(const ModelProblem& m, const GroundState& gs, std::uint64_t seed = 0) {
    LevelConsistency r;
    r.level = gs.level;
    const auto proj = project(m, gs.u);
    r.t_star = proj.t_star;
    r.fiber_max = proj.fiber_value;
    r.scan_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100; ++k) r.scan_max = std::max(r.scan_max, energy(m, scaled(gs.u, 0.5 + 0.01 * k)).total);

    Field noise = random_band_limited(m.grid(), seed, 0);
    noise = scaled(noise, max_abs(gs.u) / max_abs(noise));
    r.perturbed_fiber_max = fibering_max(m, axpy(0.01, noise, gs.u));

    const double tol = 1e-8 * std::max(1.0, std::abs(r.level));
    r.pass = std::abs(r.t_star - 1.0) <= 1e-6 && std::abs(r.fiber_max - r.level) <= tol && r.scan_max <= r.level + tol &&
             r.perturbed_fiber_max >= r.level - tol;
    return r;
}

}  // namespace fracground
