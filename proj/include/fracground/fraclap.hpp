// Fractional Laplacian (-Delta)^s: Fourier multiplier |xi|^{2s}, seminorms, and the
// singular-integral constant C_{N,s}.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace fracground {

/// Fractional order s in (0, 1).
class FracOrder {
  public:
    explicit FracOrder(double s) : s_(s) {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional order must lie in (0, 1), got " + std::to_string(s));
    }
    double value() const { return s_; }

  private:
    double s_;
};

/// Precomputed multiplier |xi|^exponent on a grid (exponent = 2s for (-Delta)^s).
class Multiplier {
  public:
    Multiplier() = default;
    Multiplier(const Grid& grid, double exponent) : grid_(grid), exponent_(exponent), symbol_(grid.size()) {
        const auto& xi = grid.abs_frequencies();
        for (std::size_t i = 0; i < xi.size(); ++i) symbol_[i] = xi[i] == 0.0 ? 0.0 : std::pow(xi[i], exponent);
    }
    const Grid& grid() const { return grid_; }
    double exponent() const { return exponent_; }
    const std::vector<double>& symbol() const { return symbol_; }
    double operator[](std::size_t i) const { return symbol_[i]; }

  private:
    Grid grid_;
    double exponent_ = 0.0;
    std::vector<double> symbol_;
};

/// Applies a real, even Fourier multiplier and returns the real part.
inline Field apply_multiplier(const Field& u, const Multiplier& m) {
    require_same_grid(u.grid, m.grid());
    auto w = transform(u);
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) w.coeffs[i] *= m[i];
    const auto data = inverse_transform_complex(w);
    Field out(u.grid);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[i] = data[i].real();
        re += data[i].real() * data[i].real();
        im += data[i].imag() * data[i].imag();
    }
    // An even real symbol keeps a real field real; anything else is a broken symbol table.
    double in = 0.0;
    for (double v : u.values) in += v * v;
    if (std::sqrt(im) > 1e-10 * (std::sqrt(re) + std::sqrt(in))) throw std::logic_error("fractional Laplacian output is not real");
    return out;
}

/// (-Delta)^{s * power_scale} u; power_scale 1 gives (-Delta)^s, 1/2 gives (-Delta)^{s/2}.
inline Field apply_fraclap(const Field& u, FracOrder s, double power_scale = 1.0) {
    if (power_scale != 1.0 && power_scale != 0.5) throw std::invalid_argument("power_scale must be 1 or 1/2");
    return apply_multiplier(u, Multiplier(u.grid, 2.0 * s.value() * power_scale));
}

/// (2 pi)^{-N} int |xi|^{2s} |u_hat|^2 d xi with the multiplier already built (exponent 2s).
inline double hs_seminorm_sq(const Field& u, const Multiplier& m) {
    require_same_grid(u.grid, m.grid());
    const auto w = transform(u);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) acc += m[i] * std::norm(w.coeffs[i]);
    return acc / u.grid.volume();
}

/// ||(-Delta)^{s/2} u||_2^2, computed spectrally.
inline double hs_seminorm_sq(const Field& u, FracOrder s) { return hs_seminorm_sq(u, Multiplier(u.grid, 2.0 * s.value())); }

/// Equivalent W^{s,2} norm squared: ||u||_2^2 + ||(-Delta)^{s/2} u||_2^2.
inline double ws2_norm_sq(const Field& u, FracOrder s) { return l2_norm_sq(u) + hs_seminorm_sq(u, s); }

// ---------------------------------------------------------------------------
// C_{N,s}^{-1} = int_{R^N} (1 - cos x_1) / |x|^{N+2s} dx.
//
// Integrating out the transverse variables leaves the 1D integral
//   I(s) = int_R (1 - cos t) / |t|^{1+2s} dt
// times B = int_{R^{N-1}} (1 + |y|^2)^{-(N+2s)/2} dy, which is 1 for N = 1 and
// sqrt(pi) Gamma(1/2 + s) / Gamma(1 + s) for N = 2. I(s) is split at t = 1:
//   [0, 1]: 1 - cos t expanded termwise (handles the t^{1-2s} singularity exactly),
//   [1, X]: composite Gauss-Legendre on quarter periods,
//   [X, inf): the non-oscillatory part is 1/(2s) in closed form; the cosine tail uses
//             the integration-by-parts expansion of int_X^inf e^{it} t^{-a} dt.

namespace detail {

inline double one_minus_cos_integral(double s, int periods, int nodes) {
    const double a = 1.0 + 2.0 * s;

    double near = 0.0;
    double fact = 1.0;  // (2k)!
    for (int k = 1; k <= 30; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        const double term = 1.0 / (fact * (2.0 * k - 2.0 * s));
        near += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }

    const double upper = 2.0 * std::numbers::pi * periods;
    const auto rule = quadrature::gauss_legendre(nodes);
    const double cos_mid = quadrature::integrate(
        rule, [a](double t) { return std::cos(t) * std::pow(t, -a); }, 1.0, upper, 4 * periods);

    std::complex<double> tail = 0.0;
    const std::complex<double> lead = std::complex<double>(0.0, 1.0) * std::polar(1.0, upper) * std::pow(upper, -a);
    std::complex<double> factor = 1.0;
    for (int n = 0; n < 12; ++n) {
        tail += lead * factor;
        factor *= std::complex<double>(0.0, -1.0) * (a + n) / upper;
    }

    return 2.0 * (near + 1.0 / (2.0 * s) - cos_mid - tail.real());
}

}  // namespace detail

/// Normalizing constant C_{N,s} of the singular-integral form of (-Delta)^s, by quadrature.
/// Throws std::runtime_error when two refinements disagree beyond 1e-9 relative.
inline double c_ns_constant(int dim, FracOrder order) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("c_ns_constant: dim must be 1 or 2");
    const double s = order.value();
    const double coarse = detail::one_minus_cos_integral(s, 200, 16);
    const double fine = detail::one_minus_cos_integral(s, 400, 24);
    if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-9 * std::abs(fine))
        throw std::runtime_error("c_ns_constant: quadrature did not converge");
    double transverse = 1.0;
    if (dim == 2) transverse = std::sqrt(std::numbers::pi) * std::tgamma(0.5 + s) / std::tgamma(1.0 + s);
    return 1.0 / (transverse * fine);
}

enum class GagliardoKernel {
    box,       ///< y ranges over the box only, Euclidean distance
    periodic,  ///< y ranges over all periodic images (torus kernel)
};

inline constexpr int gagliardo_max_points = 1024;

/// Direct O(M^2) double sum of |u(x) - u(y)|^2 / |x - y|^{N+2s} over grid points (1D only).
/// Diagonal cells contribute zero. Row partial sums are reduced in index order, so the
/// result does not depend on `jobs`.
inline double gagliardo_seminorm_sq(const Field& u, FracOrder order, GagliardoKernel kernel = GagliardoKernel::box,
                                    unsigned jobs = 1) {
    const Grid& g = u.grid;
    if (g.dim() != 1) throw std::invalid_argument("gagliardo_seminorm_sq: only dim = 1 is supported");
    if (g.points() > gagliardo_max_points)
        throw std::invalid_argument("gagliardo_seminorm_sq: grid exceeds " + std::to_string(gagliardo_max_points) + " points");
    const int m = g.points();
    const double h = g.spacing();
    const double a = 1.0 + 2.0 * order.value();

    // kern[d] for index offset d = 0..m-1.
    std::vector<double> kern(m, 0.0);
    for (int d = 1; d < m; ++d) kern[d] = std::pow(d * h, -a);
    if (kernel == GagliardoKernel::periodic) {
        const double L = g.extent();
        constexpr int images = 2000;
        for (int d = 0; d < m; ++d) {
            double acc = 0.0;
            for (int n = -images; n <= images; ++n) {
                const double r = std::abs(d * h + n * L);
                if (r > 0.0) acc += std::pow(r, -a);
            }
            // Remaining images |n| > images, midpoint-rule tail of sum (|n| L)^{-a}.
            acc += 2.0 * std::pow((images + 0.5) * L, 1.0 - a) / ((a - 1.0) * L);
            kern[d] = acc;
        }
    }

    std::vector<double> rows(m, 0.0);
    parallel_for(static_cast<std::size_t>(m), jobs, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            const int d = kernel == GagliardoKernel::periodic ? ((j - i) % m + m) % m : std::abs(j - i);
            const double diff = u[i] - u[j];
            acc += diff * diff * kern[d];
        }
        rows[ii] = acc;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total * h * h;
}

}  // namespace fracground
