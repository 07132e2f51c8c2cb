// Nehari projection phi(u) and the fibering maximum max_{t >= 0} J(t u).
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "energy.hpp"
#include "model.hpp"

namespace fracground {

class ProjectionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ProjectionResult {
    double t_star = 0.0;
    Field projected;
    double fiber_value = 0.0;
    int iterations = 0;
};

namespace detail {

// The fiber derivative h(t) = d/dt J(t u) = t ||u||_E^2 - int f(x, t u) u, evaluated pointwise.
class Fiber {
  public:
    Fiber(const ModelProblem& m, const Field& u)
        : m_(m), arg_(nonlinear_argument(m, u)), norm_sq_(e_norm_sq(m, u)), vol_(u.grid.cell_volume()) {}

    double norm_sq() const { return norm_sq_; }

    double h(double t) const {
        const double p = m_.nonlinearity().p;
        const auto& a = m_.weight();
        double acc = 0.0;
        for (std::size_t i = 0; i < arg_.size(); ++i) {
            const double v = t * arg_[i];
            if (m_.positive_mode() && v < 0.0) continue;
            acc += a[i] * abs_pow_pm1(v, p) * v * arg_[i];
        }
        return t * norm_sq_ - acc * vol_;
    }

    double dh(double t) const {
        const double p = m_.nonlinearity().p;
        const auto& a = m_.weight();
        double acc = 0.0;
        for (std::size_t i = 0; i < arg_.size(); ++i) {
            const double v = t * arg_[i];
            if (m_.positive_mode() && v < 0.0) continue;
            acc += p * a[i] * abs_pow_pm1(v, p) * arg_[i] * arg_[i];
        }
        return norm_sq_ - acc * vol_;
    }

    /// int a |u|^{p+1} over the part of u the nonlinearity acts on.
    double power_integral() const {
        const double p = m_.nonlinearity().p;
        const auto& a = m_.weight();
        double acc = 0.0;
        for (std::size_t i = 0; i < arg_.size(); ++i) {
            if (m_.positive_mode() && arg_[i] < 0.0) continue;
            acc += a[i] * std::pow(std::abs(arg_[i]), p + 1.0);
        }
        return acc * vol_;
    }

  private:
    const ModelProblem& m_;
    Field arg_;
    double norm_sq_;
    double vol_;
};

}  // namespace detail

/// Closed-form phi(u) = (||u||_E^2 / int a|u|^{p+1})^{1/(p-1)}, valid for the power family.
inline double closed_form_scale(const ModelProblem& m, const Field& u) {
    const detail::Fiber fiber(m, u);
    const double denom = fiber.power_integral();
    if (!(denom > 0.0)) throw ProjectionError("Nehari projection undefined: nonlinearity vanishes along the ray");
    return std::pow(fiber.norm_sq() / denom, 1.0 / (m.nonlinearity().p - 1.0));
}

/// Finds the unique t > 0 with h(t) = 0: bracket by doubling/halving from t = 1, bisect to
/// relative width 1e-12, then one Newton step kept only if it stays in the bracket.
inline ProjectionResult project(const ModelProblem& m, const Field& u) {
    require_same_grid(m.grid(), u.grid);
    if (max_abs(u) == 0.0) throw ProjectionError("Nehari projection undefined at u = 0");
    const detail::Fiber fiber(m, u);
    if (!(fiber.norm_sq() > 0.0)) throw ProjectionError("Nehari projection undefined: ||u||_E = 0");

    constexpr double t_min = 1e-12, t_max = 1e12;
    int iterations = 0;
    double lo = 1.0, hi = 1.0;
    if (fiber.h(1.0) > 0.0) {
        while (fiber.h(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            ++iterations;
            if (hi > t_max) throw ProjectionError("Nehari projection: no sign change of the fiber derivative below t = 1e12");
        }
    } else {
        while (fiber.h(lo) <= 0.0) {
            hi = lo;
            lo *= 0.5;
            ++iterations;
            if (lo < t_min) throw ProjectionError("Nehari projection: no sign change of the fiber derivative above t = 1e-12");
        }
    }
    // Invariant: h(lo) > 0 >= h(hi).
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (fiber.h(mid) > 0.0) lo = mid;
        else hi = mid;
        ++iterations;
    }
    double t = 0.5 * (lo + hi);
    const double slope = fiber.dh(t);
    if (slope != 0.0) {
        const double polished = t - fiber.h(t) / slope;
        if (polished >= lo && polished <= hi) t = polished;
    }
    ++iterations;

    ProjectionResult r;
    r.t_star = t;
    r.projected = scaled(u, t);
    r.fiber_value = energy(m, r.projected).total;
    r.iterations = iterations;
    return r;
}

/// max_{theta >= 0} J(theta u) = J(phi(u) u).
inline double fibering_max(const ModelProblem& m, const Field& u) { return project(m, u).fiber_value; }

}  // namespace fracground
