// Potentials V, weighted power nonlinearities f(x,u) = a(x)|u|^{p-1}u, and the assumption checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclap.hpp"
#include "grid.hpp"

namespace fracground {

enum class PotentialKind { constant, well, bump, coercive, rescaled };

inline std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::constant: return "constant";
        case PotentialKind::well: return "well";
        case PotentialKind::bump: return "bump";
        case PotentialKind::coercive: return "coercive";
        case PotentialKind::rescaled: return "rescaled";
    }
    return "unknown";
}

inline PotentialKind potential_kind_from_string(const std::string& s) {
    if (s == "constant") return PotentialKind::constant;
    if (s == "well") return PotentialKind::well;
    if (s == "bump") return PotentialKind::bump;
    if (s == "coercive") return PotentialKind::coercive;
    if (s == "rescaled") return PotentialKind::rescaled;
    throw std::invalid_argument("unknown potential kind '" + s + "'");
}

/// Immutable potential V(x) with a declared value at infinity.
///
///   constant  [c]                      V = c
///   well      [vinf, depth, width]     V = vinf - depth / (1 + |x|^2 / width^2)
///   bump      [base, height, width]    V = base + height * exp(-|x|^2 / width^2)
///   coercive  [base, coef]             V = base + coef * |x|^2          (vinf = +inf)
///   rescaled  inner, epsilon           V = inner(epsilon * x)
///
/// Every kind carries an additive offset, so V + delta is a potential of the same kind.
class Potential {
  public:
    static Potential constant(double c) { return Potential(PotentialKind::constant, {c}); }
    static Potential well(double vinf, double depth, double width) { return Potential(PotentialKind::well, {vinf, depth, width}); }
    static Potential bump(double base, double height, double width) { return Potential(PotentialKind::bump, {base, height, width}); }
    static Potential coercive(double base, double coef) { return Potential(PotentialKind::coercive, {base, coef}); }
    static Potential rescaled(const Potential& inner, double epsilon) {
        if (!(epsilon > 0.0)) throw std::invalid_argument("rescaled potential needs epsilon > 0");
        Potential p(PotentialKind::rescaled, {});
        p.inner_ = std::make_shared<const Potential>(inner);
        p.epsilon_ = epsilon;
        return p;
    }
    static Potential from_spec(PotentialKind kind, const std::vector<double>& params) {
        if (kind == PotentialKind::rescaled) throw std::invalid_argument("rescaled potentials are built with Potential::rescaled");
        return Potential(kind, params);
    }

    PotentialKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    double offset() const { return offset_; }
    double epsilon() const { return epsilon_; }
    const Potential* inner() const { return inner_.get(); }

    Potential shifted(double delta) const {
        Potential p = *this;
        p.offset_ += delta;
        return p;
    }

    /// Declared liminf of V at infinity.
    double vinf() const {
        switch (kind_) {
            case PotentialKind::constant: return params_[0] + offset_;
            case PotentialKind::well: return params_[0] + offset_;
            case PotentialKind::bump: return params_[0] + offset_;
            case PotentialKind::coercive: return std::numeric_limits<double>::infinity();
            case PotentialKind::rescaled: return inner_->vinf() + offset_;
        }
        return 0.0;
    }

    /// V at the origin.
    double at_origin() const { return (*this)(0.0, 0.0); }

    bool is_constant() const {
        if (kind_ == PotentialKind::constant) return true;
        if (kind_ == PotentialKind::rescaled) return inner_->is_constant();
        return false;
    }

    double operator()(double x, double y = 0.0) const {
        const double r2 = x * x + y * y;
        switch (kind_) {
            case PotentialKind::constant: return params_[0] + offset_;
            case PotentialKind::well: return params_[0] - params_[1] / (1.0 + r2 / (params_[2] * params_[2])) + offset_;
            case PotentialKind::bump: return params_[0] + params_[1] * std::exp(-r2 / (params_[2] * params_[2])) + offset_;
            case PotentialKind::coercive: return params_[0] + params_[1] * r2 + offset_;
            case PotentialKind::rescaled: return (*inner_)(epsilon_ * x, epsilon_ * y) + offset_;
        }
        return 0.0;
    }

    Field sample(const Grid& grid) const {
        if (grid.dim() == 1) return fracground::sample(grid, [this](double x) { return (*this)(x); });
        return fracground::sample(grid, [this](double x, double y) { return (*this)(x, y); });
    }

  private:
    Potential(PotentialKind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {
        std::size_t need = 0;
        switch (kind) {
            case PotentialKind::constant: need = 1; break;
            case PotentialKind::well: need = 3; break;
            case PotentialKind::bump: need = 3; break;
            case PotentialKind::coercive: need = 2; break;
            case PotentialKind::rescaled: need = 0; break;
        }
        if (params_.size() != need)
            throw std::invalid_argument("potential '" + to_string(kind) + "' expects " + std::to_string(need) + " params, got " +
                                        std::to_string(params_.size()));
        if ((kind == PotentialKind::well || kind == PotentialKind::bump) && !(params_[2] > 0.0))
            throw std::invalid_argument("potential width must be positive");
    }

    PotentialKind kind_;
    std::vector<double> params_;
    double offset_ = 0.0;
    double epsilon_ = 1.0;
    std::shared_ptr<const Potential> inner_;
};

/// f(x,u) = a(x) |u|^{p-1} u with F(x,u) = a(x) |u|^{p+1} / (p+1).
struct Nonlinearity {
    double p = 2.0;
    Potential weight = Potential::constant(1.0);

    double mu() const { return p + 1.0; }
};

/// |u|^{p-1}, with cheap paths for the common integer exponents.
inline double abs_pow_pm1(double u, double p) {
    const double a = std::abs(u);
    if (p == 2.0) return a;
    if (p == 3.0) return a * a;
    return std::pow(a, p - 1.0);
}

/// Full problem (-Delta)^s u + V(x) u = f(x, u) discretized on a grid.
class ModelProblem {
  public:
    ModelProblem(Grid grid, FracOrder s, Potential V, Nonlinearity f, bool positive_mode = false, bool dealias = false)
        : grid_(std::move(grid)),
          s_(s),
          V_(std::move(V)),
          f_(std::move(f)),
          positive_mode_(positive_mode),
          dealias_(dealias),
          V_samples_(V_.sample(grid_)),
          a_samples_(f_.weight.sample(grid_)),
          kinetic_(grid_, 2.0 * s_.value()),
          half_(grid_, s_.value()) {
        if (!(f_.p > 1.0)) throw std::invalid_argument("nonlinearity exponent p must exceed 1");
    }

    const Grid& grid() const { return grid_; }
    FracOrder s() const { return s_; }
    const Potential& potential() const { return V_; }
    const Nonlinearity& nonlinearity() const { return f_; }
    bool positive_mode() const { return positive_mode_; }
    bool dealias() const { return dealias_; }
    const Field& V() const { return V_samples_; }
    const Field& weight() const { return a_samples_; }
    /// |xi|^{2s}
    const Multiplier& kinetic_symbol() const { return kinetic_; }
    /// |xi|^{s}
    const Multiplier& half_symbol() const { return half_; }

    ModelProblem with_potential(Potential V) const { return {grid_, s_, std::move(V), f_, positive_mode_, dealias_}; }
    ModelProblem with_positive_mode(bool on) const { return {grid_, s_, V_, f_, on, dealias_}; }
    ModelProblem with_nonlinearity(Nonlinearity f) const { return {grid_, s_, V_, std::move(f), positive_mode_, dealias_}; }

    /// (N + 2s) / (N - 2s), or +inf when N <= 2s.
    double critical_exponent() const {
        const double n = grid_.dim();
        const double s = s_.value();
        if (n - 2.0 * s <= 0.0) return std::numeric_limits<double>::infinity();
        return (n + 2.0 * s) / (n - 2.0 * s);
    }

  private:
    Grid grid_;
    FracOrder s_;
    Potential V_;
    Nonlinearity f_;
    bool positive_mode_;
    bool dealias_;
    Field V_samples_;
    Field a_samples_;
    Multiplier kinetic_;
    Multiplier half_;
};

// ---------------------------------------------------------------------------
// Pointwise evaluation. In positive mode f, F, f' vanish where u < 0.

inline Field eval_f(const ModelProblem& m, const Field& u) {
    require_same_grid(m.grid(), u.grid);
    const double p = m.nonlinearity().p;
    const auto& a = m.weight();
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (m.positive_mode() && u[i] < 0.0) continue;
        out[i] = a[i] * abs_pow_pm1(u[i], p) * u[i];
    }
    return out;
}

inline Field eval_F(const ModelProblem& m, const Field& u) {
    require_same_grid(m.grid(), u.grid);
    const double p = m.nonlinearity().p;
    const auto& a = m.weight();
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (m.positive_mode() && u[i] < 0.0) continue;
        out[i] = a[i] * abs_pow_pm1(u[i], p) * u[i] * u[i] / (p + 1.0);
    }
    return out;
}

inline Field eval_fprime(const ModelProblem& m, const Field& u) {
    require_same_grid(m.grid(), u.grid);
    const double p = m.nonlinearity().p;
    const auto& a = m.weight();
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (m.positive_mode() && u[i] < 0.0) continue;
        out[i] = p * a[i] * abs_pow_pm1(u[i], p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assumption checks.

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    double witness = 0.0;
    std::string detail;
};

/// Shell used as the proxy for "|x| -> infinity": outer 10% of the box (by max-norm).
inline bool in_outer_shell(const Grid& g, std::size_t idx) {
    const double half = 0.5 * g.extent();
    double r = std::abs(g.coordinate(idx, 0));
    if (g.dim() == 2) r = std::max(r, std::abs(g.coordinate(idx, 1)));
    return r >= 0.9 * half;
}

/// Reports (V1), (V2), (f1)-(f5) for the model. Never throws on failing assumptions.
/// `tol_decl` is the slack allowed between the shell minimum of V and the declared V_inf.
inline std::vector<AssumptionCheck> validate(const ModelProblem& m, double tol_decl = 0.05) {
    std::vector<AssumptionCheck> out;
    const Field& V = m.V();
    const Grid& g = m.grid();

    const double v0 = *std::min_element(V.values.begin(), V.values.end());
    out.push_back({"V1", v0 > 0.0, v0, "inf of V over the grid must be positive"});

    {
        const double vinf = m.potential().vinf();
        double shell_min = std::numeric_limits<double>::infinity();
        double inner_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (in_outer_shell(g, i)) shell_min = std::min(shell_min, V[i]);
            else inner_max = std::max(inner_max, V[i]);
        }
        AssumptionCheck c{"V2", false, shell_min, ""};
        if (std::isinf(vinf)) {
            c.pass = shell_min >= inner_max;
            c.detail = "coercive: outer-shell minimum of V must dominate the interior";
        } else {
            c.pass = vinf > 0.0 && shell_min >= vinf - tol_decl;
            c.detail = "outer-shell minimum of V must be >= declared V_inf - " + std::to_string(tol_decl);
        }
        out.push_back(c);
    }

    out.push_back({"f1", true, 0.0, "continuity: power family, by construction"});
    out.push_back({"f2", true, 0.0, "f(x,s) = o(s) at 0: p > 1, by construction"});

    const double p = m.nonlinearity().p;
    const double crit = m.critical_exponent();
    out.push_back({"f3", p > 1.0 && p < crit, crit, "subcritical: 1 < p < (N+2s)/(N-2s)"});

    const Field& a = m.weight();
    const double amin = *std::min_element(a.values.begin(), a.values.end());
    const double mu = m.nonlinearity().mu();
    out.push_back({"f4", mu > 2.0 && amin > 0.0, mu, "Ambrosetti-Rabinowitz with mu = p + 1 > 2 and positive weight"});
    out.push_back({"f5", p > 1.0 && amin > 0.0, p - 1.0, "t -> a|s|^{p+1} t^{p-1} increasing"});
    return out;
}

inline bool all_pass(const std::vector<AssumptionCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

/// Assumptions the solver cannot run without: (V1), (f3), (f4).
inline std::optional<AssumptionCheck> blocking_failure(const std::vector<AssumptionCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass && (c.name == "V1" || c.name == "f3" || c.name == "f4")) return c;
    return std::nullopt;
}

}  // namespace fracground
