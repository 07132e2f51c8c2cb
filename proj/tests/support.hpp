#pragma once

#include <cmath>
#include <numbers>

#include "fracground/model.hpp"
#include "fracground/solver.hpp"

namespace testing_support {

using namespace fracground;

inline ModelProblem constant_model(double L, int M, double s = 0.5, double v = 1.0, double p = 2.0, int dim = 1) {
    return ModelProblem(make_grid(dim, L, M), FracOrder(s), Potential::constant(v), Nonlinearity{p, Potential::constant(1.0)});
}

/// The half-Laplacian benchmark on the reference box.
inline const ModelProblem& benchmark_model() {
    static const ModelProblem m = constant_model(160.0, 8192);
    return m;
}

inline const GroundState& benchmark_state() {
    static const GroundState gs = solve_ground_state(benchmark_model(), SolverConfig{});
    return gs;
}

inline double lorentzian(double x) { return 2.0 / (1.0 + x * x); }

/// omega u*(omega x) solves the benchmark equation with V = omega.
inline Field scaled_lorentzian(const Grid& g, double omega) {
    return sample(g, [omega](double x) { return omega * lorentzian(omega * x); });
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
