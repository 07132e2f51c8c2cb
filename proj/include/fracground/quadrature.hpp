// Gauss-Legendre rules.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fracground::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

/// Integral of fn over [a, b] split into `pieces` equal panels.
template <typename Fn>
double integrate(const Rule& rule, Fn&& fn, double a, double b, int pieces = 1) {
    const double width = (b - a) / pieces;
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * fn(mid + 0.5 * width * rule.nodes[i]);
        total += 0.5 * width * acc;
    }
    return total;
}

}  // namespace fracground::quadrature
