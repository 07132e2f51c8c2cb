#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracground/grid.hpp"
#include "fracground/random.hpp"

using namespace fracground;
constexpr double pi = std::numbers::pi;

TEST(Grid, MakeGridShape) {
    const Grid g = make_grid(1, 20.0, 64);
    EXPECT_EQ(g.size(), 64u);
    EXPECT_DOUBLE_EQ(g.spacing(), 20.0 / 64);
    EXPECT_DOUBLE_EQ(g.coordinate(0), -10.0);
    EXPECT_DOUBLE_EQ(g.coordinate(63), 10.0 - 20.0 / 64);
    EXPECT_NEAR(g.axis_frequencies()[1], 2.0 * pi / 20.0, 1e-15);

    const Grid g2 = make_grid(2, 10.0, 16);
    EXPECT_EQ(g2.size(), 256u);
    EXPECT_DOUBLE_EQ(g2.cell_volume(), std::pow(10.0 / 16, 2));
}

TEST(Grid, MakeGridRejectsBadInput) {
    EXPECT_THROW(make_grid(3, 10.0, 16), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 0.0, 16), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 10.0, 15), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 10.0, 4), std::invalid_argument);
}

TEST(Grid, ConstantTransformsToDeltaAtZero) {
    const Grid g = make_grid(1, 2.0 * pi, 32);
    const auto w = transform(sample(g, [](double) { return 1.0; }));
    EXPECT_NEAR(std::abs(w.coeffs[0] - Complex(2.0 * pi, 0.0)), 0.0, 1e-12);
    for (std::size_t k = 1; k < w.coeffs.size(); ++k) EXPECT_LT(std::abs(w.coeffs[k]), 1e-12);
}

TEST(Grid, CosineModeLandsOnItsWavenumber) {
    const double L = 2.0 * pi;
    const Grid g = make_grid(1, L, 32);
    const auto w = transform(sample(g, [](double x) { return std::cos(3.0 * x); }));
    for (std::size_t k = 0; k < w.coeffs.size(); ++k) {
        const int kk = g.axis_wavenumbers()[k];
        const double expect = std::abs(kk) == 3 ? L / 2 : 0.0;
        EXPECT_NEAR(std::abs(w.coeffs[k]), expect, 1e-12) << "k=" << kk;
    }
}

TEST(Grid, RoundTripIsIdentity) {
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, 12.0, 32);
        Rng rng(7);
        Field u(g);
        for (auto& v : u.values) v = rng.normal();
        const Field back = inverse_transform(transform(u));
        for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(back[i], u[i], 1e-13);
    }
}

TEST(Grid, IntegrateGaussianAndLorentzianSquare) {
    const Grid g = make_grid(1, 40.0, 1024);
    EXPECT_NEAR(integrate(sample(g, [](double x) { return std::exp(-x * x); })), std::sqrt(pi), 1e-10);
    const Grid wide = make_grid(1, 160.0, 8192);
    EXPECT_NEAR(integrate(sample(wide, [](double x) { return 4.0 / ((1 + x * x) * (1 + x * x)); })), 2.0 * pi, 1e-3);
}

TEST(Grid, ParsevalForBandLimitedFields) {
    const Grid g = make_grid(1, 10.0, 64);
    Rng rng(3);
    Field u(g), v(g);
    for (int k = 1; k <= 5; ++k) {
        const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = 2.0 * pi * k * g.coordinate(static_cast<int>(i)) / 10.0;
            u[i] += a * std::cos(x) + b * std::sin(x);
            v[i] += c * std::cos(x) + d * std::sin(x);
        }
    }
    const auto uh = transform(u), vh = transform(v);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) acc += uh.coeffs[k] * std::conj(vh.coeffs[k]);
    const double spectral = acc.real() / g.volume();
    EXPECT_NEAR(spectral, inner(u, v), 1e-10 * std::abs(inner(u, v)));
}

TEST(Grid, IntegrateIsLinearAndMonotone) {
    const Grid g = make_grid(1, 10.0, 64);
    const Field a = sample(g, [](double x) { return std::exp(-x * x); });
    const Field b = sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
    EXPECT_NEAR(integrate(axpy(2.5, a, b)), 2.5 * integrate(a) + integrate(b), 1e-13);
    EXPECT_LE(integrate(scaled(a, 0.5)), integrate(a));
}

TEST(Grid, SpectralTranslateShiftsBandLimitedField) {
    const Grid g = make_grid(1, 2.0 * pi, 32);
    const Field u = sample(g, [](double x) { return std::sin(2.0 * x) + 0.3 * std::cos(5.0 * x); });
    const std::vector<double> shift{0.37};
    const Field t = spectral_translate(u, shift);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(static_cast<int>(i)) + 0.37;
        EXPECT_NEAR(t[i], std::sin(2.0 * x) + 0.3 * std::cos(5.0 * x), 1e-12);
    }
}

TEST(Grid, CsvRoundTrip) {
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, 7.5, 16);
        Rng rng(11);
        Field u(g);
        for (auto& v : u.values) v = rng.normal();
        std::stringstream ss;
        write_field_csv(ss, u);
        const Field back = read_field_csv(ss);
        EXPECT_TRUE(back.grid == g);
        EXPECT_EQ(back.values, u.values);
    }
}

TEST(Grid, CsvRejectsMalformedInput) {
    std::stringstream ss("x,u\n0,1\n");
    EXPECT_THROW(read_field_csv(ss), std::runtime_error);
}
