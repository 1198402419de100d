#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "qtoken/quadrature.hpp"

using namespace qtoken;

TEST(Quadrature, PolynomialExact) {
    const auto r = quad::integrate<double>([](double x) { return 3 * x * x - 2 * x + 1; }, {-1.0, 2.0});
    EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, PeakedLorentzianWithBreakpoint) {
    const double w = 1e-3;
    auto f = [w](double x) { return w / (x * x + w * w); };
    const auto r = quad::integrate<double>(f, {-1.0, 0.0, 1.0});
    EXPECT_NEAR(r.value, 2.0 * std::atan(1.0 / w), 1e-9);
}

TEST(Quadrature, ComplexAndArrayValues) {
    using C = std::complex<double>;
    const auto c = quad::integrate<C>([](double x) { return std::exp(C(0, x)); }, {0.0, M_PI});
    EXPECT_NEAR(std::abs(c.value - C(0, 2)), 0.0, 1e-12);
    const auto a = quad::integrate<std::array<double, 2>>(
        [](double x) { return std::array<double, 2>{std::sin(x), std::cos(x)}; }, {0.0, M_PI / 2});
    EXPECT_NEAR(a.value[0], 1.0, 1e-12);
    EXPECT_NEAR(a.value[1], 1.0, 1e-12);
}

TEST(Quadrature, BudgetExhaustionThrows) {
    quad::Options opt;
    opt.max_intervals = 2;
    opt.rel_tol = 1e-15;
    opt.abs_tol = 0.0;
    EXPECT_THROW(quad::integrate<double>([](double x) { return std::sqrt(std::abs(x)); }, {-1.0, 1.0}, opt),
                 NumericalError);
}

TEST(GaussHermite, MomentsOfGaussian) {
    const auto r = quad::gauss_hermite(32);
    double m0 = 0, m2 = 0, m4 = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double x = r.nodes[i];
        m0 += r.weights[i];
        m2 += r.weights[i] * x * x;
        m4 += r.weights[i] * x * x * x * x;
    }
    EXPECT_NEAR(m0, std::sqrt(M_PI), 1e-13);
    EXPECT_NEAR(m2, std::sqrt(M_PI) / 2, 1e-13);
    EXPECT_NEAR(m4, 3 * std::sqrt(M_PI) / 4, 1e-12);
}

TEST(GaussLegendre, IntegratesDegree2nMinus1) {
    const auto r = quad::gauss_legendre(10);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 18);
    EXPECT_NEAR(s, 2.0 / 19.0, 1e-14);
}
