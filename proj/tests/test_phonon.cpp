#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qtoken/errors.hpp"
#include "qtoken/phonon.hpp"

using namespace qtoken;
using namespace qtoken::phonon;

TEST(Christoffel, IsotropicLimit) {
    const auto m = ElasticMedium::isotropic(300.0, 100.0, 2.0);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> n;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Vector3d k = Eigen::Vector3d(n(gen), n(gen), n(gen)).normalized();
        const auto v = christoffel_velocities(k, m);
        EXPECT_NEAR(v[0].velocity, std::sqrt(150.0), 1e-12);
        EXPECT_NEAR(v[1].velocity, std::sqrt(50.0), 1e-12);
        EXPECT_NEAR(v[2].velocity, std::sqrt(50.0), 1e-12);
        EXPECT_NEAR(std::abs(v[0].polarization.dot(k)), 1.0, 1e-12);
    }
}

TEST(Christoffel, DiamondAxisVelocities) {
    const auto m = ElasticMedium::diamond();
    const auto v = christoffel_velocities({1, 0, 0}, m);
    EXPECT_NEAR(v[0].velocity, std::sqrt(1079.6 / 3.51), 1e-12);
    EXPECT_NEAR(v[2].velocity, std::sqrt(578.16 / 3.51), 1e-12);
    // [111] longitudinal: (C11 + 2 C12 + 4 C44) / 3
    const auto d = christoffel_velocities(Eigen::Vector3d(1, 1, 1).normalized(), m);
    EXPECT_NEAR(d[0].velocity, std::sqrt((1079.6 + 2 * 126.73 + 4 * 578.16) / 3 / 3.51), 1e-12);
}

TEST(Christoffel, CubicSymmetry) {
    const auto m = ElasticMedium::diamond();
    const Eigen::Vector3d k = Eigen::Vector3d(0.3, -0.5, 0.81).normalized();
    const auto a = christoffel_velocities(k, m);
    const auto b = christoffel_velocities(Eigen::Vector3d(k[2], k[0], -k[1]), m);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i].velocity, b[i].velocity, 1e-12);
}

TEST(Christoffel, RejectsUnstableMedium) {
    EXPECT_THROW(christoffel_velocities({1, 0, 0}, {100, 200, 10, 1}), DomainError);
    EXPECT_THROW(christoffel_velocities({0, 0, 0}, ElasticMedium::diamond()), DomainError);
}

TEST(Sphere, AreaAndSecondMoment) {
    EXPECT_NEAR(sphere_integral([](const Eigen::Vector3d&) { return 1.0; }), 4 * M_PI, 1e-12);
    EXPECT_NEAR(sphere_integral([](const Eigen::Vector3d& k) { return k[0] * k[0]; }), 4 * M_PI / 3, 1e-12);
    EXPECT_NEAR(sphere_integral([](const Eigen::Vector3d& k) { return std::pow(k[0] * k[1] * k[2], 2); }, 1e-12),
                4 * M_PI / 105, 1e-12);
}

TEST(CrossSection, MatchesDenseGridOracle) {
    const auto m = ElasticMedium::diamond();
    const Eigen::Matrix3d d = StrainSusceptibility::excited().eby();
    const double lib = absorption_cross_section(d, m, 1e-9);
    EXPECT_NEAR(lib / oracle::dense_chi(d, m, 1200, 300), 1.0, 2e-6);
}

TEST(CrossSection, QuadraticAndZero) {
    const auto m = ElasticMedium::diamond();
    const Eigen::Matrix3d d = StrainSusceptibility::ground().eby();
    const double a = absorption_cross_section(d, m);
    EXPECT_GT(a, 0.0);
    EXPECT_EQ(absorption_cross_section(2.0 * d, m), 4.0 * a);
    EXPECT_NEAR(absorption_cross_section(-3.0 * d, m) / a, 9.0, 1e-12);
    EXPECT_EQ(absorption_cross_section(Eigen::Matrix3d::Zero(), m), 0.0);
}

TEST(Occupation, BoseEinstein) {
    const double x = 6.62607015e-34 * 70.8e9 / (1.380649e-23 * 0.5);
    EXPECT_NEAR(occupation(70.8, 0.5), 1.0 / std::expm1(x), 1e-15);
    EXPECT_NEAR(occupation(-70.8, 0.5) - occupation(70.8, 0.5), 1.0, 1e-15);
    EXPECT_THROW(occupation(0.0, 1.0), DomainError);
    EXPECT_THROW(occupation(1.0, 0.0), DomainError);
}

TEST(Rates, DetailedBalance) {
    RateMatrixInput in;
    in.level_ghz = {0.0, 70.8};
    in.temperature_k = 2.0;
    Eigen::MatrixXcd h(2, 2);
    h << 0, std::complex<double>(0.3, 0.1), std::complex<double>(0.3, -0.1), 0;
    in.h["egx"] = h;
    const std::map<std::string, double> chi = {{"egx", 1e-24}};
    const double down = phonon_rate(0, 1, in, chi), up = phonon_rate(1, 0, in, chi);
    const double x = 6.62607015e-34 * 70.8e9 / (1.380649e-23 * 2.0);
    EXPECT_NEAR(down / up, std::exp(x), 1e-10 * std::exp(x));
}

TEST(Rates, RejectsBadInput) {
    RateMatrixInput in;
    in.level_ghz = {0.0, 1.0};
    in.h["egx"] = Eigen::MatrixXcd::Zero(3, 3);
    EXPECT_THROW(phonon_rate(0, 1, in, {{"egx", 1.0}}), ConfigError);
    in.h["egx"] = Eigen::MatrixXcd::Zero(2, 2);
    EXPECT_THROW(phonon_rate(0, 0, in, {{"egx", 1.0}}), DomainError);
    EXPECT_THROW(phonon_rate(0, 1, in, {}), ConfigError);
}
