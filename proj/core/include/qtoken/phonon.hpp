#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace qtoken::phonon {

// Cubic crystal; stiffness in GPa, density in g/cm^3.
struct ElasticMedium {
    double c11 = 1079.6;
    double c12 = 126.73;
    double c44 = 578.16;
    double density = 3.51;

    void validate() const;
    static ElasticMedium diamond() { return {}; }
    static ElasticMedium isotropic(double c11, double c12, double density);
};

struct AcousticMode {
    double velocity;  // km/s
    Eigen::Vector3d polarization;
};

// Sorted by descending velocity.
std::array<AcousticMode, 3> christoffel_velocities(const Eigen::Vector3d& direction, const ElasticMedium& m);

// Susceptibility constants in PHz for one orbital manifold.
struct StrainSusceptibility {
    double d = 0.0;
    double f = 0.0;

    Eigen::Matrix3d ebx() const;
    Eigen::Matrix3d eby() const;

    static StrainSusceptibility ground() { return {0.787, -0.562}; }
    static StrainSusceptibility excited() { return {0.956, -2.555}; }
};

// Tensor-product rule: Gauss-Legendre in cos(theta), trapezoid in phi.
struct SphereRule {
    std::vector<Eigen::Vector3d> points;
    std::vector<double> weights;

    static SphereRule product(int n_theta, int n_phi);
    double integrate(const std::function<double(const Eigen::Vector3d&)>& f) const;
};

// Doubles the product rule from 16x32 until the relative change is below tol.
double sphere_integral(const std::function<double(const Eigen::Vector3d&)>& f, double tol = 1e-6,
                       int max_theta = 512);

// Integrand of the cross section at one direction, summed over the three modes.
// D in PHz (ordinary); result in SI seconds^2 per steradian.
double cross_section_density(const Eigen::Matrix3d& d_phz, const ElasticMedium& m,
                             const Eigen::Vector3d& direction);
// chi_R in s^2.
double absorption_cross_section(const Eigen::Matrix3d& d_phz, const ElasticMedium& m, double tol = 1e-6);

// Thermal occupation with the spontaneous branch for omega < 0; omega in GHz (ordinary).
double occupation(double omega_ghz, double temperature_k);

struct RateMatrixInput {
    std::vector<double> level_ghz;
    double temperature_k = 0.1;
    std::map<std::string, Eigen::MatrixXcd> h;  // mode label -> matrix elements

    void validate() const;
};

// gamma_ij in 1/ms for the jump operator |i><j|, i.e. the transition j -> i.
double phonon_rate(int i, int j, const RateMatrixInput& input, const std::map<std::string, double>& chi);

}  // namespace qtoken::phonon
