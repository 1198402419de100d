#include "qtoken/phonon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qtoken/errors.hpp"
#include "qtoken/quadrature.hpp"

namespace qtoken::phonon {

namespace {

constexpr double hbar = 1.054571817e-34;   // J s
constexpr double planck = 6.62607015e-34;  // J s
constexpr double boltzmann = 1.380649e-23; // J/K
constexpr double pi = std::numbers::pi;

}  // namespace

void ElasticMedium::validate() const {
    if (!(c11 > 0.0 && c12 > 0.0 && c44 > 0.0 && density > 0.0))
        throw DomainError("elastic constants and density must be positive");
    if (!(c11 > std::abs(c12))) throw DomainError("unstable medium: need C11 > |C12|");
}

ElasticMedium ElasticMedium::isotropic(double c11, double c12, double density) {
    return {c11, c12, 0.5 * (c11 - c12), density};
}

std::array<AcousticMode, 3> christoffel_velocities(const Eigen::Vector3d& n, const ElasticMedium& m) {
    m.validate();
    if (std::abs(n.norm() - 1.0) > 1e-12) throw DomainError("propagation direction must be a unit vector");
    Eigen::Matrix3d g;
    const double a = m.c12 + m.c44;
    for (int i = 0; i < 3; ++i) {
        const double others = 1.0 - n[i] * n[i];
        g(i, i) = m.c11 * n[i] * n[i] + m.c44 * others;
        for (int j = i + 1; j < 3; ++j) g(i, j) = g(j, i) = a * n[i] * n[j];
    }
    // GPa / (g/cm^3) = 1e6 m^2/s^2, so sqrt gives km/s
    g /= m.density;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
    std::array<AcousticMode, 3> out;
    for (int k = 0; k < 3; ++k) {
        const double lam = std::max(es.eigenvalues()[2 - k], 0.0);
        out[k] = {std::sqrt(lam), es.eigenvectors().col(2 - k)};
    }
    return out;
}

Eigen::Matrix3d StrainSusceptibility::ebx() const {
    Eigen::Matrix3d m;
    m << d, 0, f / 2, 0, -d, 0, f / 2, 0, 0;
    return m;
}

Eigen::Matrix3d StrainSusceptibility::eby() const {
    Eigen::Matrix3d m;
    m << 0, -d, 0, -d, 0, f / 2, 0, f / 2, 0;
    return m;
}

SphereRule SphereRule::product(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1) throw DomainError("sphere rule needs positive orders");
    const auto gl = quad::gauss_legendre(n_theta);
    SphereRule r;
    r.points.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    const double dphi = 2.0 * pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double ct = gl.nodes[i], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            r.points.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
            r.weights.push_back(gl.weights[i] * dphi);
        }
    }
    return r;
}

double SphereRule::integrate(const std::function<double(const Eigen::Vector3d&)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
    return s;
}

double sphere_integral(const std::function<double(const Eigen::Vector3d&)>& f, double tol, int max_theta) {
    double prev = SphereRule::product(16, 32).integrate(f);
    for (int n = 32; n <= max_theta; n *= 2) {
        const double next = SphereRule::product(n, 2 * n).integrate(f);
        if (std::abs(next - prev) <= tol * std::abs(next) || next == prev) return next;
        prev = next;
    }
    throw NumericalError("sphere quadrature did not converge");
}

double cross_section_density(const Eigen::Matrix3d& d_phz, const ElasticMedium& m, const Eigen::Vector3d& k) {
    const double rho = m.density * 1e3;      // kg/m^3
    const Eigen::Matrix3d d = d_phz * (2.0 * pi * 1e15);  // rad/s
    double s = 0.0;
    for (const auto& mode : christoffel_velocities(k, m)) {
        const double c = mode.velocity * 1e3;  // m/s
        const double tr = mode.polarization.dot(d * k);
        s += hbar * tr * tr / (16.0 * pi * pi * pi * rho * std::pow(c, 5));
    }
    return s;
}

double absorption_cross_section(const Eigen::Matrix3d& d_phz, const ElasticMedium& m, double tol) {
    m.validate();
    if (d_phz.isZero(0.0)) return 0.0;
    return sphere_integral([&](const Eigen::Vector3d& k) { return cross_section_density(d_phz, m, k); }, tol);
}

double occupation(double omega_ghz, double temperature_k) {
    if (omega_ghz == 0.0 || !std::isfinite(omega_ghz)) throw DomainError("occupation diverges at zero frequency");
    if (!(temperature_k > 0.0)) throw DomainError("temperature must be positive");
    const double x = planck * std::abs(omega_ghz) * 1e9 / (boltzmann * temperature_k);
    const double n = 1.0 / std::expm1(x);
    return omega_ghz < 0.0 ? n + 1.0 : n;
}

void RateMatrixInput::validate() const {
    if (!(temperature_k > 0.0)) throw ConfigError("temperature must be positive");
    const auto n = static_cast<Eigen::Index>(level_ghz.size());
    for (const auto& [label, m] : h)
        if (m.rows() != n || m.cols() != n) throw ConfigError("h table '" + label + "' has the wrong size");
}

double phonon_rate(int i, int j, const RateMatrixInput& input, const std::map<std::string, double>& chi) {
    input.validate();
    const int n = static_cast<int>(input.level_ghz.size());
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw DomainError("rate needs two distinct levels");
    if (chi.empty()) throw ConfigError("no absorption cross sections supplied");
    const double w = input.level_ghz[i] - input.level_ghz[j];
    const double w_ang = 2.0 * pi * 1e9 * std::abs(w);
    double sum = 0.0;
    for (const auto& [label, x] : chi) {
        const auto it = input.h.find(label);
        if (it == input.h.end()) throw ConfigError("missing h table for mode '" + label + "'");
        sum += std::norm(it->second(i, j)) * x;
    }
    // per second, then per millisecond
    return 2.0 * pi * sum * w_ang * w_ang * w_ang * occupation(w, input.temperature_k) * 1e-3;
}

}  // namespace qtoken::phonon
