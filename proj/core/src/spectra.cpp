#include "qtoken/spectra.hpp"

#include <cmath>
#include <numbers>

#include "qtoken/errors.hpp"
#include "qtoken/quadrature.hpp"

namespace qtoken::spectra {

namespace {

constexpr double pi = std::numbers::pi;

bool finite(double x) { return std::isfinite(x); }

// theta-breakpoints for the map omega = center + (fwhm/2) tan(theta)
std::vector<double> theta_breaks(const PhotonSpectrum& s, const std::vector<Feature>& features) {
    const double a = 0.5 * s.fwhm();
    std::vector<double> br = {-0.5 * pi, -0.25 * pi, 0.0, 0.25 * pi, 0.5 * pi};
    for (const auto& f : features) {
        const double w = std::max(f.width, 1e-9);
        for (double m : {0.0, -1.0, 1.0, -5.0, 5.0, -25.0, 25.0}) {
            const double th = std::atan((f.center + m * w - s.center()) / a);
            if (std::abs(th) < 0.5 * pi) br.push_back(th);
        }
    }
    return br;
}

template <class V, class F>
V lorentz_integral(const PhotonSpectrum& s, const std::vector<Feature>& features, F&& f) {
    const double a = 0.5 * s.fwhm();
    const double c = s.center();
    auto g = [&](double th) {
        const double cs = std::cos(th);
        V v = f(c + a * std::tan(th));
        const double wgt = (2.0 / pi) * cs * cs;
        if constexpr (requires { v.size(); }) {
            for (auto& x : v) x *= wgt;
            return v;
        } else {
            return v * wgt;
        }
    };
    return quad::integrate<V>(g, theta_breaks(s, features)).value;
}

}  // namespace

PhotonSpectrum::PhotonSpectrum(double center_ghz, double fwhm_ghz)
    : center_(center_ghz), fwhm_(fwhm_ghz) {
    if (!finite(center_ghz) || !finite(fwhm_ghz) || fwhm_ghz <= 0.0)
        throw DomainError("photon spectrum needs finite center and positive fwhm");
    const double a = 0.5 * fwhm_;
    norm_ = std::sqrt(2.0 * a * a * a / pi);
}

double PhotonSpectrum::amplitude(double omega) const {
    const double x = omega - center_, a = 0.5 * fwhm_;
    return norm_ / (x * x + a * a);
}

double PhotonSpectrum::weight(double omega) const {
    const double s = amplitude(omega);
    return s * s;
}

double PhotonSpectrum::fwhm_from_lifetime(double lifetime_ns) {
    if (!(lifetime_ns > 0.0)) throw DomainError("lifetime must be positive");
    return 1.0 / (2.0 * pi * lifetime_ns);
}

double PhotonSpectrum::lifetime_from_fwhm(double fwhm_ghz) {
    if (!(fwhm_ghz > 0.0)) throw DomainError("fwhm must be positive");
    return 1.0 / (2.0 * pi * fwhm_ghz);
}

void CavitySpinParams::validate() const {
    for (double v : {omega_a, delta, kappa, kappa_l, g, gamma, omega_s})
        if (!finite(v)) throw DomainError("cavity parameters must be finite");
    if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
    if (gamma < 0.0) throw DomainError("atomic relaxation must be non-negative");
    if (g < 0.0) throw DomainError("coupling must be non-negative");
    if (!(omega_s > 0.0)) throw DomainError("spin splitting must be positive");
    if (!half_open && (kappa_l < 0.0 || kappa_l > kappa))
        throw DomainError("loaded coupling must lie in [0, kappa]");
}

CouplingModel::CouplingModel(double g_ref, double omega_ref, Mode mode)
    : g_ref_(g_ref), omega_ref_(omega_ref), mode_(mode) {
    if (g_ref < 0.0 || !finite(g_ref)) throw DomainError("reference coupling must be non-negative");
    if (mode == Mode::sqrt_frequency && !(omega_ref > 0.0))
        throw DomainError("reference frequency must be positive");
}

double CouplingModel::g_at(double omega_c) const {
    if (mode_ == Mode::fixed) return g_ref_;
    if (!(omega_c > 0.0)) throw DomainError("cavity frequency must be positive for sqrt scaling");
    return g_ref_ * std::sqrt(omega_c / omega_ref_);
}

cplx reflection_kernel(double omega, const CavitySpinParams& p, Spin spin) {
    const double w = spin == Spin::state2 ? omega - p.omega_s : omega;
    const cplx i{0.0, 1.0};
    const cplx da = -i * (w - p.omega_a) + p.gamma;
    const cplx dc = -i * (w - p.omega_c()) + p.kappa;
    return -1.0 + 2.0 * p.loaded_coupling() * da / (dc * da + p.g * p.g);
}

Reflection reflection_coefficient(double omega, const CavitySpinParams& p, Spin spin) {
    if (!finite(omega)) throw DomainError("frequency must be finite");
    p.validate();
    return {reflection_kernel(omega, p, spin)};
}

std::array<cplx, 2> reflection_poles(const CavitySpinParams& p, Spin spin) {
    const double shift = spin == Spin::state2 ? p.omega_s : 0.0;
    const cplx i{0.0, 1.0};
    const cplx a = p.omega_c() - i * p.kappa;
    const cplx b = p.omega_a - i * p.gamma;
    const cplx mean = 0.5 * (a + b);
    const cplx root = std::sqrt(0.25 * (a - b) * (a - b) + p.g * p.g);
    return {mean + root + shift, mean - root + shift};
}

std::vector<Feature> reflection_features(const CavitySpinParams& p) {
    std::vector<Feature> out;
    for (Spin s : {Spin::state1, Spin::state2})
        for (const auto& z : reflection_poles(p, s))
            out.push_back({z.real(), std::abs(z.imag())});
    return out;
}

double cooperativity(const CavitySpinParams& p) {
    if (!(p.kappa > 0.0) || !(p.gamma > 0.0))
        throw DomainError("cooperativity needs kappa > 0 and Gamma > 0");
    return p.g * p.g / (p.kappa * p.gamma);
}

double coupling_from_cooperativity(double c, double kappa, double gamma) {
    if (c < 0.0 || !(kappa > 0.0) || !(gamma > 0.0))
        throw DomainError("cooperativity inversion needs C >= 0, kappa > 0, Gamma > 0");
    return std::sqrt(c * kappa * gamma);
}

cplx spectral_average(const ComplexFn& f, const PhotonSpectrum& s,
                      const std::vector<Feature>& features) {
    return lorentz_integral<cplx>(s, features, f);
}

double spectral_norm(const PhotonSpectrum& s) {
    return lorentz_integral<double>(s, {}, [](double) { return 1.0; });
}

ReflectionPair ReflectionPair::from_params(const CavitySpinParams& p) {
    p.validate();
    return {[p](double w) { return reflection_kernel(w, p, Spin::state1); },
            [p](double w) { return reflection_kernel(w, p, Spin::state2); },
            reflection_features(p)};
}

ReflectionPair ReflectionPair::constant(cplx r1, cplx r2) {
    return {[r1](double) { return r1; }, [r2](double) { return r2; }, {}};
}

namespace {

double fidelity_from_moments(cplx m1, cplx m2) {
    return std::norm(3.0 * m1 - m2) / 16.0;
}

Gram assemble(const std::array<cplx, 5>& v) {
    // v = (r1, r2, |r1|^2, |r2|^2, r1 conj(r2))
    Gram g;
    g(0, 0) = 1.0;
    g(1, 0) = v[0];
    g(2, 0) = v[1];
    g(0, 1) = std::conj(v[0]);
    g(0, 2) = std::conj(v[1]);
    g(1, 1) = v[2].real();
    g(2, 2) = v[3].real();
    g(1, 2) = v[4];
    g(2, 1) = std::conj(v[4]);
    return g;
}

}  // namespace

double cp_gate_fidelity(const CavitySpinParams& p, const PhotonSpectrum& s) {
    p.validate();
    auto m = lorentz_integral<std::array<cplx, 2>>(s, reflection_features(p), [&](double w) {
        return std::array<cplx, 2>{reflection_kernel(w, p, Spin::state1),
                                   reflection_kernel(w, p, Spin::state2)};
    });
    return fidelity_from_moments(m[0], m[1]);
}

double cp_gate_fidelity(const ReflectionPair& r, const PhotonSpectrum& s) {
    auto m = lorentz_integral<std::array<cplx, 2>>(s, r.features, [&](double w) {
        return std::array<cplx, 2>{r.r1(w), r.r2(w)};
    });
    return fidelity_from_moments(m[0], m[1]);
}

Gram reflection_gram(const ReflectionPair& r, const PhotonSpectrum& s) {
    auto v = lorentz_integral<std::array<cplx, 5>>(s, r.features, [&](double w) {
        const cplx a = r.r1(w), b = r.r2(w);
        return std::array<cplx, 5>{a, b, std::norm(a), std::norm(b), a * std::conj(b)};
    });
    return assemble(v);
}

Gram reflection_gram(const CavitySpinParams& p, const PhotonSpectrum& s) {
    p.validate();
    auto v = lorentz_integral<std::array<cplx, 5>>(s, reflection_features(p), [&](double w) {
        const cplx a = reflection_kernel(w, p, Spin::state1);
        const cplx b = reflection_kernel(w, p, Spin::state2);
        return std::array<cplx, 5>{a, b, std::norm(a), std::norm(b), a * std::conj(b)};
    });
    return assemble(v);
}

Gram constant_gram(cplx r1, cplx r2) {
    Eigen::Vector3cd f(1.0, r1, r2);
    return f * f.adjoint();
}

Gram moment_gram(const ReflectionPair& r, const PhotonSpectrum& s) {
    auto m = lorentz_integral<std::array<cplx, 2>>(s, r.features, [&](double w) {
        return std::array<cplx, 2>{r.r1(w), r.r2(w)};
    });
    Eigen::Vector3cd f(1.0, m[0], m[1]);
    return f * f.adjoint();
}

}  // namespace qtoken::spectra
