#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace qtoken::spectra {

using cplx = std::complex<double>;

enum class Spin { state1, state2 };

// Normalized Lorentzian line; S^2 integrates to one.
class PhotonSpectrum {
public:
    PhotonSpectrum(double center_ghz, double fwhm_ghz);

    double center() const { return center_; }
    double fwhm() const { return fwhm_; }
    double normalization() const { return norm_; }

    double amplitude(double omega) const;
    double weight(double omega) const;  // S^2(omega - center)

    PhotonSpectrum shifted(double nu) const { return {center_ + nu, fwhm_}; }

    static double fwhm_from_lifetime(double lifetime_ns);
    static double lifetime_from_fwhm(double fwhm_ghz);

private:
    double center_;
    double fwhm_;
    double norm_;
};

struct CavitySpinParams {
    double omega_a = 0.0;  // atomic transition, GHz
    double delta = 0.0;    // omega_a - omega_c
    double kappa = 1.0;
    double kappa_l = 1.0;
    double g = 0.0;
    double gamma = 0.0;    // atomic relaxation
    double omega_s = 1.0;  // spin splitting
    bool half_open = true;

    double omega_c() const { return omega_a - delta; }
    double loaded_coupling() const { return half_open ? kappa : kappa_l; }
    void validate() const;
};

class CouplingModel {
public:
    enum class Mode { fixed, sqrt_frequency };

    CouplingModel() = default;
    CouplingModel(double g_ref, double omega_ref, Mode mode);

    double g_at(double omega_c) const;
    double g_ref() const { return g_ref_; }
    Mode mode() const { return mode_; }

private:
    double g_ref_ = 0.0;
    double omega_ref_ = 1.0;
    Mode mode_ = Mode::fixed;
};

struct Reflection {
    cplx value;
    double modulus() const { return std::abs(value); }
    double phase() const { return std::arg(value); }
};

Reflection reflection_coefficient(double omega, const CavitySpinParams& p, Spin spin);

// Unchecked kernel shared by every integrand; state2 evaluates at omega - omega_s.
cplx reflection_kernel(double omega, const CavitySpinParams& p, Spin spin);

// Complex poles of r for the given spin state (lower half plane).
std::array<cplx, 2> reflection_poles(const CavitySpinParams& p, Spin spin);

double cooperativity(const CavitySpinParams& p);
double coupling_from_cooperativity(double c, double kappa, double gamma);

// Resonant features seeding the adaptive partition: (center, half width).
struct Feature {
    double center;
    double width;
};
std::vector<Feature> reflection_features(const CavitySpinParams& p);

// Integral of S^2(omega - omega0) f(omega) over the real line.
using ComplexFn = std::function<cplx(double)>;
cplx spectral_average(const ComplexFn& f, const PhotonSpectrum& s,
                      const std::vector<Feature>& features = {});
double spectral_norm(const PhotonSpectrum& s);

struct ReflectionPair {
    ComplexFn r1;
    ComplexFn r2;
    std::vector<Feature> features;

    static ReflectionPair from_params(const CavitySpinParams& p);
    static ReflectionPair constant(cplx r1, cplx r2);
};

double cp_gate_fidelity(const CavitySpinParams& p, const PhotonSpectrum& s);
double cp_gate_fidelity(const ReflectionPair& r, const PhotonSpectrum& s);

// G(k, k') = integral S^2 f_k conj(f_k') with f = (1, r1, r2).
using Gram = Eigen::Matrix3cd;
Gram reflection_gram(const ReflectionPair& r, const PhotonSpectrum& s);
Gram reflection_gram(const CavitySpinParams& p, const PhotonSpectrum& s);
Gram constant_gram(cplx r1, cplx r2);
// Rank-one Gram built from first moments only.
Gram moment_gram(const ReflectionPair& r, const PhotonSpectrum& s);

}  // namespace qtoken::spectra
