#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qtoken/spectra.hpp"

namespace qtoken::spin {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

class DensityMatrix2 {
public:
    DensityMatrix2() : m_(Mat2::Zero()) { m_(0, 0) = 1.0; }
    explicit DensityMatrix2(const Mat2& m) : m_(m) {}

    static DensityMatrix2 pure(const Vec2& psi);
    static DensityMatrix2 maximally_mixed();

    const Mat2& matrix() const { return m_; }
    cplx operator()(int i, int j) const { return m_(i, j); }
    double trace() const { return m_.trace().real(); }
    double fidelity(const Vec2& target) const;  // <psi|rho|psi>, target normalized

    bool hermitian(double tol = 1e-12) const;
    bool positive(double tol = 1e-12) const;
    bool valid(double trace_tol = 1e-10) const;
    void validate() const;

private:
    Mat2 m_;
};

struct TimeBinQubit {
    cplx a{1.0, 0.0};  // early
    cplx b{0.0, 0.0};  // late

    Vec2 vector() const { return {a, b}; }
    void validate() const;

    static TimeBinQubit early() { return {1.0, 0.0}; }
    static TimeBinQubit late() { return {0.0, 1.0}; }
    static TimeBinQubit plus();
    static TimeBinQubit minus();
};

// Completely positive map on the spin, held as Kraus operators.
class Pi2Channel {
public:
    explicit Pi2Channel(std::vector<Mat2> kraus);

    static Mat2 rotation();  // ideal pi/2 about y
    static Pi2Channel ideal();
    static Pi2Channel depolarized(double gate_fidelity);
    static Pi2Channel identity();

    const std::vector<Mat2>& kraus() const { return kraus_; }
    Mat2 apply(const Mat2& rho) const;
    Eigen::Matrix4cd choi() const;
    bool is_cptp(double tol = 1e-10) const;

private:
    std::vector<Mat2> kraus_;
};

struct DiffusionModel {
    double sigma = 0.0;  // GHz
};

struct DecoherenceRates {
    double gamma_plus = 0.0;   // 1/ms
    double gamma_minus = 0.0;  // 1/ms
    double gamma_d = 0.0;      // 1/s
};

enum class ElectronModel {
    lindblad,  // exact solution of the two-operator master equation
    printed,   // populations relaxing at half the summed rate
};

enum class Outcome { plus, minus, averaged };
enum class ZOutcome { state1, state2, corrected };
enum class MeasurementModel { frequency_trace, mode_projection };

struct BranchState {
    DensityMatrix2 rho;
    double probability = 0.0;
};

// Unnormalized heralded states.
struct Branches {
    Mat2 first;
    Mat2 second;
};

DensityMatrix2 depolarize_generation(const TimeBinQubit& q, double fidelity);
Mat2 depolarize_generation(const Mat2& rho, double fidelity);

// Logical frame the stored spin should hold after writing q.
Vec2 stored_target(const TimeBinQubit& q);
// Photonic state heralded by the state2 read outcome, before correction.
Vec2 read_state2_target(const TimeBinQubit& q);

Branches store_branches(const Mat2& photon, const spectra::Gram& g, const Pi2Channel& ch);
BranchState store_state(const Mat2& photon, const spectra::Gram& g, const Pi2Channel& ch, Outcome o);
BranchState store_state(const Mat2& photon, const spectra::CavitySpinParams& p,
                        const spectra::PhotonSpectrum& s, const Pi2Channel& ch, Outcome o);

spectra::Gram diffused_gram(const spectra::CavitySpinParams& p, const spectra::PhotonSpectrum& s,
                            const DiffusionModel& d,
                            MeasurementModel model = MeasurementModel::frequency_trace);
BranchState store_state_diffused(const Mat2& photon, const spectra::CavitySpinParams& p,
                                 const spectra::PhotonSpectrum& s, const Pi2Channel& ch, Outcome o,
                                 const DiffusionModel& d);

Branches read_branches(const Mat2& spin, const Mat2& photon, const spectra::Gram& g, const Pi2Channel& ch);
BranchState read_state(const DensityMatrix2& spin, const spectra::Gram& g, const Pi2Channel& ch,
                       ZOutcome z, double generation_fidelity = 1.0);
BranchState read_state(const DensityMatrix2& spin, const spectra::CavitySpinParams& p,
                       const spectra::PhotonSpectrum& s, const Pi2Channel& ch, ZOutcome z);

DensityMatrix2 decohere_electron(const DensityMatrix2& rho, const DecoherenceRates& r, double t_ms,
                                 ElectronModel model = ElectronModel::lindblad);
DensityMatrix2 decohere_nuclear(const DensityMatrix2& rho, const DecoherenceRates& r, double t_s);

struct Pipeline {
    spectra::Gram gram = spectra::constant_gram(-1.0, 1.0);
    Pi2Channel channel = Pi2Channel::ideal();
    double generation_fidelity = 1.0;

    static Pipeline build(const spectra::CavitySpinParams& p, const spectra::PhotonSpectrum& s,
                          const Pi2Channel& ch, double generation_fidelity = 1.0,
                          const DiffusionModel& d = {},
                          MeasurementModel model = MeasurementModel::frequency_trace);
};

struct ChannelFidelity {
    double in = 1.0;
    double out = 1.0;
    double herald_probability = 1.0;
};

ChannelFidelity stored_fidelity(const TimeBinQubit& q, const Pipeline& pipe);
// Order: +, -, e, l.
std::array<TimeBinQubit, 4> token_inputs();
std::array<ChannelFidelity, 4> input_fidelities(const Pipeline& pipe);

}  // namespace qtoken::spin
