#include "qtoken/spin_channel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qtoken/errors.hpp"
#include "qtoken/quadrature.hpp"

namespace qtoken::spin {

namespace {

using Mat12 = Eigen::Matrix<cplx, 12, 12>;
using spectra::Gram;

// joint index: time bin b in {e,l}, reflection kernel k in {none,r1,r2}, spin p in {1,2}
constexpr int idx(int b, int k, int p) { return b * 6 + k * 2 + p; }

Mat2 sigma_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 read_correction() {
    Mat2 m;
    m << 0, -1, 1, 0;
    return m;
}

// Reflection of bin b: the untouched kernel picks up r1 or r2 by spin.
Mat12 reflect(const Mat12& rho, int b) {
    std::array<int, 12> to{};
    for (int bb = 0; bb < 2; ++bb)
        for (int k = 0; k < 3; ++k)
            for (int p = 0; p < 2; ++p)
                to[idx(bb, k, p)] = (bb == b && k == 0) ? idx(bb, p + 1, p) : idx(bb, k, p);
    Mat12 out = Mat12::Zero();
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (rho(i, j) != cplx{}) out(to[i], to[j]) += rho(i, j);
    return out;
}

Mat12 apply_spin(const Mat12& rho, const Pi2Channel& ch) {
    Mat12 out = Mat12::Zero();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const Mat2 block = rho.block<2, 2>(2 * i, 2 * j);
            if (block.isZero(0.0)) continue;
            Mat2 acc = Mat2::Zero();
            for (const auto& k : ch.kraus()) acc += k * block * k.adjoint();
            out.block<2, 2>(2 * i, 2 * j) = acc;
        }
    return out;
}

Mat12 sequence(Mat12 rho, const Pi2Channel& ch) {
    rho = reflect(rho, 0);
    rho = apply_spin(rho, ch);
    return reflect(rho, 1);
}

Mat2 spin_after_projection(const Mat12& rho, const Gram& g, const Vec2& photon) {
    Mat2 out = Mat2::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            cplx s{};
            for (int b = 0; b < 2; ++b)
                for (int bp = 0; bp < 2; ++bp)
                    for (int k = 0; k < 3; ++k)
                        for (int kp = 0; kp < 3; ++kp)
                            s += std::conj(photon[b]) * photon[bp] * rho(idx(b, k, p), idx(bp, kp, q)) * g(k, kp);
            out(p, q) = s;
        }
    return out;
}

Mat2 photon_after_projection(const Mat12& rho, const Gram& g, int spin) {
    Mat2 out = Mat2::Zero();
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) {
            cplx s{};
            for (int k = 0; k < 3; ++k)
                for (int kp = 0; kp < 3; ++kp) s += rho(idx(b, k, spin), idx(bp, kp, spin)) * g(k, kp);
            out(b, bp) = s;
        }
    return out;
}

DensityMatrix2 normalized(const Mat2& m, double p) {
    if (!(p >= 1e-15)) throw NumericalError("degenerate measurement branch");
    Mat2 r = m / p;
    r = 0.5 * (r + r.adjoint()).eval();
    return DensityMatrix2(r);
}

double expectation(const Mat2& m, const Vec2& v) { return (v.adjoint() * m * v)(0, 0).real(); }

const Vec2 plus_vec = Vec2(1.0, 1.0) / std::numbers::sqrt2;
const Vec2 minus_vec = Vec2(1.0, -1.0) / std::numbers::sqrt2;

}  // namespace

DensityMatrix2 DensityMatrix2::pure(const Vec2& psi) {
    const double n = psi.squaredNorm();
    if (!(n > 0.0)) throw DomainError("zero state vector");
    return DensityMatrix2(psi * psi.adjoint() / n);
}

DensityMatrix2 DensityMatrix2::maximally_mixed() { return DensityMatrix2(Mat2::Identity() * 0.5); }

double DensityMatrix2::fidelity(const Vec2& target) const {
    return expectation(m_, target / target.norm());
}

bool DensityMatrix2::hermitian(double tol) const {
    return std::abs(m_(1, 0) - std::conj(m_(0, 1))) <= tol && std::abs(m_(0, 0).imag()) <= tol &&
           std::abs(m_(1, 1).imag()) <= tol;
}

bool DensityMatrix2::positive(double tol) const {
    const double det = (m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0)).real();
    return det >= -tol && m_(0, 0).real() >= -tol && m_(1, 1).real() >= -tol;
}

bool DensityMatrix2::valid(double trace_tol) const {
    return hermitian() && positive() && std::abs(trace() - 1.0) <= trace_tol;
}

void DensityMatrix2::validate() const {
    if (!valid()) throw DomainError("not a valid density matrix");
}

void TimeBinQubit::validate() const {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
        throw DomainError("time-bin qubit must be normalized");
}

TimeBinQubit TimeBinQubit::plus() { return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }
TimeBinQubit TimeBinQubit::minus() { return {1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2}; }

Pi2Channel::Pi2Channel(std::vector<Mat2> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw DomainError("channel needs at least one Kraus operator");
    if (!is_cptp()) throw DomainError("channel is not trace preserving");
}

Mat2 Pi2Channel::rotation() {
    Mat2 r;
    r << 1, -1, 1, 1;
    return r / std::numbers::sqrt2;
}

Pi2Channel Pi2Channel::ideal() { return Pi2Channel({rotation()}); }
Pi2Channel Pi2Channel::identity() { return Pi2Channel({Mat2::Identity()}); }

Pi2Channel Pi2Channel::depolarized(double gate_fidelity) {
    if (!(gate_fidelity >= 0.5 && gate_fidelity <= 1.0))
        throw DomainError("gate fidelity must lie in [1/2, 1]");
    const double eps = 2.0 * (1.0 - gate_fidelity);
    const cplx i{0.0, 1.0};
    Mat2 sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -i, i, 0;
    sz << 1, 0, 0, -1;
    const Mat2 r = rotation();
    std::vector<Mat2> k = {std::sqrt(1.0 - 0.75 * eps) * r};
    if (eps > 0.0)
        for (const auto& p : {sx, sy, sz}) k.push_back(std::sqrt(0.25 * eps) * p * r);
    return Pi2Channel(std::move(k));
}

Mat2 Pi2Channel::apply(const Mat2& rho) const {
    Mat2 out = Mat2::Zero();
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
}

Eigen::Matrix4cd Pi2Channel::choi() const {
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Mat2 e = Mat2::Zero();
            e(i, j) = 1.0;
            c.block<2, 2>(2 * i, 2 * j) = apply(e);
        }
    return c;
}

bool Pi2Channel::is_cptp(double tol) const {
    Mat2 s = Mat2::Zero();
    for (const auto& k : kraus_) s += k.adjoint() * k;
    if (!(s - Mat2::Identity()).isZero(tol)) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi());
    return es.eigenvalues().minCoeff() >= -tol;
}

Mat2 depolarize_generation(const Mat2& rho, double fidelity) {
    if (!(fidelity >= 0.5 && fidelity <= 1.0)) throw DomainError("generation fidelity must lie in [1/2, 1]");
    const double eps = 2.0 * (1.0 - fidelity);
    // identity/4 restricted to the two-dimensional block, renormalized
    const cplx tr = rho.trace();
    Mat2 out = (1.0 - eps) * rho + eps * tr * Mat2::Identity() / 4.0;
    return out / (1.0 - 0.5 * eps);
}

DensityMatrix2 depolarize_generation(const TimeBinQubit& q, double fidelity) {
    q.validate();
    return DensityMatrix2(depolarize_generation(DensityMatrix2::pure(q.vector()).matrix(), fidelity));
}

Vec2 stored_target(const TimeBinQubit& q) {
    return Vec2(q.a + q.b, q.a - q.b) / std::numbers::sqrt2;
}

Vec2 read_state2_target(const TimeBinQubit& q) { return Vec2(q.b, -q.a); }

Branches store_branches(const Mat2& photon, const Gram& g, const Pi2Channel& ch) {
    Mat12 rho = Mat12::Zero();
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) rho(idx(b, 0, 0), idx(bp, 0, 0)) = photon(b, bp);
    rho = sequence(rho, ch);
    return {spin_after_projection(rho, g, plus_vec), spin_after_projection(rho, g, minus_vec)};
}

BranchState store_state(const Mat2& photon, const Gram& g, const Pi2Channel& ch, Outcome o) {
    const auto br = store_branches(photon, g, ch);
    const double pp = br.first.trace().real(), pm = br.second.trace().real();
    switch (o) {
        case Outcome::plus:
            return {normalized(br.first, pp), pp};
        case Outcome::minus:
            return {normalized(br.second, pm), pm};
        case Outcome::averaged: {
            const Mat2 sx = sigma_x();
            Mat2 m = 0.5 * (normalized(br.first, pp).matrix() + sx * normalized(br.second, pm).matrix() * sx);
            return {DensityMatrix2(m), pp + pm};
        }
    }
    throw DomainError("unknown outcome");
}

BranchState store_state(const Mat2& photon, const spectra::CavitySpinParams& p,
                        const spectra::PhotonSpectrum& s, const Pi2Channel& ch, Outcome o) {
    return store_state(photon, spectra::reflection_gram(p, s), ch, o);
}

spectra::Gram diffused_gram(const spectra::CavitySpinParams& p, const spectra::PhotonSpectrum& s,
                            const DiffusionModel& d, MeasurementModel model) {
    if (d.sigma < 0.0 || !std::isfinite(d.sigma)) throw DomainError("diffusion sigma must be non-negative");
    const auto pair = spectra::ReflectionPair::from_params(p);
    auto at = [&](double nu) {
        const auto sp = s.shifted(nu);
        return model == MeasurementModel::frequency_trace ? spectra::reflection_gram(pair, sp)
                                                          : spectra::moment_gram(pair, sp);
    };
    if (d.sigma == 0.0) return at(0.0);

    auto hermite = [&](int order) {
        const auto rule = quad::gauss_hermite(order);
        Gram acc = Gram::Zero();
        for (int i = 0; i < order; ++i)
            acc += rule.weights[i] * at(std::numbers::sqrt2 * d.sigma * rule.nodes[i]);
        return Gram(acc / std::sqrt(std::numbers::pi));
    };
    Gram prev = hermite(64);
    for (int order = 128; order <= 512; order *= 2) {
        Gram next = hermite(order);
        if ((next - prev).cwiseAbs().maxCoeff() < 1e-9) return next;
        prev = next;
    }
    // features narrower than the node spacing: adaptive integration over the shift
    std::vector<double> breaks = {-12.0 * d.sigma, 0.0, 12.0 * d.sigma};
    for (const auto& f : spectra::reflection_features(p))
        for (double m : {-3.0, 0.0, 3.0}) {
            const double nu = f.center + m * (f.width + s.fwhm()) - s.center();
            if (std::abs(nu) < 12.0 * d.sigma) breaks.push_back(nu);
        }
    auto integrand = [&](double nu) {
        const double w = std::exp(-0.5 * nu * nu / (d.sigma * d.sigma)) /
                         (std::sqrt(2.0 * std::numbers::pi) * d.sigma);
        const Gram gm = at(nu) * w;
        std::array<cplx, 9> v;
        for (int i = 0; i < 9; ++i) v[i] = gm(i / 3, i % 3);
        return v;
    };
    quad::Options opt;
    opt.rel_tol = 1e-9;
    const auto r = quad::integrate<std::array<cplx, 9>>(integrand, breaks, opt);
    Gram out;
    for (int i = 0; i < 9; ++i) out(i / 3, i % 3) = r.value[i];
    return out;
}

BranchState store_state_diffused(const Mat2& photon, const spectra::CavitySpinParams& p,
                                 const spectra::PhotonSpectrum& s, const Pi2Channel& ch, Outcome o,
                                 const DiffusionModel& d) {
    return store_state(photon, diffused_gram(p, s, d), ch, o);
}

Branches read_branches(const Mat2& spin, const Mat2& photon, const Gram& g, const Pi2Channel& ch) {
    Mat12 rho = Mat12::Zero();
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) rho(idx(b, 0, p), idx(bp, 0, q)) = photon(b, bp) * spin(p, q);
    rho = sequence(rho, ch);
    return {photon_after_projection(rho, g, 0), photon_after_projection(rho, g, 1)};
}

BranchState read_state(const DensityMatrix2& spin, const Gram& g, const Pi2Channel& ch, ZOutcome z,
                       double generation_fidelity) {
    const Mat2 photon =
        depolarize_generation(DensityMatrix2::pure(plus_vec).matrix(), generation_fidelity);
    const auto br = read_branches(spin.matrix(), photon, g, ch);
    const double p1 = br.first.trace().real(), p2 = br.second.trace().real();
    switch (z) {
        case ZOutcome::state1:
            return {normalized(br.first, p1), p1};
        case ZOutcome::state2:
            return {normalized(br.second, p2), p2};
        case ZOutcome::corrected: {
            const Mat2 c = read_correction();
            return {normalized(br.first + c * br.second * c.adjoint(), p1 + p2), p1 + p2};
        }
    }
    throw DomainError("unknown outcome");
}

BranchState read_state(const DensityMatrix2& spin, const spectra::CavitySpinParams& p,
                       const spectra::PhotonSpectrum& s, const Pi2Channel& ch, ZOutcome z) {
    return read_state(spin, spectra::reflection_gram(p, s), ch, z);
}

DensityMatrix2 decohere_electron(const DensityMatrix2& rho, const DecoherenceRates& r, double t_ms,
                                 ElectronModel model) {
    if (t_ms < 0.0 || !std::isfinite(t_ms)) throw DomainError("time must be non-negative");
    if (r.gamma_plus < 0.0 || r.gamma_minus < 0.0) throw DomainError("rates must be non-negative");
    const double sum = r.gamma_plus + r.gamma_minus;
    if (sum == 0.0) return rho;
    const double steady = r.gamma_minus / sum;
    const double pop_rate = model == ElectronModel::lindblad ? sum : 0.5 * sum;
    const double pop = std::exp(-pop_rate * t_ms), coh = std::exp(-0.5 * sum * t_ms);
    Mat2 m;
    const double p00 = (rho(0, 0).real() - steady) * pop + steady;
    m(0, 0) = p00;
    m(1, 1) = rho.trace() - p00;
    m(0, 1) = rho(0, 1) * coh;
    m(1, 0) = rho(1, 0) * coh;
    return DensityMatrix2(m);
}

DensityMatrix2 decohere_nuclear(const DensityMatrix2& rho, const DecoherenceRates& r, double t_s) {
    if (t_s < 0.0 || !std::isfinite(t_s)) throw DomainError("time must be non-negative");
    if (r.gamma_d < 0.0) throw DomainError("rates must be non-negative");
    const double c = std::exp(-2.0 * r.gamma_d * t_s);
    Mat2 m = rho.matrix();
    m(0, 1) *= c;
    m(1, 0) *= c;
    return DensityMatrix2(m);
}

Pipeline Pipeline::build(const spectra::CavitySpinParams& p, const spectra::PhotonSpectrum& s,
                         const Pi2Channel& ch, double generation_fidelity, const DiffusionModel& d,
                         MeasurementModel model) {
    return {diffused_gram(p, s, d, model), ch, generation_fidelity};
}

ChannelFidelity stored_fidelity(const TimeBinQubit& q, const Pipeline& pipe) {
    q.validate();
    ChannelFidelity out;
    const Mat2 photon = depolarize_generation(q, pipe.generation_fidelity).matrix();
    const auto wb = store_branches(photon, pipe.gram, pipe.channel);
    const double pp = wb.first.trace().real(), pm = wb.second.trace().real();
    if (!(pp + pm >= 1e-15)) throw NumericalError("degenerate measurement branch");
    const Vec2 target = stored_target(q);
    const Mat2 sx = sigma_x();
    out.in = (expectation(wb.first, target) + expectation(sx * wb.second * sx, target)) / (pp + pm);
    out.herald_probability = pp + pm;

    const Mat2 readout = depolarize_generation(DensityMatrix2::pure(plus_vec).matrix(), pipe.generation_fidelity);
    const auto rb = read_branches(DensityMatrix2::pure(target).matrix(), readout, pipe.gram, pipe.channel);
    const double p1 = rb.first.trace().real(), p2 = rb.second.trace().real();
    if (!(p1 + p2 >= 1e-15)) throw NumericalError("degenerate measurement branch");
    const Mat2 c = read_correction();
    out.out = (expectation(rb.first, q.vector()) + expectation(c * rb.second * c.adjoint(), q.vector())) / (p1 + p2);
    return out;
}

std::array<TimeBinQubit, 4> token_inputs() {
    return {TimeBinQubit::plus(), TimeBinQubit::minus(), TimeBinQubit::early(), TimeBinQubit::late()};
}

std::array<ChannelFidelity, 4> input_fidelities(const Pipeline& pipe) {
    std::array<ChannelFidelity, 4> out;
    const auto in = token_inputs();
    for (std::size_t i = 0; i < 4; ++i) out[i] = stored_fidelity(in[i], pipe);
    return out;
}

}  // namespace qtoken::spin
