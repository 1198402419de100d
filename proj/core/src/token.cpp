#include "qtoken/token.hpp"

#include <cmath>
#include <numbers>

#include "qtoken/errors.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken::token {

namespace {

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class Trial>
MonteCarloResult run_trials(std::uint64_t trials, std::uint64_t seed, Trial&& trial) {
    if (trials < 1) throw DomainError("need at least one trial");
    constexpr std::uint64_t block = 1 << 16;
    const std::uint64_t blocks = (trials + block - 1) / block;
    std::vector<std::uint64_t> counts(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        std::uint64_t c = 0;
        const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * block);
        for (std::uint64_t i = b * block; i < end; ++i) {
            TrialRng rng(seed, i);
            c += trial(rng) ? 1 : 0;
        }
        counts[b] = c;
    });
    MonteCarloResult r;
    r.trials = trials;
    for (auto c : counts) r.accepted += c;
    r.probability = static_cast<double>(r.accepted) / static_cast<double>(trials);
    r.standard_error = std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(trials));
    return r;
}

}  // namespace

void SecurityDesign::validate() const {
    if (n < 1 || t < 1 || t > n) throw DomainError("need 1 <= t <= n");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(p_th > 0.0 && p_th < 1.0)) throw DomainError("threshold must lie in (0, 1)");
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw DomainError("binomial index out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, int k, double p) {
    if (!probability(p)) throw DomainError("probability out of range");
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_binomial(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

double forge_acceptance_prob(int n, int t, double alpha) {
    SecurityDesign{n, t, alpha, 0.5}.validate();
    // sum smallest terms first
    double s = 0.0;
    for (int k = n; k >= t; --k) s += binomial_pmf(n, k, alpha);
    return s;
}

TokenSize min_token_size(double p_th, double alpha, int n_max) {
    if (!(p_th > 0.0 && p_th < 1.0)) throw DomainError("threshold must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    for (int n = 2; n <= n_max; ++n) {
        if (forge_acceptance_prob(n, n - 1, alpha) >= p_th) continue;
        TokenSize out{n, n - 1, n - 1, n};
        while (out.t_min > 1 && forge_acceptance_prob(n, out.t_min - 1, alpha) < p_th) --out.t_min;
        return out;
    }
    throw NumericalError("no token size below the threshold within the search limit");
}

double true_accept_prob(int n, int k, double f_avg) {
    if (n < 0 || k < 0 || k > n) throw DomainError("need 0 <= k <= n");
    return binomial_pmf(n, k, f_avg);
}

double loss_prob(int n, int k, double p_survive) {
    if (n < 0 || k < 0 || k > n) throw DomainError("need 0 <= k <= n");
    return binomial_pmf(n, k, p_survive);
}

double average_fidelity(const std::array<double, 4>& f_in, double f_mem, const std::array<double, 4>& f_out) {
    return average_fidelity(f_in, {f_mem, f_mem, f_mem, f_mem}, f_out);
}

double average_fidelity(const std::array<double, 4>& f_in, const std::array<double, 4>& f_mem,
                        const std::array<double, 4>& f_out) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (!probability(f_in[i]) || !probability(f_mem[i]) || !probability(f_out[i]))
            throw DomainError("fidelities must lie in [0, 1]");
        s += f_in[i] * f_mem[i] * f_out[i];
    }
    return 0.25 * s;
}

double EfficiencyBudget::eta_c() const {
    if (eta_c_override >= 0.0) return eta_c_override;
    return eta_cf * eta_cf * eta_fc * eta_fc * eta_d * eta_d;
}

double EfficiencyBudget::p_survive() const { return eta_c() * std::exp(-fiber_km / attenuation_km); }

void EfficiencyBudget::validate() const {
    if (!probability(eta_cf) || !probability(eta_fc) || !probability(eta_d))
        throw DomainError("efficiencies must lie in [0, 1]");
    if (eta_c_override > 1.0) throw DomainError("eta_c must lie in [0, 1]");
    if (fiber_km < 0.0 || !(attenuation_km > 0.0)) throw DomainError("invalid fiber parameters");
}

double gate_duration_from_tau(double tau_ps) {
    if (!(tau_ps > 0.0)) throw DomainError("pulse width must be positive");
    const double sigma = tau_ps / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return 40.0 * sigma * 1e-3;
}

double TokenTiming::total_ns(int n) const {
    return 2.0 * n * (slot_ns() + gate_ns + measurement_ns) + 2.0 * communication_ns() + storage_ns +
           2.0 * swap_ns;
}

void TokenTiming::validate() const {
    for (double v : {lifetime_ns, slot_factor, gate_ns, measurement_ns, storage_ns, swap_ns, fiber_km})
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("timing entries must be non-negative");
    if (!(c_fiber_km_s > 0.0)) throw DomainError("fiber light speed must be positive");
}

void Scenario::validate() const {
    design.validate();
    efficiency.validate();
    timing.validate();
    if (!probability(f_avg)) throw DomainError("average fidelity must lie in [0, 1]");
    if (!(timing.total_ns(design.n) > 0.0)) throw DomainError("token duration must be positive");
}

double acceptance_probability(int n, int t, double f_avg, double p_survive, LossModel model) {
    double s = 0.0;
    for (int k = n; k >= t; --k) {
        if (model == LossModel::printed) {
            s += true_accept_prob(n, k, f_avg) * loss_prob(n, k, p_survive);
        } else {
            double pass = 0.0;
            for (int j = k; j >= t; --j) pass += binomial_pmf(k, j, f_avg);
            s += loss_prob(n, k, p_survive) * pass;
        }
    }
    return s;
}

RateBreakdown acceptance_rate(const Scenario& sc) {
    sc.validate();
    const int n = sc.design.n, t = sc.design.t;
    RateBreakdown r;
    r.f_avg = sc.f_avg;
    r.p_survive = sc.efficiency.p_survive();
    r.total_ns = sc.timing.total_ns(n);
    r.gamma_tok_hz = 1e9 / r.total_ns;
    for (int k = t; k <= n; ++k)
        r.terms.push_back(acceptance_probability(n, k, sc.f_avg, r.p_survive, sc.model) -
                          (k < n ? acceptance_probability(n, k + 1, sc.f_avg, r.p_survive, sc.model) : 0.0));
    r.acceptance_probability = acceptance_probability(n, t, sc.f_avg, r.p_survive, sc.model);
    r.gamma_a_hz = r.gamma_tok_hz * r.acceptance_probability;
    return r;
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t x = seed;
    const std::uint64_t a = splitmix(x);
    x = trial ^ a;
    state_ = splitmix(x);
}

std::uint64_t TrialRng::next() { return splitmix(state_); }

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

MonteCarloResult monte_carlo_verify(const Scenario& sc, std::uint64_t trials, std::uint64_t seed) {
    sc.validate();
    const int n = sc.design.n, t = sc.design.t;
    const double p1 = sc.efficiency.p_survive(), f = sc.f_avg;
    auto r = run_trials(trials, seed, [&](TrialRng& rng) {
        if (sc.model == LossModel::coupled) {
            int ok = 0;
            for (int i = 0; i < n; ++i)
                if (rng.uniform() < p1 && rng.uniform() < f) ++ok;
            return ok >= t;
        }
        int survived = 0, verified = 0;
        for (int i = 0; i < n; ++i) {
            survived += rng.uniform() < p1;
            verified += rng.uniform() < f;
        }
        return survived == verified && verified >= t;
    });
    const double g = 1e9 / sc.timing.total_ns(n);
    r.rate_hz = r.probability * g;
    r.rate_standard_error = r.standard_error * g;
    return r;
}

MonteCarloResult adversary_simulation(int n, int t, double alpha, std::uint64_t trials, std::uint64_t seed) {
    SecurityDesign{n, t, alpha, 0.5}.validate();
    return run_trials(trials, seed, [&](TrialRng& rng) {
        int ok = 0;
        for (int i = 0; i < n; ++i) ok += rng.uniform() < alpha;
        return ok >= t;
    });
}

}  // namespace qtoken::token
