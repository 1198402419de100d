#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qtoken::token {

struct SecurityDesign {
    int n = 1;
    int t = 1;
    double alpha = 0.75;
    double p_th = 1e-4;

    void validate() const;
};

double log_binomial(int n, int k);
double binomial_pmf(int n, int k, double p);

// Binomial tail sum_{k>=t} C(n,k) alpha^k (1-alpha)^(n-k).
double forge_acceptance_prob(int n, int t, double alpha = 0.75);

struct TokenSize {
    int n = 0;
    int t = 0;
    int t_min = 0;  // every t in [t_min, n] keeps p_af below threshold
    int t_max = 0;
};

TokenSize min_token_size(double p_th, double alpha = 0.75, int n_max = 100000);

double true_accept_prob(int n, int k, double f_avg);
// Probability that exactly k of n photons survive; p_survive per photon.
double loss_prob(int n, int k, double p_survive);

double average_fidelity(const std::array<double, 4>& f_in, double f_mem, const std::array<double, 4>& f_out);
double average_fidelity(const std::array<double, 4>& f_in, const std::array<double, 4>& f_mem,
                        const std::array<double, 4>& f_out);

struct EfficiencyBudget {
    double eta_cf = 1.0;
    double eta_fc = 1.0;
    double eta_d = 1.0;
    double fiber_km = 0.5;
    double attenuation_km = 20.0;
    double eta_c_override = -1.0;  // used when in [0, 1]

    double eta_c() const;
    double p_survive() const;
    void validate() const;
};

// 40 sigma of a Gaussian whose FWHM is tau; tau in ps, result in ns.
double gate_duration_from_tau(double tau_ps);

struct TokenTiming {
    double lifetime_ns = 0.02797;
    double slot_factor = 20.0;
    double gate_ns = 1.5;
    double measurement_ns = 0.1;
    double storage_ns = 0.0;
    double swap_ns = 0.0;  // per transfer into and out of a long-lived memory
    double c_fiber_km_s = 2e5;
    double fiber_km = 0.5;

    double slot_ns() const { return slot_factor * lifetime_ns; }
    double communication_ns() const { return fiber_km / c_fiber_km_s * 1e9; }
    double total_ns(int n) const;
    void validate() const;
};

enum class LossModel {
    printed,  // independent survivor and success binomials sharing k
    coupled,  // successes drawn among the survivors
};

struct Scenario {
    SecurityDesign design;
    EfficiencyBudget efficiency;
    TokenTiming timing;
    double f_avg = 1.0;
    LossModel model = LossModel::printed;

    void validate() const;
};

struct RateBreakdown {
    double gamma_a_hz = 0.0;
    double gamma_tok_hz = 0.0;
    double acceptance_probability = 0.0;
    double f_avg = 0.0;
    double p_survive = 0.0;
    double total_ns = 0.0;
    std::vector<double> terms;  // k = t..n
};

double acceptance_probability(int n, int t, double f_avg, double p_survive, LossModel model);
RateBreakdown acceptance_rate(const Scenario& s);

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    double probability = 0.0;
    double standard_error = 0.0;
    double rate_hz = 0.0;
    double rate_standard_error = 0.0;
};

// Counter-based stream: trial i draws from a generator keyed by (seed, i).
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);
    std::uint64_t next();
    double uniform();

private:
    std::uint64_t state_;
};

MonteCarloResult monte_carlo_verify(const Scenario& s, std::uint64_t trials, std::uint64_t seed);
// Forger passes each qubit with probability alpha, accepted iff at least t pass.
MonteCarloResult adversary_simulation(int n, int t, double alpha, std::uint64_t trials, std::uint64_t seed);

}  // namespace qtoken::token
