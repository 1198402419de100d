#include "qtoken/scenario.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include "qtoken/errors.hpp"

namespace qtoken {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

double in_unit(const Config& c, const std::string& s, const std::string& k) {
    const double v = c.number(s, k);
    require(v >= 0.0 && v <= 1.0, s + "." + k + " must lie in [0, 1]");
    return v;
}

}  // namespace

Scenario Scenario::from_config(const Config& c) {
    Scenario s;
    auto& cav = s.cavity;
    cav.omega_a = c.number("cavity", "omega_a_ghz");
    cav.delta = c.number("cavity", "delta_ghz");
    cav.kappa = c.number("cavity", "kappa_ghz");
    cav.half_open = c.flag("cavity", "half_open");
    const double kl = c.number("cavity", "kappa_l_ghz");
    cav.kappa_l = (cav.half_open || kl < 0.0) ? cav.kappa : kl;
    cav.omega_s = c.number("cavity", "omega_s_ghz");
    const double gamma = c.number("cavity", "gamma_atom_ghz");
    if (gamma >= 0.0) {
        cav.gamma = gamma;
    } else {
        const double t1 = c.number("cavity", "t1_ns");
        require(t1 > 0.0, "cavity.t1_ns must be positive");
        cav.gamma = c.number("cavity", "debye_waller") / (2.0 * std::numbers::pi * t1);
    }
    double g = c.number("cavity", "g_ghz");
    if (g < 0.0) {
        require(cav.gamma > 0.0, "cooperativity pinning needs a positive atomic linewidth");
        g = spectra::coupling_from_cooperativity(c.number("cavity", "cooperativity"),
                                                 c.number("cavity", "cooperativity_kappa_ghz"), cav.gamma);
    }
    const auto mode = c.text("cavity", "coupling_mode") == "fixed" ? spectra::CouplingModel::Mode::fixed
                                                                    : spectra::CouplingModel::Mode::sqrt_frequency;
    s.coupling = spectra::CouplingModel(g, cav.omega_c(), mode);
    cav.g = s.coupling.g_at(cav.omega_c());
    s.omega0_offset = c.number("cavity", "omega0_offset_ghz");
    try {
        cav.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[cavity] ") + e.what());
    }

    s.bandwidth_ghz = c.number("photon", "bandwidth_ghz");
    require(s.bandwidth_ghz > 0.0, "photon.bandwidth_ghz must be positive");
    s.angular_bandwidth = c.text("photon", "bandwidth_convention") == "angular";
    s.generation_fidelity = c.number("photon", "generation_fidelity");
    require(s.generation_fidelity >= 0.5 && s.generation_fidelity <= 1.0,
            "photon.generation_fidelity must lie in [0.5, 1]");
    s.diffusion.sigma = c.number("photon", "diffusion_sigma_ghz");
    require(s.diffusion.sigma >= 0.0, "photon.diffusion_sigma_ghz must be non-negative");
    s.measurement = c.text("photon", "measurement_model") == "frequency_trace"
                        ? spin::MeasurementModel::frequency_trace
                        : spin::MeasurementModel::mode_projection;

    s.pi2_fidelity = c.number("gates", "pi2_fidelity");
    require(s.pi2_fidelity >= 0.5 && s.pi2_fidelity <= 1.0, "gates.pi2_fidelity must lie in [0.5, 1]");
    const double tg = c.number("gates", "gate_time_ns");
    s.gate_ns = tg >= 0.0 ? tg : token::gate_duration_from_tau(c.number("gates", "tau_pi8_ps"));
    s.measurement_ns = c.number("gates", "measurement_time_ns");
    require(s.measurement_ns >= 0.0, "gates.measurement_time_ns must be non-negative");

    const auto& medium = c.text("memory", "medium");
    s.medium = medium == "fixed" ? Medium::fixed : medium == "electron" ? Medium::electron : Medium::nuclear;
    s.memory_fidelity = in_unit(c, "memory", "fidelity");
    s.storage_ns = c.number("memory", "storage_time_ns");
    s.swap_ns = c.number("memory", "swap_time_ns");
    require(s.storage_ns >= 0.0 && s.swap_ns >= 0.0, "memory times must be non-negative");
    if (c.flag("memory", "rates_from_phonon")) {
        s.rates = phonon_electron_rates(c);
    } else {
        s.rates.gamma_plus = c.number("memory", "gamma_plus_per_ms");
        s.rates.gamma_minus = c.number("memory", "gamma_minus_per_ms");
    }
    s.rates.gamma_d = c.number("memory", "gamma_d_per_s");
    require(s.rates.gamma_plus >= 0.0 && s.rates.gamma_minus >= 0.0 && s.rates.gamma_d >= 0.0,
            "decoherence rates must be non-negative");
    s.electron_model = c.text("memory", "electron_model") == "lindblad" ? spin::ElectronModel::lindblad
                                                                        : spin::ElectronModel::printed;

    s.design.p_th = c.number("security", "p_th");
    s.design.alpha = c.number("security", "alpha");
    const int n = c.integer("security", "n"), t = c.integer("security", "t");
    try {
        if (n > 0) {
            s.design.n = n;
            s.design.t = t > 0 ? t : n - 1;
        } else {
            const auto size = token::min_token_size(s.design.p_th, s.design.alpha);
            s.design.n = size.n;
            s.design.t = size.t;
        }
        s.design.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[security] ") + e.what());
    }
    s.loss_model = c.text("security", "loss_model") == "printed" ? token::LossModel::printed
                                                                 : token::LossModel::coupled;

    auto& eff = s.efficiency;
    eff.eta_cf = in_unit(c, "link", "eta_cf");
    eff.eta_fc = in_unit(c, "link", "eta_fc");
    eff.eta_d = in_unit(c, "link", "eta_d");
    eff.eta_c_override = c.number("link", "eta_c");
    require(eff.eta_c_override <= 1.0, "link.eta_c must not exceed 1");
    eff.fiber_km = c.number("link", "fiber_length_km");
    eff.attenuation_km = c.number("link", "attenuation_length_km");
    require(eff.fiber_km >= 0.0 && eff.attenuation_km > 0.0, "invalid fiber parameters");
    s.c_fiber_km_s = c.number("link", "c_fiber_km_s");
    require(s.c_fiber_km_s > 0.0, "link.c_fiber_km_s must be positive");
    s.slot_factor = c.number("link", "slot_factor");

    s.bounds = {c.number("design", "kappa_min_ghz"), c.number("design", "kappa_max_ghz"),
                c.number("design", "delta_min_ghz"), c.number("design", "delta_max_ghz"),
                c.number("design", "offset_min_ghz"), c.number("design", "offset_max_ghz")};
    require(s.bounds.kappa_lo > 0.0 && s.bounds.kappa_lo <= s.bounds.kappa_hi &&
                s.bounds.delta_lo <= s.bounds.delta_hi && s.bounds.offset_lo <= s.bounds.offset_hi,
            "design bounds must be ordered with positive kappa");
    const int pts = c.integer("design", "region_points");
    s.region = {c.number("design", "region_kappa_ghz"), c.number("design", "region_omega_c_ghz"), pts, pts};
    try {
        s.region.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[design] ") + e.what());
    }
    s.settings.de.seed = static_cast<std::uint64_t>(c.integer("design", "seed"));
    s.settings.de.population = c.integer("design", "population");
    s.settings.de.generations = c.integer("design", "generations");
    s.settings.nm.tolerance = c.number("design", "nm_tolerance");
    s.settings.starts = c.integer("design", "starts");
    require(s.settings.de.population >= 4 && s.settings.de.generations >= 0 && s.settings.starts >= 1,
            "invalid optimizer settings");
    return s;
}

double Scenario::spectral_fwhm() const {
    return angular_bandwidth ? bandwidth_ghz / (2.0 * std::numbers::pi) : bandwidth_ghz;
}

spectra::PhotonSpectrum Scenario::spectrum() const {
    return {cavity.omega_a + omega0_offset, spectral_fwhm()};
}

design::FixedParams Scenario::fixed_params() const {
    return {cavity, coupling, spectral_fwhm(), {}};
}

spin::Pipeline Scenario::pipeline() const {
    return spin::Pipeline::build(cavity, spectrum(), spin::Pi2Channel::depolarized(pi2_fidelity),
                                 generation_fidelity, diffusion, measurement);
}

std::array<double, 4> Scenario::memory_fidelities() const {
    std::array<double, 4> out;
    const auto inputs = spin::token_inputs();
    for (std::size_t i = 0; i < 4; ++i) {
        const auto target = spin::stored_target(inputs[i]);
        const auto rho = spin::DensityMatrix2::pure(target);
        double f = 1.0;
        if (medium == Medium::electron)
            f = spin::decohere_electron(rho, rates, storage_ns * 1e-6, electron_model).fidelity(target);
        else if (medium == Medium::nuclear)
            f = spin::decohere_nuclear(rho, rates, storage_ns * 1e-9).fidelity(target);
        out[i] = memory_fidelity * f;
    }
    return out;
}

token::TokenTiming Scenario::timing() const {
    token::TokenTiming t;
    t.lifetime_ns = spectra::PhotonSpectrum::lifetime_from_fwhm(bandwidth_ghz);
    t.slot_factor = slot_factor;
    t.gate_ns = gate_ns;
    t.measurement_ns = measurement_ns;
    t.storage_ns = storage_ns;
    t.swap_ns = swap_ns;
    t.c_fiber_km_s = c_fiber_km_s;
    t.fiber_km = efficiency.fiber_km;
    return t;
}

token::Scenario Scenario::token_scenario(double f_avg) const {
    return {design, efficiency, timing(), f_avg, loss_model};
}

Evaluation evaluate(const Scenario& s) {
    Evaluation e;
    e.channel = spin::input_fidelities(s.pipeline());
    e.memory = s.memory_fidelities();
    std::array<double, 4> fin, fout;
    for (int i = 0; i < 4; ++i) {
        fin[i] = e.channel[i].in;
        fout[i] = e.channel[i].out;
    }
    e.f_avg = token::average_fidelity(fin, e.memory, fout);
    e.rate = token::acceptance_rate(s.token_scenario(e.f_avg));
    return e;
}

spin::DecoherenceRates phonon_electron_rates(const Config& c) {
    phonon::ElasticMedium m{c.number("phonon", "c11_gpa"), c.number("phonon", "c12_gpa"),
                            c.number("phonon", "c44_gpa"), c.number("phonon", "density_g_cm3")};
    const phonon::StrainSusceptibility g{c.number("phonon", "d_g_phz"), c.number("phonon", "f_g_phz")};
    phonon::RateMatrixInput in;
    in.level_ghz = c.list("phonon", "levels_ghz");
    in.temperature_k = c.number("phonon", "temperature_k");
    const int n = static_cast<int>(in.level_ghz.size());
    require(n >= 2, "phonon.levels_ghz needs at least two levels");
    const std::regex pat("h_(egx|egy)_([0-9]+)_([0-9]+)");
    for (const auto& [key, value] : c.matching("phonon", "h_")) {
        std::smatch mt;
        std::regex_match(key, mt, pat);
        const int i = std::stoi(mt[2]), j = std::stoi(mt[3]);
        require(i < n && j < n, "h entry " + key + " outside the level table");
        auto& mat = in.h[mt[1]];
        if (mat.size() == 0) mat = Eigen::MatrixXcd::Zero(n, n);
        std::istringstream vs(std::regex_replace(value, std::regex(","), " "));
        double re = 0.0, im = 0.0;
        vs >> re;
        if (!(vs >> im)) im = 0.0;
        mat(i, j) = {re, im};
    }
    std::map<std::string, double> chi;
    try {
        m.validate();
        if (in.h.count("egx")) chi["egx"] = phonon::absorption_cross_section(g.ebx(), m);
        if (in.h.count("egy")) chi["egy"] = phonon::absorption_cross_section(g.eby(), m);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[phonon] ") + e.what());
    }
    const int lo = c.integer("phonon", "lower_level"), hi = c.integer("phonon", "upper_level");
    require(lo >= 0 && hi >= 0 && lo < n && hi < n && lo != hi, "phonon level indices out of range");
    spin::DecoherenceRates r;
    // lowering feeds state 0, raising drains it
    r.gamma_minus = phonon::phonon_rate(lo, hi, in, chi);
    r.gamma_plus = phonon::phonon_rate(hi, lo, in, chi);
    return r;
}

}  // namespace qtoken
