#pragma once

#include <array>
#include <map>
#include <string>

#include "qtoken/config.hpp"
#include "qtoken/design_opt.hpp"
#include "qtoken/phonon.hpp"
#include "qtoken/spectra.hpp"
#include "qtoken/spin_channel.hpp"
#include "qtoken/token.hpp"

namespace qtoken {

enum class Medium { fixed, electron, nuclear };

// Typed view of a validated Config.
struct Scenario {
    spectra::CavitySpinParams cavity;
    spectra::CouplingModel coupling;
    double omega0_offset = 0.0;

    double bandwidth_ghz = 5.69;  // as reported; also fixes the source lifetime
    bool angular_bandwidth = false;
    double generation_fidelity = 1.0;
    spin::DiffusionModel diffusion;
    spin::MeasurementModel measurement = spin::MeasurementModel::frequency_trace;

    double pi2_fidelity = 0.9977;
    double gate_ns = 1.5;
    double measurement_ns = 0.1;

    Medium medium = Medium::fixed;
    double memory_fidelity = 1.0;
    double storage_ns = 0.0;
    double swap_ns = 0.0;
    spin::DecoherenceRates rates;
    spin::ElectronModel electron_model = spin::ElectronModel::lindblad;

    token::SecurityDesign design;
    token::LossModel loss_model = token::LossModel::printed;
    token::EfficiencyBudget efficiency;
    double c_fiber_km_s = 2e5;
    double slot_factor = 20.0;

    design::Bounds bounds;
    design::UncertaintyRegion region;
    design::Settings settings;

    static Scenario from_config(const Config& c);

    // FWHM entering the spectral integrals (ordinary GHz).
    double spectral_fwhm() const;
    spectra::PhotonSpectrum spectrum() const;
    design::FixedParams fixed_params() const;
    spin::Pipeline pipeline() const;
    // Memory fidelity for each token input (+, -, e, l).
    std::array<double, 4> memory_fidelities() const;
    token::TokenTiming timing() const;
    token::Scenario token_scenario(double f_avg) const;
};

struct Evaluation {
    std::array<spin::ChannelFidelity, 4> channel;
    std::array<double, 4> memory;
    double f_avg = 0.0;
    token::RateBreakdown rate;
};

Evaluation evaluate(const Scenario& s);

// Electron rates between two configured levels from the phonon machinery.
spin::DecoherenceRates phonon_electron_rates(const Config& c);

}  // namespace qtoken
