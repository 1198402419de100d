#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtoken/optimize.hpp"
#include "qtoken/spectra.hpp"

namespace qtoken::design {

// Fabrication uncertainty in (kappa, omega_c); grid points per axis.
struct UncertaintyRegion {
    double kappa_half_width = 0.0;
    double omega_c_half_width = 0.0;
    int kappa_points = 5;
    int omega_c_points = 5;

    bool empty() const { return kappa_half_width == 0.0 && omega_c_half_width == 0.0; }
    void validate() const;
};

struct OptimalDesign {
    double kappa = 0.0;
    double delta = 0.0;
    double omega0_offset = 0.0;  // omega0 - omega_a
    double point_infidelity = 0.0;
    double average_infidelity = 0.0;
    double cooperativity = 0.0;
    int evaluations = 0;
};

// Everything but (kappa, delta, omega0) is held fixed.
struct FixedParams {
    spectra::CavitySpinParams base;
    spectra::CouplingModel coupling;
    double fwhm = 1.0;
    // Replaces the reflection model; used to probe degenerate objectives.
    std::function<spectra::ReflectionPair(const spectra::CavitySpinParams&)> reflection_override;
};

struct Bounds {
    double kappa_lo = 1.0, kappa_hi = 200.0;
    double delta_lo = -300.0, delta_hi = 300.0;
    double offset_lo = -300.0, offset_hi = 300.0;

    opt::Box box() const;
};

struct Settings {
    opt::DEOptions de;
    opt::NMOptions nm;
    int starts = 3;
};

spectra::CavitySpinParams assemble(const FixedParams& fp, double kappa, double delta);
double point_infidelity(const FixedParams& fp, double kappa, double delta, double offset);
// Uniform average of 1 - F_CP over the region grid centred on the design.
double region_infidelity(const FixedParams& fp, const UncertaintyRegion& region, double kappa,
                         double delta, double offset);

OptimalDesign optimize_standard(const Bounds& bounds, const FixedParams& fp,
                                const Settings& settings = {});
OptimalDesign optimize_robust(const Bounds& bounds, const UncertaintyRegion& region,
                              const FixedParams& fp, const Settings& settings = {});
OptimalDesign evaluate_design(const FixedParams& fp, const UncertaintyRegion& region,
                              double kappa, double delta, double offset);

struct Landscape {
    std::vector<double> kappa_axis;
    std::vector<double> delta_axis;
    std::vector<double> infidelity;  // row-major, kappa outer
    std::vector<bool> failed;

    double at(std::size_t i, std::size_t j) const { return infidelity[i * delta_axis.size() + j]; }
};

// Spans are full widths centred on the design; resolution counts per axis.
Landscape fidelity_landscape(const OptimalDesign& center, double kappa_span, double delta_span,
                             int kappa_points, int delta_points, const FixedParams& fp);

}  // namespace qtoken::design
