#include "qtoken/design_opt.hpp"

#include <cmath>
#include <limits>

#include "qtoken/errors.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken::design {

void UncertaintyRegion::validate() const {
    if (kappa_half_width < 0.0 || omega_c_half_width < 0.0)
        throw DomainError("uncertainty half-widths must be non-negative");
    if ((kappa_half_width > 0.0 && kappa_points < 2) ||
        (omega_c_half_width > 0.0 && omega_c_points < 2))
        throw DomainError("a region with positive width needs at least two grid points");
    if (kappa_points < 1 || omega_c_points < 1) throw DomainError("grid counts must be positive");
}

opt::Box Bounds::box() const {
    return {{kappa_lo, delta_lo, offset_lo}, {kappa_hi, delta_hi, offset_hi}};
}

spectra::CavitySpinParams assemble(const FixedParams& fp, double kappa, double delta) {
    auto p = fp.base;
    p.kappa = kappa;
    if (p.half_open) p.kappa_l = kappa;
    p.delta = delta;
    p.g = fp.coupling.g_at(p.omega_c());
    return p;
}

double point_infidelity(const FixedParams& fp, double kappa, double delta, double offset) {
    const auto p = assemble(fp, kappa, delta);
    const spectra::PhotonSpectrum s(p.omega_a + offset, fp.fwhm);
    if (fp.reflection_override) return 1.0 - spectra::cp_gate_fidelity(fp.reflection_override(p), s);
    return 1.0 - spectra::cp_gate_fidelity(p, s);
}

namespace {

std::vector<double> axis(double half_width, int points) {
    if (half_width == 0.0 || points == 1) return {0.0};
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = -half_width + 2.0 * half_width * i / (points - 1);
    return out;
}

}  // namespace

double region_infidelity(const FixedParams& fp, const UncertaintyRegion& region, double kappa,
                         double delta, double offset) {
    const auto dk = axis(region.kappa_half_width, region.kappa_points);
    const auto dc = axis(region.omega_c_half_width, region.omega_c_points);
    double sum = 0.0;
    for (double a : dk)
        for (double b : dc)
            // omega_c + b with omega_a fixed means delta - b
            sum += point_infidelity(fp, kappa + a, delta - b, offset);
    return sum / static_cast<double>(dk.size() * dc.size());
}

OptimalDesign evaluate_design(const FixedParams& fp, const UncertaintyRegion& region,
                              double kappa, double delta, double offset) {
    OptimalDesign d;
    d.kappa = kappa;
    d.delta = delta;
    d.omega0_offset = offset;
    d.point_infidelity = point_infidelity(fp, kappa, delta, offset);
    d.average_infidelity =
        region.empty() ? d.point_infidelity : region_infidelity(fp, region, kappa, delta, offset);
    const auto p = assemble(fp, kappa, delta);
    d.cooperativity = p.gamma > 0.0 ? spectra::cooperativity(p) : 0.0;
    return d;
}

namespace {

OptimalDesign run(const Bounds& bounds, const UncertaintyRegion& region, const FixedParams& fp,
                  const Settings& settings) {
    region.validate();
    const auto box = bounds.box();
    box.validate();
    // the region average keeps kappa + dk positive
    auto objective = [&](const opt::Vec& x) {
        if (region.empty()) return point_infidelity(fp, x[0], x[1], x[2]);
        if (x[0] - region.kappa_half_width <= 0.0) return std::numeric_limits<double>::infinity();
        return region_infidelity(fp, region, x[0], x[1], x[2]);
    };
    opt::Trace trace;
    const auto best = opt::minimize(objective, box, settings.de, settings.nm, settings.starts, &trace);
    auto d = evaluate_design(fp, region, best.x[0], best.x[1], best.x[2]);
    d.evaluations = trace.evaluations;
    return d;
}

}  // namespace

OptimalDesign optimize_standard(const Bounds& bounds, const FixedParams& fp,
                                const Settings& settings) {
    return run(bounds, UncertaintyRegion{0.0, 0.0, 1, 1}, fp, settings);
}

OptimalDesign optimize_robust(const Bounds& bounds, const UncertaintyRegion& region,
                              const FixedParams& fp, const Settings& settings) {
    return run(bounds, region, fp, settings);
}

Landscape fidelity_landscape(const OptimalDesign& center, double kappa_span, double delta_span,
                             int kappa_points, int delta_points, const FixedParams& fp) {
    if (kappa_points < 1 || delta_points < 1) throw DomainError("landscape resolution must be positive");
    Landscape out;
    auto fill = [](double c, double span, int n) {
        std::vector<double> a(n);
        for (int i = 0; i < n; ++i) a[i] = n == 1 ? c : c - 0.5 * span + span * i / (n - 1);
        return a;
    };
    out.kappa_axis = fill(center.kappa, kappa_span, kappa_points);
    out.delta_axis = fill(center.delta, delta_span, delta_points);
    const std::size_t nk = out.kappa_axis.size(), nd = out.delta_axis.size();
    out.infidelity.assign(nk * nd, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(nk * nd, 0);
    parallel_for(nk * nd, [&](std::size_t idx) {
        const std::size_t i = idx / nd, j = idx % nd;
        try {
            out.infidelity[idx] = point_infidelity(fp, out.kappa_axis[i], out.delta_axis[j], center.omega0_offset);
        } catch (const std::exception&) {
            failed[idx] = 1;
        }
    });
    out.failed.assign(failed.begin(), failed.end());
    return out;
}

}  // namespace qtoken::design
