#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "presets.hpp"
#include "qtoken/design_opt.hpp"
#include "qtoken/errors.hpp"
#include "qtoken/parallel.hpp"
#include "qtoken/report.hpp"
#include "qtoken/scenario.hpp"
#include "qtoken/token.hpp"
#include "qtoken/version.hpp"

namespace cli {

namespace fs = std::filesystem;
using qtoken::Config;
using qtoken::Scenario;

namespace {

std::ofstream open_output(const Common& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    const auto path = fs::path(c.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw qtoken::ConfigError("cannot write " + path.string());
    return out;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

Config load_config(const Common& c, const char* preset) {
    Config cfg;
    if (!c.config_path.empty())
        cfg = Config::load(c.config_path);
    else if (preset)
        cfg.apply_text(preset, "<preset>");
    for (const auto& o : c.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw qtoken::ConfigError("--set expects section.key=value, got '" + o + "'");
        cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    return cfg;
}

int security_table(const Common& c, const std::vector<double>& thresholds, double alpha) {
    const Config cfg = load_config(c);
    for (double p : thresholds)
        if (!(p > 0.0 && p < 1.0)) {
            std::cerr << "usage error: thresholds must lie in (0, 1)\n";
            return config_error;
        }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::cerr << "usage error: alpha must lie in (0, 1)\n";
        return config_error;
    }
    auto out = open_output(c, "security_table.csv");
    qtoken::report::CsvWriter csv(out, cfg.hash(), {"p_th", "n", "t", "t_min"});
    std::cout << "p_th,n,t\n";
    for (double p : thresholds) {
        const auto s = qtoken::token::min_token_size(p, alpha);
        csv.row({p, double(s.n), double(s.t), double(s.t_min)});
        std::cout << p << ',' << s.n << ',' << s.t << '\n';
    }
    return ok;
}

int optimize_cavity(const Common& c, bool robust, int grid, double kappa_span, double delta_span) {
    const Config cfg = load_config(c);
    const auto sc = Scenario::from_config(cfg);
    const auto fp = sc.fixed_params();
    nlohmann::json report;
    report["tool"] = qtoken::report::provenance(cfg.hash());
    report["mode"] = robust ? "robust" : "standard";
    report["spectral_fwhm_ghz"] = sc.spectral_fwhm();
    report["g_ghz"] = sc.cavity.g;
    report["gamma_atom_ghz"] = sc.cavity.gamma;

    qtoken::design::OptimalDesign d;
    try {
        d = robust ? qtoken::design::optimize_robust(sc.bounds, sc.region, fp, sc.settings)
                   : qtoken::design::optimize_standard(sc.bounds, fp, sc.settings);
    } catch (const qtoken::opt::OptimizationError& e) {
        report["error"] = e.what();
        report["best_so_far"] = {{"x", e.best().x}, {"objective", e.best().f}};
        open_output(c, "optimize_report.json") << report.dump(2) << '\n';
        std::cerr << "optimizer failure: " << e.what() << '\n';
        return numerical_failure;
    }
    const double avg = qtoken::design::region_infidelity(fp, sc.region, d.kappa, d.delta, d.omega0_offset);
    report["kappa_ghz"] = d.kappa;
    report["delta_ghz"] = d.delta;
    report["omega0_offset_ghz"] = d.omega0_offset;
    report["point_infidelity"] = d.point_infidelity;
    report["region_average_infidelity"] = avg;
    report["cooperativity"] = d.cooperativity;
    report["evaluations"] = d.evaluations;
    open_output(c, "optimize_report.json") << report.dump(2) << '\n';

    const auto land = qtoken::design::fidelity_landscape(d, kappa_span, delta_span, grid, grid, fp);
    auto out = open_output(c, "landscape.csv");
    qtoken::report::CsvWriter csv(out, cfg.hash(), {"kappa_ghz", "delta_ghz", "infidelity"});
    for (std::size_t i = 0; i < land.kappa_axis.size(); ++i)
        for (std::size_t j = 0; j < land.delta_axis.size(); ++j) {
            const std::size_t k = i * land.delta_axis.size() + j;
            csv.row({land.kappa_axis[i], land.delta_axis[j], land.infidelity[k]}, land.failed[k] ? "failed" : "");
        }

    std::cout << std::setprecision(6) << (robust ? "robust" : "standard") << " optimum: kappa=" << d.kappa
              << " GHz delta=" << d.delta << " GHz omega0-omega_a=" << d.omega0_offset
              << " GHz infidelity=" << d.point_infidelity << " region average=" << avg << '\n';
    return ok;
}

int sweep(const Common& c, const SweepArgs& a) {
    const Config base = load_config(c);
    Scenario::from_config(base);  // reject bad configs before the sweep
    if (a.points < 1) throw qtoken::ConfigError("sweep needs at least one point");
    if (a.log_spacing && !(a.from > 0.0 && a.to > 0.0)) throw qtoken::ConfigError("log spacing needs positive limits");
    static const std::map<std::string, std::string> keys = {{"bandwidth", "photon.bandwidth_ghz"},
                                                            {"efficiency", "link.eta_c"},
                                                            {"length", "link.fiber_length_km"},
                                                            {"storage", "memory.storage_time_ns"},
                                                            {"diffusion", "photon.diffusion_sigma_ghz"}};
    const auto& key = keys.at(a.axis);
    std::vector<double> xs(a.points);
    for (int i = 0; i < a.points; ++i) {
        const double u = a.points == 1 ? 0.0 : double(i) / (a.points - 1);
        xs[i] = a.log_spacing ? a.from * std::pow(a.to / a.from, u) : a.from + u * (a.to - a.from);
    }
    struct Row {
        double rate = nan(), f = nan(), tok = nan();
        std::string flag;
    };
    std::vector<Row> rows(xs.size());
    qtoken::parallel_for(xs.size(), [&](std::size_t i) {
        try {
            Config cfg = base;
            cfg.set(key, qtoken::report::format_double(xs[i]));
            const auto e = qtoken::evaluate(Scenario::from_config(cfg));
            rows[i] = {e.rate.gamma_a_hz, e.f_avg, e.rate.gamma_tok_hz, ""};
        } catch (const std::exception& ex) {
            rows[i].flag = "error";
        }
    });

    auto out = open_output(c, "sweep_" + a.axis + ".csv");
    qtoken::report::CsvWriter csv(out, base.hash(), {"axis_value", "gamma_a_hz", "f_avg", "gamma_tok_hz"});
    csv.comment("axis " + a.axis + " (" + key + ")");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].rate > rows[best].rate || std::isnan(rows[best].rate)) best = i;
    csv.comment("max gamma_a_hz " + qtoken::report::format_double(rows[best].rate) + " at " +
                qtoken::report::format_double(xs[best]));
    std::vector<double> markers;
    if (a.axis == "storage") {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double f0 = rows[i - 1].f, f1 = rows[i].f;
            if (f0 >= 0.75 && f1 < 0.75) {
                const double x = xs[i - 1] + (0.75 - f0) / (f1 - f0) * (xs[i] - xs[i - 1]);
                markers.push_back(x);
                csv.comment("f_avg crosses 0.75 at " + qtoken::report::format_double(x));
                break;
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) csv.row({xs[i], rows[i].rate, rows[i].f, rows[i].tok}, rows[i].flag);

    if (a.svg) {
        qtoken::report::Series s{"gamma_a", xs, {}};
        for (const auto& r : rows) s.y.push_back(r.rate / 1e3);
        auto svg = open_output(c, "sweep_" + a.axis + ".svg");
        qtoken::report::write_line_svg(svg, {s}, {"Acceptance rate, " + a.axis + " sweep", key, "gamma_a (kHz)", markers});
    }
    std::cout << "peak " << rows[best].rate << " Hz at " << a.axis << " = " << xs[best] << '\n';
    return ok;
}

int mc_verify(const Common& c, unsigned long long trials, unsigned long long seed) {
    const Config cfg = load_config(c);
    const auto sc = Scenario::from_config(cfg);
    const auto e = qtoken::evaluate(sc);
    const auto ts = sc.token_scenario(e.f_avg);
    const auto closed = qtoken::token::acceptance_rate(ts);
    const auto mc = qtoken::token::monte_carlo_verify(ts, trials, seed);
    const double pf = qtoken::token::forge_acceptance_prob(sc.design.n, sc.design.t, sc.design.alpha);
    const auto adv = qtoken::token::adversary_simulation(sc.design.n, sc.design.t, sc.design.alpha, trials, seed + 1);

    auto out = open_output(c, "mc_verify.csv");
    qtoken::report::CsvWriter csv(out, cfg.hash(), {"check", "closed_form", "empirical", "standard_error", "z"});
    csv.comment("check 0: honest acceptance probability, check 1: forged acceptance probability");
    auto z = [](double a, double b, double se) { return se > 0.0 ? (b - a) / se : (a == b ? 0.0 : nan()); };
    csv.row({0, closed.acceptance_probability, mc.probability, mc.standard_error,
             z(closed.acceptance_probability, mc.probability, mc.standard_error)});
    csv.row({1, pf, adv.probability, adv.standard_error, z(pf, adv.probability, adv.standard_error)});
    std::cout << std::setprecision(8) << "acceptance: closed " << closed.acceptance_probability << " mc "
              << mc.probability << " +- " << mc.standard_error << '\n'
              << "forgery:    closed " << pf << " mc " << adv.probability << " +- " << adv.standard_error << '\n';
    return ok;
}

int check(const Common& c) {
    const Config cav_cfg = load_config(c, c.config_path.empty() ? presets::reference_cavity : nullptr);
    const Config opt_cfg = load_config(c, c.config_path.empty() ? presets::reference_optical : nullptr);
    int failures = 0;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        failures += pass ? 0 : 1;
    };
    auto fmt = [](double v) { return qtoken::report::format_double(v); };

    const int expected[3][2] = {{42, 41}, {51, 50}, {59, 58}};
    const double pth[3] = {1e-4, 1e-5, 1e-6};
    bool table_ok = true;
    for (int i = 0; i < 3; ++i) {
        const auto s = qtoken::token::min_token_size(pth[i]);
        table_ok = table_ok && s.n == expected[i][0] && s.t == expected[i][1];
    }
    report("security table", table_ok, "(42,41) (51,50) (59,58)");

    const double tg = qtoken::token::gate_duration_from_tau(353.32 / 4.0);
    report("gate duration", std::abs(tg - 1.5) <= 0.01, fmt(tg) + " ns");

    const double eta = 0.98 * 0.98 * 0.73 * 0.73 * 0.98 * 0.98;
    report("coupling efficiency product", std::abs(eta - 0.4915) < 5e-5, fmt(eta));

    const auto sc_cav = Scenario::from_config(cav_cfg);
    const double inf = qtoken::design::point_infidelity(sc_cav.fixed_params(), sc_cav.cavity.kappa,
                                                        sc_cav.cavity.delta, sc_cav.omega0_offset);
    report("cp infidelity at the reported design", std::abs(inf / 4.90e-5 - 1.0) <= 0.2, fmt(inf));

    const auto sc_opt = Scenario::from_config(opt_cfg);
    const auto ev = qtoken::evaluate(sc_opt);
    report("acceptance rate at the optimal bandwidth", std::abs(ev.rate.gamma_a_hz / 80.16e3 - 1.0) <= 0.05,
           fmt(ev.rate.gamma_a_hz) + " Hz (reference 80160 Hz)");
    auto low = sc_opt;
    low.efficiency.eta_c_override = eta;
    const auto r_low = qtoken::token::acceptance_rate(low.token_scenario(ev.f_avg));
    report("efficiency cliff", r_low.gamma_a_hz < 1.0, fmt(r_low.gamma_a_hz) + " Hz");

    return failures ? gate_mismatch : ok;
}

}  // namespace cli
