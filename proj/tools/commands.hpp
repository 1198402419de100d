#pragma once

#include <string>
#include <vector>

#include "qtoken/config.hpp"

namespace cli {

enum Exit { ok = 0, config_error = 2, numerical_failure = 3, gate_mismatch = 4 };

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
};

qtoken::Config load_config(const Common& c, const char* preset = nullptr);

int security_table(const Common& c, const std::vector<double>& thresholds, double alpha);
int optimize_cavity(const Common& c, bool robust, int grid, double kappa_span, double delta_span);

struct SweepArgs {
    std::string axis;
    double from = 0.0;
    double to = 1.0;
    int points = 21;
    bool log_spacing = false;
    bool svg = false;
};
int sweep(const Common& c, const SweepArgs& a);

int mc_verify(const Common& c, unsigned long long trials, unsigned long long seed);
int check(const Common& c);

}  // namespace cli
