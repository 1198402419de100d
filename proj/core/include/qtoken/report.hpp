#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qtoken::report {

std::string provenance(std::uint64_t config_hash);

// Doubles are written with 17 significant digits so reruns compare byte for byte.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::uint64_t config_hash, const std::vector<std::string>& header);

    void comment(const std::string& text);
    void row(const std::vector<double>& values, const std::string& flag = "");

private:
    std::ostream& out_;
    bool flagged_;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> vertical_markers;  // dashed
};

void write_line_svg(std::ostream& out, const std::vector<Series>& series, const PlotSpec& spec);

std::string format_double(double v);

}  // namespace qtoken::report
