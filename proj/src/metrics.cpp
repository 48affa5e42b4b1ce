#include "pmef/metrics.hpp"

#include <fmt/format.h>

namespace pmef {

namespace {

std::string quoted_if_needed(const std::string& s) {
    if (!s.empty() && s.find_first_of(" \t\"=") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_record(const MetricReport& report) {
    std::string line = "image_a=" + quoted_if_needed(report.image_a);
    if (report.image_b) line += " image_b=" + quoted_if_needed(*report.image_b);
    if (report.mean_de2000) line += fmt::format(" ciede2000={:.6f}", *report.mean_de2000);
    if (report.statistical_naturalness) line += fmt::format(" naturalness={:.6f}", *report.statistical_naturalness);
    for (const auto& [key, value] : report.params) line += " " + key + "=" + quoted_if_needed(value);
    return line;
}

}  // namespace pmef
