#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcloud::cli {

/// Trailing mean over min(window, i + 1) points; same length as `series`.
[[nodiscard]] std::vector<double> moving_average(const std::vector<double> &series, int window);

/// Writes `episode,value,moving_average` rows.
void write_curve(std::ostream &os, const std::vector<double> &series, int window);

struct Curve {
    std::vector<int> episodes;
    std::vector<double> values;
    std::vector<double> smoothed;
};

[[nodiscard]] Curve read_curve(std::istream &is);

/// Standalone SVG line chart of the raw series (light) and its smoothing (dark).
[[nodiscard]] std::string curve_svg(const std::vector<double> &series, int window, const std::string &title);

} // namespace qcloud::cli
