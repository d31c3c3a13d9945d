#include "qcloud/cli/curves.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qcloud/core/error.hpp"
#include "qcloud/core/flat_text.hpp"

namespace qcloud::cli {

std::vector<double> moving_average(const std::vector<double> &series, int window) {
    if (window < 1) {
        throw InvalidArgument("moving_average: window must be >= 1");
    }
    std::vector<double> out(series.size());
    double sum = 0.0;
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= w) {
            sum -= series[i - w];
        }
        out[i] = sum / static_cast<double>(std::min(w, i + 1));
    }
    return out;
}

void write_curve(std::ostream &os, const std::vector<double> &series, int window) {
    const auto ma = moving_average(series, window);
    os << "episode,value,moving_average\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        os << i << ',' << format_double(series[i]) << ',' << format_double(ma[i]) << '\n';
    }
}

Curve read_curve(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || line != "episode,value,moving_average") {
        throw ParseError("curve: missing header", 1);
    }
    Curve c;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        int ep = 0;
        double v = 0.0;
        double m = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> ep >> c1 >> v >> c2 >> m) || c1 != ',' || c2 != ',') {
            throw ParseError("curve: expected episode,value,moving_average", lineno);
        }
        c.episodes.push_back(ep);
        c.values.push_back(v);
        c.smoothed.push_back(m);
    }
    return c;
}

namespace {

std::string polyline(const std::vector<double> &ys, double lo, double hi, const char *colour, double width) {
    constexpr double w = 640.0;
    constexpr double h = 360.0;
    constexpr double pad = 40.0;
    const double span = hi > lo ? hi - lo : 1.0;
    const double dx = ys.size() > 1 ? (w - 2 * pad) / static_cast<double>(ys.size() - 1) : 0.0;
    std::string pts;
    char buf[64];
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double x = pad + dx * static_cast<double>(i);
        const double y = h - pad - (ys[i] - lo) / span * (h - 2 * pad);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
        pts += buf;
    }
    std::snprintf(buf, sizeof buf, "\" stroke=\"%s\" stroke-width=\"%.1f\"/>\n", colour, width);
    return "<polyline fill=\"none\" points=\"" + pts + buf;
}

} // namespace

std::string curve_svg(const std::vector<double> &series, int window, const std::string &title) {
    const auto ma = moving_average(series, window);
    double lo = 0.0;
    double hi = 1.0;
    if (!series.empty()) {
        const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
        lo = *mn;
        hi = *mx;
    }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\">\n"
       << "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n"
       << "<text x=\"40\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n"
       << "<text x=\"4\" y=\"44\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(hi) << "</text>\n"
       << "<text x=\"4\" y=\"324\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(lo) << "</text>\n";
    if (!series.empty()) {
        os << polyline(series, lo, hi, "#9ecae1", 1.0) << polyline(ma, lo, hi, "#08519c", 2.0);
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace qcloud::cli
