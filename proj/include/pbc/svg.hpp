#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pbc::svg {

inline const char* color(int label) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    if (label < 0) return "#000000";
    return palette[label % 10];
}

struct Series {
    std::string name;
    std::vector<double> x, y;
    int group = 0;       ///< color index
    bool line = false;   ///< polyline instead of dots
};

namespace detail {

struct Frame {
    double x0, x1, y0, y1;
    double width = 640, height = 480, margin = 48;

    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double py(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

inline Frame fit(const std::vector<Series>& series) {
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            f.x0 = std::min(f.x0, s.x[i]), f.x1 = std::max(f.x1, s.x[i]);
            f.y0 = std::min(f.y0, s.y[i]), f.y1 = std::max(f.y1, s.y[i]);
        }
    if (!std::isfinite(f.x0)) f.x0 = 0, f.x1 = 1, f.y0 = 0, f.y1 = 1;
    if (f.x1 - f.x0 < 1e-12) f.x0 -= 0.5, f.x1 += 0.5;
    if (f.y1 - f.y0 < 1e-12) f.y0 -= 0.5, f.y1 += 0.5;
    return f;
}

}  // namespace detail

/// Self-contained SVG of the series; every plotted value is also written as
/// an XML comment so the figure can be diffed and re-plotted.
inline void write_plot(std::ostream& out, const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label = "", const std::string& y_label = "") {
    const detail::Frame f = detail::fit(series);
    out << std::setprecision(17);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height << "\">\n";
    out << "<!-- title: " << title << " -->\n";
    for (const auto& s : series) {
        out << "<!-- series " << s.name << " group " << s.group << " n " << s.x.size() << "\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << s.x[i] << ',' << s.y[i] << '\n';
        out << "-->\n";
    }
    out << std::setprecision(6);
    out << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\"" << f.width - 2 * f.margin
        << "\" height=\"" << f.height - 2 * f.margin << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    out << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << x_label << " [" << f.x0 << ", " << f.x1 << "]</text>\n";
    out << "<text x=\"14\" y=\"" << f.height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << f.height / 2
        << ")\" text-anchor=\"middle\">" << y_label << " [" << f.y0 << ", " << f.y1 << "]</text>\n";
    for (const auto& s : series) {
        if (s.line) {
            out << "<polyline fill=\"none\" stroke=\"" << color(s.group) << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) out << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
            out << "\"/>\n";
            continue;
        }
        out << "<g fill=\"" << color(s.group) << "\">\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                out << "<circle cx=\"" << f.px(s.x[i]) << "\" cy=\"" << f.py(s.y[i]) << "\" r=\"2\"/>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
}

/// One dot series per distinct label, plotted in the (x, y) plane.
inline std::vector<Series> scatter_by_label(const std::vector<double>& x, const std::vector<double>& y,
                                            const std::vector<int>& labels) {
    std::vector<int> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<Series> out;
    for (int l : distinct) {
        Series s{"cluster " + std::to_string(l), {}, {}, l, false};
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) s.x.push_back(x[i]), s.y.push_back(y[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace pbc::svg
