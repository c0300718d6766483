#include "spillover/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spillover/errors.hpp"
#include "spillover/textio.hpp"

namespace spillover {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) { return fmt6(v); }

}  // namespace

std::string svg_line_chart(const std::string& title, const std::vector<Date>& dates,
                           const std::vector<ChartSeries>& series, const std::string& comment) {
    if (dates.size() < 2 || series.empty())
        throw data_error("svg_line_chart: need at least two points");
    for (const auto& s : series)
        if (s.values.size() != dates.size())
            throw data_error("svg_line_chart: series length mismatch for " + s.label);

    const double width = 900, height = 420;
    const double ml = 70, mr = 180, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double lo = series[0].values[0], hi = lo;
    for (const auto& s : series)
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }

    auto xpos = [&](std::size_t i) {
        return ml + pw * static_cast<double>(i) / static_cast<double>(dates.size() - 1);
    };
    auto ypos = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    if (!comment.empty()) out << "<!-- " << comment << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";

    // axes and gridlines
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double v = lo + (hi - lo) * g / 4.0;
        const double y = ypos(v);
        out << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
            << "</text>\n";
    }
    const std::size_t ticks = std::min<std::size_t>(6, dates.size());
    for (std::size_t g = 0; g < ticks; ++g) {
        const std::size_t i = g * (dates.size() - 1) / std::max<std::size_t>(1, ticks - 1);
        out << "<text x=\"" << num(xpos(i)) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << dates[i].to_string() << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 10];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < dates.size(); ++i) {
            if (i) out << ' ';
            out << num(xpos(i)) << ',' << num(ypos(series[s].values[i]));
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(s);
        out << "<rect x=\"" << ml + pw + 12 << "\" y=\"" << num(ly - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << ml + pw + 30 << "\" y=\"" << num(ly + 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_heatmap(const std::string& title, const std::vector<std::string>& names,
                        const Eigen::MatrixXd& values, double lo, double hi,
                        const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* mask,
                        const std::string& comment) {
    const Eigen::Index k = values.rows();
    if (values.cols() != k || static_cast<Eigen::Index>(names.size()) != k)
        throw data_error("svg_heatmap: mismatched dimensions");
    if (!(hi > lo)) throw data_error("svg_heatmap: bad color range");

    const double cell = 52, ml = 110, mt = 70;
    const double width = ml + cell * static_cast<double>(k) + 30;
    const double height = mt + cell * static_cast<double>(k) + 30;

    auto color_for = [&](double v) {
        double s = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
        // white -> deep red ramp
        const int r = 255;
        const int g = static_cast<int>(std::lround(255.0 * (1.0 - 0.85 * s)));
        const int b = static_cast<int>(std::lround(255.0 * (1.0 - 0.92 * s)));
        char buf[10];
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    if (!comment.empty()) out << "<!-- " << comment << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << ml << "\" y=\"26\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    for (Eigen::Index j = 0; j < k; ++j)
        out << "<text x=\"" << num(ml + cell * (static_cast<double>(j) + 0.5)) << "\" y=\""
            << mt - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << names[static_cast<std::size_t>(j)] << "</text>\n";
    for (Eigen::Index i = 0; i < k; ++i)
        out << "<text x=\"" << ml - 8 << "\" y=\""
            << num(mt + cell * (static_cast<double>(i) + 0.6))
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << names[static_cast<std::size_t>(i)] << "</text>\n";

    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            const double x = ml + cell * static_cast<double>(j);
            const double y = mt + cell * static_cast<double>(i);
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << color_for(values(i, j))
                << "\" stroke=\"#888888\"/>\n"
                << "<text x=\"" << num(x + cell / 2) << "\" y=\"" << num(y + cell / 2 + 4)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << fmt6(values(i, j)) << "</text>\n";
            if (mask && (*mask)(i, j)) {
                out << "<line x1=\"" << num(x + 6) << "\" y1=\"" << num(y + 6) << "\" x2=\""
                    << num(x + cell - 6) << "\" y2=\"" << num(y + cell - 6)
                    << "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n"
                    << "<line x1=\"" << num(x + cell - 6) << "\" y1=\"" << num(y + 6)
                    << "\" x2=\"" << num(x + 6) << "\" y2=\"" << num(y + cell - 6)
                    << "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
            }
        }
    out << "</svg>\n";
    return out.str();
}

}  // namespace spillover
