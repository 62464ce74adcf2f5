#pragma once

// Result serialization: CSV tables, JSON records, and a bare-bones SVG line
// plot. Files are written to a sibling temp file and renamed into place.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "wscs_rdf/backward_channel_mc.hpp"
#include "wscs_rdf/error.hpp"
#include "wscs_rdf/rdf_sequence.hpp"

namespace wscs_rdf::cli {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path + "'");
    }
}

inline constexpr const char* kSeriesCsvHeader = "n,eps_n_num,eps_n_den,p_n,rate_bits";
inline constexpr const char* kRatioCsvHeader = "ratio,p,eps_expr,mode,rate_bits";
inline constexpr const char* kDistortionCsvHeader = "D,eps_expr,rate_bits";

inline std::string series_csv(const RdfSeries& series) {
    std::ostringstream os;
    os << kSeriesCsvHeader << '\n';
    for (const auto& e : series.entries) {
        os << e.n << ',' << e.eps_n.num << ',' << e.eps_n.den << ',' << e.p_n << ',' << format_double(e.rate_bits)
           << '\n';
    }
    return os.str();
}

inline std::string ratio_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << kRatioCsvHeader << '\n';
    for (const auto& pt : sweep.points) {
        os << format_double(pt.x) << ',' << pt.metadata.p << ',' << pt.metadata.eps_expr << ','
           << to_string(pt.mode) << ',' << format_double(pt.rate_bits) << '\n';
    }
    return os.str();
}

inline std::string distortion_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << kDistortionCsvHeader << '\n';
    for (const auto& pt : sweep.points) {
        os << format_double(pt.x) << ',' << sweep.curves.at(pt.curve) << ',' << format_double(pt.rate_bits) << '\n';
    }
    return os.str();
}

inline nlohmann::ordered_json to_json(const PointMetadata& m) {
    return {{"p", m.p},
            {"eps_expr", m.eps_expr},
            {"n_used", m.n_used},
            {"eps_evaluated", std::to_string(m.eps_evaluated.num) + "/" + std::to_string(m.eps_evaluated.den)},
            {"period", m.period},
            {"theta", m.theta}};
}

inline nlohmann::ordered_json to_json(const RatePoint& pt, double D) {
    return {{"D", D},
            {"mode", to_string(pt.mode)},
            {"rate_bits", pt.rate_bits},
            {"low_distortion_regime", pt.low_distortion_regime},
            {"tail_spread", pt.tail_spread},
            {"metadata", to_json(pt.metadata)}};
}

inline nlohmann::ordered_json to_json(const RdfSeries& s) {
    return {{"tail_window", {s.tail_window.lo, s.tail_window.hi}},
            {"limsup_estimate", s.limsup_estimate},
            {"tail_spread", s.tail_spread},
            {"argmax_n", s.argmax_n},
            {"low_distortion_regime", s.low_distortion_regime},
            {"rows", s.entries.size()}};
}

inline nlohmann::ordered_json to_json(const SweepResult& sweep) {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& pt : sweep.points) {
        pts.push_back({{"x", pt.x},
                       {"curve", sweep.curves.at(pt.curve)},
                       {"rate_bits", pt.rate_bits},
                       {"mode", to_string(pt.mode)},
                       {"metadata", to_json(pt.metadata)}});
    }
    const char* axis = sweep.axis == SweepAxis::N ? "N" : sweep.axis == SweepAxis::Ratio ? "Ratio" : "Distortion";
    return {{"axis", axis}, {"points", pts}};
}

inline nlohmann::ordered_json to_json(const McReport& r) {
    return {{"k", r.k},
            {"trials", r.trials},
            {"emp_mse", r.emp_mse},
            {"emp_mse_half_width", r.emp_mse_half_width},
            {"info_density_mean", r.info_density_mean},
            {"info_density_std", r.info_density_std},
            {"emp_plimsup", r.emp_plimsup},
            {"ui_l2_bound", r.ui_l2_bound},
            {"ui_bound_limit", r.ui_bound_limit},
            {"ui_within_bound", r.ui_within_bound},
            {"rate_bits", r.rate_bits},
            {"target_D", r.target_D},
            {"seed", r.seed},
            {"rng_algorithm", r.rng_algorithm},
            {"plimsup_delta", r.plimsup_delta},
            {"plimsup_note", r.plimsup_note}};
}

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> xy;
};

/// Minimal line plot: frame, tick labels at the extremes, one polyline per
/// series, and a legend.
inline std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                                 const std::string& y_label) {
    constexpr double width = 640, height = 400, left = 70, right = 20, top = 20, bottom = 50;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (auto [x, y] : s.xy) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    }
    if (xmax == xmin) {
        xmax = xmin + 1;
    }
    if (ymax == ymin) {
        ymax = ymin + 1;
    }
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
       << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << height - bottom + 15 << "\" font-size=\"11\">" << format_double(xmin)
       << "</text>\n";
    os << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 15
       << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(xmax) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << height - bottom << "\" font-size=\"11\" text-anchor=\"end\">"
       << format_double(ymin) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
       << format_double(ymax) << "</text>\n";
    os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"15\" y=\"" << (top + height - bottom) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 15 " << (top + height - bottom) / 2 << ")\">" << y_label << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % std::size(colors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[i].xy) {
            os << px(x) << ',' << py(y) << ' ';
        }
        os << "\"/>\n";
        const double ly = top + 15 + 15 * static_cast<double>(i);
        os << "<line x1=\"" << width - right - 120 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right - 100
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << width - right - 95 << "\" y=\"" << ly << "\" font-size=\"11\">" << series[i].label
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline std::vector<PlotSeries> plot_series(const SweepResult& sweep) {
    std::vector<PlotSeries> out(sweep.curves.size());
    for (std::size_t c = 0; c < sweep.curves.size(); ++c) {
        out[c].label = sweep.curves[c];
    }
    for (const auto& pt : sweep.points) {
        out.at(pt.curve).xy.emplace_back(pt.x, pt.rate_bits);
    }
    return out;
}

inline std::vector<PlotSeries> plot_series(const RdfSeries& series) {
    PlotSeries s{"R_n(D)", {}};
    for (const auto& e : series.entries) {
        s.xy.emplace_back(static_cast<double>(e.n), e.rate_bits);
    }
    return {s};
}

} // namespace wscs_rdf::cli
