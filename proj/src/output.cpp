#include "ineqlab/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "ineqlab/error.hpp"

namespace ineqlab {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Axis {
    bool log;
    double lo, hi;

    double map(double v, double a, double b) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::floor(lo); e <= std::ceil(hi); e += 1.0)
                if (e >= lo - 1e-12 && e <= hi + 1e-12) out.push_back(std::pow(10.0, e));
            return out;
        }
        const double span = hi - lo;
        const double step = std::pow(10.0, std::floor(std::log10(span / 5)));
        const double m = span / step > 25 ? 5 * step : (span / step > 10 ? 2 * step : step);
        for (double v = std::ceil(lo / m) * m; v <= hi + 1e-12 * span; v += m) out.push_back(v);
        return out;
    }
};

Axis make_axis(const std::vector<double>& vals, bool log) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : vals) {
        const double t = log ? std::log10(v) : v;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
        lo -= log ? 0.5 : std::max(1.0, std::abs(lo)) * 0.5;
        hi += log ? 0.5 : std::max(1.0, std::abs(hi)) * 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {log, lo - pad, hi + pad};
}

}  // namespace

std::string svg_plot(const std::vector<Series>& series, const PlotSpec& spec) {
    std::vector<Series> kept;
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        Series k{s.name, {}, {}};
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if ((spec.logx && x <= 0) || (spec.logy && y <= 0)) continue;
            k.x.push_back(x);
            k.y.push_back(y);
            xs.push_back(x);
            ys.push_back(y);
        }
        kept.push_back(std::move(k));
    }
    const Axis ax = make_axis(xs, spec.logx), ay = make_axis(ys, spec.logy);
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + num(kWidth / 2 - kRight / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";
    o += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
         num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ax.ticks()) {
        const double px = ax.map(t, x0, x1);
        o += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" + num(y0 + 5) +
             "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + tick_label(t) +
             "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double py = ay.map(t, y0, y1);
        o += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(py) +
             "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
             "</text>\n";
    }
    o += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(spec.xlabel) + (spec.logx ? " (log)" : "") + "</text>\n";
    o += "<text transform=\"translate(16," + num((y0 + y1) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(spec.ylabel) + (spec.logy ? " (log)" : "") + "</text>\n";
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const std::string color = kColors[k % (sizeof kColors / sizeof *kColors)];
        const auto& s = kept[k];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += (i ? " " : "") + num(ax.map(s.x[i], x0, x1)) + "," + num(ay.map(s.y[i], y0, y1));
        if (s.x.size() > 1)
            o += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            o += "<circle cx=\"" + num(ax.map(s.x[i], x0, x1)) + "\" cy=\"" + num(ay.map(s.y[i], y0, y1)) +
                 "\" r=\"3\" fill=\"" + color + "\"/>\n";
        const double ly = y1 + 10 + 18.0 * k;
        o += "<line x1=\"" + num(x1 + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(x1 + 32) + "\" y2=\"" + num(ly) +
             "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(x1 + 38) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.name) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    require(static_cast<bool>(out), "cannot write " + path);
    out << content;
    require(static_cast<bool>(out), "write failed: " + path);
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace ineqlab
