#pragma once

// Trace rendering: a two-panel SVG (voltage over current, shared time axis,
// read markers) and a one-line terminal sparkline of the current.

#include "memspike/errors.hpp"
#include "memspike/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace memspike {

struct PlotOptions {
    int width = 900;
    int panel_height = 260;
    std::optional<double> threshold; // draws +/- threshold lines on the current panel
    std::string title;
};

namespace detail {

inline std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo;
    double hi;
};

inline Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        const double d = std::max(std::abs(lo), 1e-12);
        return {lo - d, hi + d};
    }
    const double pad = 0.08 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace detail

inline std::string render_svg(const Trace& trace, const PlotOptions& opt = {}) {
    if (trace.empty()) {
        throw TraceError("cannot plot an empty trace");
    }
    const auto& rows = trace.rows();
    const double margin_l = 90.0;
    const double margin_r = 20.0;
    const double margin_t = 36.0;
    const double gap = 40.0;
    const double margin_b = 40.0;
    const double pw = opt.width - margin_l - margin_r;
    const double ph = opt.panel_height;
    const double height = margin_t + 2 * ph + gap + margin_b;

    double t0 = rows.front().t;
    double t1 = rows.back().t;
    if (!(t1 > t0)) {
        t1 = t0 + trace.timestep();
    }
    double vlo = 0.0, vhi = 0.0, ilo = 0.0, ihi = 0.0;
    for (const auto& r : rows) {
        vlo = std::min(vlo, r.v);
        vhi = std::max(vhi, r.v);
        if (r.i) {
            ilo = std::min(ilo, *r.i);
            ihi = std::max(ihi, *r.i);
        }
    }
    if (opt.threshold) {
        ilo = std::min(ilo, -*opt.threshold);
        ihi = std::max(ihi, *opt.threshold);
    }
    const auto vr = detail::padded(vlo, vhi);
    const auto ir = detail::padded(ilo, ihi);

    auto x_of = [&](double t) { return margin_l + (t - t0) / (t1 - t0) * pw; };
    auto y_in = [&](double top, detail::Range r, double y) {
        return top + ph - (y - r.lo) / (r.hi - r.lo) * ph;
    };
    const double vtop = margin_t;
    const double itop = margin_t + ph + gap;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
         "\" height=\"" + detail::fmt("%.0f", height) + "\" font-family=\"monospace\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty()) {
        s += "<text x=\"" + detail::fmt("%.1f", margin_l) + "\" y=\"22\" font-size=\"14\">" +
             detail::xml_escape(opt.title) + "</text>\n";
    }

    auto panel = [&](double top, detail::Range r, const char* label, const char* unit_fmt) {
        s += "<rect x=\"" + detail::fmt("%.1f", margin_l) + "\" y=\"" + detail::fmt("%.1f", top) +
             "\" width=\"" + detail::fmt("%.1f", pw) + "\" height=\"" + detail::fmt("%.1f", ph) +
             "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            const double y = r.lo + (r.hi - r.lo) * k / 4.0;
            const double py = y_in(top, r, y);
            s += "<line x1=\"" + detail::fmt("%.1f", margin_l) + "\" x2=\"" +
                 detail::fmt("%.1f", margin_l + pw) + "\" y1=\"" + detail::fmt("%.1f", py) +
                 "\" y2=\"" + detail::fmt("%.1f", py) + "\" stroke=\"#ddd\"/>\n";
            s += "<text x=\"" + detail::fmt("%.1f", margin_l - 6) + "\" y=\"" +
                 detail::fmt("%.1f", py + 4) + "\" text-anchor=\"end\">" +
                 detail::fmt(unit_fmt, y) + "</text>\n";
        }
        s += "<text x=\"12\" y=\"" + detail::fmt("%.1f", top + ph / 2) +
             "\" transform=\"rotate(-90 12 " + detail::fmt("%.1f", top + ph / 2) +
             ")\" text-anchor=\"middle\">" + label + "</text>\n";
    };
    panel(vtop, vr, "V (V)", "%.3g");
    panel(itop, ir, "I (A)", "%.3g");

    // Held levels between samples, so draw step-wise.
    auto polyline = [&](double top, detail::Range r, bool current, const char* colour) {
        std::string pts;
        bool have_prev = false;
        double prev_y = 0.0;
        for (const auto& row : rows) {
            if (current && !row.i) {
                continue;
            }
            const double y = y_in(top, r, current ? *row.i : row.v);
            const double x = x_of(row.t);
            if (have_prev) {
                pts += detail::fmt("%.2f", x) + "," + detail::fmt("%.2f", prev_y) + " ";
            }
            pts += detail::fmt("%.2f", x) + "," + detail::fmt("%.2f", y) + " ";
            prev_y = y;
            have_prev = true;
        }
        if (!pts.empty()) {
            s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
                 "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
        }
    };
    polyline(vtop, vr, false, "#1f5fa8");
    polyline(itop, ir, true, "#b22222");

    if (opt.threshold) {
        for (double th : {*opt.threshold, -*opt.threshold}) {
            const double py = y_in(itop, ir, th);
            s += "<line x1=\"" + detail::fmt("%.1f", margin_l) + "\" x2=\"" +
                 detail::fmt("%.1f", margin_l + pw) + "\" y1=\"" + detail::fmt("%.1f", py) +
                 "\" y2=\"" + detail::fmt("%.1f", py) +
                 "\" stroke=\"#2a8a2a\" stroke-dasharray=\"6,4\"/>\n";
        }
    }

    for (const auto& row : rows) {
        if (row.annotation != Annotation::read || !row.i) {
            continue;
        }
        s += "<circle cx=\"" + detail::fmt("%.2f", x_of(row.t)) + "\" cy=\"" +
             detail::fmt("%.2f", y_in(itop, ir, *row.i)) +
             "\" r=\"3.5\" fill=\"none\" stroke=\"black\"/>\n";
    }

    s += "<text x=\"" + detail::fmt("%.1f", margin_l + pw / 2) + "\" y=\"" +
         detail::fmt("%.1f", height - 10) + "\" text-anchor=\"middle\">t (s): " +
         detail::fmt("%.4g", t0) + " .. " + detail::fmt("%.4g", t1) + "</text>\n";
    s += "</svg>\n";
    return s;
}

/// Current as a sparkline, bucketed to at most `width` cells. Each cell shows
/// the sample of largest magnitude in its bucket.
inline std::string render_sparkline(const Trace& trace, std::size_t width = 80) {
    std::vector<double> values;
    for (const auto& r : trace.rows()) {
        if (r.i) {
            values.push_back(*r.i);
        }
    }
    if (values.empty()) {
        throw TraceError("cannot plot a trace without currents");
    }
    width = std::max<std::size_t>(1, std::min(width, values.size()));
    std::vector<double> cells(width, 0.0);
    for (std::size_t c = 0; c < width; ++c) {
        const std::size_t begin = c * values.size() / width;
        const std::size_t end = (c + 1) * values.size() / width;
        double pick = values[begin];
        for (std::size_t k = begin; k < end; ++k) {
            if (std::abs(values[k]) > std::abs(pick)) {
                pick = values[k];
            }
        }
        cells[c] = pick;
    }
    static const char* const kBlocks[] = {"▁", "▂", "▃", "▄",
                                          "▅", "▆", "▇", "█"};
    const auto [lo_it, hi_it] = std::minmax_element(cells.begin(), cells.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::string out;
    for (double x : cells) {
        int level = 0;
        if (hi > lo) {
            level = static_cast<int>(std::floor((x - lo) / (hi - lo) * 7.0 + 0.5));
        }
        out += kBlocks[std::clamp(level, 0, 7)];
    }
    return out;
}

} // namespace memspike
