#pragma once

// Sampled (step, t, V, I, annotation) series and its CSV form:
//
//     step,t_s,v_V,i_A,annotation
//
// Numbers are written with 12 significant digits. A waveform serialized
// without a device has an empty i_A column.

#include "memspike/errors.hpp"
#include "memspike/waveform.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace memspike {

inline constexpr std::string_view kTraceHeader = "step,t_s,v_V,i_A,annotation";

struct TraceRow {
    std::int64_t step = 0;
    double t = 0.0;
    double v = 0.0;
    std::optional<double> i;
    Annotation annotation = Annotation::plain;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

class Trace {
public:
    explicit Trace(double timestep = kDefaultTimestep) : timestep_(timestep) {}

    void append(std::int64_t step, double v, std::optional<double> i, Annotation a) {
        if (!rows_.empty() && step <= rows_.back().step) {
            throw TraceError("trace steps must be strictly increasing (got " +
                             std::to_string(step) + " after " +
                             std::to_string(rows_.back().step) + ")");
        }
        rows_.push_back({step, static_cast<double>(step) * timestep_, v, i, a});
    }

    /// Append `other`, shifting its steps so they follow this trace.
    void concat(const Trace& other) {
        const std::int64_t offset =
            (rows_.empty() || other.rows_.empty() || other.rows_.front().step > rows_.back().step)
                ? 0
                : rows_.back().step + 1 - other.rows_.front().step;
        for (const auto& r : other.rows_) {
            append(r.step + offset, r.v, r.i, r.annotation);
        }
    }

    [[nodiscard]] const std::vector<TraceRow>& rows() const { return rows_; }
    [[nodiscard]] bool empty() const { return rows_.empty(); }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }
    [[nodiscard]] double timestep() const { return timestep_; }
    [[nodiscard]] const TraceRow& back() const { return rows_.back(); }
    [[nodiscard]] const TraceRow& operator[](std::size_t k) const { return rows_[k]; }

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    double timestep_;
    std::vector<TraceRow> rows_;
};

namespace detail {

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline double parse_number(std::string_view field, std::size_t line) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw TraceError("line " + std::to_string(line) + ": bad number '" +
                         std::string(field) + "'");
    }
    return x;
}

} // namespace detail

inline void write_csv(std::ostream& os, const Trace& trace) {
    os << kTraceHeader << '\n';
    for (const auto& r : trace.rows()) {
        os << r.step << ',' << detail::format_number(r.t) << ',' << detail::format_number(r.v)
           << ',';
        if (r.i) {
            os << detail::format_number(*r.i);
        }
        os << ',' << to_string(r.annotation) << '\n';
    }
}

inline std::string to_csv(const Trace& trace) {
    std::ostringstream os;
    write_csv(os, trace);
    return os.str();
}

inline void save_csv(const std::string& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw TraceError("cannot open '" + path + "' for writing");
    }
    write_csv(out, trace);
    if (!out) {
        throw TraceError("failed writing '" + path + "'");
    }
}

inline Trace read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw TraceError("trace is empty (missing header)");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kTraceHeader) {
        throw TraceError("unexpected trace header '" + line + "'");
    }

    struct Raw {
        std::int64_t step;
        double t;
        double v;
        std::optional<double> i;
        Annotation a;
    };
    std::vector<Raw> raw;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 5) {
            throw TraceError("line " + std::to_string(lineno) + ": expected 5 fields");
        }
        std::int64_t step = 0;
        const auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), step);
        if (ec != std::errc() || ptr != fields[0].data() + fields[0].size() || step < 0) {
            throw TraceError("line " + std::to_string(lineno) + ": bad step");
        }
        const auto ann = parse_annotation(fields[4]);
        if (!ann) {
            throw TraceError("line " + std::to_string(lineno) + ": unknown annotation '" +
                             std::string(fields[4]) + "'");
        }
        std::optional<double> i;
        if (!fields[3].empty()) {
            i = detail::parse_number(fields[3], lineno);
        }
        raw.push_back({step, detail::parse_number(fields[1], lineno),
                       detail::parse_number(fields[2], lineno), i, *ann});
    }

    double timestep = kDefaultTimestep;
    for (const auto& r : raw) {
        if (r.step > 0) {
            timestep = r.t / static_cast<double>(r.step);
            break;
        }
    }
    Trace trace(timestep);
    for (const auto& r : raw) {
        const double expected_t = static_cast<double>(r.step) * timestep;
        if (std::abs(r.t - expected_t) > 1e-9 * std::max(1.0, std::abs(expected_t))) {
            throw TraceError("step " + std::to_string(r.step) + ": t_s is off the sampling grid");
        }
        trace.append(r.step, r.v, r.i, r.a);
    }
    return trace;
}

inline Trace load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw TraceError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

/// Voltage-only trace of a waveform's events (current column empty).
inline Trace waveform_trace(const Waveform& w) {
    w.validate();
    Trace trace(w.timestep);
    for (const auto& e : w.events) {
        trace.append(e.step, e.volts, std::nullopt, e.annotation);
    }
    return trace;
}

} // namespace memspike
