#pragma once

// Single-device temporal logic gates. Two bits are sent as voltage levels one
// timestep apart; the current sampled at the instant the second bit is applied
// is compared in magnitude against a threshold.

#include "memspike/device.hpp"
#include "memspike/errors.hpp"
#include "memspike/instrument.hpp"
#include "memspike/trace.hpp"
#include "memspike/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memspike {

enum class Comparator { magnitude };

struct TruthRow {
    int b1 = 0;
    int b2 = 0;
    int out = 0;
};

inline constexpr double kOrThreshold = 1.8e-8;         // A
inline constexpr double kOrThresholdCaption = 5.0e-9;  // A, the OR figure's stated level
inline constexpr double kXorThreshold = 1.25e-8;       // A

struct GateSpec {
    std::string name;
    BitEncoding encoding;
    double threshold = 0.0;
    Comparator comparator = Comparator::magnitude;
    std::vector<TruthRow> truth;
    /// Unary gates hold the first bit fixed and take their input as the second.
    std::optional<int> fixed_first;

    [[nodiscard]] int decide(double i_read) const { return std::abs(i_read) > threshold ? 1 : 0; }

    [[nodiscard]] std::optional<int> expected(int b1, int b2) const {
        for (const auto& r : truth) {
            if (r.b1 == b1 && r.b2 == b2) {
                return r.out;
            }
        }
        return std::nullopt;
    }

    void validate() const {
        if (!(threshold > 0.0) || !std::isfinite(threshold)) {
            throw GateError("gate '" + name + "': threshold must be > 0");
        }
        if (!encoding.injective()) {
            throw GateError("gate '" + name + "': encoding maps both bits to the same voltage");
        }
        if (truth.empty()) {
            throw GateError("gate '" + name + "': empty truth table");
        }
    }
};

inline GateSpec or_gate() {
    return {"or", {0.01, 0.2}, kOrThreshold, Comparator::magnitude,
            {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}, std::nullopt};
}

inline GateSpec xor_gate() {
    return {"xor", {-0.1, 0.1}, kXorThreshold, Comparator::magnitude,
            {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, std::nullopt};
}

/// XOR with the first bit tied to logical 1.
inline GateSpec not_gate() {
    GateSpec g = xor_gate();
    g.name = "not";
    g.truth = {{1, 0, 1}, {1, 1, 0}};
    g.fixed_first = 1;
    return g;
}

inline GateSpec gate_by_name(std::string_view name) {
    if (name == "or") {
        return or_gate();
    }
    if (name == "xor") {
        return xor_gate();
    }
    if (name == "not") {
        return not_gate();
    }
    throw GateError("unknown gate '" + std::string(name) + "'");
}

struct GateRunOptions {
    bool zero_first = true;
    int gap_steps = 1;
    double zero_hold = 4.0; // s
};

struct GateResult {
    int b1 = 0;
    int b2 = 0;
    int output = 0;
    std::optional<int> expected;
    double i_read = 0.0;
    /// |i_read|/threshold - 1, sign flipped for rows expecting '0', so it is
    /// positive exactly when the row decoded correctly.
    double margin = 0.0;
    Trace trace;

    [[nodiscard]] bool correct() const { return expected && *expected == output; }
};

inline double signed_margin(double i_read, double threshold, int expected) {
    const double m = std::abs(i_read) / threshold - 1.0;
    return expected == 1 ? m : -m;
}

/// Take the port to 0 V and hold it there for `hold` seconds. Logs one
/// `zeroing` row at the start of the interval.
inline void zero_port(SourceMeasurePort& port, double hold, Trace& trace) {
    port.set_level(0.0);
    const double i = port.read();
    trace.append(port.step(), 0.0, i, Annotation::zeroing);
    port.elapse(hold);
}

inline GateResult run_gate(SourceMeasurePort& port, const GateSpec& gate, int b1, int b2,
                           const GateRunOptions& options = {}) {
    if (!(gate.threshold > 0.0)) {
        throw GateError("gate '" + gate.name + "': threshold must be > 0");
    }
    const Waveform w = encode_bits(gate.encoding, b1, b2, options.gap_steps, port.timestep());

    GateResult result;
    result.b1 = b1;
    result.b2 = b2;
    result.trace = Trace(port.timestep());
    if (options.zero_first) {
        zero_port(port, options.zero_hold, result.trace);
    }
    record_into(port, w, result.trace);

    const auto& read_row = result.trace.back();
    result.i_read = *read_row.i;
    result.output = gate.decide(result.i_read);
    result.expected = gate.expected(b1, b2);
    const int want = result.expected.value_or(result.output);
    result.margin = signed_margin(result.i_read, gate.threshold, want);
    return result;
}

inline GateResult run_not(SourceMeasurePort& port, int a, const GateRunOptions& options = {},
                          const GateSpec& gate = xor_gate()) {
    return run_gate(port, gate, 1, a, options);
}

struct RowSummary {
    TruthRow row;
    std::size_t runs = 0;
    std::size_t correct = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

struct TruthTableReport {
    std::string gate;
    std::vector<GateResult> results; // row-major within each repeat
    std::vector<RowSummary> rows;
    std::size_t correct = 0;
    std::size_t total = 0;
    Trace trace;

    [[nodiscard]] bool passed() const { return total > 0 && correct == total; }

    [[nodiscard]] double worst_margin() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& r : rows) {
            m = std::min(m, r.min_margin);
        }
        return m;
    }

    /// Row with the smallest margin.
    [[nodiscard]] const RowSummary& weakest_row() const {
        return *std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.min_margin < b.min_margin;
        });
    }
};

/// Run every truth-table row `repeats` times on one port, zeroing before each
/// run. Results keep their per-run traces; `trace` is the whole session.
inline TruthTableReport truth_table(SourceMeasurePort& port, const GateSpec& gate,
                                    int repeats = 1, const GateRunOptions& options = {}) {
    if (repeats < 1) {
        throw GateError("truth_table: repeats must be >= 1");
    }
    TruthTableReport report;
    report.gate = gate.name;
    report.trace = Trace(port.timestep());
    for (const auto& row : gate.truth) {
        report.rows.push_back({row, 0, 0, std::numeric_limits<double>::infinity()});
    }
    for (int rep = 0; rep < repeats; ++rep) {
        for (std::size_t k = 0; k < gate.truth.size(); ++k) {
            const auto& row = gate.truth[k];
            GateResult r = run_gate(port, gate, row.b1, row.b2, options);
            auto& summary = report.rows[k];
            summary.runs++;
            summary.min_margin = std::min(summary.min_margin, r.margin);
            if (r.correct()) {
                summary.correct++;
                report.correct++;
            }
            report.total++;
            report.trace.concat(r.trace);
            report.results.push_back(std::move(r));
        }
    }
    return report;
}

struct Calibration {
    double threshold = 0.0;
    double max_zero = 0.0; // largest |i_read| among rows expecting '0'
    double min_one = 0.0;  // smallest |i_read| among rows expecting '1'
};

/// Midpoint between the '0' and '1' read-current classes over `trials`
/// passes of the truth table.
inline Calibration calibrate_threshold(SourceMeasurePort& port, const GateSpec& gate,
                                       int trials = 1, const GateRunOptions& options = {}) {
    if (trials < 1) {
        throw GateError("calibrate_threshold: trials must be >= 1");
    }
    double max_zero = 0.0;
    double min_one = std::numeric_limits<double>::infinity();
    bool saw_zero = false;
    bool saw_one = false;
    // Any positive threshold works for collecting reads; only i_read matters.
    GateSpec probe = gate;
    probe.threshold = 1.0;
    for (int t = 0; t < trials; ++t) {
        for (const auto& row : gate.truth) {
            const auto r = run_gate(port, probe, row.b1, row.b2, options);
            const double mag = std::abs(r.i_read);
            if (row.out == 0) {
                max_zero = std::max(max_zero, mag);
                saw_zero = true;
            } else {
                min_one = std::min(min_one, mag);
                saw_one = true;
            }
        }
    }
    if (!saw_zero || !saw_one) {
        throw GateError("calibrate_threshold: truth table needs both '0' and '1' rows");
    }
    if (!(max_zero < min_one)) {
        throw CalibrationFailure(max_zero, min_one);
    }
    return {0.5 * (max_zero + min_one), max_zero, min_one};
}

struct RaceHazardReport {
    bool ok = true;
    double gap_seconds = 0.0;
    double window_seconds = 0.0;
    /// Fraction of the first bit's imprint on the memory left when the
    /// second bit arrives.
    double memory_remaining = 1.0;
    std::string message;
};

/// The memory window is 3 * tau_u; the second bit must arrive inside it.
inline RaceHazardReport check_race_hazard(const GateSpec& gate, int gap_steps,
                                          const DeviceParams& params,
                                          double timestep = kDefaultTimestep) {
    if (gap_steps < 1) {
        throw GateError("check_race_hazard: gap_steps must be >= 1 (bits must be time-separated)");
    }
    RaceHazardReport r;
    r.gap_seconds = static_cast<double>(gap_steps) * timestep;
    r.window_seconds = 3.0 * params.tau_u;
    r.memory_remaining = std::exp(-r.gap_seconds / params.tau_u);
    r.ok = r.gap_seconds <= r.window_seconds * (1.0 + 1e-12);
    if (r.ok) {
        r.message = "ok";
    } else {
        r.message = "race hazard on gate '" + gate.name + "': second bit arrives after " +
                    std::to_string(r.gap_seconds) + " s, outside the " +
                    std::to_string(r.window_seconds) + " s memory window; only " +
                    std::to_string(r.memory_remaining * 100.0) + "% of the memory remains";
    }
    return r;
}

} // namespace memspike
