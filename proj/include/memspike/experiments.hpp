#pragma once

// Scripted protocols: shortened square wave, pair-order sweep, OR demo run
// and repeated XOR truth tables. Each returns its trace plus a key=value
// summary.

#include "memspike/device.hpp"
#include "memspike/gate.hpp"
#include "memspike/instrument.hpp"
#include "memspike/trace.hpp"
#include "memspike/waveform.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace memspike {

/// Ordered key=value summary.
class Report {
public:
    void add(std::string key, std::string value) {
        entries_.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, double value) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6g", value);
        add(std::move(key), std::string(buf));
    }
    void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
    void add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
    void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
    void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (const auto& [k, v] : entries_) {
            out += k + "=" + v + "\n";
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct ExperimentOptions {
    double zero_hold = 4.0;
};

// --- shortened square wave -------------------------------------------------

struct SquareWaveOptions {
    double amplitude = 1.0;
    int high_steps = 100; // 2 s: accommodation > 99.99 % complete
    int low_steps = 100;
    int cycles = 3;
    std::optional<int> shortened_cycle = 3;
};

struct SquareWaveResult {
    Trace trace;
    std::vector<double> down_spikes; // current at each falling edge, per cycle
    std::vector<bool> shortened;     // whether that cycle was the shortened one
    /// Every shortened-cycle downward spike is strictly smaller in magnitude
    /// than every full-cycle downward spike.
    bool memory_effect = false;
    Report summary;
};

inline SquareWaveResult exp_square_wave(SourceMeasurePort& port,
                                        const SquareWaveOptions& sw = {},
                                        const ExperimentOptions& opt = {}) {
    const Waveform w = square_wave(sw.amplitude, sw.high_steps, sw.low_steps, sw.cycles,
                                   sw.shortened_cycle, port.timestep());
    SquareWaveResult r;
    r.trace = Trace(port.timestep());
    zero_port(port, opt.zero_hold, r.trace);
    const std::size_t first = r.trace.size();
    record_into(port, w, r.trace);

    int cycle = 0;
    for (std::size_t k = first; k < r.trace.size(); ++k) {
        if (r.trace[k].annotation == Annotation::read) {
            ++cycle;
            r.down_spikes.push_back(*r.trace[k].i);
            r.shortened.push_back(sw.shortened_cycle && *sw.shortened_cycle == cycle);
        }
    }

    double min_full = std::numeric_limits<double>::infinity();
    double max_short = 0.0;
    bool any_short = false;
    bool any_full = false;
    for (std::size_t c = 0; c < r.down_spikes.size(); ++c) {
        const double mag = std::abs(r.down_spikes[c]);
        if (r.shortened[c]) {
            max_short = std::max(max_short, mag);
            any_short = true;
        } else {
            min_full = std::min(min_full, mag);
            any_full = true;
        }
    }
    r.memory_effect = any_short && any_full && max_short < min_full;

    r.summary.add("experiment", std::string("square-wave"));
    r.summary.add("amplitude_V", sw.amplitude);
    r.summary.add("cycles", sw.cycles);
    for (std::size_t c = 0; c < r.down_spikes.size(); ++c) {
        r.summary.add("down_spike_" + std::to_string(c + 1) + "_A", r.down_spikes[c]);
    }
    if (any_short && any_full) {
        r.summary.add("short_to_full_ratio", max_short / min_full);
    }
    r.summary.add("memory_effect", r.memory_effect);
    return r;
}

// --- pair-order sweep ------------------------------------------------------

struct NoncommutativeRow {
    double v_a = 0.0;
    double s1 = 0.0; // 0 -> A, read at A
    double t1 = 0.0; // A -> B, read at B
    double t2 = 0.0; // 0 -> B, read at B
    double s2 = 0.0; // B -> A, read at A
    [[nodiscard]] double difference() const { return (s1 + t1) - (t2 + s2); }
};

struct NoncommutativeResult {
    double v_b = 0.12;
    std::vector<NoncommutativeRow> rows;
    Trace trace;
    bool s1_increasing = true;
    bool t1_decreasing = true;
    bool differences_positive = true; // strictly for v_a < v_b, zero at v_a == v_b
    Report summary;
};

/// 0, v_b/(n-1), ..., v_b.
inline std::vector<double> uniform_grid(double v_b, int points = 13) {
    std::vector<double> g;
    for (int k = 0; k < points; ++k) {
        g.push_back(points == 1 ? v_b : v_b * k / (points - 1));
    }
    return g;
}

/// Closed-form order gap of the model: kappa (1 - e^{-dt/tau_u}) (v_b - v_a).
inline double noncommutative_gap(const DeviceParams& p, double timestep, double v_a,
                                 double v_b) {
    return p.kappa * -std::expm1(-timestep / p.tau_u) * (v_b - v_a);
}

inline NoncommutativeResult exp_noncommutative(SourceMeasurePort& port, double v_b = 0.12,
                                               std::vector<double> v_a_grid = {},
                                               const ExperimentOptions& opt = {}) {
    if (v_a_grid.empty()) {
        v_a_grid = uniform_grid(v_b);
    }
    const auto pairs = pair_sweep(v_b, v_a_grid, port.timestep());
    NoncommutativeResult r;
    r.v_b = v_b;
    r.trace = Trace(port.timestep());
    for (const auto& p : pairs) {
        NoncommutativeRow row;
        row.v_a = p.v_a;
        zero_port(port, opt.zero_hold, r.trace);
        record_into(port, p.ascending, r.trace);
        row.s1 = *r.trace[r.trace.size() - 2].i;
        row.t1 = *r.trace.back().i;
        zero_port(port, opt.zero_hold, r.trace);
        record_into(port, p.descending, r.trace);
        row.t2 = *r.trace[r.trace.size() - 2].i;
        row.s2 = *r.trace.back().i;
        r.rows.push_back(row);
    }
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        if (k > 0) {
            r.s1_increasing = r.s1_increasing && row.s1 > r.rows[k - 1].s1;
            r.t1_decreasing = r.t1_decreasing && row.t1 < r.rows[k - 1].t1;
        }
        if (row.v_a < v_b) {
            r.differences_positive = r.differences_positive && row.difference() > 0.0;
        }
    }

    r.summary.add("experiment", std::string("noncommutative"));
    r.summary.add("v_b_V", v_b);
    for (const auto& row : r.rows) {
        char val[192];
        std::snprintf(val, sizeof val, "v_a:%.4g S1:%.6g T1:%.6g T2:%.6g S2:%.6g diff:%.6g",
                      row.v_a, row.s1, row.t1, row.t2, row.s2, row.difference());
        r.summary.add("row_" + std::to_string(&row - r.rows.data()), std::string(val));
    }
    r.summary.add("s1_increasing", r.s1_increasing);
    r.summary.add("t1_decreasing", r.t1_decreasing);
    r.summary.add("differences_positive", r.differences_positive);
    return r;
}

// --- OR demo ---------------------------------------------------------------

struct OrDemoResult {
    Trace trace;
    std::vector<GateResult> results;
    std::size_t above_threshold = 0;
    bool passed = false; // exactly three reads above threshold
    Report summary;
};

inline OrDemoResult exp_or_demo(SourceMeasurePort& port, const GateSpec& gate = or_gate(),
                                const ExperimentOptions& opt = {}) {
    OrDemoResult r;
    r.trace = Trace(port.timestep());
    GateRunOptions run;
    run.zero_hold = opt.zero_hold;
    for (const auto& row : gate.truth) {
        auto g = run_gate(port, gate, row.b1, row.b2, run);
        r.above_threshold += static_cast<std::size_t>(g.output);
        r.trace.concat(g.trace);
        r.results.push_back(std::move(g));
    }
    r.passed = r.above_threshold == 3;

    r.summary.add("experiment", std::string("or-demo"));
    r.summary.add("threshold_A", gate.threshold);
    for (const auto& g : r.results) {
        r.summary.add("i_read_" + std::to_string(g.b1) + std::to_string(g.b2) + "_A", g.i_read);
    }
    r.summary.add("above_threshold", r.above_threshold);
    r.summary.add("passed", r.passed);
    return r;
}

// --- XOR demo / reproducibility --------------------------------------------

struct XorReproResult {
    TruthTableReport table;
    int runs = 0;
    Report summary;
    [[nodiscard]] bool passed() const { return table.passed(); }
};

inline XorReproResult exp_xor_repro(SourceMeasurePort& port, int runs = 7,
                                    const GateSpec& gate = xor_gate(),
                                    const ExperimentOptions& opt = {}) {
    GateRunOptions run;
    run.zero_hold = opt.zero_hold;
    XorReproResult r;
    r.runs = runs;
    r.table = truth_table(port, gate, runs, run);
    r.summary.add("experiment", std::string(runs == 1 ? "xor-demo" : "xor-repro"));
    r.summary.add("runs", runs);
    r.summary.add("threshold_A", gate.threshold);
    r.summary.add("correct", r.table.correct);
    r.summary.add("total", r.table.total);
    r.summary.add("worst_margin", r.table.worst_margin());
    r.summary.add("passed", r.table.passed());
    return r;
}

/// One XOR truth table.
inline XorReproResult exp_xor_demo(SourceMeasurePort& port, const GateSpec& gate = xor_gate(),
                                   const ExperimentOptions& opt = {}) {
    return exp_xor_repro(port, 1, gate, opt);
}

} // namespace memspike
