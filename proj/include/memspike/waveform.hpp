#pragma once

// Stepped voltage protocols on a fixed sampling grid. Times are integer step
// counts; seconds only appear at I/O boundaries.

#include "memspike/errors.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memspike {

inline constexpr double kDefaultTimestep = 0.02; // s

enum class Annotation { bit1, bit2, read, zeroing, plain };

inline std::string_view to_string(Annotation a) {
    switch (a) {
    case Annotation::bit1: return "bit1";
    case Annotation::bit2: return "bit2";
    case Annotation::read: return "read";
    case Annotation::zeroing: return "zeroing";
    case Annotation::plain: return "plain";
    }
    return "plain";
}

inline std::optional<Annotation> parse_annotation(std::string_view s) {
    for (auto a : {Annotation::bit1, Annotation::bit2, Annotation::read, Annotation::zeroing,
                   Annotation::plain}) {
        if (to_string(a) == s) {
            return a;
        }
    }
    return std::nullopt;
}

/// Switch the source to `volts` at `step` and hold until the next event.
struct VoltageEvent {
    std::int64_t step = 0;
    double volts = 0.0;
    Annotation annotation = Annotation::plain;

    [[nodiscard]] double seconds(double timestep) const {
        return static_cast<double>(step) * timestep;
    }
};

struct Waveform {
    std::vector<VoltageEvent> events;
    double timestep = kDefaultTimestep;

    void validate() const {
        if (!(timestep > 0.0)) {
            throw WaveformError("waveform timestep must be > 0");
        }
        if (events.empty()) {
            throw WaveformError("waveform has no events");
        }
        if (events.front().step != 0) {
            throw WaveformError("waveform must start at step 0");
        }
        for (std::size_t k = 1; k < events.size(); ++k) {
            if (events[k].step <= events[k - 1].step) {
                throw WaveformError("waveform events must be strictly increasing in time");
            }
        }
    }

    [[nodiscard]] std::int64_t last_step() const {
        return events.empty() ? 0 : events.back().step;
    }

    /// The event that switches at exactly `step`, if any.
    [[nodiscard]] const VoltageEvent* event_at(std::int64_t step) const {
        for (const auto& e : events) {
            if (e.step == step) {
                return &e;
            }
            if (e.step > step) {
                break;
            }
        }
        return nullptr;
    }

    [[nodiscard]] double level_at(std::int64_t step) const {
        double v = 0.0;
        for (const auto& e : events) {
            if (e.step > step) {
                break;
            }
            v = e.volts;
        }
        return v;
    }

    [[nodiscard]] std::size_t count(Annotation a) const {
        std::size_t n = 0;
        for (const auto& e : events) {
            n += e.annotation == a ? 1 : 0;
        }
        return n;
    }
};

/// Logical bit to source voltage.
struct BitEncoding {
    double zero_volts = 0.0;
    double one_volts = 0.0;

    [[nodiscard]] double volts(int bit) const {
        if (bit == 0) {
            return zero_volts;
        }
        if (bit == 1) {
            return one_volts;
        }
        throw WaveformError("unknown bit value " + std::to_string(bit));
    }

    [[nodiscard]] bool injective() const { return zero_volts != one_volts; }
};

/// 0 V baseline at step 0, first bit at step 1, second bit `gap_steps` later.
/// For gaps longer than one step the first bit is a one-step pulse followed
/// by 0 V idle. The second bit carries the `read` annotation.
inline Waveform encode_bits(const BitEncoding& encoding, int b1, int b2, int gap_steps = 1,
                            double timestep = kDefaultTimestep) {
    if (gap_steps < 1) {
        throw WaveformError("encode_bits: gap_steps must be >= 1 (bits must be time-separated)");
    }
    const double v1 = encoding.volts(b1);
    const double v2 = encoding.volts(b2);
    Waveform w;
    w.timestep = timestep;
    w.events.push_back({0, 0.0, Annotation::plain});
    w.events.push_back({1, v1, Annotation::bit1});
    if (gap_steps > 1) {
        w.events.push_back({2, 0.0, Annotation::plain});
    }
    w.events.push_back({1 + gap_steps, v2, Annotation::read});
    return w;
}

/// 0 <-> amplitude square wave after a one-step 0 V baseline. Cycle indices
/// are 1-based; the shortened cycle's high phase lasts exactly one step. Each
/// falling edge is annotated `read`, each rising edge `bit1`.
inline Waveform square_wave(double amplitude, int high_steps, int low_steps, int cycles,
                            std::optional<int> shortened_cycle = std::nullopt,
                            double timestep = kDefaultTimestep) {
    if (cycles < 1) {
        throw WaveformError("square_wave: cycles must be >= 1");
    }
    if (high_steps < 1 || low_steps < 1) {
        throw WaveformError("square_wave: high_steps and low_steps must be >= 1");
    }
    if (shortened_cycle && (*shortened_cycle < 1 || *shortened_cycle > cycles)) {
        throw WaveformError("square_wave: shortened cycle out of range");
    }
    Waveform w;
    w.timestep = timestep;
    w.events.push_back({0, 0.0, Annotation::plain});
    std::int64_t step = 1;
    for (int c = 1; c <= cycles; ++c) {
        const int high = (shortened_cycle && *shortened_cycle == c) ? 1 : high_steps;
        w.events.push_back({step, amplitude, Annotation::bit1});
        step += high;
        w.events.push_back({step, 0.0, Annotation::read});
        step += low_steps;
    }
    // Hold the final low phase for its full length.
    if (step - 1 > w.events.back().step) {
        w.events.push_back({step - 1, 0.0, Annotation::plain});
    }
    return w;
}

/// The two orderings of a voltage pair, one timestep apart.
struct PairWaveforms {
    double v_a = 0.0;
    Waveform ascending;  // 0 -> v_a -> v_b
    Waveform descending; // 0 -> v_b -> v_a
};

inline std::vector<PairWaveforms> pair_sweep(double v_b, std::span<const double> v_a_values,
                                             double timestep = kDefaultTimestep) {
    std::vector<PairWaveforms> out;
    out.reserve(v_a_values.size());
    for (double v_a : v_a_values) {
        if (v_a > v_b) {
            throw WaveformError("pair_sweep: v_a = " + std::to_string(v_a) +
                                " exceeds v_b = " + std::to_string(v_b));
        }
        PairWaveforms p;
        p.v_a = v_a;
        p.ascending.timestep = timestep;
        p.ascending.events = {{0, 0.0, Annotation::plain},
                              {1, v_a, Annotation::bit1},
                              {2, v_b, Annotation::bit2}};
        p.descending.timestep = timestep;
        p.descending.events = {{0, 0.0, Annotation::plain},
                               {1, v_b, Annotation::bit1},
                               {2, v_a, Annotation::bit2}};
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace memspike
