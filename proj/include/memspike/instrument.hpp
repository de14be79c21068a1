#pragma once

// Virtual source-measure unit. Gate logic and experiments talk to a
// SourceMeasurePort only; the simulated device and the replay of a stored
// trace are two implementations.
//
// Clock: the port samples on a fixed grid. The first set_level() on a fresh
// port applies at step 0; every later set_level() first moves one step
// forward. elapse() idles for a whole number of steps at the current level.

#include "memspike/device.hpp"
#include "memspike/errors.hpp"
#include "memspike/trace.hpp"
#include "memspike/waveform.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace memspike {

class SourceMeasurePort {
public:
    virtual ~SourceMeasurePort() = default;

    /// Step to the next sample instant and switch the source to `volts`.
    virtual void set_level(double volts) = 0;
    /// Current at the present sample instant.
    virtual double read() = 0;
    /// Hold the present level for `seconds` (a whole number of timesteps).
    virtual void elapse(double seconds) = 0;

    [[nodiscard]] virtual double timestep() const = 0;
    /// Step index of the present sample instant.
    [[nodiscard]] virtual std::int64_t step() const = 0;
    [[nodiscard]] virtual double level() const = 0;
};

namespace detail {

inline std::int64_t whole_steps(double seconds, double timestep) {
    if (!(seconds > 0.0)) {
        throw ParameterError("elapse: duration must be > 0");
    }
    const double n = seconds / timestep;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
        throw ParameterError("elapse: " + std::to_string(seconds) +
                             " s is not a whole number of timesteps");
    }
    return static_cast<std::int64_t>(rounded);
}

class StepClock {
public:
    /// Advance to the next sample instant; returns the number of steps moved.
    std::int64_t next_sample() {
        if (!started_) {
            started_ = true;
            return 0;
        }
        ++step_;
        return 1;
    }

    void idle(std::int64_t steps) {
        started_ = true;
        step_ += steps;
    }

    [[nodiscard]] std::int64_t step() const { return step_; }

private:
    std::int64_t step_ = 0;
    bool started_ = false;
};

} // namespace detail

/// Drives a simulated Device. set_level = advance(one step) + apply_voltage,
/// read = sample_current, elapse = advance. Holding 0 V for at least the
/// device's zero_hold verifies that the memory has been erased.
class SimulatedPort final : public SourceMeasurePort {
public:
    SimulatedPort(const DeviceParams& params, std::uint64_t seed,
                  double timestep = kDefaultTimestep)
        : device_(params, seed), timestep_(timestep) {
        if (!(timestep > 0.0)) {
            throw ParameterError("port timestep must be > 0");
        }
    }

    void set_level(double volts) override {
        if (clock_.next_sample() > 0) {
            device_.advance(timestep_);
        }
        device_.apply_voltage(volts);
    }

    double read() override { return device_.sample_current(); }

    void elapse(double seconds) override {
        const auto steps = detail::whole_steps(seconds, timestep_);
        const double duration = static_cast<double>(steps) * timestep_;
        device_.advance(duration);
        clock_.idle(steps);
        if (device_.state().v_applied == 0.0 &&
            duration >= device_.params().zero_hold * (1.0 - 1e-12)) {
            device_.verify_zeroed();
        }
    }

    [[nodiscard]] double timestep() const override { return timestep_; }
    [[nodiscard]] std::int64_t step() const override { return clock_.step(); }
    [[nodiscard]] double level() const override { return device_.state().v_applied; }

    [[nodiscard]] const Device& device() const { return device_; }

private:
    Device device_;
    double timestep_;
    detail::StepClock clock_;
};

inline SimulatedPort simulated_port(const DeviceParams& params, std::uint64_t seed,
                                    double timestep = kDefaultTimestep) {
    return SimulatedPort(params, seed, timestep);
}

/// Plays back a recorded trace. The caller must drive exactly the recorded
/// voltage sequence on the recorded time grid; read() returns the stored
/// currents.
class ReplayPort final : public SourceMeasurePort {
public:
    explicit ReplayPort(Trace trace) : trace_(std::move(trace)) {}

    void set_level(double volts) override {
        clock_.next_sample();
        if (cursor_ >= trace_.size()) {
            throw ReplayExhausted("replay exhausted: no recorded sample for step " +
                                  std::to_string(clock_.step()));
        }
        const auto& row = trace_[cursor_];
        if (row.step != clock_.step()) {
            throw ReplayDivergence(clock_.step(), "recording has the next sample at step " +
                                                      std::to_string(row.step));
        }
        if (std::abs(row.v - volts) > 1e-9 * std::max(1.0, std::abs(volts))) {
            throw ReplayDivergence(clock_.step(), "set_level(" + std::to_string(volts) +
                                                      " V) but recording has " +
                                                      std::to_string(row.v) + " V");
        }
        current_ = cursor_++;
        has_current_ = true;
    }

    double read() override {
        if (!has_current_) {
            throw ReplayExhausted("replay: read() before any set_level()");
        }
        const auto& row = trace_[current_];
        if (!row.i) {
            throw ReplayExhausted("replay: step " + std::to_string(row.step) +
                                  " has no recorded current");
        }
        return *row.i;
    }

    void elapse(double seconds) override {
        clock_.idle(detail::whole_steps(seconds, trace_.timestep()));
    }

    [[nodiscard]] double timestep() const override { return trace_.timestep(); }
    [[nodiscard]] std::int64_t step() const override { return clock_.step(); }
    [[nodiscard]] double level() const override {
        return has_current_ ? trace_[current_].v : 0.0;
    }

    [[nodiscard]] std::size_t remaining() const { return trace_.size() - cursor_; }

private:
    Trace trace_;
    detail::StepClock clock_;
    std::size_t cursor_ = 0;
    std::size_t current_ = 0;
    bool has_current_ = false;
};

inline ReplayPort replay_port(Trace trace) { return ReplayPort(std::move(trace)); }

/// Carries whatever was recorded before the port failed.
class RecordError : public Error {
public:
    RecordError(const std::string& what, Trace partial)
        : Error("record failed: " + what), partial_(std::move(partial)) {}

    [[nodiscard]] const Trace& partial() const { return partial_; }

private:
    Trace partial_;
};

/// Drive `waveform` through `port` step by step, appending one row per
/// sample instant to `out`.
inline void record_into(SourceMeasurePort& port, const Waveform& waveform, Trace& out) {
    waveform.validate();
    if (std::abs(waveform.timestep - port.timestep()) > 1e-12) {
        throw WaveformError("waveform timestep does not match the port");
    }
    std::size_t next_event = 0;
    double level = 0.0;
    for (std::int64_t k = 0; k <= waveform.last_step(); ++k) {
        Annotation ann = Annotation::plain;
        if (next_event < waveform.events.size() && waveform.events[next_event].step == k) {
            level = waveform.events[next_event].volts;
            ann = waveform.events[next_event].annotation;
            ++next_event;
        }
        try {
            port.set_level(level);
            const double i = port.read();
            out.append(port.step(), level, i, ann);
        } catch (const Error& e) {
            throw RecordError(e.what(), out);
        }
    }
}

inline Trace record(SourceMeasurePort& port, const Waveform& waveform) {
    Trace trace(port.timestep());
    record_into(port, waveform, trace);
    return trace;
}

} // namespace memspike
