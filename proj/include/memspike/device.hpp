#pragma once

// Phenomenological spiking-memristor model.
//
// The measured current is
//
//     i = g_dc * V + s + tail + noise
//
// where s is a fast transient triggered by every change of the source voltage
// and u is an accommodation voltage that relaxes toward the applied voltage.
// A change V_old -> V_new resets the transient to kappa * (V_new - u), so the
// spike size depends on how far the device has "caught up" with the previous
// level. u is the device's short-term memory.

#include "memspike/errors.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace memspike {

struct DeviceParams {
    double kappa = 2.0e-7;        // spike gain, A/V
    double tau_u = 0.02;          // accommodation time constant, s
    double tau_s = 0.007;         // transient decay time constant, s
    double g_dc = 1.0e-7;         // DC conductance, S
    double noise_sigma = 2.0e-10; // Gaussian read noise, A
    double zero_hold = 4.0;       // zeroing duration, s
    double eps_u = 1.0e-6;        // zeroed-memory tolerance, V
    double eps_s = 1.0e-12;       // zeroed-transient tolerance, A
    double compliance = 10.0;     // max |V| the source accepts

    // Optional slow relaxation tail (off when tail_gain == 0). Reset on every
    // voltage change to tail_gain * (V_new - u) and decays with tau_tail.
    double tail_gain = 0.0;       // A/V
    double tau_tail = 2.5;        // s

    static DeviceParams reference() { return {}; }

    static DeviceParams noiseless() {
        DeviceParams p;
        p.noise_sigma = 0.0;
        return p;
    }

    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) {
                throw ParameterError(std::string("invalid device parameter: ") + what);
            }
        };
        require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
        require(std::isfinite(tau_u) && tau_u > 0.0, "tau_u must be > 0");
        require(std::isfinite(tau_s) && tau_s > 0.0, "tau_s must be > 0");
        require(std::isfinite(g_dc) && g_dc >= 0.0, "g_dc must be >= 0");
        require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, "noise_sigma must be >= 0");
        require(std::isfinite(zero_hold) && zero_hold > 0.0, "zero_hold must be > 0");
        require(eps_u > 0.0, "eps_u must be > 0");
        require(eps_s > 0.0, "eps_s must be > 0");
        require(compliance > 0.0, "compliance must be > 0");
        require(std::isfinite(tail_gain) && tail_gain >= 0.0, "tail_gain must be >= 0");
        require(std::isfinite(tau_tail) && tau_tail > 0.0, "tau_tail must be > 0");
    }
};

struct DeviceState {
    double u = 0.0;         // accommodation voltage, V
    double s = 0.0;         // fast transient amplitude, A
    double tail = 0.0;      // slow transient amplitude, A
    double v_applied = 0.0; // held source voltage, V
    double t = 0.0;         // clock, s
};

/// One simulated memristor. Owns its noise generator, so copies evolve
/// independently but identically.
class Device {
public:
    Device(const DeviceParams& params, std::uint64_t seed) : params_(params), rng_(seed) {
        params_.validate();
    }

    /// Hold the current voltage for dt seconds.
    void advance(double dt) {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw ParameterError("advance: dt must be > 0");
        }
        state_.u += (state_.v_applied - state_.u) * -std::expm1(-dt / params_.tau_u);
        state_.s *= std::exp(-dt / params_.tau_s);
        state_.tail *= std::exp(-dt / params_.tau_tail);
        state_.t += dt;
    }

    /// Switch the source to v_new. A change replaces the live transient.
    void apply_voltage(double v_new) {
        if (!std::isfinite(v_new) || std::abs(v_new) > params_.compliance) {
            throw ComplianceError("apply_voltage: |" + std::to_string(v_new) +
                                  " V| exceeds compliance " +
                                  std::to_string(params_.compliance) + " V");
        }
        if (v_new != state_.v_applied) {
            const double dv = v_new - state_.u;
            state_.s = params_.kappa * dv;
            state_.tail = params_.tail_gain * dv;
        }
        state_.v_applied = v_new;
    }

    /// Current measured at this instant. Draws noise; leaves the state alone.
    double sample_current() {
        double i = params_.g_dc * state_.v_applied + state_.s + state_.tail;
        if (params_.noise_sigma > 0.0) {
            i += params_.noise_sigma * normal_(rng_);
        }
        return i;
    }

    /// Hold 0 V for zero_hold seconds, then require the memory to be gone.
    void zero() {
        apply_voltage(0.0);
        advance(params_.zero_hold);
        verify_zeroed();
    }

    void verify_zeroed() const {
        const double residual_s = std::abs(state_.s) + std::abs(state_.tail);
        if (!(std::abs(state_.u) < params_.eps_u) || !(residual_s < params_.eps_s)) {
            throw ZeroingFailure(std::abs(state_.u), residual_s);
        }
    }

    [[nodiscard]] bool is_zeroed() const {
        return std::abs(state_.u) < params_.eps_u &&
               std::abs(state_.s) + std::abs(state_.tail) < params_.eps_s;
    }

    [[nodiscard]] const DeviceState& state() const { return state_; }
    [[nodiscard]] const DeviceParams& params() const { return params_; }

private:
    DeviceParams params_;
    DeviceState state_{};
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Device new_device(const DeviceParams& params, std::uint64_t seed) {
    return Device(params, seed);
}

} // namespace memspike
