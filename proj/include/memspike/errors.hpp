#pragma once

#include <stdexcept>
#include <string>

namespace memspike {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A DeviceParams (or derived setting) violates its invariants.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Source voltage above the instrument compliance limit.
class ComplianceError : public Error {
public:
    using Error::Error;
};

class ZeroingFailure : public Error {
public:
    ZeroingFailure(double residual_u, double residual_s)
        : Error("zeroing failed: residual |u| = " + std::to_string(residual_u) +
                " V, |s| = " + std::to_string(residual_s) + " A"),
          residual_u_(residual_u), residual_s_(residual_s) {}

    [[nodiscard]] double residual_u() const { return residual_u_; }
    [[nodiscard]] double residual_s() const { return residual_s_; }

private:
    double residual_u_;
    double residual_s_;
};

class WaveformError : public Error {
public:
    using Error::Error;
};

class TraceError : public Error {
public:
    using Error::Error;
};

class GateError : public Error {
public:
    using Error::Error;
};

/// The '0' and '1' read currents overlap, so no threshold separates them.
class CalibrationFailure : public Error {
public:
    CalibrationFailure(double max_zero, double min_one)
        : Error("calibration failed: max '0' |i_read| = " + std::to_string(max_zero) +
                " A is not below min '1' |i_read| = " + std::to_string(min_one) + " A"),
          max_zero_(max_zero), min_one_(min_one) {}

    [[nodiscard]] double max_zero() const { return max_zero_; }
    [[nodiscard]] double min_one() const { return min_one_; }

private:
    double max_zero_;
    double min_one_;
};

/// A replay port was driven with a sequence that differs from the recording.
class ReplayDivergence : public Error {
public:
    ReplayDivergence(long long step, const std::string& what)
        : Error("replay diverged at step " + std::to_string(step) + ": " + what), step_(step) {}

    [[nodiscard]] long long step() const { return step_; }

private:
    long long step_;
};

class ReplayExhausted : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace memspike
