#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace adrcwave {

enum class ErrorKind {
    Resolution,
    Cfl,
    Parameter,
    Compatibility,
    Divergence,
    Fit,
    Span,
    History,
    Config,
    Io,
};

/// Base error for every failure raised by the library. The kind decides the
/// outcome class reported by the front ends (config, divergence, I/O).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when a stepped field stops being finite or exceeds the amplitude guard.
class DivergenceError : public Error {
public:
    DivergenceError(std::string subsystem, double time)
        : Error(ErrorKind::Divergence,
                "subsystem '" + subsystem + "' diverged at t=" + std::to_string(time)),
          subsystem_(std::move(subsystem)), time_(time) {}

    const std::string& subsystem() const noexcept { return subsystem_; }
    double time() const noexcept { return time_; }

private:
    std::string subsystem_;
    double time_;
};

}  // namespace adrcwave
