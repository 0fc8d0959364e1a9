#pragma once

#include <stdexcept>
#include <string>

namespace corrdyn {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotHermitian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotTraceless : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotAState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotCP : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a dynamical map cannot be inverted at the requested time.
struct SingularMap : std::runtime_error {
    double time;
    double condition_number;
    SingularMap(double t, double cond)
        : std::runtime_error("dynamical map singular at t=" + std::to_string(t) +
                             " (condition number " + std::to_string(cond) + ")"),
          time(t), condition_number(cond) {}
};

// Closed-form rate expressions hit a zero denominator.
struct SingularTime : std::runtime_error {
    double time;
    explicit SingularTime(double t)
        : std::runtime_error("closed-form rates singular at t=" + std::to_string(t)),
          time(t) {}
};

struct ReconstructionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace corrdyn
