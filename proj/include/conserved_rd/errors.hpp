#ifndef CONSERVED_RD_ERRORS_HPP
#define CONSERVED_RD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conserved_rd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveInitial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModeOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndicatorViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeComponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StabilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NaNDetected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrderViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroEquilibriumComponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveValues : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace conserved_rd

#endif  // CONSERVED_RD_ERRORS_HPP
