#pragma once

#include <stdexcept>
#include <string>

namespace ouprem {

/// Argument outside the admissible domain of an operation (theta beyond
/// Theta_L, negative spike state, T < t, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested operation is not available for this Levy model
/// (e.g. infinite-activity subordinators in simulation).
class UnsupportedModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The Riccati solution ceases to exist before the requested horizon.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, double truncation_time)
        : std::runtime_error(what), truncation_time_(truncation_time) {}

    double truncation_time() const noexcept { return truncation_time_; }

private:
    double truncation_time_;
};

/// Operation only defined for a different Riccati classification.
class WrongCase : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A thinning step found an intensity above its dominating envelope.
class EnvelopeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ouprem
