#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riesz {

/// Argument outside the domain of an operation (bad window, too few points, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation of a pair potential or drift at a coincident point.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The integrator could not find an admissible step within its retry budget.
class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, std::size_t step_index, std::size_t first, std::size_t second)
        : std::runtime_error(what), step_index_(step_index), first_(first), second_(second) {}

    std::size_t step_index() const noexcept { return step_index_; }
    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t step_index_;
    std::size_t first_;
    std::size_t second_;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experiment name not recognised.
class UnknownExperiment : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace riesz
