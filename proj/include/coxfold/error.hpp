#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace coxfold {

/// Bad user input: malformed files, invalid matrices or automorphisms,
/// violated preconditions. Maps to CLI exit status 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& what, std::vector<std::string> details)
        : std::runtime_error(what), details_(std::move(details)) {}

    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    std::vector<std::string> details_;
};

/// A precondition of an operation did not hold for the arguments given.
class PreconditionError : public InputError {
public:
    using InputError::InputError;
};

/// An internal assertion failed that would contradict the folding theory.
/// Carries a replayable counterexample.
class TheoremViolation : public std::runtime_error {
public:
    TheoremViolation(const std::string& what, nlohmann::json witness)
        : std::runtime_error(what), witness_(std::move(witness)) {}

    const nlohmann::json& witness() const noexcept { return witness_; }

private:
    nlohmann::json witness_;
};

/// Arithmetic failure: coefficient overflow, precision cap exceeded.
class ArithmeticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace coxfold
