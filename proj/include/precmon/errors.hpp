#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace precmon {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unparseable input, unknown keys, bad CLI arguments.
struct InputError : Error {
    using Error::Error;
};

// A well-formed instance that violates one or more model constraints.
struct ValidationError : Error {
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Caller broke a documented precondition.
struct ContractError : Error {
    using Error::Error;
};

// Bayes update conditioned on a report that has zero predictive probability.
struct ImpossibleObservation : Error {
    using Error::Error;
};

// Computation declined because it would exceed a configured guard
// (horizon depth or tree node budget). `flag` names the CLI flag to raise.
struct RefusalError : Error {
    RefusalError(const std::string& what, std::string flag)
        : Error(what), flag_(std::move(flag)) {}
    const std::string& flag() const noexcept { return flag_; }

private:
    std::string flag_;
};

}  // namespace precmon
