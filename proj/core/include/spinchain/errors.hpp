#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

// Bad argument values (out-of-range site, mismatched lengths, ...).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An operation was invoked outside its contract (e.g. a kernel that is
// only defined for the plus boundary requested with the empty one).
struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

// A size cap that protects against allocating or iterating 2^L objects.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The parameter regime is invalid for the requested quantity (e.g. the
// first-order measure stops being a probability for epsilon too large).
struct regime_error : std::runtime_error {
    regime_error(const std::string& msg, double threshold)
        : std::runtime_error(msg), epsilon_threshold(threshold) {}
    double epsilon_threshold;
};

// A computation finished but violated one of its own postconditions.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spinchain
