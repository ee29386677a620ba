#pragma once

#include <stdexcept>
#include <string>

namespace topood {

/// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Memory or size budget exceeded. The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A long-running computation was cancelled through its cancellation flag.
class Cancelled : public std::runtime_error {
public:
    Cancelled() : std::runtime_error("cancelled") {}
};

} // namespace topood
