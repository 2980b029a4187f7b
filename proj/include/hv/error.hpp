#pragma once

#include <stdexcept>
#include <string>

namespace hv {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (bad phi, malformed file, unknown name).
struct config_error : error {
    using error::error;
};

// A computation could not reach the requested tolerance.
struct precision_error : error {
    using error::error;
};

// A path violates exclusion radii or endpoint chaining.
struct path_error : error {
    using error::error;
};

// Structural failure: malformed operator, irregular point, dependent basis.
struct math_error : error {
    using error::error;
};

// rational_reconstruct found no admissible candidate.
struct no_candidate_error : error {
    using error::error;
};

} // namespace hv
