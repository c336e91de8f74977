#pragma once

#include <stdexcept>

namespace emt {

// Exit-code contract for the CLI: IoError -> 2, ValidationError -> 3.
// File-content problems (missing, malformed, wrong depth) are IoError;
// bad parameters and domain violations are ValidationError.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace emt
