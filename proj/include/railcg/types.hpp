#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace railcg {

// All domain times are integer seconds. Strict inequalities on times are
// expressed as +/-1 shifts, which keeps conflict tests exact.
using Seconds = std::int64_t;

struct NoRouteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidKinematicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicatePathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StartFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncidenceMismatchError : std::logic_error {
    using std::logic_error::logic_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace railcg
