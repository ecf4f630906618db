#pragma once

#include <stdexcept>
#include <string>

namespace idsim {

// Library-wide error type. Invalid input, malformed files and broken
// preconditions all surface as Error; callers that need exit codes map it
// at the boundary (see tools/).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace idsim
