#pragma once

#include <stdexcept>
#include <string>

namespace ineqlab {

// Raised when an operation is called outside its domain.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

}  // namespace ineqlab
