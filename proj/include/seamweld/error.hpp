#pragma once

#include <stdexcept>
#include <string>

namespace seamweld {

enum class ErrorKind {
    IoFailure,          // file could not be read or written
    InvalidInput,       // malformed argument or image (missing alpha, bad flag value, ...)
    DimensionMismatch,  // canvases or patches disagree in size
    EmptyOverlap,       // the two validity masks never intersect
    EmptySeam,          // a label mask with no 0/1 boundary
    UnanchoredCut,      // overlap has no forced-0 or no forced-1 pixel and no caller constraints
    ConstraintConflict, // a node forced to both labels
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace seamweld
