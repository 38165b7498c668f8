#pragma once

#include <stdexcept>
#include <string>

namespace qnn {

// Error taxonomy mirrored by the CLI exit codes: validation -> 1,
// numeric/engine -> 2, io -> 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qnn
