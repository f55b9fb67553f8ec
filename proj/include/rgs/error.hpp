#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rgs {

// Malformed or truncated input data. `offset` is the byte position in the
// input when known, -1 otherwise.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& message, std::int64_t offset = -1)
        : std::runtime_error(offset >= 0 ? message + " (at byte " + std::to_string(offset) + ")"
                                         : message),
          offset_(offset) {}

    std::int64_t offset() const noexcept { return offset_; }

private:
    std::int64_t offset_;
};

// Invalid in-memory values handed to an operation (non-finite attribute,
// index out of range, degenerate camera, ...).
class ValueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rgs
