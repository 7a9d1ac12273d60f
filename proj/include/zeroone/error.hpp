#pragma once

#include <stdexcept>
#include <string>

namespace zeroone {

// Exit-code contract: usage errors 1, data errors 2, internal errors 3.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& m) : std::runtime_error(m) {}
};

struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace zeroone
