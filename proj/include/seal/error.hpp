#pragma once

#include <stdexcept>
#include <string>

namespace seal {

/// Base error for everything the pipeline can reject at runtime.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Selection cannot proceed: the p-unlabeled pool emptied while labeling
/// budget remains. Raised instead of silently relaxing the threshold.
class PoolExhaustedError : public Error {
public:
    explicit PoolExhaustedError(const std::string& msg) : Error(msg) {}
};

}  // namespace seal
