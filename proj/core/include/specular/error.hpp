#pragma once
/**
 * @file error.hpp
 * @brief Library exception carrying a machine-readable error code.
 */

#include <stdexcept>
#include <string>

namespace specular {

enum class ErrorCode {
    precondition,
    budget_exhausted,
    infeasible,
    block_too_wide,
    parse_error,
    version_mismatch,
    io_error,
};

/// Stable lowercase name of an error code, as used in JSON reports.
const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Throws Error(precondition) with message when cond is false.
inline void require(bool cond, const std::string& message) {
    if (!cond) throw Error(ErrorCode::precondition, message);
}

}  // namespace specular
