/**
 * @file error.cpp
 * @brief Error code names.
 */
#include "specular/error.hpp"

namespace specular {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::precondition: return "precondition";
        case ErrorCode::budget_exhausted: return "budget-exhausted";
        case ErrorCode::infeasible: return "infeasible";
        case ErrorCode::block_too_wide: return "block-too-wide";
        case ErrorCode::parse_error: return "parse-error";
        case ErrorCode::version_mismatch: return "version-mismatch";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace specular
