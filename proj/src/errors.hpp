// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bms {

enum class ErrorCode {
    InvalidArgument = 1,
    DimensionMismatch,
    NonPositiveSupport,
    NotConvex,
    InvalidMeasure,
    QuadratureFailure,
    OutsideValidity,
    DegenerateFamily,
    Unsupported,
    Config,
    Io,
};

/// Exception carrying a machine-readable code and, where meaningful, a witness:
/// the offending grid node (geometry errors) or radius (measure validation).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::ptrdiff_t witness_node = -1,
          double witness_value = std::nan(""))
        : std::runtime_error(what), code_(code), witness_node_(witness_node),
          witness_value_(witness_value) {}

    ErrorCode code() const noexcept { return code_; }
    std::ptrdiff_t witness_node() const noexcept { return witness_node_; }
    double witness_value() const noexcept { return witness_value_; }

private:
    ErrorCode code_;
    std::ptrdiff_t witness_node_;
    double witness_value_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

}  // namespace bms
