// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <stdexcept>
#include <string>

namespace otsim {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    Io,
    ImageHeader,
    ImageTruncated,
    ImageMaxval,
    Convergence,
    Singular,
    NonFinite,
    CheckFailed,
};

// All library failures are thrown as otsim::Error; the C API maps the code
// onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace otsim
