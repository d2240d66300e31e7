// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace spdrag {

enum class ErrorCode {
    runtime = 1,
    config = 2,
    io = 3,
    validation = 4,
    provider = 5,
    usage = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline Error config_error(std::string msg) { return Error(ErrorCode::config, std::move(msg)); }
inline Error io_error(std::string msg) { return Error(ErrorCode::io, std::move(msg)); }
inline Error validation_error(std::string msg) { return Error(ErrorCode::validation, std::move(msg)); }
inline Error provider_error(std::string msg) { return Error(ErrorCode::provider, std::move(msg)); }
inline Error usage_error(std::string msg) { return Error(ErrorCode::usage, std::move(msg)); }

}  // namespace spdrag
