#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixbench {

enum class ErrorKind {
    invalid_argument,
    domain,
    coherence,
    aliasing,
    insufficient_bandwidth,
    no_compression,
    compression_not_found,
    immeasurable_im3,
    too_hot,
    wrong_stimulus,
    below_floor,
    config,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so
/// the harness can record it per measurement instead of aborting the run.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mixbench
