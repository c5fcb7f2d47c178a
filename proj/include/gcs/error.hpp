#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gcs {

enum class ErrorCode {
    DimensionMismatch = 1,
    NotHermitian,
    NotNormalized,
    Degenerate,
    Singular,
    InvalidGrid,
    Parse,
    Io,
    InvalidArgument,
    NoSolution,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a process-wide sink for non-fatal diagnostics. Passing an empty
/// handler restores the default, which prints to stderr.
void set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

} // namespace gcs
