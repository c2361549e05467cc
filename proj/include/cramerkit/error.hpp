#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cramer {

enum class ErrorCode {
  invalid_argument,
  non_convex_detected,
  no_convergence,
  zero_scale,
  non_positive_alpha,
  length_mismatch,
  infeasible_start,
  dimension_exceeded,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception thrown by every library routine. The code identifies the
/// failure class so callers (the CLI in particular) can map it to an exit
/// status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cramer
