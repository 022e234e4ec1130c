#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace combo {

enum class ErrorCode {
  invalid_argument,
  out_of_grid,
  invalid_counts,
  trial_finished,
  undefined_rate,
  mle_undefined,
  no_posterior_mass,
  sampler_diverged,
  not_found,
  revision_conflict,
  config_error,
  parse_error,
  dose_mismatch,
  idempotency_conflict,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code lets callers (CLI exit
/// status, HTTP status) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace combo
