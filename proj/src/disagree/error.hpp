#pragma once

#include <stdexcept>
#include <string>

namespace disagree {

// Stable error codes. The numeric values are part of the shared-library ABI
// (mirrored by the dk_status enum in the public C header); do not reorder.
enum class ErrorCode : int {
  ok = 0,
  malformed_json = 1,
  schema_violation = 2,
  duplicate_id = 3,
  invalid_probability = 4,
  unknown_category = 5,
  mixed_kinds = 6,
  io_failure = 7,
  id_mismatch = 8,
  task_mismatch = 9,
  empty_candidates = 10,
  empty_gold = 11,
  no_valid_votes = 12,
  grid_too_large = 13,
  missing_annotator_count = 14,
  degenerate_anchors = 15,
  unsupported_task = 16,
  mixed_modes = 17,
  invalid_argument = 18,
  internal = 19,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace disagree
