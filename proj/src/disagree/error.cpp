#include "disagree/error.hpp"

namespace disagree {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "Ok";
    case ErrorCode::malformed_json: return "MalformedJson";
    case ErrorCode::schema_violation: return "SchemaViolation";
    case ErrorCode::duplicate_id: return "DuplicateId";
    case ErrorCode::invalid_probability: return "InvalidProbability";
    case ErrorCode::unknown_category: return "UnknownCategory";
    case ErrorCode::mixed_kinds: return "MixedKinds";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::id_mismatch: return "IdMismatch";
    case ErrorCode::task_mismatch: return "TaskMismatch";
    case ErrorCode::empty_candidates: return "EmptyCandidates";
    case ErrorCode::empty_gold: return "EmptyGold";
    case ErrorCode::no_valid_votes: return "NoValidVotes";
    case ErrorCode::grid_too_large: return "GridTooLarge";
    case ErrorCode::missing_annotator_count: return "MissingAnnotatorCount";
    case ErrorCode::degenerate_anchors: return "DegenerateAnchors";
    case ErrorCode::unsupported_task: return "UnsupportedTask";
    case ErrorCode::mixed_modes: return "MixedModes";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace disagree
