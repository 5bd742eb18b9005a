#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "disagree/taxonomy.hpp"

namespace disagree {

// Internal marker for the "no label applies" vote written as "-" or "--" in
// source files. UNKNOWN (annotator gave no label) stays as-is.
inline constexpr const char* kNoneVote = "-";
inline constexpr const char* kUnknownVote = "UNKNOWN";

struct AnnotatedItem {
  std::string id;  // id_EXIST
  std::string lang;
  std::string tweet;
  std::string split;
  int number_annotators = 0;  // 0 = test-format item without annotations
  std::vector<std::string> annotators;
  std::vector<std::string> gender_annotators;
  std::vector<std::string> age_annotators;
  std::vector<std::string> labels_task1;
  std::vector<std::string> labels_task2;  // "-" markers normalized
  std::vector<std::vector<std::string>> labels_task3;

  bool has_annotations() const { return number_annotators > 0; }
};

struct Dataset {
  std::vector<AnnotatedItem> items;  // file order
  std::string source_path;

  const AnnotatedItem* find(std::string_view id) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// Accepts either a JSON array of item objects or a JSON object keyed by id;
// order is preserved. Test-format files carrying only id/lang/tweet/split
// load with empty annotation fields.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::string_view text, const std::string& source_name);

void save_dataset(const Dataset& ds, const std::string& path);
std::string serialize_dataset(const Dataset& ds);

enum class RunKind { soft = 0, hard = 1 };

const char* run_kind_name(RunKind kind);

struct RunEntry {
  std::string id;
  std::variant<SoftAssignment, HardAssignment> value;

  const SoftAssignment& soft() const { return std::get<SoftAssignment>(value); }
  const HardAssignment& hard() const { return std::get<HardAssignment>(value); }
};

// A named set of per-item predictions for one task. Runs are dataset-agnostic:
// ids need not appear in any dataset.
struct Run {
  std::string name;
  TaskId task = TaskId::task1;
  RunKind kind = RunKind::soft;
  std::vector<RunEntry> entries;  // file order

  const RunEntry* find(std::string_view id) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// Loads and validates a run file. Soft values are checked against the task
// simplex (input tolerance 1e-6, renormalized when off by more than 1e-9).
// expect_task, when set, enforces the run's declared task.
Run load_run(const std::string& path, std::optional<TaskId> expect_task = std::nullopt);
Run parse_run(std::string_view text, const std::string& source_name,
              std::optional<TaskId> expect_task = std::nullopt);

// Serialization uses the shortest decimal form that round-trips a 64-bit
// float, so load(save(run)) reproduces every probability exactly.
void save_run(const Run& run, const std::string& path);
std::string serialize_run(const Run& run);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace disagree
