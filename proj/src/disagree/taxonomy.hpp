#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace disagree {

enum class TaskId : int { task1 = 1, task2 = 2, task3 = 3 };

const char* task_name(TaskId task);
std::optional<TaskId> task_from_name(std::string_view name);

// Probability per category, indexed by the task's canonical category order.
// Tasks 1-2 are stochastic (values sum to 1); task 3 values are independent
// per-category probabilities in [0,1] with no sum constraint.
struct SoftAssignment {
  std::vector<double> values;

  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

// Non-empty set of categories as sorted canonical indices. Singleton for
// tasks 1-2; NO never co-occurs with another label.
struct HardAssignment {
  std::vector<std::uint32_t> labels;

  bool contains(std::uint32_t idx) const {
    for (std::uint32_t l : labels)
      if (l == idx) return true;
    return false;
  }
};

struct Taxonomy {
  TaskId task;
  std::vector<std::string> categories;  // canonical order, fixed
  bool multilabel;
  std::size_t no_index;  // position of "NO"

  std::size_t size() const { return categories.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  // Depth-2 tree: YES and NO hang off the root, and every non-NO category of
  // tasks 2-3 is a child of YES. Root children return "".
  std::string_view parent_of(std::string_view category) const;
};

// Fixed taxonomies; deterministic, category order stable across processes.
const Taxonomy& taxonomy_for(TaskId task);

// True iff every value equals k/n for an integer 0 <= k <= n within 1e-9,
// and (tasks 1-2) the counts sum to n.
bool is_feasible(const SoftAssignment& a, int n, TaskId task);

// Validity checks used by ingestion and by every operation that builds
// assignments. validate_soft renormalizes tasks 1-2 when the sum is within
// the 1e-6 input tolerance but off by more than 1e-9; throws
// InvalidProbability otherwise. Values may stray outside [0,1] by at most
// 1e-9 and are clamped back.
void validate_soft(SoftAssignment& a, TaskId task, std::string_view item_id);
void validate_hard(const HardAssignment& h, TaskId task, std::string_view item_id);

}  // namespace disagree
