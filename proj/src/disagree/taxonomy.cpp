#include "disagree/taxonomy.hpp"

#include <cmath>
#include <sstream>

#include "disagree/error.hpp"

namespace disagree {

namespace {

constexpr double kFeasibilityTol = 1e-9;
constexpr double kInputSimplexTol = 1e-6;

Taxonomy make_task1() {
  Taxonomy t;
  t.task = TaskId::task1;
  t.categories = {"YES", "NO"};
  t.multilabel = false;
  t.no_index = 1;
  return t;
}

Taxonomy make_task2() {
  Taxonomy t;
  t.task = TaskId::task2;
  t.categories = {"NO", "DIRECT", "REPORTED", "JUDGEMENTAL"};
  t.multilabel = false;
  t.no_index = 0;
  return t;
}

Taxonomy make_task3() {
  Taxonomy t;
  t.task = TaskId::task3;
  t.categories = {"NO",
                  "IDEOLOGICAL-INEQUALITY",
                  "STEREOTYPING-DOMINANCE",
                  "OBJECTIFICATION",
                  "SEXUAL-VIOLENCE",
                  "MISOGYNY-NON-SEXUAL-VIOLENCE"};
  t.multilabel = true;
  t.no_index = 0;
  return t;
}

}  // namespace

const char* task_name(TaskId task) {
  switch (task) {
    case TaskId::task1: return "task1";
    case TaskId::task2: return "task2";
    case TaskId::task3: return "task3";
  }
  return "?";
}

std::optional<TaskId> task_from_name(std::string_view name) {
  if (name == "task1") return TaskId::task1;
  if (name == "task2") return TaskId::task2;
  if (name == "task3") return TaskId::task3;
  return std::nullopt;
}

std::optional<std::size_t> Taxonomy::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < categories.size(); ++i)
    if (categories[i] == name) return i;
  return std::nullopt;
}

std::string_view Taxonomy::parent_of(std::string_view category) const {
  if (task == TaskId::task1) return "";
  if (category == "NO") return "";
  return "YES";
}

const Taxonomy& taxonomy_for(TaskId task) {
  static const Taxonomy t1 = make_task1();
  static const Taxonomy t2 = make_task2();
  static const Taxonomy t3 = make_task3();
  switch (task) {
    case TaskId::task1: return t1;
    case TaskId::task2: return t2;
    case TaskId::task3: return t3;
  }
  fail(ErrorCode::invalid_argument, "unknown task id");
}

bool is_feasible(const SoftAssignment& a, int n, TaskId task) {
  const Taxonomy& tax = taxonomy_for(task);
  if (n < 1 || a.values.size() != tax.size()) return false;
  long long total = 0;
  for (double v : a.values) {
    if (!std::isfinite(v)) return false;
    double k = std::round(v * n);
    if (k < 0 || k > n) return false;
    if (std::abs(v - k / n) > kFeasibilityTol) return false;
    total += static_cast<long long>(k);
  }
  if (!tax.multilabel && total != n) return false;
  return true;
}

void validate_soft(SoftAssignment& a, TaskId task, std::string_view item_id) {
  const Taxonomy& tax = taxonomy_for(task);
  if (a.values.size() != tax.size())
    fail(ErrorCode::invalid_probability,
         std::string("item '") + std::string(item_id) + "': expected " +
             std::to_string(tax.size()) + " probabilities, got " +
             std::to_string(a.values.size()));
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double v = a.values[i];
    if (!std::isfinite(v) || v < -kFeasibilityTol || v > 1.0 + kFeasibilityTol) {
      std::ostringstream os;
      os << "item '" << item_id << "', category '" << tax.categories[i]
         << "': probability " << v << " outside [0,1]";
      fail(ErrorCode::invalid_probability, os.str());
    }
    if (v < 0.0) a.values[i] = 0.0;
    if (v > 1.0) a.values[i] = 1.0;
  }
  if (!tax.multilabel) {
    double s = a.sum();
    if (std::abs(s - 1.0) > kInputSimplexTol) {
      std::ostringstream os;
      os << "item '" << item_id << "': probabilities sum to " << s
         << ", not a distribution over " << task_name(task) << " categories";
      fail(ErrorCode::invalid_probability, os.str());
    }
    if (std::abs(s - 1.0) > kFeasibilityTol) {
      for (double& v : a.values) v /= s;
    }
  }
}

void validate_hard(const HardAssignment& h, TaskId task, std::string_view item_id) {
  const Taxonomy& tax = taxonomy_for(task);
  const std::string id(item_id);
  if (h.labels.empty())
    fail(ErrorCode::schema_violation, "item '" + id + "': empty label set");
  if (!tax.multilabel && h.labels.size() != 1)
    fail(ErrorCode::schema_violation,
         "item '" + id + "': " + task_name(task) + " labels must be a single category");
  for (std::size_t i = 0; i < h.labels.size(); ++i) {
    if (h.labels[i] >= tax.size())
      fail(ErrorCode::unknown_category, "item '" + id + "': label index out of range");
    if (i > 0 && h.labels[i] <= h.labels[i - 1])
      fail(ErrorCode::schema_violation,
           "item '" + id + "': labels must be strictly increasing canonical indices");
  }
  if (h.labels.size() > 1 && h.contains(static_cast<std::uint32_t>(tax.no_index)))
    fail(ErrorCode::schema_violation,
         "item '" + id + "': NO cannot co-occur with another label");
}

}  // namespace disagree
