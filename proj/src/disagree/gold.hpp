#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "disagree/ingest.hpp"
#include "disagree/taxonomy.hpp"

namespace disagree {

struct GoldWarning {
  std::string id;
  std::string reason;
};

struct GoldOptions {
  // Task 3 hard labels take every category whose probability reaches the
  // threshold; tasks 1-2 use the argmax. Tie-breaks follow canonical order.
  double task3_threshold = 0.5;
};

// Soft and hard reference assignments for one task, in dataset order.
// Items whose votes are all UNKNOWN (or absent) are excluded and recorded
// as warnings.
struct GoldStandard {
  TaskId task = TaskId::task1;
  std::vector<std::string> ids;
  std::vector<SoftAssignment> soft;
  std::vector<HardAssignment> hard;
  std::vector<int> n_eff;  // votes counted after UNKNOWN removal; 0 = unknown
  std::vector<GoldWarning> warnings;

  std::size_t size() const { return ids.size(); }
  const SoftAssignment* find_soft(std::string_view id) const;
  const HardAssignment* find_hard(std::string_view id) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// Vote counting. Per item, probability of category c = votes(c) / n_eff.
// "-" votes count toward NO; UNKNOWN votes are dropped from numerator and
// denominator; a task-3 annotator votes once for every category in their
// list. Counts stay in integer arithmetic until the final division.
GoldStandard derive_soft_gold(const Dataset& ds, TaskId task);

// Fills the hard part from the soft part using the thresholding rule.
void derive_hard_gold(GoldStandard& gold, const GoldOptions& opts = {});

GoldStandard derive_gold(const Dataset& ds, TaskId task, const GoldOptions& opts = {});

// Reconstructs a gold standard from a previously saved soft gold run.
GoldStandard gold_from_soft_run(const Run& run, const GoldOptions& opts = {});

// Shared argmax/threshold rule, also used to harden prediction runs.
HardAssignment harden_soft(const SoftAssignment& soft, TaskId task, double task3_threshold);

enum class BaselineKind { gold = 0, majority = 1, minority = 2 };

const char* baseline_name(BaselineKind which);

// gold: copies the gold assignments as a run. majority/minority: every item
// gets the corpus-level most/least frequent hard label set (soft kind encodes
// it as a degenerate distribution).
Run baseline_run(const GoldStandard& gold, BaselineKind which, RunKind kind);

}  // namespace disagree
