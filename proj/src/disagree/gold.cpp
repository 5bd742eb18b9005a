#include "disagree/gold.hpp"

#include <algorithm>
#include <map>

#include "disagree/error.hpp"

namespace disagree {

namespace {

std::size_t argmax_canonical(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

// Appends one item's vote counts; returns n_eff (0 when nothing countable).
int count_votes(const AnnotatedItem& item, TaskId task, std::vector<long long>& counts) {
  const Taxonomy& tax = taxonomy_for(task);
  counts.assign(tax.size(), 0);
  int n_eff = 0;
  switch (task) {
    case TaskId::task1:
      for (const auto& vote : item.labels_task1) {
        ++counts[vote == "YES" ? 0 : tax.no_index];
        ++n_eff;
      }
      break;
    case TaskId::task2:
      for (const auto& vote : item.labels_task2) {
        if (vote == kUnknownVote) continue;
        if (vote == kNoneVote) {
          ++counts[tax.no_index];
        } else {
          ++counts[*tax.index_of(vote)];
        }
        ++n_eff;
      }
      break;
    case TaskId::task3:
      for (const auto& votes : item.labels_task3) {
        if (votes.size() == 1 && votes[0] == kUnknownVote) continue;
        if (votes.size() == 1 && votes[0] == kNoneVote) {
          ++counts[tax.no_index];
        } else {
          for (const auto& vote : votes) ++counts[*tax.index_of(vote)];
        }
        ++n_eff;
      }
      break;
  }
  return n_eff;
}

}  // namespace

const SoftAssignment* GoldStandard::find_soft(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &soft[it->second];
}

const HardAssignment* GoldStandard::find_hard(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end() || it->second >= hard.size()) return nullptr;
  return &hard[it->second];
}

void GoldStandard::rebuild_index() {
  index_.clear();
  index_.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = index_.emplace(ids[i], i);
    if (!inserted) fail(ErrorCode::duplicate_id, "duplicate gold id '" + ids[i] + "'");
  }
}

GoldStandard derive_soft_gold(const Dataset& ds, TaskId task) {
  GoldStandard gold;
  gold.task = task;
  std::vector<long long> counts;
  for (const auto& item : ds.items) {
    const int n_eff = item.has_annotations() ? count_votes(item, task, counts) : 0;
    if (n_eff == 0) {
      gold.warnings.push_back(
          {item.id, item.has_annotations() ? "no valid votes after UNKNOWN removal"
                                           : "item carries no annotations"});
      continue;
    }
    SoftAssignment soft;
    soft.values.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
      soft.values[i] = static_cast<double>(counts[i]) / static_cast<double>(n_eff);
    gold.ids.push_back(item.id);
    gold.soft.push_back(std::move(soft));
    gold.n_eff.push_back(n_eff);
  }
  gold.rebuild_index();
  return gold;
}

HardAssignment harden_soft(const SoftAssignment& soft, TaskId task, double task3_threshold) {
  const Taxonomy& tax = taxonomy_for(task);
  HardAssignment hard;
  if (!tax.multilabel) {
    hard.labels.push_back(static_cast<std::uint32_t>(argmax_canonical(soft.values)));
    return hard;
  }
  for (std::size_t i = 0; i < soft.values.size(); ++i)
    if (soft.values[i] >= task3_threshold) hard.labels.push_back(static_cast<std::uint32_t>(i));
  if (hard.labels.empty()) {
    hard.labels.push_back(static_cast<std::uint32_t>(argmax_canonical(soft.values)));
    return hard;
  }
  const auto no_idx = static_cast<std::uint32_t>(tax.no_index);
  if (hard.labels.size() > 1 && hard.contains(no_idx)) {
    if (argmax_canonical(soft.values) == tax.no_index) {
      hard.labels = {no_idx};
    } else {
      hard.labels.erase(std::remove(hard.labels.begin(), hard.labels.end(), no_idx),
                        hard.labels.end());
    }
  }
  return hard;
}

void derive_hard_gold(GoldStandard& gold, const GoldOptions& opts) {
  gold.hard.clear();
  gold.hard.reserve(gold.soft.size());
  for (const auto& soft : gold.soft)
    gold.hard.push_back(harden_soft(soft, gold.task, opts.task3_threshold));
}

GoldStandard derive_gold(const Dataset& ds, TaskId task, const GoldOptions& opts) {
  GoldStandard gold = derive_soft_gold(ds, task);
  derive_hard_gold(gold, opts);
  return gold;
}

GoldStandard gold_from_soft_run(const Run& run, const GoldOptions& opts) {
  if (run.kind != RunKind::soft)
    fail(ErrorCode::mixed_kinds,
         "gold can only be reconstructed from a soft run, got a hard run");
  GoldStandard gold;
  gold.task = run.task;
  for (const auto& entry : run.entries) {
    gold.ids.push_back(entry.id);
    gold.soft.push_back(entry.soft());
    gold.n_eff.push_back(0);
  }
  gold.rebuild_index();
  derive_hard_gold(gold, opts);
  return gold;
}

const char* baseline_name(BaselineKind which) {
  switch (which) {
    case BaselineKind::gold: return "gold";
    case BaselineKind::majority: return "majority_class";
    case BaselineKind::minority: return "minority_class";
  }
  return "?";
}

Run baseline_run(const GoldStandard& gold, BaselineKind which, RunKind kind) {
  if (gold.size() == 0) fail(ErrorCode::empty_gold, "gold standard has no items");
  if (gold.hard.size() != gold.size())
    fail(ErrorCode::empty_gold, "hard gold not derived");

  Run run;
  run.task = gold.task;
  run.kind = kind;
  run.name = baseline_name(which);

  const Taxonomy& tax = taxonomy_for(gold.task);
  HardAssignment constant;
  if (which != BaselineKind::gold) {
    // Corpus-level label-set frequencies; singleton sets for tasks 1-2.
    std::map<std::vector<std::uint32_t>, std::size_t> freq;
    for (const auto& h : gold.hard) ++freq[h.labels];
    auto best = freq.begin();
    for (auto it = std::next(freq.begin()); it != freq.end(); ++it) {
      const bool better = which == BaselineKind::majority ? it->second > best->second
                                                          : it->second < best->second;
      if (better) best = it;  // ties keep the lexicographically first set
    }
    constant.labels = best->first;
  }

  for (std::size_t i = 0; i < gold.size(); ++i) {
    RunEntry entry;
    entry.id = gold.ids[i];
    const HardAssignment& hard =
        which == BaselineKind::gold ? gold.hard[i] : constant;
    if (kind == RunKind::hard) {
      entry.value = hard;
    } else if (which == BaselineKind::gold) {
      entry.value = gold.soft[i];
    } else {
      SoftAssignment soft;
      soft.values.assign(tax.size(), 0.0);
      for (std::uint32_t idx : hard.labels) soft.values[idx] = 1.0;
      entry.value = std::move(soft);
    }
    run.entries.push_back(std::move(entry));
  }
  run.rebuild_index();
  return run;
}

}  // namespace disagree
