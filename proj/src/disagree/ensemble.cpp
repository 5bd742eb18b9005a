#include "disagree/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disagree/error.hpp"

namespace disagree {

Run mean_ensemble(const std::vector<const Run*>& runs, const std::vector<double>& weights) {
  if (runs.size() < 2)
    fail(ErrorCode::invalid_argument, "ensemble needs at least 2 runs, got " +
                                          std::to_string(runs.size()));
  const Run& first = *runs[0];
  for (const Run* r : runs) {
    if (r->task != first.task)
      fail(ErrorCode::task_mismatch, "run '" + r->name + "' is for " + task_name(r->task) +
                                         ", expected " + task_name(first.task));
    if (r->kind != RunKind::soft)
      fail(ErrorCode::mixed_kinds, "ensemble requires soft runs; '" + r->name + "' is hard");
  }
  for (std::size_t r = 1; r < runs.size(); ++r) {
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    for (const auto& e : first.entries)
      if (runs[r]->find(e.id) == nullptr && missing.size() < 5) missing.push_back(e.id);
    for (const auto& e : runs[r]->entries)
      if (first.find(e.id) == nullptr && extra.size() < 5) extra.push_back(e.id);
    if (!missing.empty() || !extra.empty() ||
        runs[r]->entries.size() != first.entries.size()) {
      std::ostringstream os;
      os << "run '" << runs[r]->name << "' id set differs from '" << first.name << "'";
      if (!missing.empty()) {
        os << "; missing:";
        for (const auto& id : missing) os << " '" << id << "'";
      }
      if (!extra.empty()) {
        os << "; extra:";
        for (const auto& id : extra) os << " '" << id << "'";
      }
      fail(ErrorCode::id_mismatch, os.str());
    }
  }

  std::vector<double> w = weights;
  if (w.empty()) {
    w.assign(runs.size(), 1.0 / static_cast<double>(runs.size()));
  } else {
    if (w.size() != runs.size())
      fail(ErrorCode::invalid_argument, std::to_string(w.size()) + " weights for " +
                                            std::to_string(runs.size()) + " runs");
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x))
        fail(ErrorCode::invalid_argument, "weights must be non-negative finite reals");
      total += x;
    }
    if (total <= 0.0) fail(ErrorCode::invalid_argument, "weights sum to zero");
    for (double& x : w) x /= total;
  }

  Run out;
  out.task = first.task;
  out.kind = RunKind::soft;
  {
    std::ostringstream name;
    name << "mean(";
    for (std::size_t r = 0; r < runs.size(); ++r)
      name << (r ? "," : "") << runs[r]->name;
    name << ")";
    out.name = name.str();
  }

  const std::size_t width = taxonomy_for(first.task).size();
  for (const auto& e0 : first.entries) {
    RunEntry entry;
    entry.id = e0.id;
    SoftAssignment mix;
    mix.values.resize(width);
    const SoftAssignment& base = e0.soft();
    for (std::size_t c = 0; c < width; ++c) {
      // anchored form of sum_r w_r * p_r: identical inputs stay bit-identical
      double delta = 0.0;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        const double p = runs[r]->find(e0.id)->soft().values[c];
        delta += w[r] * (p - base.values[c]);
      }
      mix.values[c] = std::clamp(base.values[c] + delta, 0.0, 1.0);
    }
    validate_soft(mix, out.task, entry.id);
    entry.value = std::move(mix);
    out.entries.push_back(std::move(entry));
  }
  out.rebuild_index();
  return out;
}

Run harden_run(const Run& run, double task3_threshold) {
  if (run.kind != RunKind::soft)
    fail(ErrorCode::invalid_argument, "harden requires a soft run");
  Run out;
  out.name = run.name;
  out.task = run.task;
  out.kind = RunKind::hard;
  for (const auto& e : run.entries) {
    RunEntry entry;
    entry.id = e.id;
    entry.value = harden_soft(e.soft(), run.task, task3_threshold);
    out.entries.push_back(std::move(entry));
  }
  out.rebuild_index();
  return out;
}

std::size_t select_best_run(const std::vector<const Run*>& candidates,
                            const GoldStandard& dev_gold, const std::string& metric,
                            EvalMode mode, const MetricConfig& cfg) {
  if (candidates.empty()) fail(ErrorCode::empty_candidates, "no candidate runs");
  const bool lower_is_better = metric == kMetricCrossEntropy;
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const EvalReport report = evaluate(*candidates[i], dev_gold, mode, cfg);
    const double* v = report.metric(metric);
    if (v == nullptr)
      fail(ErrorCode::invalid_argument, "metric '" + metric + "' is not computable in " +
                                            mode_name(mode) + " mode for " +
                                            task_name(dev_gold.task));
    const double score = *v;
    if (i == 0 || (lower_is_better ? score < best_score : score > best_score)) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace disagree
