#pragma once

#include <string>
#include <vector>

#include "disagree/gold.hpp"
#include "disagree/ingest.hpp"
#include "disagree/metrics.hpp"

namespace disagree {

// Weighted mean of soft runs over an identical id set. Weights default to
// uniform and are normalized internally; zero weights are allowed. The mean
// of k identical runs reproduces the run bit-exactly.
Run mean_ensemble(const std::vector<const Run*>& runs,
                  const std::vector<double>& weights = {});

// Argmax (tasks 1-2, canonical tie-break) or threshold rule (task 3),
// identical to hard-gold derivation.
Run harden_run(const Run& run, double task3_threshold = 0.5);

// Index of the candidate scoring best on dev gold under the given metric;
// ties keep the earlier candidate. Cross-entropy selects the minimum, every
// other metric the maximum.
std::size_t select_best_run(const std::vector<const Run*>& candidates,
                            const GoldStandard& dev_gold, const std::string& metric,
                            EvalMode mode, const MetricConfig& cfg = {});

}  // namespace disagree
