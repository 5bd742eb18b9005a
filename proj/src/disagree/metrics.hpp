#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "disagree/gold.hpp"
#include "disagree/ingest.hpp"
#include "disagree/taxonomy.hpp"

namespace disagree {

// Information-contrast constants. The canonical setting alpha1 = alpha2 = 2,
// beta = 3 makes the score of a perfect prediction equal the mean gold
// information content.
struct MetricConfig {
  double alpha1 = 2.0;
  double alpha2 = 2.0;
  double beta = 3.0;
  double ce_epsilon = 1e-12;  // clamp for log of zero predictions
  bool f1_include_no = false;
};

// Empirical category probabilities over the hard gold and their information
// content in bits. Categories absent from the gold get p = 1/(2*items) so
// predicting them stays finite.
struct CategoryStats {
  std::vector<double> p;
  std::vector<double> ic;  // -log2 p
};

enum class EvalMode { soft_soft = 0, hard_hard = 1, hard_soft = 2 };

const char* mode_name(EvalMode mode);
std::optional<EvalMode> mode_from_name(std::string_view name);

inline constexpr const char* kMetricIcmSoft = "icm-soft";
inline constexpr const char* kMetricIcmSoftNorm = "icm-soft-norm";
inline constexpr const char* kMetricIcmHard = "icm-hard";
inline constexpr const char* kMetricIcmHardNorm = "icm-hard-norm";
inline constexpr const char* kMetricCrossEntropy = "cross-entropy";
inline constexpr const char* kMetricF1 = "f1";

struct EvalReport {
  std::string run_name;
  TaskId task = TaskId::task1;
  EvalMode mode = EvalMode::soft_soft;
  std::size_t item_count = 0;
  std::vector<std::pair<std::string, double>> metrics;     // column order
  std::vector<std::pair<std::string, double>> normalized;  // column order
  std::map<std::string, std::string> provenance;

  const double* metric(std::string_view name) const;
};

CategoryStats fit_category_stats(const GoldStandard& gold);

// Mean over items of a1*IC(A) + a2*IC(B) - b*IC(A u B) with IC(S) the sum of
// per-category information contents (shared categories counted once).
double icm_hard(const Run& pred, const GoldStandard& gold, const CategoryStats& stats,
                const MetricConfig& cfg = {});

// Probability-weighted variant: IC(X) = sum_c X(c)*ic(c) and the union takes
// the per-category max. Hard runs are scored as degenerate distributions
// (selected categories at probability 1).
double icm_soft(const Run& pred, const GoldStandard& gold, const CategoryStats& stats,
                const MetricConfig& cfg = {});

// Affine rescaling anchored at the minority-class baseline (0) and the gold
// oracle (1), clipped to [0,1].
double normalize_score(double x, double gold_score, double floor_score);

// Tasks 1-2 only: mean over items of -sum_c gold(c) * ln(max(pred(c), eps)).
double cross_entropy(const Run& pred, const GoldStandard& gold, const MetricConfig& cfg = {});

// Task 1: F1 of YES. Tasks 2-3: macro F1 over non-NO categories (binary
// relevance per category for task 3). Categories with neither gold nor
// predicted positives are skipped.
double f1_score(const Run& pred, const GoldStandard& gold, const MetricConfig& cfg = {});

// Computes every metric applicable to the mode plus normalized variants
// anchored on internally generated gold and minority baseline runs.
EvalReport evaluate(const Run& pred, const GoldStandard& gold, EvalMode mode,
                    const MetricConfig& cfg = {});

enum class TableFormat { tsv = 0, markdown = 1 };

// Rows sorted descending by the primary metric (ICM-Soft for soft modes,
// ICM-Hard for hard-hard), stable on ties; values printed to 4 decimals.
std::string report_table(const std::vector<const EvalReport*>& reports, TableFormat format);

std::string serialize_reports(const std::vector<const EvalReport*>& reports);
std::vector<EvalReport> parse_reports(std::string_view text, const std::string& source_name);
void save_reports(const std::vector<const EvalReport*>& reports, const std::string& path);
std::vector<EvalReport> load_reports(const std::string& path);

}  // namespace disagree
