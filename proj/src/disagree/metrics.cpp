#include "disagree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "disagree/error.hpp"
#include "disagree/parallel.hpp"
#include "json.hpp"

namespace disagree {

using ordered_json = nlohmann::ordered_json;

namespace {

// Aligns prediction entries to gold order; throws IdMismatch with a sample of
// the symmetric difference.
std::vector<const RunEntry*> align(const Run& pred, const GoldStandard& gold) {
  std::vector<const RunEntry*> aligned(gold.size(), nullptr);
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const RunEntry* e = pred.find(gold.ids[i]);
    if (e == nullptr) {
      if (missing.size() < 5) missing.push_back(gold.ids[i]);
    } else {
      aligned[i] = e;
    }
  }
  std::vector<std::string> extra;
  for (const auto& e : pred.entries)
    if (gold.find_soft(e.id) == nullptr && extra.size() < 5) extra.push_back(e.id);
  if (!missing.empty() || !extra.empty() || pred.entries.size() != gold.size()) {
    std::ostringstream os;
    os << "prediction ids do not match gold ids (" << pred.entries.size() << " vs "
       << gold.size() << ")";
    if (!missing.empty()) {
      os << "; missing from run:";
      for (const auto& id : missing) os << " '" << id << "'";
    }
    if (!extra.empty()) {
      os << "; not in gold:";
      for (const auto& id : extra) os << " '" << id << "'";
    }
    fail(ErrorCode::id_mismatch, os.str());
  }
  return aligned;
}

double set_ic(const HardAssignment& h, const CategoryStats& stats) {
  double ic = 0.0;
  for (std::uint32_t idx : h.labels) ic += stats.ic[idx];
  return ic;
}

double union_ic(const HardAssignment& a, const HardAssignment& b, const CategoryStats& stats) {
  double ic = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.labels.size() || j < b.labels.size()) {
    std::uint32_t next;
    if (j >= b.labels.size() || (i < a.labels.size() && a.labels[i] <= b.labels[j])) {
      next = a.labels[i];
      if (j < b.labels.size() && b.labels[j] == next) ++j;
      ++i;
    } else {
      next = b.labels[j];
      ++j;
    }
    ic += stats.ic[next];
  }
  return ic;
}

// Mean of per-item terms, accumulated sequentially in gold order so results
// do not depend on the worker count.
template <typename ItemFn>
double mean_over_items(std::size_t count, const ItemFn& fn) {
  std::vector<double> terms(count, 0.0);
  parallel_for(count, [&](std::size_t i) { terms[i] = fn(i); });
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / static_cast<double>(count);
}

SoftAssignment degenerate(const HardAssignment& h, std::size_t width) {
  SoftAssignment s;
  s.values.assign(width, 0.0);
  for (std::uint32_t idx : h.labels) s.values[idx] = 1.0;
  return s;
}

void require_kind(const Run& pred, RunKind kind, EvalMode mode) {
  if (pred.kind != kind)
    fail(ErrorCode::invalid_argument,
         std::string(mode_name(mode)) + " evaluation requires a " + run_kind_name(kind) +
             " run, got '" + pred.name + "' (" + run_kind_name(pred.kind) + ")");
}

void require_task(const Run& pred, const GoldStandard& gold) {
  if (pred.task != gold.task)
    fail(ErrorCode::task_mismatch, "run '" + pred.name + "' is for " + task_name(pred.task) +
                                       " but gold is for " + task_name(gold.task));
}

void require_gold(const GoldStandard& gold) {
  if (gold.size() == 0) fail(ErrorCode::empty_gold, "gold standard has no items");
  if (gold.hard.size() != gold.size()) fail(ErrorCode::empty_gold, "hard gold not derived");
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

const char* mode_name(EvalMode mode) {
  switch (mode) {
    case EvalMode::soft_soft: return "soft-soft";
    case EvalMode::hard_hard: return "hard-hard";
    case EvalMode::hard_soft: return "hard-soft";
  }
  return "?";
}

std::optional<EvalMode> mode_from_name(std::string_view name) {
  if (name == "soft-soft") return EvalMode::soft_soft;
  if (name == "hard-hard") return EvalMode::hard_hard;
  if (name == "hard-soft") return EvalMode::hard_soft;
  return std::nullopt;
}

const double* EvalReport::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics)
    if (key == name) return &value;
  for (const auto& [key, value] : normalized)
    if (key == name) return &value;
  return nullptr;
}

CategoryStats fit_category_stats(const GoldStandard& gold) {
  require_gold(gold);
  const Taxonomy& tax = taxonomy_for(gold.task);
  std::vector<std::size_t> present(tax.size(), 0);
  for (const auto& h : gold.hard)
    for (std::uint32_t idx : h.labels) ++present[idx];
  CategoryStats stats;
  stats.p.resize(tax.size());
  stats.ic.resize(tax.size());
  const double epsilon = 1.0 / (2.0 * static_cast<double>(gold.size()));
  for (std::size_t i = 0; i < tax.size(); ++i) {
    stats.p[i] = present[i] > 0
                     ? static_cast<double>(present[i]) / static_cast<double>(gold.size())
                     : epsilon;
    stats.ic[i] = -std::log2(stats.p[i]);
  }
  return stats;
}

double icm_hard(const Run& pred, const GoldStandard& gold, const CategoryStats& stats,
                const MetricConfig& cfg) {
  require_gold(gold);
  require_task(pred, gold);
  if (pred.kind != RunKind::hard)
    fail(ErrorCode::invalid_argument, "icm-hard requires a hard run");
  const auto aligned = align(pred, gold);
  return mean_over_items(gold.size(), [&](std::size_t i) {
    const HardAssignment& a = aligned[i]->hard();
    const HardAssignment& b = gold.hard[i];
    return cfg.alpha1 * set_ic(a, stats) + cfg.alpha2 * set_ic(b, stats) -
           cfg.beta * union_ic(a, b, stats);
  });
}

double icm_soft(const Run& pred, const GoldStandard& gold, const CategoryStats& stats,
                const MetricConfig& cfg) {
  require_gold(gold);
  require_task(pred, gold);
  const auto aligned = align(pred, gold);
  const std::size_t width = taxonomy_for(gold.task).size();
  return mean_over_items(gold.size(), [&](std::size_t i) {
    SoftAssignment enc;
    const SoftAssignment* a;
    if (pred.kind == RunKind::soft) {
      a = &aligned[i]->soft();
    } else {
      enc = degenerate(aligned[i]->hard(), width);
      a = &enc;
    }
    const SoftAssignment& b = gold.soft[i];
    double ic_a = 0.0;
    double ic_b = 0.0;
    double ic_u = 0.0;
    for (std::size_t c = 0; c < width; ++c) {
      ic_a += a->values[c] * stats.ic[c];
      ic_b += b.values[c] * stats.ic[c];
      ic_u += std::max(a->values[c], b.values[c]) * stats.ic[c];
    }
    return cfg.alpha1 * ic_a + cfg.alpha2 * ic_b - cfg.beta * ic_u;
  });
}

double normalize_score(double x, double gold_score, double floor_score) {
  if (!(gold_score > floor_score))
    fail(ErrorCode::degenerate_anchors,
         "gold anchor " + std::to_string(gold_score) + " does not exceed floor anchor " +
             std::to_string(floor_score));
  const double v = (x - floor_score) / (gold_score - floor_score);
  return std::clamp(v, 0.0, 1.0);
}

double cross_entropy(const Run& pred, const GoldStandard& gold, const MetricConfig& cfg) {
  require_gold(gold);
  require_task(pred, gold);
  if (gold.task == TaskId::task3)
    fail(ErrorCode::unsupported_task,
         "cross-entropy is defined for the stochastic tasks (1-2) only");
  if (pred.kind != RunKind::soft)
    fail(ErrorCode::invalid_argument, "cross-entropy requires a soft run");
  const auto aligned = align(pred, gold);
  const std::size_t width = taxonomy_for(gold.task).size();
  return mean_over_items(gold.size(), [&](std::size_t i) {
    const SoftAssignment& p = aligned[i]->soft();
    const SoftAssignment& g = gold.soft[i];
    double ce = 0.0;
    for (std::size_t c = 0; c < width; ++c)
      ce -= g.values[c] * std::log(std::max(p.values[c], cfg.ce_epsilon));
    return ce;
  });
}

double f1_score(const Run& pred, const GoldStandard& gold, const MetricConfig& cfg) {
  require_gold(gold);
  require_task(pred, gold);
  if (pred.kind != RunKind::hard)
    fail(ErrorCode::invalid_argument, "f1 requires a hard run");
  const auto aligned = align(pred, gold);
  const Taxonomy& tax = taxonomy_for(gold.task);

  double f1_sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < tax.size(); ++c) {
    if (c == tax.no_index && !cfg.f1_include_no) continue;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool in_pred = aligned[i]->hard().contains(static_cast<std::uint32_t>(c));
      const bool in_gold = gold.hard[i].contains(static_cast<std::uint32_t>(c));
      if (in_pred && in_gold) ++tp;
      if (in_pred && !in_gold) ++fp;
      if (!in_pred && in_gold) ++fn;
    }
    if (tp + fp + fn == 0) continue;  // category absent everywhere
    f1_sum += 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    ++classes;
  }
  // no category in play means gold and prediction agree on all-NO
  return classes == 0 ? 1.0 : f1_sum / static_cast<double>(classes);
}

EvalReport evaluate(const Run& pred, const GoldStandard& gold, EvalMode mode,
                    const MetricConfig& cfg) {
  require_gold(gold);
  require_task(pred, gold);
  EvalReport report;
  report.run_name = pred.name;
  report.task = gold.task;
  report.mode = mode;
  report.item_count = gold.size();

  const CategoryStats stats = fit_category_stats(gold);
  if (mode == EvalMode::soft_soft || mode == EvalMode::hard_soft) {
    require_kind(pred, mode == EvalMode::soft_soft ? RunKind::soft : RunKind::hard, mode);
    const double score = icm_soft(pred, gold, stats, cfg);
    const Run gold_run = baseline_run(gold, BaselineKind::gold, RunKind::soft);
    const Run floor_run = baseline_run(gold, BaselineKind::minority, RunKind::soft);
    const double gold_anchor = icm_soft(gold_run, gold, stats, cfg);
    const double floor_anchor = icm_soft(floor_run, gold, stats, cfg);
    report.metrics.emplace_back(kMetricIcmSoft, score);
    report.normalized.emplace_back(kMetricIcmSoftNorm,
                                   normalize_score(score, gold_anchor, floor_anchor));
    if (mode == EvalMode::soft_soft && gold.task != TaskId::task3)
      report.metrics.emplace_back(kMetricCrossEntropy, cross_entropy(pred, gold, cfg));
  } else {
    require_kind(pred, RunKind::hard, mode);
    const double score = icm_hard(pred, gold, stats, cfg);
    const Run gold_run = baseline_run(gold, BaselineKind::gold, RunKind::hard);
    const Run floor_run = baseline_run(gold, BaselineKind::minority, RunKind::hard);
    const double gold_anchor = icm_hard(gold_run, gold, stats, cfg);
    const double floor_anchor = icm_hard(floor_run, gold, stats, cfg);
    report.metrics.emplace_back(kMetricIcmHard, score);
    report.normalized.emplace_back(kMetricIcmHardNorm,
                                   normalize_score(score, gold_anchor, floor_anchor));
    report.metrics.emplace_back(kMetricF1, f1_score(pred, gold, cfg));
  }
  return report;
}

std::string report_table(const std::vector<const EvalReport*>& reports, TableFormat format) {
  if (reports.empty()) fail(ErrorCode::invalid_argument, "no reports to format");
  for (const auto* r : reports) {
    if (r->mode != reports[0]->mode || r->task != reports[0]->task)
      fail(ErrorCode::mixed_modes, "reports mix tasks or evaluation modes");
  }
  const char* primary =
      reports[0]->mode == EvalMode::hard_hard ? kMetricIcmHard : kMetricIcmSoft;

  std::vector<const EvalReport*> sorted = reports;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const EvalReport* a, const EvalReport* b) {
                     const double* va = a->metric(primary);
                     const double* vb = b->metric(primary);
                     return (va ? *va : 0.0) > (vb ? *vb : 0.0);
                   });

  // union of metric keys in first-seen order; normalized columns follow their
  // raw metric
  std::vector<std::string> columns;
  for (const auto* r : sorted) {
    for (const auto& [key, value] : r->metrics)
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    for (const auto& [key, value] : r->normalized)
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
  }
  static const std::map<std::string, std::string> kDisplay = {
      {kMetricIcmSoft, "ICM-Soft"},       {kMetricIcmSoftNorm, "ICM-Soft Norm"},
      {kMetricCrossEntropy, "Cross Entropy"}, {kMetricIcmHard, "ICM-Hard"},
      {kMetricIcmHardNorm, "ICM-Hard Norm"},  {kMetricF1, "F1"},
  };
  static const std::vector<std::string> kOrder = {kMetricIcmSoft,  kMetricIcmSoftNorm,
                                                  kMetricCrossEntropy, kMetricIcmHard,
                                                  kMetricIcmHardNorm,  kMetricF1};
  std::stable_sort(columns.begin(), columns.end(), [](const std::string& a, const std::string& b) {
    return std::find(kOrder.begin(), kOrder.end(), a) < std::find(kOrder.begin(), kOrder.end(), b);
  });

  std::ostringstream os;
  if (format == TableFormat::tsv) {
    os << "run";
    for (const auto& c : columns) os << '\t' << (kDisplay.count(c) ? kDisplay.at(c) : c);
    os << '\n';
    for (const auto* r : sorted) {
      os << r->run_name;
      for (const auto& c : columns) {
        const double* v = r->metric(c);
        os << '\t' << (v ? format_value(*v) : "-");
      }
      os << '\n';
    }
  } else {
    os << "| run |";
    for (const auto& c : columns) os << ' ' << (kDisplay.count(c) ? kDisplay.at(c) : c) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) os << "---|";
    os << '\n';
    for (const auto* r : sorted) {
      os << "| " << r->run_name << " |";
      for (const auto& c : columns) {
        const double* v = r->metric(c);
        os << ' ' << (v ? format_value(*v) : "-") << " |";
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string serialize_reports(const std::vector<const EvalReport*>& reports) {
  ordered_json out;
  ordered_json arr = ordered_json::array();
  for (const auto* r : reports) {
    ordered_json j;
    j["run"] = r->run_name;
    j["task"] = task_name(r->task);
    j["mode"] = mode_name(r->mode);
    j["items"] = r->item_count;
    ordered_json metrics;
    for (const auto& [key, value] : r->metrics) metrics[key] = value;
    j["metrics"] = std::move(metrics);
    ordered_json normalized;
    for (const auto& [key, value] : r->normalized) normalized[key] = value;
    j["normalized"] = std::move(normalized);
    ordered_json prov;
    for (const auto& [key, value] : r->provenance) prov[key] = value;
    j["provenance"] = std::move(prov);
    arr.push_back(std::move(j));
  }
  out["reports"] = std::move(arr);
  return out.dump(2) + "\n";
}

std::vector<EvalReport> parse_reports(std::string_view text, const std::string& source_name) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(ErrorCode::malformed_json, source_name + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("reports") || !j["reports"].is_array())
    fail(ErrorCode::malformed_json, source_name + ": expected a {\"reports\": [...]} object");
  std::vector<EvalReport> out;
  for (const auto& r : j["reports"]) {
    EvalReport report;
    if (!r.is_object() || !r.contains("run") || !r["run"].is_string() ||
        !r.contains("task") || !r["task"].is_string() || !r.contains("mode") ||
        !r["mode"].is_string())
      fail(ErrorCode::malformed_json,
           source_name + ": report needs string run/task/mode fields");
    report.run_name = r["run"].get<std::string>();
    auto task = task_from_name(r["task"].get<std::string>());
    if (!task) fail(ErrorCode::task_mismatch, source_name + ": unknown task in report");
    report.task = *task;
    auto mode = mode_from_name(r["mode"].get<std::string>());
    if (!mode) fail(ErrorCode::mixed_modes, source_name + ": unknown mode in report");
    report.mode = *mode;
    if (r.contains("items") && r["items"].is_number_unsigned())
      report.item_count = r["items"].get<std::size_t>();
    auto read_values = [&](const char* field,
                           std::vector<std::pair<std::string, double>>& into) {
      if (!r.contains(field)) return;
      if (!r[field].is_object())
        fail(ErrorCode::malformed_json, source_name + ": '" + field + "' must be an object");
      for (const auto& [key, value] : r[field].items()) {
        if (!value.is_number())
          fail(ErrorCode::malformed_json,
               source_name + ": metric '" + key + "' is not a number");
        into.emplace_back(key, value.get<double>());
      }
    };
    read_values("metrics", report.metrics);
    read_values("normalized", report.normalized);
    if (r.contains("provenance") && r["provenance"].is_object())
      for (const auto& [key, value] : r["provenance"].items())
        if (value.is_string()) report.provenance[key] = value.get<std::string>();
    out.push_back(std::move(report));
  }
  return out;
}

void save_reports(const std::vector<const EvalReport*>& reports, const std::string& path) {
  write_text_file(path, serialize_reports(reports));
}

std::vector<EvalReport> load_reports(const std::string& path) {
  return parse_reports(read_text_file(path), path);
}

}  // namespace disagree
