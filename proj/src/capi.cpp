#include "disagree_kit.h"

#include <cstring>
#include <new>
#include <string>

#include "disagree/adjust.hpp"
#include "disagree/ensemble.hpp"
#include "disagree/error.hpp"
#include "disagree/gold.hpp"
#include "disagree/ingest.hpp"
#include "disagree/metrics.hpp"
#include "disagree/parallel.hpp"
#include "disagree/synth.hpp"
#include "json.hpp"

using namespace disagree;

struct dk_dataset {
  Dataset value;
};
struct dk_run {
  Run value;
};
struct dk_gold {
  GoldStandard value;
  GoldOptions opts;
};
struct dk_report {
  EvalReport value;
};

namespace {

thread_local std::string g_last_error;

dk_status set_error(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<dk_status>(static_cast<int>(code));
}

template <typename Fn>
dk_status guarded(Fn&& fn) {
  try {
    fn();
    return DK_OK;
  } catch (const Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ErrorCode::internal, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ErrorCode::internal, e.what());
  }
}

dk_status require(bool ok, const char* message) {
  return ok ? DK_OK : set_error(ErrorCode::invalid_argument, message);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

MetricConfig to_config(const dk_metric_config* cfg) {
  MetricConfig out;
  if (cfg != nullptr) {
    out.alpha1 = cfg->alpha1;
    out.alpha2 = cfg->alpha2;
    out.beta = cfg->beta;
    out.ce_epsilon = cfg->ce_epsilon;
    out.f1_include_no = cfg->f1_include_no != 0;
  }
  return out;
}

GoldOptions to_gold_options(double task3_threshold) {
  GoldOptions opts;
  if (task3_threshold >= 0.0) opts.task3_threshold = task3_threshold;
  return opts;
}

}  // namespace

extern "C" {

const char* dk_version(void) { return "0.1.0"; }

const char* dk_status_name(dk_status status) {
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* dk_last_error(void) { return g_last_error.c_str(); }

void dk_string_free(char* s) { delete[] s; }

void dk_set_threads(int n) { set_thread_count(n); }

int dk_threads(void) { return thread_count(); }

dk_metric_config dk_metric_config_default(void) {
  MetricConfig d;
  return {d.alpha1, d.alpha2, d.beta, d.ce_epsilon, d.f1_include_no ? 1 : 0};
}

dk_synth_params dk_synth_params_default(void) {
  SynthParams d;
  return {d.items, d.annotators, d.agreement, d.lang_mix, d.unknown_rate, d.seed};
}

dk_status dk_dataset_load(const char* path, dk_dataset** out) {
  if (dk_status s = require(path && out, "path and out must be non-null")) return s;
  return guarded([&] { *out = new dk_dataset{load_dataset(path)}; });
}

dk_status dk_dataset_synth(const dk_synth_params* params, dk_dataset** out) {
  if (dk_status s = require(params && out, "params and out must be non-null")) return s;
  SynthParams p;
  p.items = params->items;
  p.annotators = params->annotators;
  p.agreement = params->agreement;
  p.lang_mix = params->lang_mix;
  p.unknown_rate = params->unknown_rate;
  p.seed = params->seed;
  return guarded([&] { *out = new dk_dataset{generate_dataset(p)}; });
}

dk_status dk_dataset_save(const dk_dataset* ds, const char* path) {
  if (dk_status s = require(ds && path, "dataset and path must be non-null")) return s;
  return guarded([&] { save_dataset(ds->value, path); });
}

size_t dk_dataset_size(const dk_dataset* ds) { return ds ? ds->value.items.size() : 0; }

void dk_dataset_free(dk_dataset* ds) { delete ds; }

dk_status dk_run_load(const char* path, int expect_task, dk_run** out) {
  if (dk_status s = require(path && out, "path and out must be non-null")) return s;
  std::optional<TaskId> expect;
  if (expect_task != 0) {
    if (expect_task < 1 || expect_task > 3)
      return set_error(ErrorCode::invalid_argument, "expect_task must be 0..3");
    expect = static_cast<TaskId>(expect_task);
  }
  return guarded([&] { *out = new dk_run{load_run(path, expect)}; });
}

dk_status dk_run_save(const dk_run* run, const char* path) {
  if (dk_status s = require(run && path, "run and path must be non-null")) return s;
  return guarded([&] { save_run(run->value, path); });
}

dk_status dk_run_set_name(dk_run* run, const char* name) {
  if (dk_status s = require(run && name, "run and name must be non-null")) return s;
  run->value.name = name;
  return DK_OK;
}

const char* dk_run_name(const dk_run* run) { return run ? run->value.name.c_str() : ""; }

int dk_run_task(const dk_run* run) {
  return run ? static_cast<int>(run->value.task) : 0;
}

int dk_run_kind(const dk_run* run) {
  return run ? static_cast<int>(run->value.kind) : 0;
}

size_t dk_run_size(const dk_run* run) { return run ? run->value.entries.size() : 0; }

void dk_run_free(dk_run* run) { delete run; }

dk_status dk_gold_from_dataset(const dk_dataset* ds, int task, double task3_threshold,
                               dk_gold** out) {
  if (dk_status s = require(ds && out, "dataset and out must be non-null")) return s;
  if (task < 1 || task > 3) return set_error(ErrorCode::invalid_argument, "task must be 1..3");
  return guarded([&] {
    GoldOptions opts = to_gold_options(task3_threshold);
    *out = new dk_gold{derive_gold(ds->value, static_cast<TaskId>(task), opts), opts};
  });
}

dk_status dk_gold_from_run(const dk_run* soft_run, double task3_threshold, dk_gold** out) {
  if (dk_status s = require(soft_run && out, "run and out must be non-null")) return s;
  return guarded([&] {
    GoldOptions opts = to_gold_options(task3_threshold);
    *out = new dk_gold{gold_from_soft_run(soft_run->value, opts), opts};
  });
}

dk_status dk_gold_load(const char* path, int task, double task3_threshold, dk_gold** out) {
  if (dk_status s = require(path && out, "path and out must be non-null")) return s;
  return guarded([&] {
    GoldOptions opts = to_gold_options(task3_threshold);
    const std::string text = read_text_file(path);
    bool looks_like_run = false;
    try {
      auto j = nlohmann::json::parse(text);
      looks_like_run = j.is_object() && j.contains("predictions");
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::malformed_json, std::string(path) + ": " + e.what());
    }
    if (looks_like_run) {
      std::optional<TaskId> expect;
      if (task >= 1 && task <= 3) expect = static_cast<TaskId>(task);
      Run run = parse_run(text, path, expect);
      *out = new dk_gold{gold_from_soft_run(run, opts), opts};
    } else {
      if (task < 1 || task > 3)
        fail(ErrorCode::invalid_argument, "a task is required to derive gold from a dataset");
      Dataset ds = parse_dataset(text, path);
      *out = new dk_gold{derive_gold(ds, static_cast<TaskId>(task), opts), opts};
    }
  });
}

size_t dk_gold_size(const dk_gold* gold) { return gold ? gold->value.size() : 0; }

size_t dk_gold_warning_count(const dk_gold* gold) {
  return gold ? gold->value.warnings.size() : 0;
}

dk_status dk_gold_warnings_json(const dk_gold* gold, char** out) {
  if (dk_status s = require(gold && out, "gold and out must be non-null")) return s;
  return guarded([&] {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& w : gold->value.warnings) {
      nlohmann::ordered_json j;
      j["id"] = w.id;
      j["reason"] = w.reason;
      arr.push_back(std::move(j));
    }
    *out = dup_string(arr.dump(2) + "\n");
  });
}

dk_status dk_gold_to_run(const dk_gold* gold, dk_kind kind, const char* name, dk_run** out) {
  if (dk_status s = require(gold && out, "gold and out must be non-null")) return s;
  return guarded([&] {
    Run run = baseline_run(gold->value, BaselineKind::gold,
                           kind == DK_KIND_HARD ? RunKind::hard : RunKind::soft);
    if (name != nullptr && name[0] != '\0') run.name = name;
    *out = new dk_run{std::move(run)};
  });
}

dk_status dk_baseline_run(const dk_gold* gold, dk_baseline which, dk_kind kind, dk_run** out) {
  if (dk_status s = require(gold && out, "gold and out must be non-null")) return s;
  return guarded([&] {
    *out = new dk_run{baseline_run(gold->value, static_cast<BaselineKind>(which),
                                   kind == DK_KIND_HARD ? RunKind::hard : RunKind::soft)};
  });
}

void dk_gold_free(dk_gold* gold) { delete gold; }

dk_status dk_ensemble(const dk_run* const* runs, size_t count, const double* weights,
                      dk_run** out) {
  if (dk_status s = require(runs && out, "runs and out must be non-null")) return s;
  return guarded([&] {
    std::vector<const Run*> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (runs[i] == nullptr) fail(ErrorCode::invalid_argument, "null run handle");
      rs.push_back(&runs[i]->value);
    }
    std::vector<double> w;
    if (weights != nullptr) w.assign(weights, weights + count);
    *out = new dk_run{mean_ensemble(rs, w)};
  });
}

dk_status dk_adjust(const dk_run* run, const dk_dataset* ds, int global_n,
                    size_t* fallback_items, dk_run** out) {
  if (dk_status s = require(run && out, "run and out must be non-null")) return s;
  return guarded([&] {
    AdjustOutcome outcome =
        adjust_run(run->value, ds ? &ds->value : nullptr, global_n);
    if (fallback_items != nullptr) *fallback_items = outcome.fallback_items;
    *out = new dk_run{std::move(outcome.run)};
  });
}

dk_status dk_harden(const dk_run* run, double task3_threshold, dk_run** out) {
  if (dk_status s = require(run && out, "run and out must be non-null")) return s;
  return guarded([&] {
    *out = new dk_run{
        harden_run(run->value, task3_threshold >= 0.0 ? task3_threshold : 0.5)};
  });
}

dk_status dk_select_best(const dk_run* const* candidates, size_t count, const dk_gold* gold,
                         const char* metric, dk_mode mode, const dk_metric_config* cfg,
                         size_t* best_index) {
  if (dk_status s =
          require(candidates && gold && best_index, "candidates, gold, best_index non-null"))
    return s;
  return guarded([&] {
    std::vector<const Run*> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (candidates[i] == nullptr) fail(ErrorCode::invalid_argument, "null run handle");
      rs.push_back(&candidates[i]->value);
    }
    const std::string metric_name =
        (metric == nullptr || metric[0] == '\0') ? kMetricIcmSoft : metric;
    *best_index = select_best_run(rs, gold->value, metric_name,
                                  static_cast<EvalMode>(mode), to_config(cfg));
  });
}

dk_status dk_evaluate(const dk_run* pred, const dk_gold* gold, dk_mode mode,
                      const dk_metric_config* cfg, dk_report** out) {
  if (dk_status s = require(pred && gold && out, "pred, gold and out must be non-null"))
    return s;
  return guarded([&] {
    *out = new dk_report{
        evaluate(pred->value, gold->value, static_cast<EvalMode>(mode), to_config(cfg))};
  });
}

dk_status dk_report_metric(const dk_report* report, const char* name, double* out) {
  if (dk_status s = require(report && name && out, "report, name and out must be non-null"))
    return s;
  const double* v = report->value.metric(name);
  if (v == nullptr)
    return set_error(ErrorCode::invalid_argument,
                     std::string("metric '") + name + "' not present in report");
  *out = *v;
  return DK_OK;
}

int dk_report_task(const dk_report* report) {
  return report ? static_cast<int>(report->value.task) : 0;
}

int dk_report_mode(const dk_report* report) {
  return report ? static_cast<int>(report->value.mode) : -1;
}

const char* dk_report_run_name(const dk_report* report) {
  return report ? report->value.run_name.c_str() : "";
}

dk_status dk_report_set_provenance(dk_report* report, const char* key, const char* value) {
  if (dk_status s = require(report && key && value, "report, key and value non-null")) return s;
  report->value.provenance[key] = value;
  return DK_OK;
}

const char* dk_report_provenance(const dk_report* report, const char* key) {
  if (report == nullptr || key == nullptr) return nullptr;
  auto it = report->value.provenance.find(key);
  return it == report->value.provenance.end() ? nullptr : it->second.c_str();
}

dk_status dk_report_table(const dk_report* const* reports, size_t count,
                          dk_table_format format, char** out) {
  if (dk_status s = require(reports && out, "reports and out must be non-null")) return s;
  return guarded([&] {
    std::vector<const EvalReport*> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (reports[i] == nullptr) fail(ErrorCode::invalid_argument, "null report handle");
      rs.push_back(&reports[i]->value);
    }
    *out = dup_string(report_table(
        rs, format == DK_TABLE_MARKDOWN ? TableFormat::markdown : TableFormat::tsv));
  });
}

dk_status dk_reports_save(const dk_report* const* reports, size_t count, const char* path) {
  if (dk_status s = require(reports && path, "reports and path must be non-null")) return s;
  return guarded([&] {
    std::vector<const EvalReport*> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (reports[i] == nullptr) fail(ErrorCode::invalid_argument, "null report handle");
      rs.push_back(&reports[i]->value);
    }
    save_reports(rs, path);
  });
}

dk_status dk_reports_load(const char* path, dk_report*** out, size_t* out_count) {
  if (dk_status s = require(path && out && out_count, "path, out, out_count non-null")) return s;
  return guarded([&] {
    std::vector<EvalReport> reports = load_reports(path);
    dk_report** arr = new dk_report*[reports.size()];
    for (size_t i = 0; i < reports.size(); ++i) arr[i] = new dk_report{std::move(reports[i])};
    *out = arr;
    *out_count = reports.size();
  });
}

void dk_reports_free(dk_report** reports, size_t count) {
  if (reports == nullptr) return;
  for (size_t i = 0; i < count; ++i) delete reports[i];
  delete[] reports;
}

void dk_report_free(dk_report* report) { delete report; }

}  // extern "C"
