// Command-line front end for the disagree_kit shared library. Everything
// below talks to the library through the public C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disagree_kit.h"
#include "json.hpp"

namespace {

struct CliError {
  dk_status status;
  std::string message;
};

void check(dk_status status) {
  if (status != DK_OK) throw CliError{status, dk_last_error()};
}

template <typename T, void (*FreeFn)(T*)>
class Handle {
 public:
  Handle() = default;
  explicit Handle(T* ptr) : ptr_(ptr) {}
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr_(other.ptr_) { other.ptr_ = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      reset();
      ptr_ = other.ptr_;
      other.ptr_ = nullptr;
    }
    return *this;
  }
  ~Handle() { reset(); }

  T** out() {
    reset();
    return &ptr_;
  }
  T* get() const { return ptr_; }
  explicit operator bool() const { return ptr_ != nullptr; }

 private:
  void reset() {
    if (ptr_ != nullptr) FreeFn(ptr_);
    ptr_ = nullptr;
  }
  T* ptr_ = nullptr;
};

using DatasetHandle = Handle<dk_dataset, dk_dataset_free>;
using RunHandle = Handle<dk_run, dk_run_free>;
using GoldHandle = Handle<dk_gold, dk_gold_free>;
using ReportHandle = Handle<dk_report, dk_report_free>;

class String {
 public:
  String() = default;
  ~String() { dk_string_free(ptr_); }
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ == nullptr ? "" : ptr_; }

 private:
  char* ptr_ = nullptr;
};

int parse_task(const std::string& name) {
  if (name.empty()) return 0;
  if (name == "task1" || name == "1") return DK_TASK1;
  if (name == "task2" || name == "2") return DK_TASK2;
  if (name == "task3" || name == "3") return DK_TASK3;
  throw CliError{DK_E_INVALID_ARGUMENT, "unknown task '" + name + "'"};
}

dk_mode parse_mode(const std::string& name) {
  if (name == "soft-soft") return DK_MODE_SOFT_SOFT;
  if (name == "hard-hard") return DK_MODE_HARD_HARD;
  if (name == "hard-soft") return DK_MODE_HARD_SOFT;
  throw CliError{DK_E_INVALID_ARGUMENT, "unknown mode '" + name + "'"};
}

dk_kind parse_kind(const std::string& name) {
  if (name == "soft") return DK_KIND_SOFT;
  if (name == "hard") return DK_KIND_HARD;
  throw CliError{DK_E_INVALID_ARGUMENT, "kind must be 'soft' or 'hard'"};
}

dk_table_format parse_format(const std::string& name) {
  if (name == "tsv") return DK_TABLE_TSV;
  if (name == "markdown" || name == "md") return DK_TABLE_MARKDOWN;
  throw CliError{DK_E_INVALID_ARGUMENT, "format must be 'tsv' or 'markdown'"};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{DK_E_IO_FAILURE, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw CliError{DK_E_IO_FAILURE, "write failure on '" + path + "'"};
}

const std::map<std::string, std::string> kMetricDisplay = {
    {"icm-soft", "ICM-Soft"},       {"icm-soft-norm", "ICM-Soft Norm"},
    {"cross-entropy", "Cross Entropy"}, {"icm-hard", "ICM-Hard"},
    {"icm-hard-norm", "ICM-Hard Norm"}, {"f1", "F1"}};

// Keeps only the run column and the requested metric columns of a table.
std::string filter_table(const std::string& table, dk_table_format format,
                         const std::vector<std::string>& metrics) {
  if (metrics.empty()) return table;
  std::vector<std::string> keep_names;
  for (const auto& m : metrics) {
    auto it = kMetricDisplay.find(m);
    keep_names.push_back(it != kMetricDisplay.end() ? it->second : m);
  }
  std::istringstream in(table);
  std::ostringstream out;
  std::string line;
  std::vector<std::size_t> keep_cols;
  bool header_done = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> cells;
    if (format == DK_TABLE_TSV) {
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    } else {
      // markdown: strip leading/trailing pipes, split on '|'
      std::string body = line;
      if (!body.empty() && body.front() == '|') body.erase(0, 1);
      if (!body.empty() && body.back() == '|') body.pop_back();
      std::istringstream ls(body);
      std::string cell;
      while (std::getline(ls, cell, '|')) {
        while (!cell.empty() && cell.front() == ' ') cell.erase(0, 1);
        while (!cell.empty() && cell.back() == ' ') cell.pop_back();
        cells.push_back(cell);
      }
    }
    if (!header_done) {
      keep_cols.push_back(0);
      for (std::size_t c = 1; c < cells.size(); ++c)
        for (const auto& name : keep_names)
          if (cells[c] == name) keep_cols.push_back(c);
      header_done = true;
    }
    if (format == DK_TABLE_MARKDOWN && line_no == 2) {
      out << '|';
      for (std::size_t i = 0; i < keep_cols.size(); ++i) out << "---|";
      out << '\n';
      continue;
    }
    if (format == DK_TABLE_TSV) {
      for (std::size_t i = 0; i < keep_cols.size(); ++i)
        out << (i ? "\t" : "") << (keep_cols[i] < cells.size() ? cells[keep_cols[i]] : "");
      out << '\n';
    } else {
      out << "|";
      for (std::size_t col : keep_cols)
        out << ' ' << (col < cells.size() ? cells[col] : "") << " |";
      out << '\n';
    }
  }
  return out.str();
}

struct GlobalOptions {
  int threads = 0;  // 0 = leave library default
  bool json_errors = false;

  void apply() const {
    if (threads > 0) dk_set_threads(threads);
  }
};

GoldHandle load_gold(const std::string& path, int task, double threshold) {
  GoldHandle gold;
  check(dk_gold_load(path.c_str(), task, threshold, gold.out()));
  return gold;
}

void add_provenance(dk_report* report, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries)
    check(dk_report_set_provenance(report, key.c_str(), value.c_str()));
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft/hard evaluation toolkit for annotator-disagreement tasks"};
  app.set_config("--config", "", "key=value file mirroring the flags; flags win");
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--threads", global.threads, "data-parallel worker count")
      ->envname("DISAGREE_KIT_THREADS");
  app.add_flag("--json-errors", global.json_errors, "emit errors as JSON on stderr");

  // validate
  std::string v_dataset, v_run, v_task;
  auto* validate = app.add_subcommand("validate", "validate a dataset or run file");
  validate->add_option("--dataset", v_dataset, "dataset JSON path");
  validate->add_option("--run", v_run, "run JSON path");
  validate->add_option("--task", v_task, "expected task for --run");
  validate->callback([&] {
    global.apply();
    if (v_dataset.empty() && v_run.empty())
      throw CLI::ValidationError("validate", "one of --dataset or --run is required");
    if (!v_dataset.empty()) {
      DatasetHandle ds;
      check(dk_dataset_load(v_dataset.c_str(), ds.out()));
      std::cout << "ok: " << v_dataset << ": " << dk_dataset_size(ds.get()) << " items\n";
    }
    if (!v_run.empty()) {
      RunHandle run;
      check(dk_run_load(v_run.c_str(), parse_task(v_task), run.out()));
      std::cout << "ok: " << v_run << ": " << dk_run_size(run.get()) << " predictions ("
                << (dk_run_kind(run.get()) == DK_KIND_SOFT ? "soft" : "hard") << ", task"
                << dk_run_task(run.get()) << ")\n";
    }
  });

  // synth
  dk_synth_params sp = dk_synth_params_default();
  std::string s_out;
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  synth->add_option("--items", sp.items, "item count");
  synth->add_option("--annotators", sp.annotators, "annotators per item");
  synth->add_option("--agreement", sp.agreement, "annotator agreement in [0,1]");
  synth->add_option("--lang-mix", sp.lang_mix, "fraction of English items");
  synth->add_option("--unknown-rate", sp.unknown_rate, "rate of UNKNOWN downstream votes");
  synth->add_option("--seed", sp.seed, "RNG seed");
  synth->add_option("--out", s_out, "output dataset path")->required();
  synth->callback([&] {
    global.apply();
    DatasetHandle ds;
    check(dk_dataset_synth(&sp, ds.out()));
    check(dk_dataset_save(ds.get(), s_out.c_str()));
    std::cout << "wrote " << dk_dataset_size(ds.get()) << " items to " << s_out << "\n";
  });

  // gold
  std::string g_dataset, g_task, g_kind = "soft", g_out, g_warnings, g_name = "gold";
  double g_threshold = -1.0;
  auto* gold_cmd = app.add_subcommand("gold", "derive the gold standard from a dataset");
  gold_cmd->add_option("--dataset", g_dataset, "annotated dataset path")->required();
  gold_cmd->add_option("--task", g_task, "task1|task2|task3")->required();
  gold_cmd->add_option("--kind", g_kind, "soft|hard");
  gold_cmd->add_option("--threshold", g_threshold, "task-3 hard threshold (default 0.5)");
  gold_cmd->add_option("--name", g_name, "run name for the emitted gold");
  gold_cmd->add_option("--out", g_out, "output run path")->required();
  gold_cmd->add_option("--warnings", g_warnings, "warnings sidecar path (default <out>.warnings.json)");
  gold_cmd->callback([&] {
    global.apply();
    DatasetHandle ds;
    check(dk_dataset_load(g_dataset.c_str(), ds.out()));
    GoldHandle gold;
    check(dk_gold_from_dataset(ds.get(), parse_task(g_task), g_threshold, gold.out()));
    RunHandle run;
    check(dk_gold_to_run(gold.get(), parse_kind(g_kind), g_name.c_str(), run.out()));
    check(dk_run_save(run.get(), g_out.c_str()));
    String warnings;
    check(dk_gold_warnings_json(gold.get(), warnings.out()));
    const std::string sidecar = g_warnings.empty() ? g_out + ".warnings.json" : g_warnings;
    write_file(sidecar, warnings.str());
    std::cout << "wrote " << dk_gold_size(gold.get()) << " gold items to " << g_out << " ("
              << dk_gold_warning_count(gold.get()) << " warnings)\n";
  });

  // baseline
  std::string b_gold, b_task, b_which, b_kind = "soft", b_out;
  double b_threshold = -1.0;
  auto* baseline = app.add_subcommand("baseline", "emit a gold/majority/minority baseline run");
  baseline->add_option("--gold", b_gold, "dataset or soft gold run path")->required();
  baseline->add_option("--task", b_task, "task (required for dataset input)");
  baseline->add_option("--which", b_which, "gold|majority|minority")->required();
  baseline->add_option("--kind", b_kind, "soft|hard");
  baseline->add_option("--threshold", b_threshold, "task-3 hard threshold");
  baseline->add_option("--out", b_out, "output run path")->required();
  baseline->callback([&] {
    global.apply();
    GoldHandle gold = load_gold(b_gold, parse_task(b_task), b_threshold);
    dk_baseline which;
    if (b_which == "gold") {
      which = DK_BASELINE_GOLD;
    } else if (b_which == "majority") {
      which = DK_BASELINE_MAJORITY;
    } else if (b_which == "minority") {
      which = DK_BASELINE_MINORITY;
    } else {
      throw CliError{DK_E_INVALID_ARGUMENT, "--which must be gold|majority|minority"};
    }
    RunHandle run;
    check(dk_baseline_run(gold.get(), which, parse_kind(b_kind), run.out()));
    check(dk_run_save(run.get(), b_out.c_str()));
    std::cout << "wrote baseline '" << dk_run_name(run.get()) << "' to " << b_out << "\n";
  });

  // adjust
  std::string a_in, a_dataset, a_out, a_name;
  int a_annotators = 6;
  auto* adjust = app.add_subcommand("adjust", "snap predictions to feasible distributions");
  adjust->add_option("run", a_in, "input soft run")->required();
  adjust->add_option("--dataset", a_dataset, "dataset supplying per-item annotator counts");
  adjust->add_option("--annotators", a_annotators, "annotator count when the dataset has none");
  adjust->add_option("--name", a_name, "rename the output run");
  adjust->add_option("--out", a_out, "output run path")->required();
  adjust->callback([&] {
    global.apply();
    RunHandle run;
    check(dk_run_load(a_in.c_str(), 0, run.out()));
    DatasetHandle ds;
    if (!a_dataset.empty()) check(dk_dataset_load(a_dataset.c_str(), ds.out()));
    size_t fallback = 0;
    RunHandle adjusted;
    check(dk_adjust(run.get(), ds.get(), a_annotators, &fallback, adjusted.out()));
    if (!a_name.empty()) check(dk_run_set_name(adjusted.get(), a_name.c_str()));
    check(dk_run_save(adjusted.get(), a_out.c_str()));
    if (fallback > 0)
      std::cerr << "note: " << fallback
                << " task-3 items used per-category rounding (lattice over cap)\n";
    std::cout << "wrote adjusted run to " << a_out << "\n";
  });

  // ensemble
  std::vector<std::string> e_inputs;
  std::vector<double> e_weights;
  std::string e_out, e_name;
  auto* ensemble = app.add_subcommand("ensemble", "mean-aggregate soft runs");
  ensemble->add_option("runs", e_inputs, "input soft runs")->required()->expected(-2);
  ensemble->add_option("--weights", e_weights, "comma-separated weights")->delimiter(',');
  ensemble->add_option("--name", e_name, "rename the output run");
  ensemble->add_option("--out", e_out, "output run path")->required();
  ensemble->callback([&] {
    global.apply();
    std::vector<RunHandle> handles;
    std::vector<const dk_run*> runs;
    for (const auto& path : e_inputs) {
      RunHandle h;
      check(dk_run_load(path.c_str(), 0, h.out()));
      runs.push_back(h.get());
      handles.push_back(std::move(h));
    }
    RunHandle out;
    check(dk_ensemble(runs.data(), runs.size(),
                      e_weights.empty() ? nullptr : e_weights.data(), out.out()));
    if (!e_name.empty()) check(dk_run_set_name(out.get(), e_name.c_str()));
    check(dk_run_save(out.get(), e_out.c_str()));
    std::cout << "wrote ensemble '" << dk_run_name(out.get()) << "' to " << e_out << "\n";
  });

  // select
  std::vector<std::string> sel_inputs;
  std::string sel_gold, sel_task, sel_metric = "icm-soft", sel_mode = "soft-soft", sel_out;
  double sel_threshold = -1.0;
  auto* select = app.add_subcommand("select", "pick the best run on a dev gold");
  select->add_option("runs", sel_inputs, "candidate runs")->required()->expected(-1);
  select->add_option("--gold", sel_gold, "dataset or soft gold run path")->required();
  select->add_option("--task", sel_task, "task (required for dataset gold)");
  select->add_option("--metric", sel_metric, "selection metric (default icm-soft)");
  select->add_option("--mode", sel_mode, "evaluation mode (default soft-soft)");
  select->add_option("--threshold", sel_threshold, "task-3 hard threshold");
  select->add_option("--out", sel_out, "copy the selected run here");
  select->callback([&] {
    global.apply();
    GoldHandle gold = load_gold(sel_gold, parse_task(sel_task), sel_threshold);
    std::vector<RunHandle> handles;
    std::vector<const dk_run*> runs;
    for (const auto& path : sel_inputs) {
      RunHandle h;
      check(dk_run_load(path.c_str(), 0, h.out()));
      runs.push_back(h.get());
      handles.push_back(std::move(h));
    }
    dk_metric_config cfg = dk_metric_config_default();
    size_t best = 0;
    check(dk_select_best(runs.data(), runs.size(), gold.get(), sel_metric.c_str(),
                         parse_mode(sel_mode), &cfg, &best));
    std::cout << "selected #" << best << ": " << dk_run_name(runs[best]) << " ("
              << sel_inputs[best] << ")\n";
    if (!sel_out.empty()) check(dk_run_save(runs[best], sel_out.c_str()));
  });

  // harden
  std::string h_in, h_out, h_name;
  double h_threshold = -1.0;
  auto* harden = app.add_subcommand("harden", "derive hard labels from a soft run");
  harden->add_option("run", h_in, "input soft run")->required();
  harden->add_option("--threshold", h_threshold, "task-3 threshold (default 0.5)");
  harden->add_option("--name", h_name, "rename the output run");
  harden->add_option("--out", h_out, "output run path")->required();
  harden->callback([&] {
    global.apply();
    RunHandle run;
    check(dk_run_load(h_in.c_str(), 0, run.out()));
    RunHandle hard;
    check(dk_harden(run.get(), h_threshold, hard.out()));
    if (!h_name.empty()) check(dk_run_set_name(hard.get(), h_name.c_str()));
    check(dk_run_save(hard.get(), h_out.c_str()));
    std::cout << "wrote hard run to " << h_out << "\n";
  });

  // evaluate
  std::string ev_task, ev_mode = "soft-soft", ev_gold, ev_format = "tsv", ev_out;
  std::vector<std::string> ev_preds, ev_metrics;
  double ev_threshold = -1.0;
  auto* evaluate = app.add_subcommand("evaluate", "score runs against a gold standard");
  evaluate->add_option("--task", ev_task, "task1|task2|task3");
  evaluate->add_option("--mode", ev_mode, "soft-soft|hard-hard|hard-soft");
  evaluate->add_option("--gold", ev_gold, "dataset or soft gold run path")->required();
  evaluate->add_option("--pred", ev_preds, "prediction run (repeatable)")->required();
  evaluate->add_option("--metrics", ev_metrics, "only show these metrics")->delimiter(',');
  evaluate->add_option("--format", ev_format, "tsv|markdown");
  evaluate->add_option("--threshold", ev_threshold, "task-3 hard threshold");
  evaluate->add_option("--out", ev_out, "write the reports as JSON");
  evaluate->callback([&] {
    global.apply();
    GoldHandle gold = load_gold(ev_gold, parse_task(ev_task), ev_threshold);
    const dk_mode mode = parse_mode(ev_mode);
    dk_metric_config cfg = dk_metric_config_default();
    std::vector<ReportHandle> handles;
    std::vector<const dk_report*> reports;
    for (const auto& path : ev_preds) {
      RunHandle run;
      check(dk_run_load(path.c_str(), parse_task(ev_task), run.out()));
      ReportHandle report;
      check(dk_evaluate(run.get(), gold.get(), mode, &cfg, report.out()));
      std::map<std::string, std::string> prov = {
          {"gold", ev_gold}, {"pred", path}, {"mode", ev_mode}};
      if (ev_threshold >= 0.0) prov["threshold"] = format_double(ev_threshold);
      add_provenance(report.get(), prov);
      reports.push_back(report.get());
      handles.push_back(std::move(report));
    }
    const dk_table_format format = parse_format(ev_format);
    String table;
    check(dk_report_table(reports.data(), reports.size(), format, table.out()));
    std::cout << filter_table(table.str(), format, ev_metrics);
    if (!ev_out.empty()) check(dk_reports_save(reports.data(), reports.size(), ev_out.c_str()));
  });

  // report
  std::vector<std::string> r_inputs;
  std::string r_format = "tsv", r_mode;
  auto* report_cmd = app.add_subcommand("report", "render saved reports as a table");
  report_cmd->add_option("reports", r_inputs, "report JSON files")->required()->expected(-1);
  report_cmd->add_option("--format", r_format, "tsv|markdown");
  report_cmd->add_option("--mode", r_mode, "keep only reports for this mode");
  report_cmd->callback([&] {
    global.apply();
    struct Batches {
      std::vector<std::pair<dk_report**, size_t>> owned;
      ~Batches() {
        for (auto& [batch, count] : owned) dk_reports_free(batch, count);
      }
    } batches;
    std::vector<const dk_report*> selected;
    for (const auto& path : r_inputs) {
      dk_report** batch = nullptr;
      size_t count = 0;
      check(dk_reports_load(path.c_str(), &batch, &count));
      batches.owned.emplace_back(batch, count);
      for (size_t i = 0; i < count; ++i) {
        if (!r_mode.empty() && dk_report_mode(batch[i]) != parse_mode(r_mode)) continue;
        selected.push_back(batch[i]);
      }
    }
    String table;
    check(dk_report_table(selected.data(), selected.size(), parse_format(r_format),
                          table.out()));
    std::cout << table.str();
  });

  // pipeline
  std::string p_variant, p_gold, p_task, p_dataset, p_metric = "icm-soft", p_save_run, p_out;
  std::vector<std::string> p_inputs;
  std::vector<double> p_weights;
  std::string p_format = "tsv";
  int p_annotators = 6;
  double p_threshold = -1.0;
  auto* pipeline = app.add_subcommand(
      "pipeline", "chain select/ensemble -> adjust -> harden -> evaluate");
  pipeline->add_option("--variant", p_variant, "aiupv1|aiupv2|aiupv3")->required();
  pipeline->add_option("runs", p_inputs, "input soft runs")->required()->expected(-1);
  pipeline->add_option("--gold", p_gold, "dataset or soft gold run path")->required();
  pipeline->add_option("--task", p_task, "task (required for dataset gold)");
  pipeline->add_option("--dataset", p_dataset, "dataset for per-item annotator counts");
  pipeline->add_option("--annotators", p_annotators, "fallback annotator count");
  pipeline->add_option("--weights", p_weights, "ensemble weights")->delimiter(',');
  pipeline->add_option("--metric", p_metric, "selection metric for aiupv1");
  pipeline->add_option("--threshold", p_threshold, "task-3 hard threshold");
  pipeline->add_option("--format", p_format, "tsv|markdown");
  pipeline->add_option("--save-run", p_save_run, "persist the final soft run");
  pipeline->add_option("--out", p_out, "write all reports as JSON");
  pipeline->callback([&] {
    global.apply();
    GoldHandle gold = load_gold(p_gold, parse_task(p_task), p_threshold);
    std::vector<RunHandle> handles;
    std::vector<const dk_run*> runs;
    for (const auto& path : p_inputs) {
      RunHandle h;
      check(dk_run_load(path.c_str(), parse_task(p_task), h.out()));
      runs.push_back(h.get());
      handles.push_back(std::move(h));
    }

    RunHandle final_soft;
    if (p_variant == "aiupv1") {
      dk_metric_config cfg = dk_metric_config_default();
      size_t best = 0;
      check(dk_select_best(runs.data(), runs.size(), gold.get(), p_metric.c_str(),
                           DK_MODE_SOFT_SOFT, &cfg, &best));
      std::cerr << "selected: " << dk_run_name(runs[best]) << "\n";
      // reload to own a mutable copy
      RunHandle copy;
      check(dk_run_load(p_inputs[best].c_str(), parse_task(p_task), copy.out()));
      final_soft = std::move(copy);
    } else if (p_variant == "aiupv2" || p_variant == "aiupv3") {
      if (runs.size() < 2)
        throw CliError{DK_E_INVALID_ARGUMENT, p_variant + " needs at least two runs"};
      RunHandle mixed;
      check(dk_ensemble(runs.data(), runs.size(),
                        p_weights.empty() ? nullptr : p_weights.data(), mixed.out()));
      if (p_variant == "aiupv3") {
        DatasetHandle ds;
        if (!p_dataset.empty()) check(dk_dataset_load(p_dataset.c_str(), ds.out()));
        size_t fallback = 0;
        RunHandle adjusted;
        check(dk_adjust(mixed.get(), ds.get(), p_annotators, &fallback, adjusted.out()));
        if (fallback > 0)
          std::cerr << "note: " << fallback << " items used per-category rounding\n";
        final_soft = std::move(adjusted);
      } else {
        final_soft = std::move(mixed);
      }
    } else {
      throw CliError{DK_E_INVALID_ARGUMENT, "--variant must be aiupv1|aiupv2|aiupv3"};
    }
    check(dk_run_set_name(final_soft.get(), p_variant.c_str()));
    if (!p_save_run.empty()) check(dk_run_save(final_soft.get(), p_save_run.c_str()));

    RunHandle hard;
    check(dk_harden(final_soft.get(), p_threshold, hard.out()));

    dk_metric_config cfg = dk_metric_config_default();
    std::map<std::string, std::string> prov = {
        {"variant", p_variant},
        {"gold", p_gold},
        {"annotators", std::to_string(p_annotators)}};
    if (!p_weights.empty()) {
      std::ostringstream ws;
      for (std::size_t i = 0; i < p_weights.size(); ++i)
        ws << (i ? "," : "") << p_weights[i];
      prov["weights"] = ws.str();
    }
    if (p_threshold >= 0.0) prov["threshold"] = format_double(p_threshold);

    ReportHandle soft_report, hard_report, hard_soft_report;
    check(dk_evaluate(final_soft.get(), gold.get(), DK_MODE_SOFT_SOFT, &cfg, soft_report.out()));
    check(dk_evaluate(hard.get(), gold.get(), DK_MODE_HARD_HARD, &cfg, hard_report.out()));
    check(dk_evaluate(hard.get(), gold.get(), DK_MODE_HARD_SOFT, &cfg,
                      hard_soft_report.out()));
    for (dk_report* r :
         {soft_report.get(), hard_report.get(), hard_soft_report.get()})
      add_provenance(r, prov);

    const dk_table_format format = parse_format(p_format);
    for (const auto& [title, report] :
         std::vector<std::pair<const char*, const dk_report*>>{
             {"soft-soft", soft_report.get()},
             {"hard-hard", hard_report.get()},
             {"hard-soft", hard_soft_report.get()}}) {
      String table;
      const dk_report* one[] = {report};
      check(dk_report_table(one, 1, format, table.out()));
      std::cout << "# " << title << "\n" << table.str();
    }
    if (!p_out.empty()) {
      const dk_report* all[] = {soft_report.get(), hard_report.get(), hard_soft_report.get()};
      check(dk_reports_save(all, 3, p_out.c_str()));
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const CliError& e) {
    if (global.json_errors) {
      nlohmann::ordered_json j;
      j["error"]["code"] = static_cast<int>(e.status);
      j["error"]["name"] = dk_status_name(e.status);
      j["error"]["message"] = e.message;
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "error: " << dk_status_name(e.status) << ": " << e.message << "\n";
    }
    return 1;
  }
  return 0;
}
