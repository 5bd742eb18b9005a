#include "disagree/metrics.hpp"

#include <cmath>

#include "disagree/ensemble.hpp"
#include "disagree/error.hpp"
#include "disagree/parallel.hpp"
#include "disagree/rng.hpp"
#include "disagree/synth.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace disagree;

namespace {

// Gold standard with degenerate soft values, one label per item.
GoldStandard gold_from_labels(TaskId task, const std::vector<std::string>& labels) {
  const Taxonomy& tax = taxonomy_for(task);
  GoldStandard gold;
  gold.task = task;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    gold.ids.push_back("i" + std::to_string(i));
    SoftAssignment soft;
    soft.values.assign(tax.size(), 0.0);
    soft.values[*tax.index_of(labels[i])] = 1.0;
    gold.soft.push_back(std::move(soft));
    gold.n_eff.push_back(1);
  }
  gold.rebuild_index();
  derive_hard_gold(gold);
  return gold;
}

Run run_from_labels(TaskId task, const std::vector<std::string>& labels,
                    RunKind kind, const std::string& name) {
  const Taxonomy& tax = taxonomy_for(task);
  Run run;
  run.name = name;
  run.task = task;
  run.kind = kind;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    RunEntry e;
    e.id = "i" + std::to_string(i);
    const auto idx = static_cast<std::uint32_t>(*tax.index_of(labels[i]));
    if (kind == RunKind::hard) {
      HardAssignment h;
      h.labels = {idx};
      e.value = std::move(h);
    } else {
      SoftAssignment s;
      s.values.assign(tax.size(), 0.0);
      s.values[idx] = 1.0;
      e.value = std::move(s);
    }
    run.entries.push_back(std::move(e));
  }
  run.rebuild_index();
  return run;
}

const std::vector<std::string> kBinaryCorpus = {"YES", "YES", "NO", "NO"};

}  // namespace

TEST_CASE("category stats") {
  GoldStandard gold = gold_from_labels(TaskId::task1, kBinaryCorpus);
  CategoryStats stats = fit_category_stats(gold);
  CHECK(stats.p[0] == 0.5);
  CHECK(stats.p[1] == 0.5);
  CHECK(stats.ic[0] == 1.0);
  CHECK(stats.ic[1] == 1.0);

  GoldStandard all_yes = gold_from_labels(TaskId::task1, {"YES", "YES", "YES", "YES"});
  CategoryStats s2 = fit_category_stats(all_yes);
  CHECK(s2.p[0] == 1.0);
  CHECK(s2.ic[0] == 0.0);
  CHECK(s2.p[1] == 0.125);  // absent category: 1/(2*4)
  CHECK(s2.ic[1] == 3.0);

  // task3 corpus of 8 items, OBJECTIFICATION in exactly one
  std::vector<std::string> t3(8, "NO");
  t3[3] = "OBJECTIFICATION";
  GoldStandard g3 = gold_from_labels(TaskId::task3, t3);
  CategoryStats s3 = fit_category_stats(g3);
  const auto obj = *taxonomy_for(TaskId::task3).index_of("OBJECTIFICATION");
  CHECK(s3.ic[obj] == 3.0);  // -log2(1/8)
}

TEST_CASE("icm-hard worked examples") {
  GoldStandard gold = gold_from_labels(TaskId::task1, kBinaryCorpus);
  CategoryStats stats = fit_category_stats(gold);

  Run perfect = run_from_labels(TaskId::task1, kBinaryCorpus, RunKind::hard, "perfect");
  CHECK(icm_hard(perfect, gold, stats) == doctest::Approx(1.0).epsilon(1e-12));

  Run one_wrong =
      run_from_labels(TaskId::task1, {"NO", "YES", "NO", "NO"}, RunKind::hard, "one-wrong");
  CHECK(icm_hard(one_wrong, gold, stats) == doctest::Approx(0.25).epsilon(1e-12));

  // pred = gold attains the mean gold information content (the entropy here)
  const double entropy = -(0.5 * std::log2(0.5) + 0.5 * std::log2(0.5));
  CHECK(icm_hard(perfect, gold, stats) == doctest::Approx(entropy).epsilon(1e-12));
}

TEST_CASE("icm-soft worked examples") {
  GoldStandard gold = gold_from_labels(TaskId::task1, kBinaryCorpus);
  CategoryStats stats = fit_category_stats(gold);

  Run perfect = run_from_labels(TaskId::task1, kBinaryCorpus, RunKind::soft, "perfect");
  CHECK(icm_soft(perfect, gold, stats) == doctest::Approx(1.0).epsilon(1e-12));

  // one disjoint-support item contributes 2+2-3*2 = -2
  Run one_wrong =
      run_from_labels(TaskId::task1, {"NO", "YES", "NO", "NO"}, RunKind::soft, "one-wrong");
  CHECK(icm_soft(one_wrong, gold, stats) == doctest::Approx((3.0 - 2.0) / 4.0).epsilon(1e-12));

  // hard runs are scored as degenerate soft assignments
  Run hard = run_from_labels(TaskId::task1, {"NO", "YES", "NO", "NO"}, RunKind::hard, "h");
  CHECK(icm_soft(hard, gold, stats) == icm_soft(one_wrong, gold, stats));
}

TEST_CASE("published normalization anchors reproduce") {
  CHECK(std::abs(normalize_score(-2.3585, 3.1182, -3.0717) - 0.1152) <= 5e-5);
  CHECK(std::abs(normalize_score(0.7343, 3.1182, -3.0717) - 0.6149) <= 5e-5);
  CHECK(std::abs(normalize_score(-2.3183, 9.4686, -46.108) - 0.7879) <= 5e-5);
}

TEST_CASE("normalize is anchored, affine, and clipped") {
  CHECK(normalize_score(-3.0717, 3.1182, -3.0717) == 0.0);
  CHECK(normalize_score(3.1182, 3.1182, -3.0717) == 1.0);
  CHECK(normalize_score(-5.0, 3.1182, -3.0717) == 0.0);  // clipped
  CHECK(normalize_score(9.9, 3.1182, -3.0717) == 1.0);
  const double a = normalize_score(0.1, 1.0, -1.0);
  const double b = normalize_score(0.2, 1.0, -1.0);
  CHECK(a < b);
  CHECK_THROWS_AS(normalize_score(0.0, -1.0, 1.0), Error);
}

TEST_CASE("cross-entropy worked examples") {
  GoldStandard gold;
  gold.task = TaskId::task1;
  gold.ids = {"1"};
  gold.soft.push_back(testutil::make_soft({5.0 / 6, 1.0 / 6}));
  gold.n_eff = {6};
  gold.rebuild_index();
  derive_hard_gold(gold);

  Run same;
  same.name = "same";
  same.task = TaskId::task1;
  same.kind = RunKind::soft;
  RunEntry e;
  e.id = "1";
  e.value = testutil::make_soft({5.0 / 6, 1.0 / 6});
  same.entries.push_back(e);
  same.rebuild_index();
  const double gold_entropy =
      -(5.0 / 6 * std::log(5.0 / 6) + 1.0 / 6 * std::log(1.0 / 6));
  CHECK(cross_entropy(same, gold) == doctest::Approx(gold_entropy).epsilon(1e-12));
  CHECK(cross_entropy(same, gold) == doctest::Approx(0.4506).epsilon(1e-3));

  Run uniform = same;
  uniform.entries[0].value = testutil::make_soft({0.5, 0.5});
  CHECK(cross_entropy(uniform, gold) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // zero probability on a supported category is clamped, > 20 nats
  GoldStandard certain = gold_from_labels(TaskId::task1, {"YES"});
  Run wrong = run_from_labels(TaskId::task1, {"NO"}, RunKind::soft, "w");
  CHECK(cross_entropy(wrong, certain) > 20.0);

  GoldStandard g3 = gold_from_labels(TaskId::task3, {"NO"});
  Run r3 = run_from_labels(TaskId::task3, {"NO"}, RunKind::soft, "r");
  CHECK_THROWS_AS(cross_entropy(r3, g3), Error);
}

TEST_CASE("f1 worked examples") {
  GoldStandard gold = gold_from_labels(TaskId::task1, kBinaryCorpus);
  Run perfect = run_from_labels(TaskId::task1, kBinaryCorpus, RunKind::hard, "p");
  CHECK(f1_score(perfect, gold) == 1.0);

  Run all_no = run_from_labels(TaskId::task1, {"NO", "NO", "NO", "NO"}, RunKind::hard, "n");
  CHECK(f1_score(all_no, gold) == 0.0);

  // all-YES: precision q, recall 1 -> 2q/(1+q)
  Run all_yes =
      run_from_labels(TaskId::task1, {"YES", "YES", "YES", "YES"}, RunKind::hard, "y");
  const double q = 0.5;
  CHECK(f1_score(all_yes, gold) == doctest::Approx(2 * q / (1 + q)).epsilon(1e-12));

  // macro over non-NO classes for task2
  GoldStandard g2 = gold_from_labels(TaskId::task2, {"DIRECT", "REPORTED", "NO", "NO"});
  Run half = run_from_labels(TaskId::task2, {"DIRECT", "NO", "NO", "NO"}, RunKind::hard, "h");
  // DIRECT: f1=1; REPORTED: 0 (fn only); JUDGEMENTAL absent everywhere -> skipped
  CHECK(f1_score(half, g2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate assembles mode-specific reports") {
  Dataset ds = generate_dataset({120, 6, 0.75, 0.5, 0.0, 21});
  GoldStandard gold = derive_gold(ds, TaskId::task1);
  Run gold_soft = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  Run minority_soft = baseline_run(gold, BaselineKind::minority, RunKind::soft);

  EvalReport r = evaluate(gold_soft, gold, EvalMode::soft_soft);
  CHECK(r.metric(kMetricIcmSoft) != nullptr);
  CHECK(r.metric(kMetricCrossEntropy) != nullptr);
  CHECK(r.metric(kMetricIcmHard) == nullptr);
  CHECK(*r.metric(kMetricIcmSoftNorm) == 1.0);
  CHECK(r.item_count == gold.size());

  EvalReport rm = evaluate(minority_soft, gold, EvalMode::soft_soft);
  CHECK(*rm.metric(kMetricIcmSoftNorm) == 0.0);

  Run gold_hard = baseline_run(gold, BaselineKind::gold, RunKind::hard);
  EvalReport rh = evaluate(gold_hard, gold, EvalMode::hard_hard);
  CHECK(*rh.metric(kMetricIcmHardNorm) == 1.0);
  CHECK(*rh.metric(kMetricF1) == 1.0);
  CHECK(rh.metric(kMetricCrossEntropy) == nullptr);

  EvalReport rhs = evaluate(gold_hard, gold, EvalMode::hard_soft);
  CHECK(rhs.metric(kMetricIcmSoft) != nullptr);
  CHECK(rhs.metric(kMetricF1) == nullptr);
  // a hard prediction cannot reach the soft gold anchor on a disagreeing corpus
  CHECK(*rhs.metric(kMetricIcmSoftNorm) < 1.0);

  // task3 soft-soft has no cross-entropy column
  GoldStandard g3 = derive_gold(ds, TaskId::task3);
  Run g3run = baseline_run(g3, BaselineKind::gold, RunKind::soft);
  EvalReport r3 = evaluate(g3run, g3, EvalMode::soft_soft);
  CHECK(r3.metric(kMetricCrossEntropy) == nullptr);
  CHECK(*r3.metric(kMetricIcmSoftNorm) == 1.0);

  // kind/mode mismatches are rejected
  CHECK_THROWS_AS(evaluate(gold_hard, gold, EvalMode::soft_soft), Error);
  CHECK_THROWS_AS(evaluate(gold_soft, gold, EvalMode::hard_hard), Error);
}

TEST_CASE("identity maximality on random runs") {
  Dataset ds = generate_dataset({100, 6, 0.7, 0.5, 0.0, 33});
  Rng rng(34);
  for (TaskId task : {TaskId::task1, TaskId::task2, TaskId::task3}) {
    GoldStandard gold = derive_gold(ds, task);
    CategoryStats stats = fit_category_stats(gold);
    Run gold_soft = baseline_run(gold, BaselineKind::gold, RunKind::soft);
    Run gold_hard = baseline_run(gold, BaselineKind::gold, RunKind::hard);
    const double top_soft = icm_soft(gold_soft, gold, stats);
    const double top_hard = icm_hard(gold_hard, gold, stats);
    const double gold_ce =
        task == TaskId::task3 ? 0.0 : cross_entropy(gold_soft, gold);
    for (int trial = 0; trial < 20; ++trial) {
      Run r = testutil::random_run_for_ids(rng, task, gold.ids, "r");
      CHECK(icm_soft(r, gold, stats) <= top_soft + 1e-9);
      CHECK(icm_hard(harden_run(r), gold, stats) <= top_hard + 1e-9);
      if (task != TaskId::task3)
        CHECK(cross_entropy(r, gold) >= gold_ce - 1e-9);  // Gibbs
    }
  }
}

TEST_CASE("metrics are independent of the worker count") {
  Dataset ds = generate_dataset({150, 6, 0.7, 0.5, 0.0, 55});
  GoldStandard gold = derive_gold(ds, TaskId::task2);
  CategoryStats stats = fit_category_stats(gold);
  Rng rng(56);
  Run r = testutil::random_run_for_ids(rng, TaskId::task2, gold.ids, "r");
  const int before = thread_count();
  set_thread_count(1);
  const double one = icm_soft(r, gold, stats);
  const double ce_one = cross_entropy(r, gold);
  set_thread_count(8);
  const double eight = icm_soft(r, gold, stats);
  const double ce_eight = cross_entropy(r, gold);
  set_thread_count(before);
  CHECK(one == eight);
  CHECK(ce_one == ce_eight);
}

TEST_CASE("report tables") {
  Dataset ds = generate_dataset({60, 6, 0.8, 0.5, 0.0, 77});
  GoldStandard gold = derive_gold(ds, TaskId::task1);
  Run gold_soft = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  Run majority = baseline_run(gold, BaselineKind::majority, RunKind::soft);
  Run minority = baseline_run(gold, BaselineKind::minority, RunKind::soft);

  EvalReport a = evaluate(gold_soft, gold, EvalMode::soft_soft);
  EvalReport b = evaluate(majority, gold, EvalMode::soft_soft);
  EvalReport c = evaluate(minority, gold, EvalMode::soft_soft);

  std::string tsv = report_table({&b, &c, &a}, TableFormat::tsv);
  // sorted descending by ICM-Soft: gold first, minority last
  std::istringstream in(tsv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header.find("run\tICM-Soft\tICM-Soft Norm\tCross Entropy") == 0);
  CHECK(first.rfind("gold\t", 0) == 0);
  CHECK(first.find("1.0000") != std::string::npos);

  std::string md = report_table({&a, &b}, TableFormat::markdown);
  CHECK(md.find("| run |") == 0);
  CHECK(md.find("| gold |") != std::string::npos);

  // ties preserve input order (stable sort)
  std::string tie = report_table({&b, &b}, TableFormat::tsv);
  CHECK(std::count(tie.begin(), tie.end(), '\n') == 3);

  EvalReport hard = evaluate(baseline_run(gold, BaselineKind::gold, RunKind::hard), gold,
                             EvalMode::hard_hard);
  CHECK_THROWS_AS(report_table({&a, &hard}, TableFormat::tsv), Error);
}

TEST_CASE("reports serialize and parse") {
  Dataset ds = generate_dataset({40, 6, 0.8, 0.5, 0.0, 78});
  GoldStandard gold = derive_gold(ds, TaskId::task2);
  Run gold_soft = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  EvalReport r = evaluate(gold_soft, gold, EvalMode::soft_soft);
  r.provenance["threshold"] = "0.5";
  r.provenance["weights"] = "1,2";

  const std::string text = serialize_reports({&r});
  std::vector<EvalReport> back = parse_reports(text, "mem");
  REQUIRE(back.size() == 1);
  CHECK(back[0].run_name == r.run_name);
  CHECK(back[0].mode == r.mode);
  CHECK(back[0].item_count == r.item_count);
  CHECK(*back[0].metric(kMetricIcmSoft) == *r.metric(kMetricIcmSoft));
  CHECK(back[0].provenance.at("threshold") == "0.5");
  CHECK(back[0].provenance.at("weights") == "1,2");
}
