#include "disagree/ensemble.hpp"

#include <cmath>

#include "disagree/adjust.hpp"
#include "disagree/error.hpp"
#include "disagree/rng.hpp"
#include "disagree/synth.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace disagree;

namespace {

Run two_value_run(const std::string& name, double yes) {
  Run run;
  run.name = name;
  run.task = TaskId::task1;
  run.kind = RunKind::soft;
  RunEntry e;
  e.id = "1";
  e.value = testutil::make_soft({yes, 1.0 - yes});
  run.entries.push_back(std::move(e));
  run.rebuild_index();
  return run;
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

TEST_CASE("mean of two runs") {
  Run a = two_value_run("a", 0.8);
  Run b = two_value_run("b", 0.6);
  Run mixed = mean_ensemble({&a, &b});
  CHECK(round12(mixed.entries[0].soft().values[0]) == round12(0.7));
  CHECK(round12(mixed.entries[0].soft().values[1]) == round12(0.3));
  CHECK(mixed.name == "mean(a,b)");
  CHECK(std::abs(mixed.entries[0].soft().sum() - 1.0) <= 1e-12);
}

TEST_CASE("ensemble of identical runs is the run, bit-exact") {
  Rng rng(3);
  Run r = testutil::random_run(rng, TaskId::task2, RunKind::soft, 20, "r");
  for (std::size_t k : {2u, 3u, 5u}) {
    std::vector<const Run*> copies(k, &r);
    Run mixed = mean_ensemble(copies);
    for (std::size_t i = 0; i < r.entries.size(); ++i)
      CHECK(testutil::bitwise_equal(mixed.entries[i].soft(), r.entries[i].soft()));
  }
}

TEST_CASE("degenerate weights return the first run unchanged") {
  Rng rng(4);
  Run a = testutil::random_run(rng, TaskId::task1, RunKind::soft, 10, "a");
  Run b = testutil::random_run(rng, TaskId::task1, RunKind::soft, 10, "b");
  Run mixed = mean_ensemble({&a, &b}, {1.0, 0.0});
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    CHECK(testutil::bitwise_equal(mixed.entries[i].soft(), a.entries[i].soft()));
}

TEST_CASE("uniform mean is permutation-invariant within 1e-12") {
  Rng rng(5);
  Run a = testutil::random_run(rng, TaskId::task3, RunKind::soft, 15, "a");
  Run b = testutil::random_run(rng, TaskId::task3, RunKind::soft, 15, "b");
  Run c = testutil::random_run(rng, TaskId::task3, RunKind::soft, 15, "c");
  Run abc = mean_ensemble({&a, &b, &c});
  Run cba = mean_ensemble({&c, &b, &a});
  for (std::size_t i = 0; i < abc.entries.size(); ++i)
    for (std::size_t v = 0; v < abc.entries[i].soft().values.size(); ++v)
      CHECK(std::abs(abc.entries[i].soft().values[v] - cba.entries[i].soft().values[v]) <=
            1e-12);
}

TEST_CASE("ensemble error paths") {
  Rng rng(6);
  Run a = testutil::random_run(rng, TaskId::task1, RunKind::soft, 5, "a");
  Run b = testutil::random_run(rng, TaskId::task1, RunKind::soft, 6, "b");
  try {
    mean_ensemble({&a, &b});
    FAIL("expected IdMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::id_mismatch);
    CHECK(std::string(e.what()).find("item_5") != std::string::npos);
  }

  Run t2 = testutil::random_run(rng, TaskId::task2, RunKind::soft, 5, "t2");
  CHECK_THROWS_AS(mean_ensemble({&a, &t2}), Error);

  Run hard = testutil::random_run(rng, TaskId::task1, RunKind::hard, 5, "h");
  CHECK_THROWS_AS(mean_ensemble({&a, &hard}), Error);

  CHECK_THROWS_AS(mean_ensemble({&a}), Error);
  CHECK_THROWS_AS(mean_ensemble({&a, &a}, {1.0}), Error);
  CHECK_THROWS_AS(mean_ensemble({&a, &a}, {-1.0, 2.0}), Error);
  CHECK_THROWS_AS(mean_ensemble({&a, &a}, {0.0, 0.0}), Error);
}

TEST_CASE("harden_run") {
  Run soft = two_value_run("s", 4.0 / 6.0);
  Run hard = harden_run(soft);
  CHECK(hard.kind == RunKind::hard);
  CHECK(hard.entries[0].hard().labels == std::vector<std::uint32_t>{0});

  // tie goes to the first category in canonical order
  Run tied = two_value_run("t", 0.5);
  CHECK(harden_run(tied).entries[0].hard().labels == std::vector<std::uint32_t>{0});

  // argmax is scale-invariant: harden(c*p) = harden(p) for the
  // non-normalized task 3 values
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Run r = testutil::random_run(rng, TaskId::task3, RunKind::soft, 4, "r");
    Run scaled = r;
    const double c = 0.5 * (1.0 + rng.next_double());
    for (auto& e : scaled.entries) {
      SoftAssignment s = e.soft();
      for (double& v : s.values) v *= c;
      e.value = s;
    }
    Run ha = harden_run(r, 0.4);
    Run hb = harden_run(scaled, 0.4 * c);
    for (std::size_t i = 0; i < ha.entries.size(); ++i)
      CHECK(ha.entries[i].hard().labels == hb.entries[i].hard().labels);
  }
}

TEST_CASE("ensembles of feasible runs regain feasibility after adjustment") {
  Dataset ds = generate_dataset({50, 6, 0.7, 0.5, 0.0, 23});
  GoldStandard gold = derive_gold(ds, TaskId::task1);
  Run a = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  Run b = baseline_run(gold, BaselineKind::majority, RunKind::soft);
  Run mixed = mean_ensemble({&a, &b});
  bool any_infeasible = false;
  for (const auto& e : mixed.entries)
    if (!is_feasible(e.soft(), 6, TaskId::task1)) any_infeasible = true;
  CHECK(any_infeasible);  // means of feasible points leave the grid
  AdjustOutcome adjusted = adjust_run(mixed, &ds, 6);
  for (const auto& e : adjusted.run.entries)
    CHECK(is_feasible(e.soft(), 6, TaskId::task1));
}

TEST_CASE("harden of an ensemble of identical runs equals harden of the run") {
  Rng rng(9);
  Run r = testutil::random_run(rng, TaskId::task2, RunKind::soft, 12, "r");
  Run mixed = mean_ensemble({&r, &r, &r});
  Run h1 = harden_run(r);
  Run h2 = harden_run(mixed);
  for (std::size_t i = 0; i < h1.entries.size(); ++i)
    CHECK(h1.entries[i].hard().labels == h2.entries[i].hard().labels);
}

TEST_CASE("select_best_run") {
  Dataset ds = generate_dataset({80, 6, 0.8, 0.5, 0.0, 17});
  GoldStandard gold = derive_gold(ds, TaskId::task1);
  Run gold_run = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  gold_run.name = "oracle";
  Run majority = baseline_run(gold, BaselineKind::majority, RunKind::soft);
  Rng rng(10);
  Run noise = testutil::random_run_for_ids(rng, TaskId::task1, gold.ids, "noise");

  // the gold-as-run candidate wins on icm-soft
  std::vector<const Run*> candidates = {&majority, &noise, &gold_run};
  CHECK(select_best_run(candidates, gold, kMetricIcmSoft, EvalMode::soft_soft) == 2);

  // single candidate selects itself
  std::vector<const Run*> one = {&noise};
  CHECK(select_best_run(one, gold, kMetricIcmSoft, EvalMode::soft_soft) == 0);

  // cross-entropy selects the minimum
  CHECK(select_best_run(candidates, gold, kMetricCrossEntropy, EvalMode::soft_soft) == 2);

  CHECK_THROWS_AS(select_best_run({}, gold, kMetricIcmSoft, EvalMode::soft_soft), Error);
  CHECK_THROWS_AS(select_best_run(candidates, gold, "no-such-metric", EvalMode::soft_soft),
                  Error);
}
