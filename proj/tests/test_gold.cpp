#include "disagree/gold.hpp"

#include <algorithm>

#include "disagree/error.hpp"
#include "disagree/rng.hpp"
#include "disagree/synth.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace disagree;

namespace {

AnnotatedItem item_with_votes(std::string id, std::vector<std::string> t1,
                              std::vector<std::string> t2,
                              std::vector<std::vector<std::string>> t3) {
  AnnotatedItem item;
  item.id = std::move(id);
  item.lang = "en";
  item.tweet = "t";
  item.split = "TRAIN_EN";
  item.number_annotators = static_cast<int>(t1.size());
  for (int a = 0; a < item.number_annotators; ++a) {
    item.annotators.push_back("A" + std::to_string(a));
    item.gender_annotators.push_back("F");
    item.age_annotators.push_back("23-45");
  }
  item.labels_task1 = std::move(t1);
  item.labels_task2 = std::move(t2);
  item.labels_task3 = std::move(t3);
  return item;
}

Dataset one_item_dataset(AnnotatedItem item) {
  Dataset ds;
  ds.items.push_back(std::move(item));
  ds.rebuild_index();
  return ds;
}

}  // namespace

TEST_CASE("soft gold from task1 votes") {
  Dataset ds = one_item_dataset(item_with_votes(
      "1", {"YES", "YES", "NO", "YES", "YES", "YES"},
      {"DIRECT", "DIRECT", "-", "DIRECT", "DIRECT", "DIRECT"},
      {{"-"}, {"-"}, {"-"}, {"-"}, {"-"}, {"-"}}));
  GoldStandard gold = derive_soft_gold(ds, TaskId::task1);
  REQUIRE(gold.size() == 1);
  CHECK(gold.soft[0].values[0] == 5.0 / 6.0);
  CHECK(gold.soft[0].values[1] == 1.0 / 6.0);
  CHECK(gold.n_eff[0] == 6);
  CHECK(is_feasible(gold.soft[0], gold.n_eff[0], TaskId::task1));
}

TEST_CASE("soft gold task2: '-' counts as NO, UNKNOWN is dropped") {
  Dataset ds = one_item_dataset(item_with_votes(
      "1", {"YES", "YES", "NO", "YES", "YES", "NO"},
      {"DIRECT", "DIRECT", "-", "UNKNOWN", "JUDGEMENTAL", "-"},
      {{"-"}, {"-"}, {"-"}, {"-"}, {"-"}, {"-"}}));
  GoldStandard gold = derive_soft_gold(ds, TaskId::task2);
  REQUIRE(gold.size() == 1);
  CHECK(gold.n_eff[0] == 5);
  const Taxonomy& tax = taxonomy_for(TaskId::task2);
  CHECK(gold.soft[0].values[*tax.index_of("DIRECT")] == doctest::Approx(0.4));
  CHECK(gold.soft[0].values[*tax.index_of("NO")] == doctest::Approx(0.4));
  CHECK(gold.soft[0].values[*tax.index_of("JUDGEMENTAL")] == doctest::Approx(0.2));
  CHECK(gold.soft[0].values[*tax.index_of("REPORTED")] == 0.0);
  CHECK(gold.soft[0].sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("soft gold task3 counts every category in a vote list") {
  Dataset ds = one_item_dataset(item_with_votes(
      "1", {"YES", "YES", "NO", "NO", "NO", "NO"},
      {"DIRECT", "DIRECT", "-", "-", "-", "-"},
      {{"OBJECTIFICATION"},
       {"OBJECTIFICATION", "SEXUAL-VIOLENCE"},
       {"-"},
       {"-"},
       {"-"},
       {"-"}}));
  GoldStandard gold = derive_soft_gold(ds, TaskId::task3);
  const Taxonomy& tax = taxonomy_for(TaskId::task3);
  CHECK(gold.soft[0].values[*tax.index_of("OBJECTIFICATION")] == 2.0 / 6.0);
  CHECK(gold.soft[0].values[*tax.index_of("SEXUAL-VIOLENCE")] == 1.0 / 6.0);
  CHECK(gold.soft[0].values[*tax.index_of("NO")] == 4.0 / 6.0);
  CHECK(gold.soft[0].values[*tax.index_of("STEREOTYPING-DOMINANCE")] == 0.0);
}

TEST_CASE("items without countable votes are excluded with a warning") {
  AnnotatedItem no_votes = item_with_votes("1", {"YES"}, {"UNKNOWN"}, {{"UNKNOWN"}});
  AnnotatedItem test_item;
  test_item.id = "2";
  test_item.lang = "en";
  test_item.tweet = "t";
  test_item.split = "TEST_EN";
  Dataset ds;
  ds.items.push_back(no_votes);
  ds.items.push_back(test_item);
  ds.rebuild_index();
  GoldStandard gold = derive_soft_gold(ds, TaskId::task2);
  CHECK(gold.size() == 0);
  REQUIRE(gold.warnings.size() == 2);
  CHECK(gold.warnings[0].id == "1");
  CHECK(gold.warnings[1].id == "2");
}

TEST_CASE("hard gold: argmax with canonical tie-break") {
  SoftAssignment tied = testutil::make_soft({0.5, 0.5});
  HardAssignment h = harden_soft(tied, TaskId::task1, 0.5);
  CHECK(h.labels == std::vector<std::uint32_t>{0});  // YES is first in canonical order

  SoftAssignment clear = testutil::make_soft({5.0 / 6, 1.0 / 6});
  CHECK(harden_soft(clear, TaskId::task1, 0.5).labels == std::vector<std::uint32_t>{0});

  // task2 ties favor NO (canonical index 0)
  SoftAssignment tied2 = testutil::make_soft({0.5, 0.5, 0.0, 0.0});
  CHECK(harden_soft(tied2, TaskId::task2, 0.5).labels == std::vector<std::uint32_t>{0});
}

TEST_CASE("hard gold task3 threshold rule") {
  const Taxonomy& tax = taxonomy_for(TaskId::task3);
  const auto idx = [&](const char* name) {
    return static_cast<std::uint32_t>(*tax.index_of(name));
  };

  SoftAssignment soft;
  soft.values.assign(6, 0.0);
  soft.values[idx("IDEOLOGICAL-INEQUALITY")] = 0.5;
  soft.values[idx("OBJECTIFICATION")] = 0.5;
  soft.values[idx("NO")] = 1.0 / 6.0;
  HardAssignment h = harden_soft(soft, TaskId::task3, 0.5);
  CHECK(h.labels == std::vector<std::uint32_t>{idx("IDEOLOGICAL-INEQUALITY"),
                                               idx("OBJECTIFICATION")});

  // nothing reaches the threshold: argmax wins
  SoftAssignment low;
  low.values.assign(6, 0.0);
  low.values[idx("SEXUAL-VIOLENCE")] = 0.4;
  low.values[idx("NO")] = 0.3;
  CHECK(harden_soft(low, TaskId::task3, 0.5).labels ==
        std::vector<std::uint32_t>{idx("SEXUAL-VIOLENCE")});

  // NO qualifies along with a category: NO wins only as the argmax
  SoftAssignment no_wins;
  no_wins.values.assign(6, 0.0);
  no_wins.values[idx("NO")] = 4.0 / 6.0;
  no_wins.values[idx("OBJECTIFICATION")] = 0.5;
  CHECK(harden_soft(no_wins, TaskId::task3, 0.5).labels ==
        std::vector<std::uint32_t>{idx("NO")});

  SoftAssignment no_drops;
  no_drops.values.assign(6, 0.0);
  no_drops.values[idx("NO")] = 0.5;
  no_drops.values[idx("OBJECTIFICATION")] = 4.0 / 6.0;
  CHECK(harden_soft(no_drops, TaskId::task3, 0.5).labels ==
        std::vector<std::uint32_t>{idx("OBJECTIFICATION")});

  // configurable threshold: at 0.3 NO qualifies too but is dropped as a
  // non-argmax co-occurrence
  CHECK(harden_soft(low, TaskId::task3, 0.3).labels ==
        std::vector<std::uint32_t>{idx("SEXUAL-VIOLENCE")});
  low.values[idx("OBJECTIFICATION")] = 0.35;
  CHECK(harden_soft(low, TaskId::task3, 0.3).labels ==
        std::vector<std::uint32_t>{idx("OBJECTIFICATION"), idx("SEXUAL-VIOLENCE")});
}

TEST_CASE("gold derivation is invariant to annotator order") {
  AnnotatedItem a = item_with_votes(
      "1", {"YES", "NO", "YES", "NO", "YES", "YES"},
      {"DIRECT", "-", "REPORTED", "-", "DIRECT", "UNKNOWN"},
      {{"OBJECTIFICATION"}, {"-"}, {"SEXUAL-VIOLENCE"}, {"-"}, {"OBJECTIFICATION"}, {"UNKNOWN"}});
  AnnotatedItem b = a;
  // reverse every per-annotator list
  std::reverse(b.labels_task1.begin(), b.labels_task1.end());
  std::reverse(b.labels_task2.begin(), b.labels_task2.end());
  std::reverse(b.labels_task3.begin(), b.labels_task3.end());
  for (TaskId task : {TaskId::task1, TaskId::task2, TaskId::task3}) {
    GoldStandard ga = derive_gold(one_item_dataset(a), task);
    GoldStandard gb = derive_gold(one_item_dataset(b), task);
    CHECK(testutil::bitwise_equal(ga.soft[0], gb.soft[0]));
    CHECK(ga.hard[0].labels == gb.hard[0].labels);
  }
}

TEST_CASE("soft gold values are exact multiples of 1/n_eff") {
  Dataset ds = generate_dataset({60, 6, 0.7, 0.5, 0.1, 99});
  for (TaskId task : {TaskId::task1, TaskId::task2, TaskId::task3}) {
    GoldStandard gold = derive_gold(ds, task);
    for (std::size_t i = 0; i < gold.size(); ++i)
      CHECK(is_feasible(gold.soft[i], gold.n_eff[i], task));
  }
}

TEST_CASE("baselines") {
  // 5 items: 3 NO, 2 YES -> majority NO, minority YES
  Dataset ds;
  for (int i = 0; i < 5; ++i) {
    const char* vote = i < 3 ? "NO" : "YES";
    std::vector<std::string> t1(6, vote);
    std::vector<std::string> t2(6, i < 3 ? "-" : "DIRECT");
    std::vector<std::vector<std::string>> t3(
        6, std::vector<std::string>{i < 3 ? "-" : "OBJECTIFICATION"});
    ds.items.push_back(item_with_votes(std::to_string(i), t1, t2, t3));
  }
  ds.rebuild_index();
  GoldStandard gold = derive_gold(ds, TaskId::task1);

  Run majority = baseline_run(gold, BaselineKind::majority, RunKind::hard);
  for (const auto& e : majority.entries)
    CHECK(e.hard().labels == std::vector<std::uint32_t>{1});  // NO

  Run minority_soft = baseline_run(gold, BaselineKind::minority, RunKind::soft);
  for (const auto& e : minority_soft.entries) {
    CHECK(e.soft().values[0] == 1.0);  // YES
    CHECK(e.soft().values[1] == 0.0);
  }

  Run gold_run = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  CHECK(gold_run.name == "gold");
  CHECK(testutil::bitwise_equal(gold_run.entries[0].soft(), gold.soft[0]));

  Run gold_hard = baseline_run(gold, BaselineKind::gold, RunKind::hard);
  CHECK(gold_hard.entries[0].hard().labels == gold.hard[0].labels);
}

TEST_CASE("gold round-trips through a soft gold run") {
  Dataset ds = generate_dataset({40, 6, 0.8, 0.5, 0.0, 5});
  GoldStandard gold = derive_gold(ds, TaskId::task2);
  Run as_run = baseline_run(gold, BaselineKind::gold, RunKind::soft);
  GoldStandard rebuilt = gold_from_soft_run(as_run);
  REQUIRE(rebuilt.size() == gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CHECK(testutil::bitwise_equal(rebuilt.soft[i], gold.soft[i]));
    CHECK(rebuilt.hard[i].labels == gold.hard[i].labels);
  }
}
