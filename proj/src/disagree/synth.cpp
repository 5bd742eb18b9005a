#include "disagree/synth.hpp"

#include <string>

#include "disagree/error.hpp"
#include "disagree/rng.hpp"

namespace disagree {

namespace {

constexpr double kSexistPrior = 0.4;  // latent P(task1 = YES)

const char* kIntentions[] = {"DIRECT", "REPORTED", "JUDGEMENTAL"};
const char* kSexismTypes[] = {"IDEOLOGICAL-INEQUALITY", "STEREOTYPING-DOMINANCE",
                              "OBJECTIFICATION", "SEXUAL-VIOLENCE",
                              "MISOGYNY-NON-SEXUAL-VIOLENCE"};
constexpr std::size_t kTypeCount = 5;

std::vector<std::string> random_type_set(Rng& rng) {
  std::vector<std::string> set;
  for (std::size_t i = 0; i < kTypeCount; ++i)
    if (rng.next_bernoulli(0.35)) set.push_back(kSexismTypes[i]);
  if (set.empty()) set.push_back(kSexismTypes[rng.next_below(kTypeCount)]);
  return set;
}

}  // namespace

Dataset generate_dataset(const SynthParams& params) {
  if (params.items < 1 || params.annotators < 1)
    fail(ErrorCode::invalid_argument, "items and annotators must be >= 1");
  if (params.agreement < 0.0 || params.agreement > 1.0)
    fail(ErrorCode::invalid_argument, "agreement must be in [0,1]");

  Rng rng(params.seed);
  Dataset ds;
  ds.source_path = "synth";
  int annotator_seq = 1;

  for (int i = 0; i < params.items; ++i) {
    AnnotatedItem item;
    item.id = std::to_string(100001 + i);
    item.lang = rng.next_bernoulli(params.lang_mix) ? "en" : "es";
    item.tweet = "synthetic tweet " + item.id;
    item.split = item.lang == "en" ? "TRAIN_EN" : "TRAIN_ES";
    item.number_annotators = params.annotators;

    // latent truths; tasks 2-3 are drawn for every item so noisy YES votes on
    // non-sexist items still have something to vote for
    const bool truth_sexist = rng.next_bernoulli(kSexistPrior);
    const char* truth_intention = kIntentions[rng.next_below(3)];
    const std::vector<std::string> truth_types = random_type_set(rng);

    for (int a = 0; a < params.annotators; ++a) {
      item.annotators.push_back("Annotator_" + std::to_string(annotator_seq++));
      item.gender_annotators.push_back(rng.next_bernoulli(0.5) ? "F" : "M");
      const std::uint64_t age = rng.next_below(3);
      item.age_annotators.push_back(age == 0 ? "18-22" : age == 1 ? "23-45" : "46+");

      const bool follow = rng.next_bernoulli(params.agreement);
      const bool votes_yes = follow ? truth_sexist : rng.next_bernoulli(0.5);
      item.labels_task1.push_back(votes_yes ? "YES" : "NO");
      if (!votes_yes) {
        item.labels_task2.push_back(kNoneVote);
        item.labels_task3.push_back({kNoneVote});
        continue;
      }
      if (rng.next_bernoulli(params.unknown_rate)) {
        item.labels_task2.push_back(kUnknownVote);
        item.labels_task3.push_back({kUnknownVote});
        continue;
      }
      item.labels_task2.push_back(rng.next_bernoulli(params.agreement)
                                      ? truth_intention
                                      : kIntentions[rng.next_below(3)]);
      item.labels_task3.push_back(rng.next_bernoulli(params.agreement) ? truth_types
                                                                       : random_type_set(rng));
    }
    ds.items.push_back(std::move(item));
  }
  ds.rebuild_index();
  return ds;
}

}  // namespace disagree
