#pragma once

#include <cstdint>

#include "disagree/ingest.hpp"

namespace disagree {

struct SynthParams {
  int items = 200;
  int annotators = 6;
  // Probability that an annotator reproduces the item's latent truth; the
  // rest of the mass resamples uniformly, so agreement 0 is a fair coin on
  // task 1 and agreement 1 is unanimous.
  double agreement = 0.8;
  double lang_mix = 0.5;      // fraction of items generated as "en"
  double unknown_rate = 0.0;  // chance a YES-voting annotator leaves tasks 2-3 UNKNOWN
  std::uint64_t seed = 1;
};

// Seeded synthetic corpus in the dataset schema: latent truths per task with
// annotator resampling noise, and hierarchical consistency (a NO vote on
// task 1 forces "-" votes downstream). Deterministic given the seed.
Dataset generate_dataset(const SynthParams& params);

}  // namespace disagree
