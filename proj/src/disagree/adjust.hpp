#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "disagree/ingest.hpp"
#include "disagree/taxonomy.hpp"

namespace disagree {

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

// All assignments representable with n annotators: compositions of n over the
// categories for tasks 1-2, the full {0..n}^m count lattice for task 3.
// Points are stored as count vectors in ascending lexicographic order.
struct FeasibleGrid {
  TaskId task = TaskId::task1;
  int n = 0;
  std::size_t width = 0;  // categories per point
  std::vector<std::uint32_t> counts;
  // counts reduced by their gcd; proportional lattice points share a
  // direction, so cosine ties between them are exact and fall through to the
  // Euclidean tie-break
  std::vector<std::uint32_t> directions;

  std::size_t size() const { return width == 0 ? 0 : counts.size() / width; }
  const std::uint32_t* point(std::size_t i) const { return counts.data() + i * width; }
  const std::uint32_t* direction(std::size_t i) const {
    return directions.data() + i * width;
  }
};

// Number of grid points, or 0 on overflow past `cap`.
unsigned long long grid_point_count(TaskId task, int n);

// Memoized per (task, n); throws GridTooLarge when the point count exceeds cap.
std::shared_ptr<const FeasibleGrid> enumerate_grid(TaskId task, int n,
                                                   std::size_t cap = kDefaultGridCap);

// Nearest feasible assignment by cosine similarity, ties broken by smaller
// Euclidean distance, then lexicographic count order. An all-zero input is
// replaced by the uniform assignment before snapping. Throws GridTooLarge
// when the grid exceeds cap.
SoftAssignment snap(const SoftAssignment& p, TaskId task, int n,
                    std::size_t cap = kDefaultGridCap);

// Like snap, but for task 3 falls back to per-category rounding to the
// nearest k/n (approximate) when the lattice exceeds cap. Tasks 1-2 still
// throw. used_fallback, when non-null, reports whether rounding was used.
SoftAssignment snap_or_round(const SoftAssignment& p, TaskId task, int n,
                             std::size_t cap = kDefaultGridCap,
                             bool* used_fallback = nullptr);

struct AdjustOutcome {
  Run run;
  std::size_t fallback_items = 0;  // task-3 items adjusted by rounding
};

// Snaps every prediction of a soft run. With a dataset, each item uses its
// own annotator count; items without one (test split, or absent from the
// dataset) fall back to global_n. global_n = 0 means "not supplied".
AdjustOutcome adjust_run(const Run& run, const Dataset* ds, int global_n,
                         std::size_t cap = kDefaultGridCap);

}  // namespace disagree
