#include "disagree/adjust.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

#include "disagree/error.hpp"
#include "disagree/parallel.hpp"

namespace disagree {

namespace {

// C(n, k), or 0 once the running product would pass `limit`.
unsigned long long binomial_or_zero(unsigned long long n, unsigned long long k,
                                    unsigned long long limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long result = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    unsigned long long num = n - k + i;
    if (result > limit / num) return 0;
    result = result * num / i;  // exact: i consecutive integers divide by i!
  }
  return result;
}

void emit_compositions(int remaining, std::size_t slot, std::vector<std::uint32_t>& point,
                       std::vector<std::uint32_t>& out) {
  if (slot + 1 == point.size()) {
    point[slot] = static_cast<std::uint32_t>(remaining);
    out.insert(out.end(), point.begin(), point.end());
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    point[slot] = static_cast<std::uint32_t>(k);
    emit_compositions(remaining - k, slot + 1, point, out);
  }
}

struct GridCache {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::shared_ptr<const FeasibleGrid>> grids;
};

GridCache& grid_cache() {
  static GridCache cache;
  return cache;
}

SoftAssignment counts_to_assignment(const std::uint32_t* counts, std::size_t width, int n) {
  SoftAssignment out;
  out.values.resize(width);
  for (std::size_t i = 0; i < width; ++i)
    out.values[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return out;
}

SoftAssignment round_per_category(const SoftAssignment& p, int n) {
  SoftAssignment out;
  out.values.resize(p.values.size());
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    double k = std::round(p.values[i] * n);
    if (k < 0) k = 0;
    if (k > n) k = n;
    out.values[i] = k / static_cast<double>(n);
  }
  return out;
}

}  // namespace

unsigned long long grid_point_count(TaskId task, int n) {
  const std::size_t m = taxonomy_for(task).size();
  const unsigned long long big = std::numeric_limits<unsigned long long>::max() / 2;
  if (task == TaskId::task3) {
    unsigned long long count = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (count > big / (static_cast<unsigned long long>(n) + 1)) return 0;
      count *= static_cast<unsigned long long>(n) + 1;
    }
    return count;
  }
  return binomial_or_zero(static_cast<unsigned long long>(n) + m - 1, m - 1, big);
}

std::shared_ptr<const FeasibleGrid> enumerate_grid(TaskId task, int n, std::size_t cap) {
  if (n < 1) fail(ErrorCode::invalid_argument, "annotator count must be >= 1");
  const unsigned long long points = grid_point_count(task, n);
  if (points == 0 || points > cap)
    fail(ErrorCode::grid_too_large,
         "feasible grid for " + std::string(task_name(task)) + ", n=" + std::to_string(n) +
             " has " + (points == 0 ? std::string("> 2^63") : std::to_string(points)) +
             " points, cap " + std::to_string(cap));

  GridCache& cache = grid_cache();
  const auto key = std::make_pair(static_cast<int>(task), n);
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.grids.find(key);
    if (it != cache.grids.end()) return it->second;
  }

  auto grid = std::make_shared<FeasibleGrid>();
  grid->task = task;
  grid->n = n;
  grid->width = taxonomy_for(task).size();
  grid->counts.reserve(static_cast<std::size_t>(points) * grid->width);
  std::vector<std::uint32_t> point(grid->width, 0);
  if (task == TaskId::task3) {
    // odometer over {0..n}^m, last coordinate fastest = ascending lex
    bool done = false;
    while (!done) {
      grid->counts.insert(grid->counts.end(), point.begin(), point.end());
      std::size_t i = grid->width;
      while (i > 0) {
        --i;
        if (point[i] < static_cast<std::uint32_t>(n)) {
          ++point[i];
          break;
        }
        point[i] = 0;
        if (i == 0) done = true;
      }
    }
  } else {
    emit_compositions(n, 0, point, grid->counts);
  }

  grid->directions.resize(grid->counts.size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const std::uint32_t* k = grid->point(i);
    std::uint32_t g = 0;
    for (std::size_t c = 0; c < grid->width; ++c) g = std::gcd(g, k[c]);
    for (std::size_t c = 0; c < grid->width; ++c)
      grid->directions[i * grid->width + c] = g > 1 ? k[c] / g : k[c];
  }

  std::lock_guard<std::mutex> lock(cache.mutex);
  auto [it, inserted] = cache.grids.emplace(key, grid);
  return it->second;
}

SoftAssignment snap(const SoftAssignment& p, TaskId task, int n, std::size_t cap) {
  const Taxonomy& tax = taxonomy_for(task);
  if (p.values.size() != tax.size())
    fail(ErrorCode::invalid_argument, "assignment width does not match task");

  std::vector<double> q = p.values;
  bool all_zero = true;
  for (double v : q)
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) q.assign(q.size(), 1.0 / static_cast<double>(q.size()));

  const auto grid = enumerate_grid(task, n, cap);
  const std::size_t m = grid->width;

  // cosine compared via cross-multiplied squares: dot(q,a)^2 * |b|^2 vs
  // dot(q,b)^2 * |a|^2 (all dots are non-negative); |q| is a common factor.
  // Scored on gcd-reduced directions so proportional points tie exactly.
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_dot = -1.0;
  double best_norm2 = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const std::uint32_t* k = grid->direction(i);
    double dot = 0.0;
    double norm2 = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      dot += q[c] * k[c];
      norm2 += static_cast<double>(k[c]) * static_cast<double>(k[c]);
    }
    if (norm2 == 0.0) continue;  // the all-zero lattice point has no direction
    if (best == std::numeric_limits<std::size_t>::max()) {
      best = i;
      best_dot = dot;
      best_norm2 = norm2;
      continue;
    }
    const double lhs = dot * dot * best_norm2;
    const double rhs = best_dot * best_dot * norm2;
    bool take = lhs > rhs;
    if (lhs == rhs) {
      // equal cosine: smaller Euclidean distance to q wins, then lex order
      // (earlier enumeration) wins
      double d_new = 0.0;
      double d_best = 0.0;
      const std::uint32_t* kn = grid->point(i);
      const std::uint32_t* kb = grid->point(best);
      for (std::size_t c = 0; c < m; ++c) {
        const double dn = q[c] - static_cast<double>(kn[c]) / n;
        const double db = q[c] - static_cast<double>(kb[c]) / n;
        d_new += dn * dn;
        d_best += db * db;
      }
      take = d_new < d_best;
    }
    if (take) {
      best = i;
      best_dot = dot;
      best_norm2 = norm2;
    }
  }
  return counts_to_assignment(grid->point(best), m, n);
}

SoftAssignment snap_or_round(const SoftAssignment& p, TaskId task, int n, std::size_t cap,
                             bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  try {
    return snap(p, task, n, cap);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::grid_too_large || task != TaskId::task3) throw;
    if (used_fallback) *used_fallback = true;
    return round_per_category(p, n);
  }
}

AdjustOutcome adjust_run(const Run& run, const Dataset* ds, int global_n, std::size_t cap) {
  if (run.kind != RunKind::soft)
    fail(ErrorCode::invalid_argument, "adjustment requires a soft run");

  std::vector<int> per_item_n(run.entries.size(), 0);
  for (std::size_t i = 0; i < run.entries.size(); ++i) {
    int n = 0;
    if (ds != nullptr) {
      const AnnotatedItem* item = ds->find(run.entries[i].id);
      if (item != nullptr && item->has_annotations()) n = item->number_annotators;
    }
    if (n == 0) n = global_n;
    if (n < 1)
      fail(ErrorCode::missing_annotator_count,
           "item '" + run.entries[i].id + "': no annotator count from dataset or --annotators");
    per_item_n[i] = n;
  }
  // warm the grid cache serially so workers only read
  for (std::size_t i = 0; i < per_item_n.size(); ++i) {
    const unsigned long long points = grid_point_count(run.task, per_item_n[i]);
    if (run.task == TaskId::task3 && (points == 0 || points > cap)) continue;
    enumerate_grid(run.task, per_item_n[i], cap);
  }

  AdjustOutcome outcome;
  outcome.run.name = run.name;
  outcome.run.task = run.task;
  outcome.run.kind = RunKind::soft;
  outcome.run.entries.resize(run.entries.size());
  std::vector<char> fallback(run.entries.size(), 0);
  parallel_for(run.entries.size(), [&](std::size_t i) {
    bool used = false;
    RunEntry entry;
    entry.id = run.entries[i].id;
    entry.value = snap_or_round(run.entries[i].soft(), run.task, per_item_n[i], cap, &used);
    fallback[i] = used ? 1 : 0;
    outcome.run.entries[i] = std::move(entry);
  });
  for (char f : fallback) outcome.fallback_items += f;
  outcome.run.rebuild_index();
  return outcome;
}

}  // namespace disagree
