#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "tenseq/decomposition.hpp"
#include "tenseq/graph.hpp"

namespace tenseq {

// Set-once flag shared between a solver and its controller. Copies share state.
class CancelToken {
 public:
  CancelToken() : flag_(std::make_shared<std::atomic<bool>>(false)) {}
  void cancel() const { flag_->store(true, std::memory_order_relaxed); }
  bool cancelled() const { return flag_->load(std::memory_order_relaxed); }

 private:
  std::shared_ptr<std::atomic<bool>> flag_;
};

struct ExactOptions {
  std::optional<std::chrono::milliseconds> timeout;
  CancelToken cancel;
  std::size_t memo_cap = std::size_t{1} << 22;  // stored search states before degrading
  std::uint64_t seed = 0;
  int restarts = 4;  // seeded heuristic runs for the initial upper bound
};

struct ExactResult {
  bool optimal = false;
  bool timed_out = false;
  bool memo_degraded = false;
  int width = 0;
  int lower_bound = 0;
  TreeDecomposition td;
  EliminationOrdering eo;
  std::uint64_t states = 0;
};

// Exact treewidth. On timeout or cancellation the best ordering found so far
// is returned with optimal == false.
ExactResult treewidth_exact(const Graph& g, const ExactOptions& options = {});

// Best of min-fill and min-degree runs under the given seeds; used as the
// anytime bound by the solver and the dispatcher.
EliminationOrdering best_heuristic(const Graph& g, std::uint64_t seed, int restarts);

}  // namespace tenseq
