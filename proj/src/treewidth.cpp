#include "tenseq/treewidth.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "tenseq/bitset.hpp"
#include "tenseq/errors.hpp"

namespace tenseq {

namespace {

using Clock = std::chrono::steady_clock;

// Cooperative stop signal: deadline or cancellation, latched once observed.
class StopWatch {
 public:
  explicit StopWatch(const ExactOptions& o) : cancel_(o.cancel) {
    if (o.timeout) deadline_ = Clock::now() + *o.timeout;
  }
  bool expired() {
    if (stopped_) return true;
    if (cancel_.cancelled() || (deadline_ && Clock::now() >= *deadline_)) stopped_ = true;
    return stopped_;
  }
  // Cheap check for inner loops; consults the clock every 512 calls.
  bool poll() {
    if (stopped_) return true;
    if ((++ticks_ & 511U) != 0) return false;
    return expired();
  }

 private:
  CancelToken cancel_;
  std::optional<Clock::time_point> deadline_;
  std::uint32_t ticks_ = 0;
  bool stopped_ = false;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Positive-instance driven feasibility test for width <= k on a connected
// graph. A connected set C is feasible when |N(C)| <= k and some v in C has
// every component of C - v feasible; the graph has width <= k iff V is.
// Partials (v, U) are v plus pairwise non-adjacent feasible blocks around v.
template <std::size_t W>
class FeasibleSets {
 public:
  using B = Bits<W>;
  enum class Outcome { feasible, infeasible, stopped, memory };

  FeasibleSets(const std::vector<B>& adj, int k, std::size_t cap, StopWatch& watch)
      : adj_(adj), m_(static_cast<int>(adj.size())), k_(k), cap_(cap), watch_(watch),
        block_index_(16, BlockHash{this}, BlockEq{this}), partial_index_(16, PartialHash{this}, PartialEq{this}),
        blocks_at_(adj.size()), partials_at_(adj.size()) {
    for (int v = 0; v < m_; ++v) full_.set(static_cast<std::size_t>(v));
  }

  Outcome run() {
    for (int v = 0; v < m_; ++v) {
      B s;
      s.set(static_cast<std::size_t>(v));
      add_partial(s, B{}, v, -1, -1);
    }
    while (!queue_.empty()) {
      if (watch_.poll()) return Outcome::stopped;
      if (states() > cap_) return Outcome::memory;
      auto [size, order, is_block, id] = queue_.top();
      queue_.pop();
      if (is_block)
        process_block(id);
      else
        process_partial(id);
      if (final_partial_ >= 0) return Outcome::feasible;
    }
    return Outcome::infeasible;
  }

  std::vector<int> order() const {
    std::vector<int> out;
    emit_partial(final_partial_, out);
    return out;
  }

  std::size_t states() const { return blocks_.size() + partials_.size(); }

 private:
  struct Block {
    B set;
    B nbr;
    int partial;
  };
  struct Partial {
    B set;
    B outer;  // N(U - v) minus v
    int v;
    int parent;
    int block;
  };
  struct BlockHash {
    const FeasibleSets* self;
    std::size_t operator()(int i) const { return self->blocks_[static_cast<std::size_t>(i)].set.hash(); }
  };
  struct BlockEq {
    const FeasibleSets* self;
    bool operator()(int a, int b) const {
      return self->blocks_[static_cast<std::size_t>(a)].set == self->blocks_[static_cast<std::size_t>(b)].set;
    }
  };
  struct PartialHash {
    const FeasibleSets* self;
    std::size_t operator()(int i) const {
      const auto& p = self->partials_[static_cast<std::size_t>(i)];
      return p.set.hash() ^ (static_cast<std::size_t>(p.v) * 0x9e3779b97f4a7c15ULL);
    }
  };
  struct PartialEq {
    const FeasibleSets* self;
    bool operator()(int a, int b) const {
      const auto& p = self->partials_[static_cast<std::size_t>(a)];
      const auto& q = self->partials_[static_cast<std::size_t>(b)];
      return p.v == q.v && p.set == q.set;
    }
  };

  void add_partial(const B& set, const B& outer, int v, int parent, int block) {
    partials_.push_back({set, outer, v, parent, block});
    int id = static_cast<int>(partials_.size()) - 1;
    if (!partial_index_.insert(id).second) {
      partials_.pop_back();
      return;
    }
    queue_.push({set.count(), seq_++, false, id});
  }

  void process_partial(int id) {
    const Partial p = partials_[static_cast<std::size_t>(id)];
    B nu = p.outer | adj_[static_cast<std::size_t>(p.v)].minus(p.set);
    if (nu.count() <= k_) {
      if (p.set == full_) {
        final_partial_ = id;
        return;
      }
      blocks_.push_back({p.set, nu, id});
      int bid = static_cast<int>(blocks_.size()) - 1;
      if (block_index_.insert(bid).second)
        queue_.push({p.set.count(), seq_++, true, bid});
      else
        blocks_.pop_back();
    }
    partials_at_[static_cast<std::size_t>(p.v)].push_back(id);
    const auto& around = blocks_at_[static_cast<std::size_t>(p.v)];
    for (std::size_t i = 0; i < around.size() && !watch_.poll(); ++i) combine(p, around[i], id);
  }

  void process_block(int bid) {
    const B nbr = blocks_[static_cast<std::size_t>(bid)].nbr;
    nbr.for_each([&](int u) {
      blocks_at_[static_cast<std::size_t>(u)].push_back(bid);
      const auto& around = partials_at_[static_cast<std::size_t>(u)];
      for (std::size_t i = 0; i < around.size() && !watch_.poll(); ++i)
        combine(partials_[static_cast<std::size_t>(around[i])], bid, around[i]);
    });
  }

  void combine(Partial p, int bid, int pid) {
    const Block& b = blocks_[static_cast<std::size_t>(bid)];
    if (b.set.intersects(p.set)) return;
    B inner = p.set;
    inner.reset(static_cast<std::size_t>(p.v));
    if (b.nbr.intersects(inner)) return;
    B outer = p.outer | b.nbr;
    outer.reset(static_cast<std::size_t>(p.v));
    if (outer.count() > k_) return;
    add_partial(p.set | b.set, outer, p.v, pid, bid);
  }

  void emit_partial(int pid, std::vector<int>& out) const {
    const Partial& p = partials_[static_cast<std::size_t>(pid)];
    for (int q = pid; q >= 0; q = partials_[static_cast<std::size_t>(q)].parent) {
      int bid = partials_[static_cast<std::size_t>(q)].block;
      if (bid >= 0) emit_partial(blocks_[static_cast<std::size_t>(bid)].partial, out);
    }
    out.push_back(p.v);
  }

  const std::vector<B>& adj_;
  int m_;
  int k_;
  std::size_t cap_;
  StopWatch& watch_;
  B full_;
  std::vector<Block> blocks_;
  std::vector<Partial> partials_;
  std::unordered_set<int, BlockHash, BlockEq> block_index_;
  std::unordered_set<int, PartialHash, PartialEq> partial_index_;
  std::vector<std::vector<int>> blocks_at_;
  std::vector<std::vector<int>> partials_at_;
  // Larger sets first, then insertion order: feasible instances reach V early.
  struct Item {
    int size;
    std::uint64_t seq;
    bool is_block;
    int id;
    bool operator<(const Item& o) const { return size != o.size ? size < o.size : seq > o.seq; }
  };
  std::priority_queue<Item> queue_;
  std::uint64_t seq_ = 0;
  int final_partial_ = -1;
};

template <std::size_t W>
int minor_min_width(std::vector<Bits<W>> adj, Bits<W> alive) {
  int lb = 0;
  while (alive.any()) {
    int v = -1;
    int dv = 0;
    alive.for_each([&](int x) {
      int d = adj[static_cast<std::size_t>(x)].count();
      if (v < 0 || d < dv) {
        v = x;
        dv = d;
      }
    });
    lb = std::max(lb, dv);
    alive.reset(static_cast<std::size_t>(v));
    const Bits<W> nb = adj[static_cast<std::size_t>(v)];
    if (dv == 0) continue;
    int u = -1;
    int du = 0;
    nb.for_each([&](int x) {
      int d = adj[static_cast<std::size_t>(x)].count();
      if (u < 0 || d < du) {
        u = x;
        du = d;
      }
    });
    nb.for_each([&](int x) { adj[static_cast<std::size_t>(x)].reset(static_cast<std::size_t>(v)); });
    Bits<W> add = nb;
    add.reset(static_cast<std::size_t>(u));
    adj[static_cast<std::size_t>(u)] |= add;
    add.for_each([&](int x) { adj[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(u)); });
  }
  return lb;
}

template <std::size_t W>
bool is_clique(const std::vector<Bits<W>>& adj, const Bits<W>& set) {
  bool ok = true;
  set.for_each([&](int x) {
    if (!ok) return;
    Bits<W> need = set;
    need.reset(static_cast<std::size_t>(x));
    ok = need.subset_of(adj[static_cast<std::size_t>(x)]);
  });
  return ok;
}

template <std::size_t W>
bool almost_simplicial(const std::vector<Bits<W>>& adj, int v) {
  const Bits<W>& nb = adj[static_cast<std::size_t>(v)];
  bool ok = false;
  nb.for_each([&](int u) {
    if (ok) return;
    Bits<W> rest = nb;
    rest.reset(static_cast<std::size_t>(u));
    ok = is_clique(adj, rest);
  });
  return ok;
}

template <std::size_t W>
void eliminate_vertex(std::vector<Bits<W>>& adj, int v) {
  const Bits<W> nb = adj[static_cast<std::size_t>(v)];
  nb.for_each([&](int u) {
    auto& au = adj[static_cast<std::size_t>(u)];
    au |= nb;
    au.reset(static_cast<std::size_t>(u));
    au.reset(static_cast<std::size_t>(v));
  });
  adj[static_cast<std::size_t>(v)] = Bits<W>{};
}

// Depth-first branch and bound over elimination prefixes, used when the
// feasibility search exceeds its state budget. floor is a proven lower bound.
template <std::size_t W>
class BranchBound {
 public:
  using B = Bits<W>;
  BranchBound(std::vector<B> adj, int floor, int ub, std::size_t memo_cap, StopWatch& watch)
      : adj0_(std::move(adj)), floor_(floor), ub_(ub), memo_cap_(memo_cap), watch_(watch) {}

  void run() {
    B alive;
    for (std::size_t v = 0; v < adj0_.size(); ++v) alive.set(v);
    dfs(adj0_, alive, 0, -1, B{});
  }

  bool finished() const { return !stopped_; }
  int best_width() const { return ub_; }
  const std::vector<int>& best_order() const { return best_; }

 private:
  void dfs(const std::vector<B>& adj, const B& alive, int g, int prev, const B& prev_nb) {
    if (stopped_ || done_) return;
    if (watch_.expired()) {
      stopped_ = true;
      return;
    }
    int rem = alive.count();
    if (std::max(g, rem - 1) < ub_) {
      ub_ = std::max(g, rem - 1);
      best_ = prefix_;
      alive.for_each([&](int v) { best_.push_back(v); });
      if (ub_ <= floor_) done_ = true;
      return;
    }
    auto it = memo_.find(alive);
    if (it != memo_.end() && it->second <= g) return;
    if (it != memo_.end())
      it->second = g;
    else if (memo_.size() < memo_cap_)
      memo_.emplace(alive, g);
    int lb = std::max(g, minor_min_width(adj, alive));
    if (lb >= ub_) return;
    int forced = -1;
    alive.for_each([&](int v) {
      if (forced >= 0) return;
      const B& nb = adj[static_cast<std::size_t>(v)];
      if (is_clique(adj, nb) || (nb.count() <= lb && almost_simplicial(adj, v))) forced = v;
    });
    std::vector<std::pair<int, int>> cand;
    if (forced >= 0) {
      cand.emplace_back(0, forced);
    } else {
      alive.for_each([&](int v) {
        if (prev >= 0 && v < prev && !prev_nb.test(static_cast<std::size_t>(v))) return;
        const B& nb = adj[static_cast<std::size_t>(v)];
        int missing = 0;
        nb.for_each([&](int u) { missing += nb.minus(adj[static_cast<std::size_t>(u)]).count() - 1; });
        cand.emplace_back(missing / 2, v);
      });
      std::sort(cand.begin(), cand.end());
    }
    for (auto [score, v] : cand) {
      int g2 = std::max(g, adj[static_cast<std::size_t>(v)].count());
      if (g2 >= ub_) continue;
      std::vector<B> next = adj;
      eliminate_vertex(next, v);
      B alive2 = alive;
      alive2.reset(static_cast<std::size_t>(v));
      prefix_.push_back(v);
      dfs(next, alive2, g2, forced >= 0 ? -1 : v, adj[static_cast<std::size_t>(v)]);
      prefix_.pop_back();
      if (stopped_ || done_) return;
    }
  }

  std::vector<B> adj0_;
  int floor_;
  int ub_;
  std::size_t memo_cap_;
  StopWatch& watch_;
  std::vector<int> prefix_;
  std::vector<int> best_;
  std::unordered_map<B, int, BitsHash<W>> memo_;
  bool stopped_ = false;
  bool done_ = false;
};

struct ComponentResult {
  std::vector<int> order;
  int lower_bound = 0;
  bool optimal = false;
  bool timed_out = false;
  bool degraded = false;
  std::uint64_t states = 0;
};

// Solves the connected remainder graph r for widths in [from, ub).
// Returns an ordering of r when one of width < ub is found.
template <std::size_t W>
std::optional<std::vector<int>> solve_core(const Graph& r, int from, int ub, const ExactOptions& opt,
                                           StopWatch& watch, ComponentResult& out) {
  std::vector<Bits<W>> adj(static_cast<std::size_t>(r.n()));
  for (int v = 0; v < r.n(); ++v)
    for (int u : r.neighbors(v)) adj[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
  for (int k = from; k < ub; ++k) {
    FeasibleSets<W> search(adj, k, opt.memo_cap, watch);
    auto outcome = search.run();
    out.states += search.states();
    using O = typename FeasibleSets<W>::Outcome;
    if (outcome == O::feasible) {
      out.optimal = true;
      out.lower_bound = k;
      return search.order();
    }
    if (outcome == O::stopped) {
      out.timed_out = true;
      out.lower_bound = k;
      return std::nullopt;
    }
    if (outcome == O::memory) {
      out.degraded = true;
      BranchBound<W> bb(adj, k, ub, opt.memo_cap, watch);
      bb.run();
      out.optimal = bb.finished();
      out.timed_out = !bb.finished();
      out.lower_bound = bb.finished() ? bb.best_width() : k;
      if (bb.best_width() < ub) return bb.best_order();
      return std::nullopt;
    }
  }
  out.optimal = true;
  out.lower_bound = ub;
  return std::nullopt;
}

std::optional<std::vector<int>> dispatch_core(const Graph& r, int from, int ub, const ExactOptions& opt,
                                              StopWatch& watch, ComponentResult& out) {
  const int words = (r.n() + 63) / 64;
  if (words <= 1) return solve_core<1>(r, from, ub, opt, watch, out);
  if (words <= 2) return solve_core<2>(r, from, ub, opt, watch, out);
  if (words <= 3) return solve_core<3>(r, from, ub, opt, watch, out);
  if (words <= 4) return solve_core<4>(r, from, ub, opt, watch, out);
  if (words <= 6) return solve_core<6>(r, from, ub, opt, watch, out);
  if (words <= 8) return solve_core<8>(r, from, ub, opt, watch, out);
  if (words <= 12) return solve_core<12>(r, from, ub, opt, watch, out);
  if (words <= 16) return solve_core<16>(r, from, ub, opt, watch, out);
  if (words <= 32) return solve_core<32>(r, from, ub, opt, watch, out);
  throw ResourceError("exact solver supports at most 2048 vertices per reduced component");
}

ComponentResult solve_component(const Graph& h, const ExactOptions& opt, StopWatch& watch) {
  ComponentResult res;
  const int n = h.n();
  EliminationOrdering ub_eo = best_heuristic(h, opt.seed, opt.restarts);
  int ub = ub_eo.width;
  int low = std::max(lower_bound(h, LowerBound::minor_min_width), lower_bound(h, LowerBound::degeneracy));
  res.order = ub_eo.order;
  res.lower_bound = low;
  if (low >= ub) {
    res.optimal = true;
    return res;
  }
  if (watch.expired()) {
    res.timed_out = true;
    return res;
  }

  // Safe reductions: simplicial vertices, and almost simplicial vertices of
  // degree at most the current lower bound.
  std::vector<DynBitset> adj(static_cast<std::size_t>(n), DynBitset(static_cast<std::size_t>(n)));
  for (int v = 0; v < n; ++v)
    for (int u : h.neighbors(v)) adj[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  std::vector<int> prefix;
  auto clique_minus = [&](int v, int skip) {
    auto nb = adj[static_cast<std::size_t>(v)].to_vector();
    for (std::size_t a = 0; a < nb.size(); ++a) {
      if (nb[a] == skip) continue;
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (nb[b] != skip && !adj[static_cast<std::size_t>(nb[a])].test(static_cast<std::size_t>(nb[b])))
          return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!alive[static_cast<std::size_t>(v)]) continue;
      int d = static_cast<int>(adj[static_cast<std::size_t>(v)].count());
      bool take = clique_minus(v, -1);
      if (take) {
        low = std::max(low, d);
      } else if (d <= low) {
        for (int u : adj[static_cast<std::size_t>(v)].to_vector())
          if (clique_minus(v, u)) {
            take = true;
            break;
          }
      }
      if (!take) continue;
      const DynBitset nb = adj[static_cast<std::size_t>(v)];
      nb.for_each([&](std::size_t u) {
        adj[u] |= nb;
        adj[u].reset(u);
        adj[u].reset(static_cast<std::size_t>(v));
      });
      alive[static_cast<std::size_t>(v)] = 0;
      prefix.push_back(v);
      changed = true;
    }
  }
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (alive[static_cast<std::size_t>(v)]) rest.push_back(v);
  res.lower_bound = std::min(low, ub);
  if (low >= ub) {
    res.optimal = true;
    return res;
  }
  auto finish = [&](const std::vector<int>& core_order) {
    std::vector<int> order = prefix;
    for (int i : core_order) order.push_back(rest[static_cast<std::size_t>(i)]);
    if (ordering_width(h, order) < ub) res.order = std::move(order);
  };
  if (static_cast<int>(rest.size()) <= low + 1) {
    std::vector<int> idx(rest.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    finish(idx);
    res.optimal = true;
    return res;
  }
  Graph r(static_cast<int>(rest.size()));
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (std::size_t j = i + 1; j < rest.size(); ++j)
      if (adj[static_cast<std::size_t>(rest[i])].test(static_cast<std::size_t>(rest[j])))
        r.add_edge(static_cast<int>(i), static_cast<int>(j));
  int from = std::max(low, lower_bound(r, LowerBound::minor_min_width));
  auto core = dispatch_core(r, from, ub, opt, watch, res);
  if (core) finish(*core);
  res.lower_bound = std::max(res.lower_bound, low);
  return res;
}

}  // namespace

EliminationOrdering best_heuristic(const Graph& g, std::uint64_t seed, int restarts) {
  EliminationOrdering best = heuristic_order(g, Heuristic::min_fill, seed);
  auto consider = [&](EliminationOrdering eo) {
    if (eo.width < best.width) best = std::move(eo);
  };
  consider(heuristic_order(g, Heuristic::min_degree, seed));
  for (int i = 1; i < restarts; ++i) {
    std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(i));
    consider(heuristic_order(g, Heuristic::min_fill, s));
    consider(heuristic_order(g, Heuristic::min_degree, s));
  }
  return best;
}

ExactResult treewidth_exact(const Graph& g, const ExactOptions& options) {
  if (g.n() == 0) throw ParameterError("treewidth of an empty graph is undefined");
  StopWatch watch(options);
  ExactResult res;
  res.optimal = true;
  std::vector<int> order;
  for (const auto& comp : g.components()) {
    if (comp.size() == 1) {
      order.push_back(comp[0]);
      continue;
    }
    Graph h = g.induced(comp);
    ComponentResult cr = solve_component(h, options, watch);
    for (int v : cr.order) order.push_back(comp[static_cast<std::size_t>(v)]);
    res.optimal = res.optimal && cr.optimal;
    res.timed_out = res.timed_out || cr.timed_out;
    res.memo_degraded = res.memo_degraded || cr.degraded;
    res.lower_bound = std::max(res.lower_bound, cr.lower_bound);
    res.states += cr.states;
  }
  res.eo.order = std::move(order);
  res.eo.width = ordering_width(g, res.eo.order);
  res.width = res.eo.width;
  res.td = eo_to_td(g, res.eo.order);
  if (res.optimal) res.lower_bound = res.width;
  return res;
}

}  // namespace tenseq
