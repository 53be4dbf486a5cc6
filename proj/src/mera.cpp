#include "tenseq/mera.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "tenseq/canonical.hpp"
#include "tenseq/errors.hpp"

namespace tenseq {

int mera_side(int levels) { return 1 << (levels + 1); }

int mera_arity(Role role, int d) {
  switch (role) {
    case Role::unitary:
      return 2 << d;
    case Role::isometry:
      return (1 << d) + 1;
    case Role::op:
      return 2;
    default:
      return -1;
  }
}

namespace {

struct Node {
  Role role;
  int level;
  std::vector<int> inputs;  // node index, or -1 - site for lattice sites
  std::string label;
};

void check_spec(const MeraSpec& s) {
  if (s.d != 1 && s.d != 2) throw ParameterError("MERA dimension must be 1 or 2");
  if (s.k != (1 << s.d)) throw ParameterError("isometry arity must be 2^d");
  if (s.levels < 1 || s.levels > (s.d == 1 ? 10 : 6)) throw ParameterError("MERA levels out of supported range");
  const int side = mera_side(s.levels);
  std::vector<int> seen;
  for (const auto& c : s.operator_sites) {
    if (static_cast<int>(c.size()) != s.d) throw ParameterError("operator coordinate has wrong dimension");
    int idx = 0;
    for (int i = s.d - 1; i >= 0; --i) {
      if (c[static_cast<std::size_t>(i)] < 0 || c[static_cast<std::size_t>(i)] >= side)
        throw ParameterError("operator site outside the lattice");
      idx = idx * side + c[static_cast<std::size_t>(i)];
    }
    if (std::find(seen.begin(), seen.end(), idx) != seen.end()) throw ParameterError("operator sites must be distinct");
    seen.push_back(idx);
  }
}

// Sites of the 2^d block with lower corner base (periodic), x fastest.
std::vector<int> block_sites(const std::vector<int>& base, int side, int d) {
  std::vector<int> out;
  for (int delta = 0; delta < (1 << d); ++delta) {
    int idx = 0;
    for (int i = d - 1; i >= 0; --i) {
      int c = (base[static_cast<std::size_t>(i)] + ((delta >> i) & 1)) % side;
      idx = idx * side + c;
    }
    out.push_back(idx);
  }
  return out;
}

std::vector<Node> upper_half(const MeraSpec& s) {
  std::vector<Node> nodes;
  int side = mera_side(s.levels);
  int sites = 1;
  for (int i = 0; i < s.d; ++i) sites *= side;
  std::vector<int> owner(static_cast<std::size_t>(sites));
  for (int x = 0; x < sites; ++x) owner[static_cast<std::size_t>(x)] = -1 - x;
  for (int lv = 1; lv <= s.levels; ++lv) {
    const int uoff = lv == 1 ? 0 : 1;
    const int woff = lv == 1 ? 1 : 0;
    const int half = side / 2;
    int blocks = 1;
    for (int i = 0; i < s.d; ++i) blocks *= half;
    std::vector<int> after = owner;
    for (int j = 0; j < blocks; ++j) {
      std::vector<int> base(static_cast<std::size_t>(s.d));
      for (int i = 0, r = j; i < s.d; ++i, r /= half) base[static_cast<std::size_t>(i)] = 2 * (r % half) + uoff;
      Node u{Role::unitary, 2 * lv - 1, {}, "U" + std::to_string(lv) + "." + std::to_string(j)};
      auto bs = block_sites(base, side, s.d);
      for (int x : bs) u.inputs.push_back(owner[static_cast<std::size_t>(x)]);
      nodes.push_back(std::move(u));
      for (int x : bs) after[static_cast<std::size_t>(x)] = static_cast<int>(nodes.size()) - 1;
    }
    std::vector<int> next(static_cast<std::size_t>(blocks));
    for (int j = 0; j < blocks; ++j) {
      std::vector<int> base(static_cast<std::size_t>(s.d));
      for (int i = 0, r = j; i < s.d; ++i, r /= half) base[static_cast<std::size_t>(i)] = 2 * (r % half) + woff;
      Node w{Role::isometry, 2 * lv, {}, "W" + std::to_string(lv) + "." + std::to_string(j)};
      for (int x : block_sites(base, side, s.d)) w.inputs.push_back(after[static_cast<std::size_t>(x)]);
      nodes.push_back(std::move(w));
      next[static_cast<std::size_t>(j)] = static_cast<int>(nodes.size()) - 1;
    }
    owner = std::move(next);
    side = half;
  }
  if (s.top_connect) nodes.push_back({Role::isometry, 2 * s.levels + 1, owner, "T"});
  return nodes;
}

}  // namespace

MeraNetwork build_mera(const MeraSpec& spec) {
  check_spec(spec);
  MeraNetwork m;
  m.spec = spec;
  auto nodes = upper_half(spec);
  const int count = static_cast<int>(nodes.size());
  const int side = mera_side(spec.levels);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& nd : nodes) {
      TensorSlot slot;
      slot.role = nd.role;
      slot.label = nd.label + (pass == 0 ? "+" : "-");
      m.net.add_vertex(std::move(slot));
      m.level.push_back(pass == 0 ? nd.level : -nd.level);
    }
  for (int i = 0; i < 2 * count; ++i) m.mirror.push_back(i < count ? i + count : i - count);
  std::map<int, int> op_at;
  for (std::size_t o = 0; o < spec.operator_sites.size(); ++o) {
    const auto& c = spec.operator_sites[o];
    int idx = 0;
    for (int i = spec.d - 1; i >= 0; --i) idx = idx * side + c[static_cast<std::size_t>(i)];
    TensorSlot slot;
    slot.role = Role::op;
    slot.label = "O" + std::to_string(o);
    int v = m.net.add_vertex(std::move(slot));
    m.level.push_back(0);
    m.mirror.push_back(v);
    op_at[idx] = v;
  }
  for (int t = 0; t < count; ++t)
    for (int in : nodes[static_cast<std::size_t>(t)].inputs) {
      if (in >= 0) {
        m.net.add_wire(t, in);
        m.net.add_wire(t + count, in + count);
        continue;
      }
      auto it = op_at.find(-1 - in);
      if (it != op_at.end()) {
        m.net.add_wire(t, it->second);
        m.net.add_wire(t + count, it->second);
      } else {
        m.net.add_wire(t, t + count);
      }
    }
  if (spec.top_connect) {
    m.net.add_wire(count - 1, 2 * count - 1);
  } else {
    for (int t = 0; t < count; ++t)
      if (nodes[static_cast<std::size_t>(t)].level == 2 * spec.levels) m.net.add_wire(t, t + count);
  }
  for (int v = 0; v < m.net.vertex_count(); ++v) m.net.vertex(v).rank = m.net.arity(v);
  return m;
}

TensorNetwork causal_cone_reduce(const MeraNetwork& m) {
  const TensorNetwork& net = m.net;
  const int n = net.vertex_count();
  std::vector<char> in_cone(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (net.vertex(v).role == Role::op) {
      in_cone[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  if (stack.empty()) throw ContractViolation("no operator tensors marked in the MERA network");
  auto other = [&](std::size_t wi, int v) {
    const Wire& w = net.wires()[wi];
    return w.u == v ? w.v : w.u;
  };
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    const int lx = m.level[static_cast<std::size_t>(x)];
    for (std::size_t wi : net.incident(x)) {
      int y = other(wi, x);
      const int ly = m.level[static_cast<std::size_t>(y)];
      bool ascend = lx >= 0 && ly > lx;
      bool descend = lx <= 0 && ly < lx;
      if ((ascend || descend) && !in_cone[static_cast<std::size_t>(y)]) {
        in_cone[static_cast<std::size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  TensorNetwork out;
  std::vector<int> id(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (in_cone[static_cast<std::size_t>(v)]) {
      TensorSlot slot = net.vertex(v);
      id[static_cast<std::size_t>(v)] = out.add_vertex(std::move(slot));
    }
  std::vector<int> missing(static_cast<std::size_t>(n), 0);
  for (const auto& w : net.wires()) {
    bool iu = in_cone[static_cast<std::size_t>(w.u)];
    bool iv = in_cone[static_cast<std::size_t>(w.v)];
    if (iu && iv)
      out.add_wire_with_id(w.id, id[static_cast<std::size_t>(w.u)], id[static_cast<std::size_t>(w.v)], w.dim);
    else if (iu)
      ++missing[static_cast<std::size_t>(w.u)];
    else if (iv)
      ++missing[static_cast<std::size_t>(w.v)];
  }
  int next = net.next_id();
  for (int v = 0; v < n; ++v) {
    if (!in_cone[static_cast<std::size_t>(v)] || m.level[static_cast<std::size_t>(v)] <= 0) continue;
    int mv = m.mirror[static_cast<std::size_t>(v)];
    if (missing[static_cast<std::size_t>(v)] != missing[static_cast<std::size_t>(mv)] ||
        !in_cone[static_cast<std::size_t>(mv)])
      throw ContractViolation("causal cone is not mirror symmetric");
    for (int i = 0; i < missing[static_cast<std::size_t>(v)]; ++i)
      out.add_wire_with_id(next++, id[static_cast<std::size_t>(v)], id[static_cast<std::size_t>(mv)]);
  }
  for (int v = 0; v < out.vertex_count(); ++v) out.vertex(v).rank = out.arity(v);
  return out;
}

MeraCorpus mera_corpus(int d, int ops, int levels, bool top_connect) {
  if (ops != 1 && ops != 2) throw ParameterError("MERA corpus supports one or two operators");
  MeraSpec base;
  base.d = d;
  base.k = 1 << d;
  base.levels = levels;
  base.top_connect = top_connect;
  check_spec(base);
  const int window = 1 << levels;
  int placements = 1;
  for (int i = 0; i < d; ++i) placements *= window;
  auto coord = [&](int p) {
    std::vector<int> c(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i, p /= window) c[static_cast<std::size_t>(i)] = p % window;
    return c;
  };
  MeraCorpus corpus;
  for (int p = ops == 1 ? 0 : 1; p < placements; ++p) {
    MeraSpec s = base;
    if (ops == 2) s.operator_sites.push_back(coord(0));
    s.operator_sites.push_back(coord(p));
    corpus.networks.push_back(causal_cone_reduce(build_mera(s)));
    corpus.placements.push_back(s.operator_sites);
  }
  std::unordered_map<std::string, int> first;
  for (std::size_t i = 0; i < corpus.networks.size(); ++i) {
    corpus.canonical.push_back(canonical_form(corpus.networks[i]));
    auto [it, fresh] = first.emplace(corpus.canonical.back(), static_cast<int>(i));
    corpus.class_id.push_back(it->second);
  }
  auto& sum = corpus.summary;
  sum.d = d;
  sum.k = base.k;
  sum.ops = ops;
  sum.levels = levels;
  sum.total = static_cast<int>(corpus.networks.size());
  sum.unique = static_cast<int>(first.size());
  std::map<std::pair<int, int>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < corpus.networks.size(); ++i)
    cells[{corpus.networks[i].vertex_count(), static_cast<int>(corpus.networks[i].wire_count())}].push_back(i);
  for (const auto& [key, members] : cells) {
    MeraCell cell;
    cell.vertices = key.first;
    cell.edges = key.second;
    cell.total = static_cast<int>(members.size());
    std::vector<std::string> seen;
    cell.unique_tabulated = 1;
    for (std::size_t i : members) {
      const auto& c = corpus.canonical[i];
      if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
      if (i != members.front() && c != corpus.canonical[members.front()]) ++cell.unique_tabulated;
    }
    cell.unique = static_cast<int>(seen.size());
    sum.unique_tabulated += cell.unique_tabulated;
    sum.cells.push_back(cell);
  }
  return corpus;
}

}  // namespace tenseq
