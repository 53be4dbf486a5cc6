#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tenseq/graph.hpp"

namespace tenseq {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;       // node -> sorted vertices
  std::vector<std::pair<int, int>> edges;   // tree edges between nodes
  int vertex_count = 0;                     // n of the decomposed graph
  int width() const;                        // max bag size - 1; -1 when there are no bags
};

struct EliminationOrdering {
  std::vector<int> order;
  int width = 0;
};

struct FillIn {
  int width = 0;
  Graph fill_graph;
};

FillIn fill_in_width(const Graph& g, const std::vector<int>& order);
// Width only; avoids materializing the fill graph.
int ordering_width(const Graph& g, const std::vector<int>& order);

TreeDecomposition eo_to_td(const Graph& g, const std::vector<int>& order);
EliminationOrdering td_to_eo(const Graph& g, const TreeDecomposition& td);

enum class TdCondition { none, tree, vertex_coverage, edge_coverage, connectivity };

struct TdReport {
  bool ok = true;
  TdCondition condition = TdCondition::none;
  std::string message;
  std::vector<int> witness;
};

TdReport validate_td(const Graph& g, const TreeDecomposition& td);

enum class Heuristic { min_fill, min_degree };
enum class LowerBound { degeneracy, minor_min_width };

// Seed 0 breaks ties by vertex id; other seeds by a seeded random priority.
EliminationOrdering heuristic_order(const Graph& g, Heuristic strategy, std::uint64_t seed = 0);
int lower_bound(const Graph& g, LowerBound method);

// PACE .td text. comments become leading 'c' lines.
std::string write_td(const TreeDecomposition& td, const std::vector<std::string>& comments = {});
TreeDecomposition read_td(const std::string& text, std::vector<std::string>* comments = nullptr);

}  // namespace tenseq
