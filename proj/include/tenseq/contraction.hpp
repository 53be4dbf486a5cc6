#pragma once

#include <string>
#include <vector>

#include "tenseq/decomposition.hpp"
#include "tenseq/graph.hpp"
#include "tenseq/treewidth.hpp"

namespace tenseq {

// steps are the wires whose contraction merged two distinct tensors; skipped
// are wires consumed without a merge of their own (parallel siblings of a
// step, wires listed after their endpoints were merged, and self-loops).
struct ContractionSequence {
  std::vector<int> steps;
  std::vector<int> skipped;
  int complexity = 0;
  bool optimal = false;
  std::string network_hash;
};

struct SequenceEvaluation {
  int complexity = 0;
  std::vector<int> steps;
  std::vector<int> step_degrees;    // merged-vertex degree per step
  std::vector<int> skipped;
  std::vector<std::vector<int>> consumed;  // wires consumed by each step, trigger first
  int groups_left = 0;              // tensors remaining after the run
  int components = 0;               // connected components of the network
  bool complete() const { return groups_left == components; }
};

// Simulates the contraction of wires in the given order. Contracting a wire
// merges its two endpoint tensors; the degree of the merged tensor is the
// number of uncontracted wires on it other than the trigger, counted before
// the remaining wires between the pair are traced out with the same step.
SequenceEvaluation evaluate_order(const TensorNetwork& net, const std::vector<int>& wire_order);
int evaluate_sequence(const TensorNetwork& net, const ContractionSequence& seq);

// Sequence built from a wire order, with complexity filled in.
ContractionSequence make_sequence(const TensorNetwork& net, const std::vector<int>& wire_order);

struct CcResult {
  int cc = 0;
  bool optimal = false;
  bool timed_out = false;
  int lower_bound = 0;
  ContractionSequence sequence;
  ExactResult solver;
  LineGraphMap map;
};

CcResult optimal_cc(const TensorNetwork& net, const ExactOptions& options = {});

ContractionSequence td_to_sequence(const TensorNetwork& net, const TreeDecomposition& td, const LineGraphMap& map);
EliminationOrdering sequence_to_eo(const TensorNetwork& net, const ContractionSequence& seq, const LineGraphMap& map);

// Exhaustive minimum over all contraction orders; at most 9 wires.
int brute_force_cc(const TensorNetwork& net);

std::string write_sequence_json(const ContractionSequence& seq, int indent = -1);
ContractionSequence read_sequence_json(const std::string& text);

}  // namespace tenseq
