#pragma once

#include <string>
#include <vector>

#include "tenseq/graph.hpp"

namespace tenseq {

// Binary (d = 1) or quaternary (d = 2) MERA on a periodic lattice of side
// 2^(levels + 1). Each coarsening level applies unitaries on 2^d-site blocks
// and then isometries merging 2^d sites into one. At the finest level the
// unitary blocks start at coordinate 0 and the isometry blocks at 1; coarser
// levels use the opposite offsets. levels coarsenings leave 2^d top isometries.
struct MeraSpec {
  int d = 1;
  int k = 2;  // isometry arity, 2^d
  int levels = 1;
  std::vector<std::vector<int>> operator_sites;  // L0 coordinates, x first
  bool top_connect = true;  // top isometries meet at one interface tensor
};

int mera_side(int levels);

// Full network: upper half, its reflection, operators between them. level is
// +/-(2i-1) for level-i unitaries, +/-2i for isometries, +/-(2 levels + 1)
// for the interface tensor and 0 for operators; mirror maps each tensor to
// its reflection (operators map to themselves).
struct MeraNetwork {
  TensorNetwork net;
  std::vector<int> level;
  std::vector<int> mirror;
  MeraSpec spec;
};

MeraNetwork build_mera(const MeraSpec& spec);

// Keeps operators and the tensors on ascending or descending paths from them,
// then closes every lost wire onto the tensor's mirror.
TensorNetwork causal_cone_reduce(const MeraNetwork& mera);

struct MeraCell {
  int vertices = 0;
  int edges = 0;
  int total = 0;
  int unique = 0;            // isomorphism classes inside the cell
  int unique_tabulated = 0;  // members not isomorphic to the cell's first member, plus one
};

struct MeraCorpusSummary {
  int d = 1;
  int k = 2;
  int ops = 1;
  int levels = 1;
  int total = 0;
  int unique = 0;
  int unique_tabulated = 0;
  std::vector<MeraCell> cells;  // ascending (vertices, edges)
};

struct MeraCorpus {
  std::vector<TensorNetwork> networks;
  std::vector<std::vector<std::vector<int>>> placements;  // operator coordinates per network
  std::vector<std::string> canonical;
  std::vector<int> class_id;  // first network index of each isomorphism class
  MeraCorpusSummary summary;
};

// One operator: every site of the 2^levels window per dimension. Two
// operators: the first at the origin, the second over the rest of the window.
MeraCorpus mera_corpus(int d, int ops, int levels, bool top_connect = true);

// Requisite wire count of a reduced MERA tensor of the given role.
int mera_arity(Role role, int d);

}  // namespace tenseq
