#pragma once

#include <string>
#include <vector>

#include "tenseq/graph.hpp"

namespace tenseq {

// Exact canonical label of a network up to isomorphism. Vertices are colored
// by role, self-loop count and open leg count; parallel wires are encoded as
// edge multiplicities. Equal labels iff the colored multigraphs are isomorphic.
std::string canonical_form(const TensorNetwork& net);

// Same for a simple graph with uniform vertex color.
std::string canonical_form(const Graph& g);

}  // namespace tenseq
