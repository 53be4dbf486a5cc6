#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "tenseq/graph.hpp"

namespace tenseq {

using cplx = std::complex<double>;

// Gate on distinct qubits; matrix is 2^m x 2^m row-major as [out][in], with
// the first listed qubit the most significant bit of each index.
struct Gate {
  std::vector<int> qubits;
  std::vector<cplx> matrix;
  std::string label;
};

struct Circuit {
  int qubits = 0;
  std::vector<std::array<cplx, 2>> initial;  // per-qubit input state
  std::vector<Gate> gates;                   // applied in list order
  std::vector<int> terminal;                 // projected bitstring
};

// Circuit with every qubit starting in |0> and projected on |0>.
Circuit empty_circuit(int qubits);

// Amplitude network of a circuit. Tensor legs: state [out], gate [in..., out...]
// per listed qubit, projector [in]; layer is 0 for states, 1 + gate index for
// gates and gates + 1 for projectors.
TensorNetwork circuit_network(const Circuit& c);

struct QaoaOptions {
  int rounds = 1;
  double gamma = 0.4;
  double beta = 0.3;
  bool decompose_cost = false;  // CNOT, phase, CNOT instead of one two-qubit tensor
  std::vector<int> terminal;    // empty means all zeros
};

Circuit qaoa_maxcut_circuit(const Graph& g, const QaoaOptions& options = {});
TensorNetwork qaoa_maxcut_network(const Graph& g, const QaoaOptions& options = {});

namespace gates {
std::vector<cplx> hadamard();
std::vector<cplx> cnot();
std::vector<cplx> zz_phase(double gamma);
std::vector<cplx> phase(double gamma);
std::vector<cplx> x_rotation(double beta);
}  // namespace gates

}  // namespace tenseq
