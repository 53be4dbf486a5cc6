#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "tenseq/contraction.hpp"
#include "tenseq/graph.hpp"

namespace tenseq {

// legs and dims are parallel; entries are row-major over legs.
struct DenseTensor {
  std::vector<int> legs;
  std::vector<int> dims;
  std::vector<std::complex<double>> entries;
};

struct StepTrace {
  int wire = 0;
  int tensor_a = 0;  // representative vertex of each merged group
  int tensor_b = 0;
  int indices = 0;      // distinct indices the kernel loops over
  int degree = 0;       // indices - 1: uncontracted wires on the merged tensor, siblings included
  int result_rank = 0;  // legs of the produced tensor
  std::uint64_t multiply_adds = 0;
};

struct ExecutionTrace {
  std::vector<StepTrace> steps;
  int max_rank = 0;         // max degree over steps
  int max_result_rank = 0;
  std::uint64_t total_multiply_adds = 0;
  double wall_ms = 0.0;
};

struct ContractResult {
  std::complex<double> amplitude;
  ExecutionTrace trace;
};

struct ExecuteOptions {
  std::uint64_t memory_cap = std::uint64_t{1} << 30;  // entries per intermediate tensor
};

// Pairwise contraction along the listed wires; wires already consumed are
// skipped. Every tensor needs entries and the network no open legs.
ContractResult contract_all(const TensorNetwork& net, const std::vector<int>& wire_order,
                            const ExecuteOptions& options = {});
ContractResult contract_all(const TensorNetwork& net, const ContractionSequence& seq,
                            const ExecuteOptions& options = {});

// Sums over all indices shared by a and b; the result lists a's remaining legs
// then b's. multiply_adds receives the kernel loop count.
DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b, std::uint64_t* multiply_adds = nullptr);

// Direct state-vector simulation of a circuit network: state tensors give the
// input, gate tensors apply in layer order, projectors close the amplitude.
std::complex<double> statevector_oracle(const TensorNetwork& net);

std::string write_trace_json(const ContractResult& result, int indent = -1);

}  // namespace tenseq
