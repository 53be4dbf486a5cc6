#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tenseq/contraction.hpp"
#include "tenseq/decomposition.hpp"
#include "tenseq/graph.hpp"
#include "tenseq/treewidth.hpp"

namespace tenseq {

// A solver input: a PACE graph, or a network solved through its line graph.
struct Instance {
  std::string id;
  bool is_network = false;
  Graph graph;  // the graph handed to the solver
  TensorNetwork net;
  LineGraphMap map;
  std::string hash;  // graph_hash or network_hash of the source
};

// Reads .gr or network JSON, chosen by extension (.gr, otherwise JSON).
Instance load_instance(const std::filesystem::path& path, const std::string& id = {});
Instance make_instance(const Graph& g, const std::string& id);
Instance make_instance(const TensorNetwork& net, const std::string& id);

namespace status {
inline constexpr const char* optimal = "optimal";
inline constexpr const char* timeout = "timeout-with-bound";
inline constexpr const char* upper_bound = "upper-bound";
inline constexpr const char* error = "error";
}  // namespace status

struct BenchRecord {
  std::string instance;
  std::string group;
  std::string algorithm;
  std::uint64_t seed = 0;
  double timeout_s = 0.0;
  std::string status;
  int width = -1;        // treewidth bound; equals cc for networks
  int lower_bound = -1;
  double time_ms = 0.0;
  std::string message;
  std::string instance_hash;
  std::vector<std::string> artifacts;
};

struct SolveOptions {
  std::string algorithm = "exact";  // exact | min-fill | min-degree
  std::optional<std::chrono::milliseconds> timeout;
  std::uint64_t seed = 0;
  std::string solver_cmd;  // external PACE solver on stdio; replaces the native one
  std::size_t memo_cap = std::size_t{1} << 22;
};

struct SolveOutcome {
  BenchRecord record;
  bool has_witness = false;
  TreeDecomposition td;
  EliminationOrdering eo;
  std::optional<ContractionSequence> sequence;  // networks only
};

// Never throws for solver failures; those become status error.
SolveOutcome solve(const Instance& inst, const SolveOptions& options);

// Writes <stem>.td, <stem>.eo.json and, for networks, <stem>.seq.json; their
// paths are appended to the record's artifacts.
void write_artifacts(SolveOutcome& outcome, const std::filesystem::path& dir, const std::string& stem);

std::string write_eo_json(const EliminationOrdering& eo, const std::string& instance_hash, int indent = -1);
EliminationOrdering read_eo_json(const std::string& text, std::string* instance_hash = nullptr);

std::string record_json(const BenchRecord& r);
BenchRecord record_from_json(const std::string& line);
inline constexpr const char* csv_header = "instance,algorithm,seed,status,width,time_ms";
std::string record_csv(const BenchRecord& r);

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest directory unless absolute
  std::string group;
  std::optional<std::uint64_t> seed;
};

struct Manifest {
  std::vector<ManifestEntry> instances;
  std::filesystem::path dir;
};

Manifest read_manifest(const std::filesystem::path& path);

struct BenchOptions {
  std::vector<std::string> algorithms{"exact"};
  std::optional<std::chrono::milliseconds> timeout;
  int jobs = 1;
  bool exclusive = false;
  std::uint64_t seed = 0;  // entries without a seed use seed + index
  std::string solver_cmd;
  std::filesystem::path out;  // empty: no files written
};

struct Aggregate {
  std::string group;
  std::string algorithm;
  int rows = 0;
  int samples = 0;  // rows entering the statistics
  int timeouts = 0;
  int errors = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for one sample
  int min = 0;
  double median = 0.0;
  int max = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;  // manifest order, then algorithm order
  std::vector<Aggregate> aggregates;
};

// Runs every (instance, algorithm) pair. With an output directory, appends
// results.jsonl and rewrites results.csv, aggregate.csv and aggregate.json
// from this campaign's records, and stores witnesses under artifacts/.
BenchResult run_bench(const Manifest& manifest, const BenchOptions& options);

// Statistics over rows whose status is not timeout or error, grouped by
// (group, algorithm) in first-appearance order.
std::vector<Aggregate> aggregate(const std::vector<BenchRecord>& records);
std::string aggregate_csv(const std::vector<Aggregate>& aggregates);
std::string aggregate_json(const std::vector<Aggregate>& aggregates, int indent = 2);

}  // namespace tenseq
