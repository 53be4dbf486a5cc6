#include "tenseq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tenseq/bench.hpp"
#include "tenseq/circuit.hpp"
#include "tenseq/contraction.hpp"
#include "tenseq/errors.hpp"
#include "tenseq/executor.hpp"
#include "tenseq/mera.hpp"

namespace tenseq::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_solver = 1;
constexpr int exit_input = 2;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::optional<std::chrono::milliseconds> to_timeout(double seconds) {
  if (seconds <= 0.0) return std::nullopt;
  return std::chrono::milliseconds(std::max<long long>(1, std::llround(seconds * 1000.0)));
}

std::string pad3(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

std::vector<int> parse_bits(const std::string& bits, int n) {
  if (bits.empty()) return {};
  if (static_cast<int>(bits.size()) != n) throw ParameterError("terminal bitstring needs one bit per qubit");
  std::vector<int> out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParameterError("terminal bitstring may only contain 0 and 1");
    out.push_back(c - '0');
  }
  return out;
}

struct GenerateArgs {
  std::string kind;
  int d = 1;
  int levels = 2;
  int ops = 1;
  bool no_top = false;
  int r = 3;
  int n = 10;
  int count = 1;
  std::uint64_t seed = 0;
  std::string from;
  int rounds = 1;
  double gamma = 0.4;
  double beta = 0.3;
  bool decompose = false;
  std::string terminal;
  std::string out = ".";
};

int cmd_generate(const GenerateArgs& a) {
  const fs::path out(a.out);
  json manifest;
  json instances = json::array();
  if (a.kind == "mera") {
    const auto corpus = mera_corpus(a.d, a.ops, a.levels, !a.no_top);
    const auto& s = corpus.summary;
    const std::string group = "mera_d" + std::to_string(a.d) + "_o" + std::to_string(a.ops) + "_l" +
                              std::to_string(a.levels);
    fs::create_directories(out);
    for (std::size_t i = 0; i < corpus.networks.size(); ++i) {
      const std::string id = group + "_" + pad3(i);
      spit(out / (id + ".json"), write_network_json(corpus.networks[i]) + "\n");
      instances.push_back({{"id", id},
                           {"path", id + ".json"},
                           {"group", group},
                           {"placement", corpus.placements[i]},
                           {"class", corpus.class_id[i]}});
    }
    json cells = json::array();
    for (const auto& c : s.cells)
      cells.push_back({{"V", c.vertices}, {"E", c.edges}, {"S", c.total}, {"Su", c.unique},
                       {"Su_tabulated", c.unique_tabulated}});
    manifest = {{"kind", "mera"},  {"d", s.d},          {"k", s.k},
                {"ops", s.ops},    {"level", s.levels}, {"top_connect", !a.no_top},
                {"total", s.total}, {"unique", s.unique}, {"unique_tabulated", s.unique_tabulated},
                {"cells", cells}};
    std::cout << "mera d=" << s.d << " levels=" << s.levels << " ops=" << s.ops << ": total=" << s.total
              << " unique=" << s.unique << " unique_tabulated=" << s.unique_tabulated << "\n";
  } else if (a.kind == "regular" || (a.kind == "qaoa" && a.from.empty())) {
    if (a.count < 1) throw ParameterError("--count must be positive");
    const bool qaoa = a.kind == "qaoa";
    const std::string group = std::string(qaoa ? "qaoa" : "regular") + "_r" + std::to_string(a.r) + "_n" +
                              std::to_string(a.n);
    fs::create_directories(out);
    for (int i = 0; i < a.count; ++i) {
      const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
      const Graph g = random_regular(a.r, a.n, seed);
      const std::string id = group + "_s" + std::to_string(seed);
      std::string path = id + ".gr";
      if (qaoa) {
        QaoaOptions q{a.rounds, a.gamma, a.beta, a.decompose, parse_bits(a.terminal, a.n)};
        path = id + ".json";
        spit(out / path, write_network_json(qaoa_maxcut_network(g, q)) + "\n");
      } else {
        spit(out / path, write_gr(g));
      }
      instances.push_back({{"id", id}, {"path", path}, {"group", group}, {"seed", seed}});
    }
    manifest = {{"kind", a.kind}, {"r", a.r}, {"n", a.n}, {"count", a.count}, {"seed", a.seed}};
    if (qaoa) {
      manifest["rounds"] = a.rounds;
      manifest["gamma"] = a.gamma;
      manifest["beta"] = a.beta;
      manifest["decompose_cost"] = a.decompose;
    }
    std::cout << "wrote " << a.count << " instances to " << out.string() << "\n";
  } else if (a.kind == "qaoa") {
    const Graph g = read_gr(slurp(a.from));
    QaoaOptions q{a.rounds, a.gamma, a.beta, a.decompose, parse_bits(a.terminal, g.n())};
    const std::string text = write_network_json(qaoa_maxcut_network(g, q)) + "\n";
    // A .json target is the network file itself; anything else is a directory.
    if (out.extension() == ".json") {
      spit(out, text);
      std::cout << "wrote " << out.string() << "\n";
      return exit_ok;
    }
    const std::string id = "qaoa_" + fs::path(a.from).stem().string();
    spit(out / (id + ".json"), text);
    instances.push_back({{"id", id}, {"path", id + ".json"}, {"group", "qaoa"}});
    manifest = {{"kind", "qaoa"}, {"from", a.from}, {"rounds", a.rounds}, {"gamma", a.gamma}, {"beta", a.beta},
                {"decompose_cost", a.decompose}};
    std::cout << "wrote " << (out / (id + ".json")).string() << "\n";
  } else {
    throw ParameterError("unknown generator '" + a.kind + "'");
  }
  manifest["instances"] = instances;
  spit(out / "manifest.json", manifest.dump(2) + "\n");
  return exit_ok;
}

struct SolveArgs {
  std::string instance;
  std::string algorithm = "exact";
  double timeout = 0.0;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string results;
  std::string solver_cmd;
  std::string format = "json";
};

int cmd_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.instance);
  SolveOptions so;
  so.algorithm = a.algorithm;
  so.timeout = to_timeout(a.timeout);
  so.seed = a.seed;
  so.solver_cmd = a.solver_cmd;
  auto o = solve(inst, so);
  write_artifacts(o, a.out, inst.id + "." + o.record.algorithm);
  const fs::path results = a.results.empty() ? fs::path(a.out) / "results.jsonl" : fs::path(a.results);
  if (results.has_parent_path()) fs::create_directories(results.parent_path());
  std::ofstream(results, std::ios::app) << record_json(o.record) << "\n";
  if (a.format == "csv")
    std::cout << csv_header << "\n" << record_csv(o.record) << "\n";
  else
    std::cout << record_json(o.record) << "\n";
  if (o.record.status == status::error) {
    std::cerr << "solver error: " << o.record.message << "\n";
    return exit_solver;
  }
  return o.record.status == status::timeout ? exit_solver : exit_ok;
}

enum class Kind { td, eo, sequence };

Kind parse_kind(const std::string& s) {
  if (s == "td") return Kind::td;
  if (s == "eo") return Kind::eo;
  if (s == "sequence" || s == "seq") return Kind::sequence;
  throw ParameterError("unknown artifact kind '" + s + "'");
}

struct Artifact {
  Kind kind = Kind::td;
  TreeDecomposition td;
  EliminationOrdering eo;
  ContractionSequence seq;
  std::string hash;
};

Artifact read_artifact(const fs::path& path) {
  const std::string text = slurp(path);
  Artifact art;
  if (path.extension() == ".td") {
    std::vector<std::string> comments;
    art.kind = Kind::td;
    art.td = read_td(text, &comments);
    for (const auto& c : comments)
      if (c.rfind("instance ", 0) == 0) art.hash = c.substr(9);
    return art;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("artifact JSON: ") + e.what());
  }
  if (j.contains("steps")) {
    art.kind = Kind::sequence;
    art.seq = read_sequence_json(text);
    art.hash = art.seq.network_hash;
  } else {
    art.kind = Kind::eo;
    art.eo = read_eo_json(text, &art.hash);
  }
  return art;
}

void check_pairing(const Artifact& art, const Instance& inst) {
  if (art.hash.empty()) throw RefusalError("artifact carries no instance hash; cannot pair it with " + inst.id);
  if (art.hash != inst.hash)
    throw RefusalError("artifact belongs to instance " + art.hash + ", not " + inst.hash + " (" + inst.id + ")");
}

void check_order(const Graph& g, const std::vector<int>& order) {
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  if (static_cast<int>(order.size()) != g.n()) throw ValidationError("ordering length differs from vertex count");
  for (int v : order) {
    if (v < 0 || v >= g.n() || seen[static_cast<std::size_t>(v)]) throw ValidationError("ordering is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

struct ConvertArgs {
  std::string artifact;
  std::string instance;
  std::string to;
  std::string out;
};

int cmd_convert(const ConvertArgs& a) {
  const Instance inst = load_instance(a.instance);
  Artifact art = read_artifact(a.artifact);
  check_pairing(art, inst);
  const Kind target = parse_kind(a.to);
  if ((art.kind == Kind::sequence || target == Kind::sequence) && !inst.is_network)
    throw ParameterError("contraction sequences need a network instance");
  const Graph& g = inst.graph;
  int from_width = 0;
  // Normalize to an elimination ordering plus, when available, the td itself.
  std::optional<TreeDecomposition> td;
  EliminationOrdering eo;
  switch (art.kind) {
    case Kind::td: {
      const auto rep = validate_td(g, art.td);
      if (!rep.ok) throw ValidationError("input decomposition invalid: " + rep.message);
      from_width = art.td.width();
      td = art.td;
      eo = td_to_eo(g, art.td);
      break;
    }
    case Kind::eo:
      check_order(g, art.eo.order);
      eo.order = art.eo.order;
      eo.width = ordering_width(g, eo.order);
      from_width = eo.width;
      break;
    case Kind::sequence: {
      from_width = evaluate_sequence(inst.net, art.seq);
      eo = sequence_to_eo(inst.net, art.seq, inst.map);
      break;
    }
  }
  std::string text;
  int to_width = 0;
  if (target == Kind::eo) {
    to_width = eo.width;
    text = write_eo_json(eo, inst.hash);
  } else {
    const TreeDecomposition t = td && art.kind == Kind::td ? *td : eo_to_td(g, eo.order);
    if (target == Kind::td) {
      to_width = t.width();
      text = write_td(t, {"instance " + inst.hash});
    } else {
      ContractionSequence seq =
          art.kind == Kind::sequence ? art.seq : td_to_sequence(inst.net, t, inst.map);
      to_width = seq.complexity;
      text = write_sequence_json(seq) + "\n";
    }
  }
  if (to_width > from_width)
    throw ContractViolation("conversion increased width from " + std::to_string(from_width) + " to " +
                            std::to_string(to_width));
  if (a.out.empty())
    std::cout << text;
  else
    spit(a.out, text);
  std::cerr << "width " << from_width << " -> " << to_width << "\n";
  return exit_ok;
}

struct ContractArgs {
  std::string network;
  std::string sequence;
  bool end_to_end = false;
  bool oracle = false;
  std::string algorithm = "exact";
  double timeout = 0.0;
  std::uint64_t seed = 0;
  double memory_cap_log2 = 30;
  std::string out;
};

int cmd_contract(const ContractArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const TensorNetwork net = read_network_json(slurp(a.network));
  ContractionSequence seq;
  double solve_ms = 0.0;
  std::string solve_status;
  if (!a.sequence.empty()) {
    Artifact art = read_artifact(a.sequence);
    if (art.kind != Kind::sequence) throw ParameterError("--sequence expects a sequence JSON file");
    if (art.hash != network_hash(net)) throw RefusalError("sequence was computed for another network");
    seq = art.seq;
  } else {
    if (!a.end_to_end) throw ParameterError("give --sequence or --end-to-end");
    SolveOptions so;
    so.algorithm = a.algorithm;
    so.timeout = to_timeout(a.timeout);
    so.seed = a.seed;
    auto o = solve(make_instance(net, fs::path(a.network).stem().string()), so);
    if (o.record.status == status::error) throw Error("solver error: " + o.record.message);
    seq = *o.sequence;
    solve_ms = o.record.time_ms;
    solve_status = o.record.status;
  }
  const int complexity = evaluate_sequence(net, seq);
  ExecuteOptions eo;
  eo.memory_cap = static_cast<std::uint64_t>(std::ldexp(1.0, static_cast<int>(a.memory_cap_log2)));
  const auto res = contract_all(net, seq, eo);
  if (res.trace.max_rank != complexity)
    throw ContractViolation("trace max rank " + std::to_string(res.trace.max_rank) + " differs from complexity " +
                            std::to_string(complexity));
  json j = json::parse(write_trace_json(res));
  j["complexity"] = complexity;
  if (!solve_status.empty()) {
    j["solve_status"] = solve_status;
    j["solve_ms"] = solve_ms;
  }
  if (a.oracle) {
    const auto ref = statevector_oracle(net);
    j["oracle"] = {ref.real(), ref.imag()};
    j["oracle_diff"] = std::abs(ref - res.amplitude);
  }
  j["total_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (a.out.empty())
    std::cout << j.dump(2) << "\n";
  else
    spit(a.out, j.dump(2) + "\n");
  return exit_ok;
}

struct BenchArgs {
  std::string manifest;
  std::vector<std::string> algorithms{"exact"};
  double timeout = 900.0;
  int jobs = 1;
  bool exclusive = false;
  std::uint64_t seed = 0;
  std::string out = "bench_out";
  std::string solver_cmd;
  std::string format = "csv";
};

int cmd_bench(const BenchArgs& a) {
  BenchOptions bo;
  bo.algorithms = a.algorithms;
  for (const auto& alg : bo.algorithms)
    if (alg != "exact" && alg != "min-fill" && alg != "min-degree")
      throw ParameterError("unknown algorithm '" + alg + "'");
  if (a.jobs < 1) throw ParameterError("--jobs must be positive");
  bo.timeout = to_timeout(a.timeout);
  bo.jobs = a.jobs;
  bo.exclusive = a.exclusive;
  bo.seed = a.seed;
  bo.out = a.out;
  bo.solver_cmd = a.solver_cmd;
  const auto res = run_bench(read_manifest(a.manifest), bo);
  std::cout << (a.format == "json" ? aggregate_json(res.aggregates) : aggregate_csv(res.aggregates));
  return exit_ok;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Contraction sequences for tensor networks through line-graph treewidth"};
  app.require_subcommand(1);
  std::string format = "json";

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate MERA, random regular or QAOA instances");
  gen->add_option("kind", ga.kind, "mera | regular | qaoa")->required()->check(CLI::IsMember({"mera", "regular", "qaoa"}));
  gen->add_option("--d", ga.d, "MERA dimension (1 or 2)");
  gen->add_option("--levels", ga.levels, "MERA coarsening levels");
  gen->add_option("--ops", ga.ops, "MERA operators (1 or 2)");
  gen->add_flag("--no-top-connect", ga.no_top, "leave MERA top isometries unconnected");
  gen->add_option("--r", ga.r, "regular degree");
  gen->add_option("--n", ga.n, "vertex count");
  gen->add_option("--count", ga.count, "instances to draw");
  gen->add_option("--seed", ga.seed, "first seed; instance i uses seed + i");
  gen->add_option("--from", ga.from, "QAOA from a .gr graph");
  gen->add_option("--rounds", ga.rounds, "QAOA rounds");
  gen->add_option("--gamma", ga.gamma, "QAOA cost angle");
  gen->add_option("--beta", ga.beta, "QAOA mixer angle");
  gen->add_flag("--decompose", ga.decompose, "cost gate as CNOT, phase, CNOT");
  gen->add_option("--terminal", ga.terminal, "projected bitstring, qubit 0 first");
  gen->add_option("--out", ga.out, "output directory (or .json file for --from)");

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Solve one instance and write td, ordering and sequence");
  sol->add_option("instance", sa.instance, ".gr graph or network JSON")->required();
  sol->add_option("--algorithm", sa.algorithm, "exact | min-fill | min-degree")
      ->check(CLI::IsMember({"exact", "min-fill", "min-degree"}));
  sol->add_option("--timeout", sa.timeout, "seconds; 0 disables");
  sol->add_option("--seed", sa.seed);
  sol->add_option("--out", sa.out, "artifact directory");
  sol->add_option("--results", sa.results, "results JSON-lines file (default <out>/results.jsonl)");
  sol->add_option("--solver-cmd", sa.solver_cmd, "external PACE solver reading .gr on stdin, writing .td");
  sol->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  ConvertArgs ca;
  auto* conv = app.add_subcommand("convert", "Convert between td, elimination ordering and sequence");
  conv->add_option("artifact", ca.artifact, ".td, ordering JSON or sequence JSON")->required();
  conv->add_option("--instance", ca.instance, "instance the artifact belongs to")->required();
  conv->add_option("--to", ca.to, "td | eo | sequence")->required()->check(CLI::IsMember({"td", "eo", "sequence", "seq"}));
  conv->add_option("--out", ca.out, "output file (default stdout)");

  ContractArgs xa;
  auto* con = app.add_subcommand("contract", "Contract a numeric network along a sequence");
  con->add_option("network", xa.network, "network JSON with entries")->required();
  con->add_option("--sequence", xa.sequence, "sequence JSON");
  con->add_flag("--end-to-end", xa.end_to_end, "solve for a sequence first and report combined time");
  con->add_flag("--oracle", xa.oracle, "compare with state-vector simulation");
  con->add_option("--algorithm", xa.algorithm)->check(CLI::IsMember({"exact", "min-fill", "min-degree"}));
  con->add_option("--timeout", xa.timeout, "solver seconds; 0 disables");
  con->add_option("--seed", xa.seed);
  con->add_option("--memory-cap-log2", xa.memory_cap_log2, "entries per intermediate tensor, log2");
  con->add_option("--out", xa.out, "trace JSON file (default stdout)");

  BenchArgs ba;
  auto* ben = app.add_subcommand("bench", "Run a benchmark campaign over a manifest");
  ben->add_option("manifest", ba.manifest)->required();
  ben->add_option("--algorithms", ba.algorithms, "exact, min-fill, min-degree")->delimiter(',');
  ben->add_option("--timeout", ba.timeout, "seconds per run; 0 disables");
  ben->add_option("--jobs", ba.jobs, "parallel workers");
  ben->add_flag("--exclusive", ba.exclusive, "one run at a time");
  ben->add_option("--seed", ba.seed, "seed base for entries without a seed");
  ben->add_option("--out", ba.out, "output directory");
  ben->add_option("--solver-cmd", ba.solver_cmd, "external PACE solver");
  ben->add_option("--format", ba.format, "aggregate on stdout: json | csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }
  try {
    if (*gen) return cmd_generate(ga);
    if (*sol) {
      sa.format = format;
      return cmd_solve(sa);
    }
    if (*conv) return cmd_convert(ca);
    if (*con) return cmd_contract(xa);
    if (*ben) return cmd_bench(ba);
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

}  // namespace tenseq::cli
