#include "tenseq/bench.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tenseq/errors.hpp"

extern char** environ;

namespace tenseq {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct ExternalRun {
  bool timed_out = false;
  int exit_status = 0;
  std::string out;
};

// Runs cmd under /bin/sh with input on stdin; the process group is killed at
// the deadline.
ExternalRun run_external(const std::string& cmd, const std::string& input,
                         std::optional<Clock::time_point> deadline) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw Error("pipe failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  const char* argv[] = {"/bin/sh", "-c", cmd.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw Error("cannot start solver command");
  }
  fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
  ExternalRun run;
  std::size_t written = 0;
  int wfd = in_pipe[1];
  if (input.empty()) {
    close(wfd);
    wfd = -1;
  }
  int rfd = out_pipe[0];
  char buf[65536];
  while (rfd >= 0) {
    int wait_ms = -1;
    if (deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now()).count();
      if (left <= 0) {
        run.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(left, 1000));
    }
    pollfd fds[2];
    int nf = 0;
    fds[nf++] = {rfd, POLLIN, 0};
    if (wfd >= 0) fds[nf++] = {wfd, POLLOUT, 0};
    if (poll(fds, static_cast<nfds_t>(nf), wait_ms) < 0) continue;
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t got = read(rfd, buf, sizeof buf);
      if (got <= 0) {
        close(rfd);
        rfd = -1;
      } else {
        run.out.append(buf, static_cast<std::size_t>(got));
      }
    }
    if (wfd >= 0 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t put = write(wfd, input.data() + written, input.size() - written);
      if (put > 0) written += static_cast<std::size_t>(put);
      if (put < 0 || written == input.size()) {
        close(wfd);
        wfd = -1;
      }
    }
  }
  if (run.timed_out) kill(-pid, SIGKILL);
  if (wfd >= 0) close(wfd);
  if (rfd >= 0) close(rfd);
  int st = 0;
  waitpid(pid, &st, 0);
  run.exit_status = WIFEXITED(st) ? WEXITSTATUS(st) : 128 + (WIFSIGNALED(st) ? WTERMSIG(st) : 0);
  return run;
}

int certified_floor(const Graph& g) {
  if (g.n() == 0) return -1;
  return std::max(lower_bound(g, LowerBound::minor_min_width), lower_bound(g, LowerBound::degeneracy));
}

}  // namespace

Instance make_instance(const Graph& g, const std::string& id) {
  Instance inst;
  inst.id = id;
  inst.graph = g;
  inst.hash = graph_hash(g);
  return inst;
}

Instance make_instance(const TensorNetwork& net, const std::string& id) {
  Instance inst;
  inst.id = id;
  inst.is_network = true;
  inst.net = net;
  inst.map = line_graph(net, true);
  inst.graph = inst.map.line_graph;
  inst.hash = network_hash(net);
  return inst;
}

Instance load_instance(const fs::path& path, const std::string& id) {
  const std::string text = slurp(path);
  const std::string name = id.empty() ? path.stem().string() : id;
  if (path.extension() == ".gr") return make_instance(read_gr(text), name);
  return make_instance(read_network_json(text), name);
}

SolveOutcome solve(const Instance& inst, const SolveOptions& opt) {
  SolveOutcome out;
  BenchRecord& rec = out.record;
  rec.instance = inst.id;
  rec.algorithm = opt.solver_cmd.empty() ? opt.algorithm : "external";
  rec.seed = opt.seed;
  rec.timeout_s = opt.timeout ? static_cast<double>(opt.timeout->count()) / 1000.0 : 0.0;
  rec.instance_hash = inst.hash;
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (opt.timeout) deadline = start + *opt.timeout;
  try {
    const Graph& g = inst.graph;
    if (!opt.solver_cmd.empty()) {
      auto run = run_external(opt.solver_cmd, write_gr(g), deadline);
      rec.lower_bound = certified_floor(g);
      if (run.timed_out) {
        out.eo = best_heuristic(g, opt.seed, 1);
        out.td = eo_to_td(g, out.eo.order);
        rec.status = status::timeout;
      } else {
        if (run.exit_status != 0) throw Error("solver command exited with status " + std::to_string(run.exit_status));
        out.td = read_td(run.out);
        const auto report = validate_td(g, out.td);
        if (!report.ok) throw ValidationError("solver command returned an invalid decomposition: " + report.message);
        out.eo = td_to_eo(g, out.td);
        rec.status = out.td.width() <= rec.lower_bound ? status::optimal : status::upper_bound;
      }
    } else if (opt.algorithm == "exact") {
      ExactOptions eopt;
      eopt.timeout = opt.timeout;
      eopt.seed = opt.seed;
      eopt.memo_cap = opt.memo_cap;
      auto r = treewidth_exact(g, eopt);
      out.td = r.td;
      out.eo = r.eo;
      rec.lower_bound = r.lower_bound;
      rec.status = r.optimal ? status::optimal : (r.timed_out ? status::timeout : status::upper_bound);
    } else if (opt.algorithm == "min-fill" || opt.algorithm == "min-degree") {
      out.eo = heuristic_order(g, opt.algorithm == "min-fill" ? Heuristic::min_fill : Heuristic::min_degree, opt.seed);
      out.td = eo_to_td(g, out.eo.order);
      rec.lower_bound = certified_floor(g);
      rec.status = out.eo.width <= rec.lower_bound ? status::optimal : status::upper_bound;
    } else {
      throw ParameterError("unknown algorithm '" + opt.algorithm + "'");
    }
    const auto report = validate_td(g, out.td);
    if (!report.ok) throw ValidationError("witness decomposition invalid: " + report.message);
    rec.width = out.td.width();
    if (inst.is_network) {
      auto seq = td_to_sequence(inst.net, out.td, inst.map);
      seq.optimal = rec.status == status::optimal;
      if (seq.optimal && seq.complexity != rec.width)
        throw ContractViolation("sequence complexity differs from certified treewidth");
      rec.width = seq.complexity;
      out.sequence = seq;
    }
    out.has_witness = true;
  } catch (const std::exception& e) {
    rec.status = status::error;
    rec.message = e.what();
    rec.width = -1;
    out.has_witness = false;
  }
  rec.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

std::string write_eo_json(const EliminationOrdering& eo, const std::string& instance_hash, int indent) {
  json j = {{"instance", instance_hash}, {"order", eo.order}, {"width", eo.width}};
  return j.dump(indent) + "\n";
}

EliminationOrdering read_eo_json(const std::string& text, std::string* instance_hash) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("elimination ordering JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("order") || !j["order"].is_array())
    throw ParseError(0, "elimination ordering JSON needs an 'order' array");
  EliminationOrdering eo;
  eo.order = j["order"].get<std::vector<int>>();
  eo.width = j.value("width", 0);
  if (instance_hash) *instance_hash = j.value("instance", std::string());
  return eo;
}

void write_artifacts(SolveOutcome& o, const fs::path& dir, const std::string& stem) {
  if (!o.has_witness) return;
  fs::create_directories(dir);
  const auto td_path = dir / (stem + ".td");
  spit(td_path, write_td(o.td, {"instance " + o.record.instance_hash}));
  const auto eo_path = dir / (stem + ".eo.json");
  spit(eo_path, write_eo_json(o.eo, o.record.instance_hash));
  o.record.artifacts.push_back(td_path.string());
  o.record.artifacts.push_back(eo_path.string());
  if (o.sequence) {
    const auto seq_path = dir / (stem + ".seq.json");
    spit(seq_path, write_sequence_json(*o.sequence) + "\n");
    o.record.artifacts.push_back(seq_path.string());
  }
}

std::string record_json(const BenchRecord& r) {
  json j = {{"instance", r.instance},   {"group", r.group},
            {"algorithm", r.algorithm}, {"seed", r.seed},
            {"timeout_s", r.timeout_s}, {"status", r.status},
            {"width", r.width},         {"lower_bound", r.lower_bound},
            {"time_ms", r.time_ms},     {"message", r.message},
            {"instance_hash", r.instance_hash}, {"artifacts", r.artifacts}};
  return j.dump();
}

BenchRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  BenchRecord r;
  r.instance = j.at("instance").get<std::string>();
  r.group = j.value("group", std::string());
  r.algorithm = j.at("algorithm").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.timeout_s = j.value("timeout_s", 0.0);
  r.status = j.at("status").get<std::string>();
  r.width = j.at("width").get<int>();
  r.lower_bound = j.value("lower_bound", -1);
  r.time_ms = j.at("time_ms").get<double>();
  r.message = j.value("message", std::string());
  r.instance_hash = j.value("instance_hash", std::string());
  r.artifacts = j.value("artifacts", std::vector<std::string>{});
  return r;
}

std::string record_csv(const BenchRecord& r) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  return field(r.instance) + "," + field(r.algorithm) + "," + std::to_string(r.seed) + "," + r.status + "," +
         (r.width >= 0 ? std::to_string(r.width) : std::string()) + "," + fixed3(r.time_ms);
}

Manifest read_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("manifest JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("instances") || !j["instances"].is_array())
    throw ParseError(0, "manifest needs an 'instances' array");
  Manifest m;
  m.dir = path.parent_path();
  for (const auto& e : j["instances"]) {
    ManifestEntry me;
    me.path = e.at("path").get<std::string>();
    me.id = e.value("id", fs::path(me.path).stem().string());
    me.group = e.value("group", std::string());
    if (e.contains("seed")) me.seed = e["seed"].get<std::uint64_t>();
    m.instances.push_back(me);
  }
  return m;
}

std::vector<Aggregate> aggregate(const std::vector<BenchRecord>& records) {
  std::vector<Aggregate> out;
  std::map<std::pair<std::string, std::string>, std::vector<int>> widths;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.group, r.algorithm);
    auto [it, fresh] = slot.emplace(key, out.size());
    if (fresh) {
      Aggregate a;
      a.group = r.group;
      a.algorithm = r.algorithm;
      out.push_back(a);
    }
    Aggregate& a = out[it->second];
    ++a.rows;
    if (r.status == status::timeout)
      ++a.timeouts;
    else if (r.status == status::error)
      ++a.errors;
    else
      widths[key].push_back(r.width);
  }
  for (auto& a : out) {
    auto w = widths[{a.group, a.algorithm}];
    a.samples = static_cast<int>(w.size());
    if (w.empty()) continue;
    std::sort(w.begin(), w.end());
    double sum = 0.0;
    for (int x : w) sum += x;
    a.mean = sum / static_cast<double>(w.size());
    double ss = 0.0;
    for (int x : w) ss += (x - a.mean) * (x - a.mean);
    a.sd = w.size() > 1 ? std::sqrt(ss / static_cast<double>(w.size() - 1)) : 0.0;
    a.min = w.front();
    a.max = w.back();
    const std::size_t h = w.size() / 2;
    a.median = w.size() % 2 ? w[h] : (w[h - 1] + w[h]) / 2.0;
  }
  return out;
}

std::string aggregate_csv(const std::vector<Aggregate>& aggs) {
  std::string s = "group,algorithm,rows,samples,timeouts,errors,mean,sd,min,median,max\n";
  for (const auto& a : aggs) {
    s += a.group + "," + a.algorithm + "," + std::to_string(a.rows) + "," + std::to_string(a.samples) + "," +
         std::to_string(a.timeouts) + "," + std::to_string(a.errors) + ",";
    if (a.samples > 0)
      s += num(a.mean) + "," + num(a.sd) + "," + std::to_string(a.min) + "," + num(a.median) + "," +
           std::to_string(a.max);
    else
      s += ",,,,";
    s += "\n";
  }
  return s;
}

std::string aggregate_json(const std::vector<Aggregate>& aggs, int indent) {
  json arr = json::array();
  for (const auto& a : aggs) {
    json j = {{"group", a.group},       {"algorithm", a.algorithm}, {"rows", a.rows},
              {"samples", a.samples},   {"timeouts", a.timeouts},   {"errors", a.errors}};
    if (a.samples > 0) {
      j["mean"] = a.mean;
      j["sd"] = a.sd;
      j["min"] = a.min;
      j["median"] = a.median;
      j["max"] = a.max;
    }
    arr.push_back(j);
  }
  return arr.dump(indent) + "\n";
}

BenchResult run_bench(const Manifest& m, const BenchOptions& opt) {
  struct Job {
    std::size_t entry;
    std::size_t algorithm;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < m.instances.size(); ++i)
    for (std::size_t a = 0; a < opt.algorithms.size(); ++a) jobs.push_back({i, a});
  if (!opt.out.empty()) fs::create_directories(opt.out);
  BenchResult result;
  result.records.resize(jobs.size());
  std::mutex sink;
  std::ofstream jsonl;
  if (!opt.out.empty()) jsonl.open(opt.out / "results.jsonl", std::ios::app);
  // Instances are parsed once per job so that workers share nothing mutable.
  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const ManifestEntry& e = m.instances[job.entry];
    SolveOptions so;
    so.algorithm = opt.algorithms[job.algorithm];
    so.timeout = opt.timeout;
    so.seed = e.seed ? *e.seed : opt.seed + job.entry;
    so.solver_cmd = opt.solver_cmd;
    SolveOutcome o;
    try {
      const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : m.dir / e.path;
      o = solve(load_instance(p, e.id), so);
    } catch (const std::exception& ex) {
      o.record.instance = e.id;
      o.record.algorithm = so.solver_cmd.empty() ? so.algorithm : "external";
      o.record.seed = so.seed;
      o.record.status = status::error;
      o.record.message = ex.what();
    }
    o.record.group = e.group;
    o.record.timeout_s = opt.timeout ? static_cast<double>(opt.timeout->count()) / 1000.0 : 0.0;
    if (!opt.out.empty()) {
      try {
        write_artifacts(o, opt.out / "artifacts", e.id + "." + o.record.algorithm);
      } catch (const std::exception& ex) {
        o.record.message += std::string(o.record.message.empty() ? "" : "; ") + ex.what();
      }
    }
    std::lock_guard<std::mutex> lock(sink);
    result.records[j] = o.record;
    if (jsonl) jsonl << record_json(o.record) << "\n" << std::flush;
  };
  const int workers = opt.exclusive ? 1 : std::max(1, std::min<int>(opt.jobs, static_cast<int>(jobs.size())));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) run_job(j);
      });
    for (auto& t : pool) t.join();
  }
  result.aggregates = aggregate(result.records);
  if (!opt.out.empty()) {
    std::string csv = std::string(csv_header) + "\n";
    for (const auto& r : result.records) csv += record_csv(r) + "\n";
    spit(opt.out / "results.csv", csv);
    spit(opt.out / "aggregate.csv", aggregate_csv(result.aggregates));
    spit(opt.out / "aggregate.json", aggregate_json(result.aggregates));
  }
  return result;
}

}  // namespace tenseq
