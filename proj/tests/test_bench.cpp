#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "tenseq/bench.hpp"
#include "tenseq/circuit.hpp"
#include "tenseq/cli.hpp"
#include "tenseq/errors.hpp"

using namespace tenseq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tenseq_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tenseq");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return tenseq::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string strip_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("solve statuses") {
  auto k5 = make_instance(testing::complete_graph(5), "k5");
  auto r = solve(k5, {});
  CHECK(r.record.status == std::string(status::optimal));
  CHECK(r.record.width == 4);
  CHECK(r.has_witness);

  SolveOptions h;
  h.algorithm = "min-degree";
  auto grid = make_instance(testing::grid_graph(4, 4), "grid");
  auto rh = solve(grid, h);
  CHECK(rh.record.width >= 4);
  CHECK((rh.record.status == std::string(status::upper_bound) || rh.record.status == std::string(status::optimal)));

  auto c6 = make_instance(network_from_graph(testing::cycle_graph(6)), "c6");
  auto rc = solve(c6, {});
  CHECK(rc.record.width == 2);
  REQUIRE(rc.sequence);
  CHECK(evaluate_sequence(c6.net, *rc.sequence) == 2);

  SolveOptions bad;
  bad.algorithm = "nope";
  CHECK(solve(k5, bad).record.status == std::string(status::error));

  SolveOptions quick;
  quick.timeout = std::chrono::milliseconds(1);
  auto hard = make_instance(random_regular(5, 60, 1), "hard");
  auto rt = solve(hard, quick);
  CHECK(rt.record.status == std::string(status::timeout));
  CHECK(rt.record.time_ms < 101.0);
  CHECK(validate_td(hard.graph, rt.td).ok);
  CHECK(rt.td.width() == rt.record.width);
}

TEST_CASE("record serialization") {
  BenchRecord r;
  r.instance = "a,b";
  r.algorithm = "exact";
  r.seed = 3;
  r.status = status::optimal;
  r.width = 5;
  r.time_ms = 1.23456;
  r.artifacts = {"x.td"};
  CHECK(record_csv(r) == "\"a,b\",exact,3,optimal,5,1.235");
  auto back = record_from_json(record_json(r));
  CHECK(back.instance == r.instance);
  CHECK(back.width == 5);
  CHECK(back.artifacts == r.artifacts);
  r.width = -1;
  r.status = status::error;
  CHECK(record_csv(r) == "\"a,b\",exact,3,error,,1.235");
}

TEST_CASE("aggregate statistics skip timeouts and errors") {
  std::vector<BenchRecord> rows;
  auto add = [&](const std::string& group, const char* st, int w) {
    BenchRecord r;
    r.group = group;
    r.algorithm = "exact";
    r.status = st;
    r.width = w;
    rows.push_back(r);
  };
  for (int w : {4, 5, 5, 6}) add("a", status::optimal, w);
  add("a", status::timeout, 9);
  add("a", status::error, -1);
  add("b", status::optimal, 7);
  auto aggs = aggregate(rows);
  REQUIRE(aggs.size() == 2);
  CHECK(aggs[0].rows == 6);
  CHECK(aggs[0].samples == 4);
  CHECK(aggs[0].timeouts == 1);
  CHECK(aggs[0].errors == 1);
  CHECK(aggs[0].mean == doctest::Approx(5.0));
  CHECK(aggs[0].sd == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(aggs[0].min == 4);
  CHECK(aggs[0].median == 5.0);
  CHECK(aggs[0].max == 6);
  CHECK(aggs[1].sd == 0.0);
  const std::string csv = aggregate_csv(aggs);
  CHECK(csv.find("a,exact,6,4,1,1,5,0.816496580927726,4,5,6\n") != std::string::npos);
}

TEST_CASE("bench campaign is reproducible and writes artifacts") {
  TempDir dir;
  nlohmann::json manifest;
  manifest["instances"] = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    const std::string name = "g" + std::to_string(i) + ".gr";
    spit(dir.path / name, write_gr(random_regular(3, 12, static_cast<std::uint64_t>(i))));
    manifest["instances"].push_back({{"path", name}, {"group", "r3n12"}});
  }
  spit(dir.path / "broken.gr", "p tw 2 5\n");
  manifest["instances"].push_back({{"path", "broken.gr"}, {"group", "bad"}});
  spit(dir.path / "manifest.json", manifest.dump());
  auto m = read_manifest(dir.path / "manifest.json");
  BenchOptions opt;
  opt.algorithms = {"exact", "min-fill"};
  opt.jobs = 3;
  opt.out = dir.path / "run1";
  auto r1 = run_bench(m, opt);
  opt.out = dir.path / "run2";
  opt.jobs = 1;
  auto r2 = run_bench(m, opt);
  REQUIRE(r1.records.size() == 10);
  CHECK(r1.records[0].seed == 0);
  CHECK(r1.records[2].seed == 1);
  CHECK(r1.records[8].status == std::string(status::error));
  CHECK(strip_time(slurp(dir.path / "run1/results.csv")) == strip_time(slurp(dir.path / "run2/results.csv")));
  CHECK(slurp(dir.path / "run1/aggregate.csv") == slurp(dir.path / "run2/aggregate.csv"));
  for (const auto& rec : r1.records) {
    if (rec.status == std::string(status::error)) continue;
    REQUIRE(rec.artifacts.size() == 2);
    std::vector<std::string> comments;
    auto td = read_td(slurp(rec.artifacts[0]), &comments);
    CHECK(comments.front() == "instance " + rec.instance_hash);
    CHECK(td.width() == rec.width);
  }
  // Appending: a second campaign into the same directory adds lines.
  opt.out = dir.path / "run1";
  run_bench(m, opt);
  std::istringstream lines(slurp(dir.path / "run1/results.jsonl"));
  int count = 0;
  for (std::string l; std::getline(lines, l);) ++count;
  CHECK(count == 20);
}

TEST_CASE("command line exit codes and artifacts") {
  TempDir dir;
  const auto p = [&](const char* name) { return (dir.path / name).string(); };
  CHECK(run_cli({"generate", "regular", "--r", "3", "--n", "10", "--count", "3", "--seed", "1", "--out", p("reg")}) == 0);
  CHECK(fs::exists(dir.path / "reg/regular_r3_n10_s3.gr"));
  CHECK(run_cli({"generate", "regular", "--r", "3", "--n", "9", "--out", p("bad")}) == 2);
  CHECK(run_cli({"generate", "qaoa", "--from", p("reg/regular_r3_n10_s1.gr"), "--out", p("q.json")}) == 0);
  CHECK(run_cli({"generate", "mera", "--d", "1", "--levels", "3", "--ops", "1", "--out", p("mera")}) == 0);
  auto mm = nlohmann::json::parse(slurp(dir.path / "mera/manifest.json"));
  CHECK(mm["total"] == 8);
  CHECK(mm["unique"] == 3);
  CHECK(mm["instances"].size() == 8);

  CHECK(run_cli({"solve", p("q.json"), "--out", p("sol")}) == 0);
  CHECK(fs::exists(dir.path / "sol/q.exact.seq.json"));
  CHECK(run_cli({"solve", p("missing.json")}) == 2);
  CHECK(run_cli({"solve", p("q.json"), "--algorithm", "magic"}) == 2);

  CHECK(run_cli({"convert", p("sol/q.exact.td"), "--instance", p("q.json"), "--to", "sequence", "--out", p("s.json")}) == 0);
  CHECK(run_cli({"convert", p("s.json"), "--instance", p("q.json"), "--to", "td", "--out", p("t.td")}) == 0);
  CHECK(run_cli({"convert", p("sol/q.exact.eo.json"), "--instance", p("q.json"), "--to", "td", "--out", p("t2.td")}) == 0);
  CHECK(run_cli({"convert", p("sol/q.exact.td"), "--instance", p("reg/regular_r3_n10_s1.gr"), "--to", "eo"}) == 2);

  CHECK(run_cli({"contract", p("q.json"), "--sequence", p("s.json"), "--oracle", "--out", p("trace.json")}) == 0);
  auto trace = nlohmann::json::parse(slurp(dir.path / "trace.json"));
  CHECK(trace["oracle_diff"].get<double>() <= 1e-10);
  CHECK(trace["max_rank"] == trace["complexity"]);
  CHECK(run_cli({"contract", p("q.json"), "--end-to-end", "--out", p("trace2.json")}) == 0);
  CHECK(run_cli({"contract", p("q.json")}) == 2);

  spit(dir.path / "hard.gr", write_gr(random_regular(5, 60, 2)));
  CHECK(run_cli({"solve", p("hard.gr"), "--timeout", "0.001", "--out", p("sol")}) == 1);
  CHECK(run_cli({"bench", p("reg/manifest.json"), "--algorithms", "exact,min-degree", "--out", p("bench"),
             "--jobs", "2"}) == 0);
  CHECK(fs::exists(dir.path / "bench/aggregate.json"));
  CHECK(run_cli({"bench", p("reg/manifest.json"), "--algorithms", "bogus"}) == 2);
  CHECK(run_cli({}) == 2);
}
