#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "parkroute/cli.h"
#include "parkroute/solution.h"

using namespace parkroute;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code = 0;
  std::string out;
  std::string err;
};

Captured call(std::vector<std::string> args) {
  args.insert(args.begin(), "parkroute");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("parkroute_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate then solve") {
  TempDir dir;
  const std::string inst = dir / "inst.json";
  REQUIRE(call({"gen", "--geo", "-n", "8", "--seed", "1", "-o", inst}).code == 0);
  const Captured r = call({"solve", "--method", "exact", inst});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["status"] == "optimal");
  CHECK(doc["seed"] == 1);
  CHECK(doc["stops"].size() >= 1);
  CHECK(doc["objective"].get<double>() == doctest::Approx(doc["total"].get<double>()));

  const Captured h = call({"solve", "--method", "heuristic", inst});
  CHECK(h.code == 0);
  const auto hdoc = nlohmann::json::parse(h.out);
  CHECK(hdoc["total"].get<double>() >= doc["total"].get<double>() - 1e-9);
}

TEST_CASE("identical runs give identical bytes") {
  TempDir dir;
  const std::string a = dir / "a.json";
  const std::string b = dir / "b.json";
  call({"gen", "--geo", "-n", "7", "--seed", "5", "-q", "2", "-o", a});
  call({"gen", "--geo", "-n", "7", "--seed", "5", "-q", "2", "-o", b});
  CHECK(slurp(a) == slurp(b));
  CHECK(call({"solve", a}).out == call({"solve", a}).out);
  CHECK(call({"benchmark", a}).out == call({"benchmark", a}).out);
}

TEST_CASE("benchmark csv") {
  TempDir dir;
  const std::string inst = dir / "inst.json";
  call({"gen", "--geo", "-n", "6", "--seed", "2", "--park-time", "10", "-o", inst});
  const Captured r = call({"benchmark", "--models", "npt,mtsp,ms:0.6,ms:0.8", inst});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "instance,model,method,objective,completion,stops,park,drive,walk,load,cdpp_optimum,seed");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::istringstream cs(line);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 12);
    CHECK(std::stod(cells[4]) >= std::stod(cells[10]) - 1e-6);
    CHECK(cells[11] == "2");
    CHECK(cells[4].find('.') == cells[4].size() - 7);
  }
  CHECK(rows == 4);
}

TEST_CASE("grid sweep flips regime near the q=3 threshold") {
  const Captured r = call({"grid", "--q", "3", "--sqrt-n", "6", "--sweep", "p=0:0.25:2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "p,threshold,tsp_value,oracle_value,witness_value,regime");
  // Unit rates: threshold = 4/3 - 1 = 1/3.
  while (std::getline(lines, line)) {
    const double p = std::stod(line.substr(0, line.find(',')));
    const bool above = p > 1.0 / 3;
    CHECK((line.find("tsp_suboptimal") != std::string::npos) == above);
  }
}

TEST_CASE("lp export and reports") {
  TempDir dir;
  const std::string inst = dir / "inst.json";
  const std::string lp = dir / "m.lp";
  const std::string sol = dir / "sol.json";
  call({"gen", "--geo", "-n", "4", "--seed", "3", "-q", "2", "-o", inst});
  CHECK(call({"export-lp", "--reduce", "--claim4", inst, "-o", lp}).code == 0);
  const std::string text = slurp(lp);
  CHECK(text.find("vi.claim4(1):") != std::string::npos);
  CHECK(text.find("reduction=1") != std::string::npos);

  CHECK(call({"solve", inst, "-o", sol}).code == 0);
  const Captured rep = call({"report", sol, inst});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("total") != std::string::npos);
  const Captured curve = call({"report", "--threshold-curve"});
  CHECK(curve.out.find("0.070000,1.925000,0.991667") != std::string::npos);
  CHECK(call({"report", "--catalog", inst, "--spot", "1"}).out.find("walk_cost") !=
        std::string::npos);
}

TEST_CASE("errors and exit codes") {
  CHECK(call({}).code != 0);
  CHECK(call({"frobnicate"}).code != 0);
  CHECK(call({"solve", "/nonexistent/instance.json"}).code == 1);
  CHECK(call({"gen", "--geo", "--grid"}).code != 0);
  TempDir dir;
  const std::string inst = dir / "inst.json";
  call({"gen", "--geo", "-n", "5", "-o", inst});
  CHECK(call({"solve", "--method", "heuristic", "--claim4", inst}).code == 1);
  CHECK(call({"grid", "--sweep", "p=1:2"}).code == 1);

  RunConfig cfg;
  cfg.command = "nope";
  std::ostringstream out, err;
  CHECK(run(cfg, out, err) == 1);
  CHECK(err.str().find("unknown command") != std::string::npos);
}

TEST_CASE("budget from the environment") {
  TempDir dir;
  const std::string inst = dir / "inst.json";
  call({"gen", "--geo", "-n", "12", "--seed", "4", "--park-time", "20", "-o", inst});
  ::setenv("PARKROUTE_BUDGET_SECONDS", "0.001", 1);
  const Captured r = call({"solve", inst});
  CHECK((r.code == 0 || r.code == 2 || r.code == 4));
  // The flag wins over the environment.
  CHECK(call({"solve", "--max-seconds", "60", inst}).code == 0);
  ::setenv("PARKROUTE_BUDGET_SECONDS", "0", 1);
  CHECK(call({"solve", inst}).code == 1);
  ::unsetenv("PARKROUTE_BUDGET_SECONDS");
  ::setenv("PARKROUTE_BUDGET_SECONDS", "abc", 1);
  CHECK(call({"solve", inst}).code == 1);
  ::unsetenv("PARKROUTE_BUDGET_SECONDS");
}

TEST_CASE("several instances in parallel") {
  TempDir dir;
  std::vector<std::string> args{"solve", "--jobs", "2", "-o", dir / "out"};
  for (int s = 1; s <= 3; ++s) {
    const std::string p = dir / ("i" + std::to_string(s) + ".json");
    call({"gen", "--geo", "-n", "6", "--seed", std::to_string(s), "-o", p});
    args.push_back(p);
  }
  CHECK(call(args).code == 0);
  for (int s = 1; s <= 3; ++s) {
    CHECK(fs::exists(dir.path / "out" / ("i" + std::to_string(s) + ".solution.json")));
  }
}
