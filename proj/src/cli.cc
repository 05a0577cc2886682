#include "parkroute/cli.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "parkroute/benchmarks.h"
#include "parkroute/errors.h"
#include "parkroute/heuristic.h"
#include "parkroute/service_sets.h"
#include "solution_json.h"

namespace parkroute {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

struct Job {
  std::string text;
  std::string table;
  int code = 0;
  std::string error;
};

// Runs fn(i) for i in [0, count) on up to `jobs` threads, keeping results in
// input order.
template <typename Fn>
std::vector<Job> run_jobs(std::size_t count, int jobs, Fn fn) {
  std::vector<Job> results(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (const std::exception& e) {
        results[i].code = 1;
        results[i].error = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return results;
}

ExactOptions exact_options(const RunConfig& cfg) {
  ExactOptions eo;
  eo.budget = cfg.budget;
  eo.threads = cfg.threads;
  eo.claim3 = cfg.model.vi_claim3;
  eo.claim4 = cfg.model.vi_claim4;
  eo.corollary1 = cfg.model.vi_corollary1;
  eo.claim5 = cfg.model.vi_claim5;
  eo.corollary3 = cfg.model.vi_corollary3;
  eo.var_reduction = cfg.model.var_reduction;
  return eo;
}

ServiceSetCatalog catalog_for(const Instance& inst, bool reduce) {
  ServiceSetCatalog cat = enumerate_catalog(inst);
  return reduce ? reduce_catalog(cat) : cat;
}

ordered_json seed_json(const Instance& inst) {
  return inst.seed ? ordered_json(*inst.seed) : ordered_json(nullptr);
}

ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

void merge_into(ordered_json& doc, const ordered_json& part) {
  for (auto it = part.begin(); it != part.end(); ++it) doc[it.key()] = it.value();
}

Job solve_one(const RunConfig& cfg, const std::string& path) {
  const Instance inst = load_instance_file(path);
  Job job;
  ordered_json doc;
  doc["instance"] = inst.name.empty() ? fs::path(path).stem().string() : inst.name;
  doc["seed"] = seed_json(inst);
  doc["method"] = cfg.method;
  if (cfg.method == "exact") {
    const ServiceSetCatalog cat = catalog_for(inst, cfg.model.var_reduction);
    const ExactResult r = solve_exact(inst, cat, exact_options(cfg));
    doc["status"] = status_name(r.status);
    doc["objective"] = r.solution ? ordered_json(r.objective) : ordered_json(nullptr);
    doc["bound"] = finite_or_null(r.bound);
    doc["nodes"] = r.nodes;
    job.code = exit_code(r.status);
    if (r.solution) {
      merge_into(doc, detail::solution_json(*r.solution));
      job.table = breakdown_table(*r.solution);
    }
  } else {
    const ServiceSetCatalog cat = ServiceSetCatalog::rules_only(inst, cfg.model.var_reduction);
    const HeuristicResult h = heuristic_solve(inst, cat);
    doc["status"] = "feasible";
    doc["objective"] = h.solution.total;
    merge_into(doc, detail::solution_json(h.solution));
    ordered_json diag;
    diag["opened_spots"] = h.assignment.opened.size();
    diag["assignment_objective"] = h.assignment.objective;
    diag["assignment_exact"] = h.assignment.exact;
    diag["route_drive"] = h.route_drive;
    diag["routing_exact"] = h.routing_exact;
    diag["ssa_exact"] = h.ssa_exact;
    doc["diagnostics"] = std::move(diag);
    job.table = breakdown_table(h.solution);
  }
  job.text = doc.dump(2) + "\n";
  return job;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const Instance inst =
      cfg.grid ? gen_grid_instance(cfg.grid_params, cfg.depot_at_origin).instance
               : gen_geo_instance(cfg.geo);
  const std::string text = save_instance(inst);
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_file(cfg.output, text);
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.instances.empty()) throw InvalidValueError("solve needs at least one instance");
  if (cfg.method != "exact" && cfg.method != "heuristic") {
    throw InvalidValueError("unknown method '" + cfg.method + "'");
  }
  const ModelOptions& m = cfg.model;
  if (cfg.method == "heuristic" &&
      (m.vi_claim3 || m.vi_claim4 || m.vi_corollary1 || m.vi_claim5 || m.vi_corollary3)) {
    throw InvalidValueError("structural requirements apply to the exact method only");
  }
  const auto results = run_jobs(cfg.instances.size(), cfg.jobs,
                                [&](std::size_t i) { return solve_one(cfg, cfg.instances[i]); });
  const bool many = cfg.instances.size() > 1;
  if (many && !cfg.output.empty()) fs::create_directories(cfg.output);
  int code = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Job& job = results[i];
    if (!job.error.empty()) {
      err << cfg.instances[i] << ": " << job.error << "\n";
      code = std::max(code, 1);
      continue;
    }
    code = std::max(code, job.code);
    if (!cfg.output.empty()) {
      const fs::path target =
          many ? fs::path(cfg.output) / (fs::path(cfg.instances[i]).stem().string() + ".solution.json")
               : fs::path(cfg.output);
      write_file(target, job.text);
      if (many) out << cfg.instances[i] << "\n";
      out << job.table;
    } else if (cfg.format == "text") {
      if (many) out << cfg.instances[i] << "\n";
      out << job.table;
    } else {
      out << job.text;
    }
  }
  return code;
}

int cmd_benchmark(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.instances.empty()) throw InvalidValueError("benchmark needs at least one instance");
  const std::vector<BenchmarkSpec> specs = parse_benchmark_list(cfg.benchmarks);
  BenchmarkOptions bo;
  bo.budget = cfg.budget;
  bo.threads = cfg.threads;
  const auto results = run_jobs(cfg.instances.size(), cfg.jobs, [&](std::size_t i) {
    const std::string& path = cfg.instances[i];
    const Instance inst = load_instance_file(path);
    const std::string name = inst.name.empty() ? fs::path(path).stem().string() : inst.name;
    std::optional<ServiceSetCatalog> cat;
    try {
      cat = catalog_for(inst, cfg.model.var_reduction);
    } catch (const ResourceError&) {
      cat = ServiceSetCatalog::rules_only(inst, cfg.model.var_reduction);
    }
    std::string optimum;
    if (cat->materialized() && inst.n <= bo.exact_max_customers) {
      ExactOptions eo;
      eo.budget = cfg.budget;
      eo.threads = cfg.threads;
      const ExactResult r = solve_exact(inst, *cat, eo);
      if (r.status == SolveStatus::kOptimal) optimum = fixed6(r.objective);
    }
    const std::string seed = inst.seed ? std::to_string(*inst.seed) : "";
    Job job;
    std::ostringstream rows;
    for (const BenchmarkSpec& spec : specs) {
      const BenchmarkResult r = run_benchmark(spec, inst, *cat, bo);
      const Breakdown& b = r.solution.breakdown;
      rows << name << "," << r.name << "," << r.method << "," << fixed6(r.model_objective) << ","
           << fixed6(r.completion) << "," << r.stops << "," << fixed6(b.park) << ","
           << fixed6(b.drive) << "," << fixed6(b.walk) << "," << fixed6(b.load) << ","
           << optimum << "," << seed << "\n";
    }
    job.text = rows.str();
    return job;
  });
  std::ostringstream csv;
  csv << "instance,model,method,objective,completion,stops,park,drive,walk,load,cdpp_optimum,"
         "seed\n";
  int code = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].error.empty()) {
      err << cfg.instances[i] << ": " << results[i].error << "\n";
      code = 1;
      continue;
    }
    csv << results[i].text;
  }
  if (cfg.output.empty()) {
    out << csv.str();
  } else {
    write_file(cfg.output, csv.str());
  }
  return code;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
  GridAnalysisOptions go;
  go.budget = cfg.budget;
  go.oracle_max_customers = cfg.oracle_max_customers;
  go.jobs = cfg.jobs;
  const auto points = p_sweep(cfg.grid_params, cfg.sweep_from, cfg.sweep_step, cfg.sweep_to);
  const std::string csv = threshold_csv(verify_claims(points, cfg.q, go));
  if (cfg.output.empty()) {
    out << csv;
  } else {
    write_file(cfg.output, csv);
  }
  return 0;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  if (cfg.instances.size() != 1) throw InvalidValueError("export-lp takes exactly one instance");
  const Instance inst = load_instance_file(cfg.instances[0]);
  const ServiceSetCatalog cat = enumerate_catalog(inst);
  const std::string lp = export_lp(build_model(inst, cat, cfg.model));
  if (cfg.output.empty()) {
    out << lp;
  } else {
    write_file(cfg.output, lp);
  }
  return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream text;
  if (cfg.threshold_curve) {
    text << "block_len,threshold_q2,threshold_q3\n";
    GridParams gp = cfg.grid_params;
    for (int step = 0; step <= 25; ++step) {
      gp.block_len = 0.05 + 0.01 * step;
      text << fixed6(gp.block_len) << "," << fixed6(threshold_p(2, gp)) << ","
           << fixed6(threshold_p(3, gp)) << "\n";
    }
  } else if (cfg.catalog) {
    if (cfg.instances.size() != 1) throw InvalidValueError("report --catalog takes one instance");
    const Instance inst = load_instance_file(cfg.instances[0]);
    text << catalog_csv(catalog_for(inst, cfg.model.var_reduction), cfg.catalog_spot);
  } else {
    if (cfg.instances.empty() || cfg.instances.size() > 2) {
      throw InvalidValueError("report takes a solution file and optionally its instance");
    }
    std::ifstream in(cfg.instances[0], std::ios::binary);
    if (!in) throw ParseError("cannot read " + cfg.instances[0]);
    std::ostringstream raw;
    raw << in.rdbuf();
    Solution sol = solution_from_json(raw.str());
    if (cfg.instances.size() == 2) {
      const Instance inst = load_instance_file(cfg.instances[1]);
      const Evaluation ev = evaluate_solution(inst, sol);
      sol.breakdown = ev.breakdown;
      sol.total = ev.total;
      for (const auto& v : ev.violations) err << "violation: " << v << "\n";
      text << breakdown_table(sol);
      if (!ev.feasible()) {
        out << text.str();
        return 3;
      }
    } else {
      text << breakdown_table(sol);
    }
  }
  if (cfg.output.empty()) {
    out << text.str();
  } else {
    write_file(cfg.output, text.str());
  }
  return 0;
}

void parse_sweep(const std::string& spec, RunConfig& cfg) {
  std::string body = spec;
  if (body.rfind("p=", 0) == 0) body = body.substr(2);
  double a = 0, b = 0, c = 0;
  char tail = 0;
  if (std::sscanf(body.c_str(), "%lf:%lf:%lf%c", &a, &b, &c, &tail) != 3) {
    throw InvalidValueError("sweep must look like p=<from>:<step>:<to>");
  }
  cfg.sweep_from = a;
  cfg.sweep_step = b;
  cfg.sweep_to = c;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "gen") return cmd_gen(cfg, out);
    if (cfg.command == "solve") return cmd_solve(cfg, out, err);
    if (cfg.command == "benchmark") return cmd_benchmark(cfg, out, err);
    if (cfg.command == "grid") return cmd_grid(cfg, out);
    if (cfg.command == "export-lp") return cmd_export(cfg, out);
    if (cfg.command == "report") return cmd_report(cfg, out, err);
    err << "unknown command '" << cfg.command << "'\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("PARKROUTE_BUDGET_SECONDS")) {
    try {
      cfg.budget.max_seconds = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: PARKROUTE_BUDGET_SECONDS is not a number\n";
      return 1;
    }
  }
  CLI::App app{"Delivery routing with parking search time"};
  app.require_subcommand(1);

  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--max-nodes", cfg.budget.max_nodes, "Search node limit")->capture_default_str();
    sub->add_option("--max-seconds", cfg.budget.max_seconds, "Search time limit")->capture_default_str();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_flag("--reduce", cfg.model.var_reduction, "Drop (i, set) pairs with i in set, |set| >= 2");
    sub->add_flag("--claim3", cfg.model.vi_claim3, "A stop at customer i serves a set containing i");
    sub->add_flag("--claim4", cfg.model.vi_claim4, "A stop at customer i serves {i}");
    sub->add_flag("--corollary1", cfg.model.vi_corollary1, "Aggregated form of --claim4");
    sub->add_flag("--claim5", cfg.model.vi_claim5, "Every stop serves a set");
    sub->add_flag("--corollary3", cfg.model.vi_corollary3, "Stops do not outnumber sets");
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  auto* geo_flag = gen->add_flag("--geo", "Random points in the unit square (default)");
  auto* grid_flag = gen->add_flag("--grid", cfg.grid, "Complete grid of customers");
  geo_flag->excludes(grid_flag);
  gen->add_option("-n", cfg.geo.n, "Customers")->capture_default_str();
  gen->add_option("--seed", cfg.geo.seed, "Random seed")->capture_default_str();
  gen->add_option("--drive-rate", cfg.geo.drive_rate, "Driving minutes per unit")->capture_default_str();
  gen->add_option("--walk-rate", cfg.geo.walk_rate, "Walking minutes per unit")->capture_default_str();
  gen->add_option("--park-time", cfg.geo.park_time, "Parking search minutes")->capture_default_str();
  gen->add_option("-q,--capacity", cfg.geo.capacity, "Packages per walking tour");
  gen->add_option("--load", cfg.geo.load, "Loading minutes per package")->capture_default_str();
  gen->add_option("--sqrt-n", cfg.grid_params.sqrt_n, "Grid side")->capture_default_str();
  gen->add_option("--block-len", cfg.grid_params.block_len, "Grid block length")->capture_default_str();
  gen->add_option("--grid-drive-rate", cfg.grid_params.drive_rate, "Grid driving rate")->capture_default_str();
  gen->add_option("--grid-walk-rate", cfg.grid_params.walk_rate, "Grid walking rate")->capture_default_str();
  gen->add_option("--grid-park-time", cfg.grid_params.park_time, "Grid parking time")->capture_default_str();
  gen->add_option("--grid-capacity", cfg.grid_params.capacity, "Grid capacity")->capture_default_str();
  bool depot_corner = false;
  gen->add_flag("--depot-corner", depot_corner, "Grid depot beyond the far corner");
  gen->add_option("-o,--output", cfg.output, "Output file");

  auto* solve = app.add_subcommand("solve", "Solve instances");
  solve->add_option("instances", cfg.instances, "Instance files or directories")->required();
  solve->add_option("--method", cfg.method, "exact or heuristic")
      ->check(CLI::IsMember({"exact", "heuristic"}))
      ->capture_default_str();
  solve->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  solve->add_option("--threads", cfg.threads, "Search threads per instance")->capture_default_str();
  solve->add_option("--jobs", cfg.jobs, "Instances solved in parallel")->capture_default_str();
  bool no_proof = false;
  solve->add_flag("--no-proof", no_proof, "Stop after the root bound and first incumbent");
  solve->add_option("-o,--output", cfg.output, "Output file (directory for several instances)");
  add_budget(solve);
  add_model(solve);

  auto* bench = app.add_subcommand("benchmark", "Compare benchmark models");
  bench->add_option("instances", cfg.instances, "Instance files")->required();
  bench->add_option("--models", cfg.benchmarks, "npt, mtsp, ms:<alpha>")->capture_default_str();
  bench->add_option("--jobs", cfg.jobs, "Instances in parallel")->capture_default_str();
  bench->add_flag("--reduce", cfg.model.var_reduction, "Use the reduced catalog");
  bench->add_option("-o,--output", cfg.output, "CSV file");
  add_budget(bench);

  auto* grid = app.add_subcommand("grid", "Parking-time thresholds on complete grids");
  grid->add_option("--q", cfg.q, "Capacity (1..3)")->capture_default_str();
  grid->add_option("--sqrt-n", cfg.grid_params.sqrt_n, "Grid side")->capture_default_str();
  std::string sweep = "p=0:0.1:3";
  grid->add_option("--sweep", sweep, "p=<from>:<step>:<to>")->capture_default_str();
  grid->add_option("--block-len", cfg.grid_params.block_len, "Block length")->capture_default_str();
  grid->add_option("--drive-rate", cfg.grid_params.drive_rate, "Driving rate")->capture_default_str();
  grid->add_option("--walk-rate", cfg.grid_params.walk_rate, "Walking rate")->capture_default_str();
  grid->add_option("--load", cfg.grid_params.load, "Loading minutes")->capture_default_str();
  grid->add_option("--oracle-max-n", cfg.oracle_max_customers, "Largest grid solved exactly")
      ->capture_default_str();
  grid->add_option("--jobs", cfg.jobs, "Points in parallel")->capture_default_str();
  grid->add_option("-o,--output", cfg.output, "CSV file");
  add_budget(grid);

  auto* lp = app.add_subcommand("export-lp", "Write the MIP in LP format");
  lp->add_option("instances", cfg.instances, "Instance file")->required();
  lp->add_option("-o,--output", cfg.output, "LP file");
  add_model(lp);

  auto* report = app.add_subcommand("report", "Summaries of solutions, catalogs, thresholds");
  report->add_option("files", cfg.instances, "solution.json [instance.json]");
  report->add_flag("--threshold-curve", cfg.threshold_curve, "Thresholds against block length");
  report->add_flag("--catalog", cfg.catalog, "Dump the service-set catalog");
  std::optional<int> spot;
  report->add_option("--spot", spot, "Parking location for catalog walking costs");
  report->add_flag("--reduce", cfg.model.var_reduction, "Reduced catalog");
  double curve_drive = 12.5;
  double curve_walk = 20.0;
  report->add_option("--drive-rate", curve_drive, "Curve driving rate")->capture_default_str();
  report->add_option("--walk-rate", curve_walk, "Curve walking rate")->capture_default_str();
  report->add_option("-o,--output", cfg.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gen->parsed()) {
    cfg.command = "gen";
    cfg.depot_at_origin = !depot_corner;
  } else if (solve->parsed()) {
    cfg.command = "solve";
    cfg.budget.require_proof = !no_proof;
  } else if (bench->parsed()) {
    cfg.command = "benchmark";
  } else if (grid->parsed()) {
    cfg.command = "grid";
    try {
      parse_sweep(sweep, cfg);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  } else if (lp->parsed()) {
    cfg.command = "export-lp";
  } else if (report->parsed()) {
    cfg.command = "report";
    cfg.catalog_spot = spot;
    cfg.grid_params.drive_rate = curve_drive;
    cfg.grid_params.walk_rate = curve_walk;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace parkroute
