// Copyright 2026 The numflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "numflow/cli.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "numflow/errors.hpp"
#include "numflow/experiment.hpp"
#include "numflow/io.hpp"
#include "numflow/multipath.hpp"
#include "numflow/pwl.hpp"
#include "numflow/rng.hpp"

namespace numflow {

namespace {

struct Options {
  std::string topology = "small";
  std::vector<int> n;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers;
  std::string params;
  std::string out;
  std::string format = "csv";
  int reps = 0;
  std::string config;
  std::string instance;
  std::string solution;
  std::optional<double> tol;
  std::string family = "log";
  double exponent = 1.0;
  int paths = 1;
  std::string op;
  std::string file;
  std::optional<double> x;
};

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out.empty()) {
    out << text;
  } else {
    write_text_file(opt.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int run_gen(const Options& opt, std::ostream& out) {
  if (opt.n.size() != 1) throw CLI::ValidationError("--n", "gen takes exactly one N");
  const Network net = load_topology(opt.topology);
  GenOptions g;
  if (opt.family == "power") {
    g.family = UtilityTag::kNegPower;
    g.exponent = opt.exponent;
  }
  g.endpoints = net.gateways().empty() ? EndpointRule::kAllPairs
                                       : EndpointRule::kGatewayConstrained;
  const int n = opt.n.front();
  const std::uint64_t seed = derive_seed(opt.seed, static_cast<std::uint64_t>(n));
  const Instance inst = opt.paths > 1 ? gen_multipath_instance(net, n, opt.paths, seed, g)
                                      : gen_instance(net, n, seed, g);
  emit(opt, dump(to_json(inst)), out);
  return kExitOk;
}

SolverParams load_params(const Options& opt, const std::string& solver) {
  if (opt.params.empty()) return SolverParams{};
  const Json j = read_json_file(opt.params);
  // Either a flat parameter object or one keyed by solver name.
  if (j.contains(solver) && j.at(solver).is_object()) return params_from_json(j.at(solver));
  return params_from_json(j);
}

int run_solve(const Options& opt, std::ostream& out) {
  if (opt.solvers.size() != 1) throw CLI::ValidationError("--solver", "solve takes one solver");
  const std::string& solver = opt.solvers.front();
  const Instance inst = instance_from_json(read_json_file(opt.instance));
  const SolverParams params = load_params(opt, solver);
  if (inst.mode == PathMode::kMultipath) {
    if (solver != "multipath") {
      throw CLI::ValidationError("--solver", "multipath instances take --solver multipath");
    }
    const auto alloc = solve_multipath(inst, params);
    emit(opt, dump(to_json(alloc)), out);
    return alloc.converged ? kExitOk : kExitNonConvergence;
  }
  const Solution sol = solve_by_name(solver, inst, params);
  emit(opt, dump(to_json(sol)), out);
  return sol.converged ? kExitOk : kExitNonConvergence;
}

int run_bench(const Options& opt, std::ostream& out) {
  ExperimentConfig cfg;
  if (!opt.config.empty()) {
    cfg = config_from_json(read_json_file(opt.config));
  } else {
    cfg = opt.topology == "iridium" ? large_graph_config(opt.seed) : small_graph_config(opt.seed);
    cfg.topology = opt.topology;
    if (!opt.n.empty()) cfg.n_values = opt.n;
    if (!opt.solvers.empty()) cfg.solvers = opt.solvers;
    if (!opt.params.empty()) {
      const Json j = read_json_file(opt.params);
      for (auto it = j.begin(); it != j.end(); ++it) {
        cfg.params[it.key()] = params_from_json(it.value());
        cfg.params_n.erase(it.key());
      }
    }
  }
  if (opt.reps > 0) cfg.repetitions = opt.reps;
  const ReportFormat format = parse_report_format(opt.format);
  const Report rep = run_experiment(cfg);
  emit(opt, format_report(rep, format), out);
  for (const auto& row : rep.rows) {
    if (!row.converged) return kExitNonConvergence;
  }
  return kExitOk;
}

int run_verify(const Options& opt, std::ostream& out) {
  const Instance inst = instance_from_json(read_json_file(opt.instance));
  const Json sj = read_json_file(opt.solution);
  KktReport rep;
  if (inst.mode == PathMode::kMultipath) {
    const auto alloc = allocation_from_json(sj);
    rep = kkt_check_multipath(inst, alloc, opt.tol.value_or(1e-5));
  } else {
    const Solution sol = solution_from_json(sj);
    const double tol = opt.tol.value_or(sol.tol > 0.0 ? sol.tol : 1e-5);
    rep = kkt_check_single_path(inst, sol.x, sol.u, sol.rho, tol);
  }
  emit(opt, dump(to_json(rep)), out);
  return rep.passed ? kExitOk : kExitVerifyFailed;
}

int run_pwl(const Options& opt, std::ostream& out) {
  const Json j = read_json_file(opt.file);
  std::vector<PwlConcave> fs;
  if (j.is_array()) {
    for (const auto& f : j) fs.push_back(pwl_from_json(f));
  } else {
    fs.push_back(pwl_from_json(j));
  }
  if (fs.empty()) throw CLI::ValidationError("--file", "no functions given");
  Json result;
  if (opt.op == "eval") {
    if (!opt.x) throw CLI::ValidationError("--x", "eval needs --x");
    Json values = Json::array();
    for (const auto& f : fs) values.push_back(pwl_eval(f, *opt.x));
    result = Json{{"x", *opt.x}, {"values", values}};
  } else if (opt.op == "conjugate") {
    Json values = Json::array();
    for (const auto& f : fs) values.push_back(to_json(pwl_conjugate(f)));
    result = values;
  } else if (opt.op == "sum") {
    result = to_json(pwl_sum(fs));
  } else if (opt.op == "supconv") {
    result = to_json(pwl_supconv(fs));
  } else if (opt.op == "apportion") {
    if (!opt.x) throw CLI::ValidationError("--x", "apportion needs --x");
    result = Json{{"x", *opt.x}, {"u", pwl_apportion(fs, *opt.x)}};
  } else {
    throw CLI::ValidationError("--op", "op must be eval, conjugate, sum, supconv or apportion");
  }
  emit(opt, dump(result), out);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"numflow: flow-class network utility maximization"};
  app.require_subcommand(1);
  Options opt;

  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--topology", opt.topology, "small, iridium, or a network file");
  gen->add_option("--n", opt.n, "number of classes")->required();
  gen->add_option("--seed", opt.seed, "base seed (instance seed derived per N)");
  gen->add_option("--family", opt.family, "log or power")->check(CLI::IsMember({"log", "power"}));
  gen->add_option("--exponent", opt.exponent, "power-utility exponent a");
  gen->add_option("--paths", opt.paths, "paths per class (J > 1: multipath)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", opt.out, "output file");

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  solve->add_option("--instance", opt.instance, "instance file")->required();
  solve->add_option("--solver", opt.solvers, "admm, cp, gradproj, pwl, oracle, multipath")
      ->required()
      ->check(CLI::IsMember({"admm", "cp", "gradproj", "pwl", "oracle", "multipath"}));
  solve->add_option("--params", opt.params, "solver parameter file");
  solve->add_option("--out", opt.out, "output file");

  auto* bench = app.add_subcommand("bench", "run an experiment and emit a report");
  bench->add_option("--config", opt.config, "experiment configuration file");
  bench->add_option("--topology", opt.topology, "small, iridium, or a network file");
  bench->add_option("--n", opt.n, "class counts");
  bench->add_option("--seed", opt.seed, "base seed");
  bench->add_option("--solver", opt.solvers, "solvers to run")
      ->check(CLI::IsMember({"admm", "cp", "gradproj", "pwl", "oracle"}));
  bench->add_option("--params", opt.params, "parameter file keyed by solver");
  bench->add_option("--reps", opt.reps, "timed repetitions per row")->check(CLI::PositiveNumber);
  bench->add_option("--format", opt.format, "csv, json or dat")
      ->check(CLI::IsMember({"csv", "json", "dat"}));
  bench->add_option("--out", opt.out, "output file");

  auto* verify = app.add_subcommand("verify", "check a solution against the KKT conditions");
  verify->add_option("--instance", opt.instance, "instance file")->required();
  verify->add_option("--solution", opt.solution, "solution file")->required();
  verify->add_option("--tol", opt.tol, "tolerance (default: the solution's own)");
  verify->add_option("--out", opt.out, "output file");

  auto* pwl = app.add_subcommand("pwl", "piecewise-linear utility algebra");
  pwl->add_option("--op", opt.op, "eval, conjugate, sum, supconv, apportion")
      ->required()
      ->check(CLI::IsMember({"eval", "conjugate", "sum", "supconv", "apportion"}));
  pwl->add_option("--file", opt.file, "function file (object or array)")->required();
  pwl->add_option("--x", opt.x, "argument for eval and apportion");
  pwl->add_option("--out", opt.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) return run_gen(opt, out);
    if (*solve) return run_solve(opt, out);
    if (*bench) return run_bench(opt, out);
    if (*verify) return run_verify(opt, out);
    return run_pwl(opt, out);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::kNonConvergence ? kExitNonConvergence : kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cli_main(int argc, const char* const* argv) {
  return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace numflow
