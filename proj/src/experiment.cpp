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


#include "numflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "numflow/errors.hpp"
#include "numflow/io.hpp"
#include "numflow/oracle.hpp"
#include "numflow/rng.hpp"

namespace numflow {

namespace {

const char* const kSolverNames[] = {"admm", "cp", "gradproj", "pwl", "oracle"};

std::string sig6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ReportRow run_row(const std::string& solver, int n, const Instance& inst,
                  SolverParams params, const ExperimentConfig& cfg) {
  ReportRow row;
  row.solver = solver;
  row.n = n;
  try {
    Solution sol = solve_by_name(solver, inst, params);
    if (solver == "cp" && cfg.cp_step_fallback && !sol.converged) {
      const double bound = norm_sq(flow_routing_matrix(inst));
      if (params.sigma * params.tau * bound >= 1.0) {
        params.tau = 0.9 / (params.sigma * bound);
        sol = solve_by_name(solver, inst, params);
      }
    }
    std::vector<double> times{sol.wall_time};
    for (int rep = 1; rep < cfg.repetitions; ++rep) {
      times.push_back(solve_by_name(solver, inst, params).wall_time);
    }
    row.f_star = total_utility(inst, sol.u);
    row.l_max = max_link_load(inst, class_sums(sol.u));
    row.n_iter = sol.n_iter;
    row.converged = sol.converged;
    row.kkt_residual = sol.kkt_residual;
    row.t_median = median(times);
    row.t_mean = std::accumulate(times.begin(), times.end(), 0.0) /
                 static_cast<double>(times.size());
  } catch (const std::exception& e) {
    row.f_star = std::numeric_limits<double>::quiet_NaN();
    row.l_max = std::numeric_limits<double>::quiet_NaN();
    row.converged = false;
    row.error = e.what();
  }
  row.params = params;
  return row;
}

}  // namespace

bool is_solver_name(const std::string& name) {
  return std::find(std::begin(kSolverNames), std::end(kSolverNames), name) !=
         std::end(kSolverNames);
}

Solution solve_by_name(const std::string& name, const Instance& inst,
                       const SolverParams& params) {
  if (name == "admm") return solve_admm(inst, params);
  if (name == "cp") return solve_cp(inst, params);
  if (name == "gradproj") return solve_gradproj(inst, params);
  if (name == "pwl") return solve_pwl_aggregate(inst, params);
  if (name == "oracle") return oracle_solve(inst, params.tol);
  throw Error(ErrorCode::kInvalidParams, "unknown solver '" + name + "'");
}

double norm_sq(const RoutingMatrix& q, int iterations) {
  std::vector<double> v(static_cast<std::size_t>(q.cols()), 1.0);
  double value = 0.0;
  for (int it = 0; it < iterations; ++it) {
    auto next = q.apply_transpose(q.apply(v));
    double norm = 0.0;
    for (double a : next) norm += a * a;
    norm = std::sqrt(norm);
    double vnorm = 0.0;
    for (double a : v) vnorm += a * a;
    value = norm / std::sqrt(vnorm);
    if (norm == 0.0) return 0.0;
    for (double& a : next) a /= norm;
    v = std::move(next);
  }
  return value;
}

SolverParams ExperimentConfig::params_for(const std::string& solver, int n) const {
  if (const auto it = params_n.find(solver); it != params_n.end()) {
    if (const auto jt = it->second.find(n); jt != it->second.end()) return jt->second;
  }
  if (const auto it = params.find(solver); it != params.end()) return it->second;
  return SolverParams{};
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidParams, "repetitions must be >= 1");
  // Built-in topologies have known pair counts; file topologies are checked
  // when their instances are generated.
  const int n_max = topology == "small" ? 30 : topology == "iridium" ? 750 : 0;
  for (int n : n_values) {
    if (n < 1) throw Error(ErrorCode::kInvalidParams, "class counts must be positive");
    if (n_max > 0 && n > n_max) {
      throw Error(ErrorCode::kInvalidParams, "N = " + std::to_string(n) + " exceeds " +
                                                 std::to_string(n_max) + " for " + topology);
    }
  }
  for (const auto& s : solvers) {
    if (!is_solver_name(s)) throw Error(ErrorCode::kInvalidParams, "unknown solver '" + s + "'");
  }
  for (const auto& [name, p] : params) p.validate();
  for (const auto& [name, by_n] : params_n) {
    for (const auto& [n, p] : by_n) p.validate();
  }
}

ExperimentConfig small_graph_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.topology = "small";
  cfg.n_values = {10, 15, 20, 25, 30};
  cfg.seed = seed;
  SolverParams admm;
  admm.r = 20.0;
  admm.pct = 1e-4;
  cfg.params["admm"] = admm;
  const double alpha[] = {1.07e-2, 1.07e-2, 1.31e-2, 6.17e-3, 6.19e-3};
  const double tau[] = {0.020, 0.015, 0.015, 0.015, 0.013};
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    SolverParams gp;
    gp.alpha = alpha[i];
    cfg.params_n["gradproj"][cfg.n_values[i]] = gp;
    SolverParams cp;
    cp.sigma = 1.0;
    cp.tau = tau[i];
    cp.theta = 1.0;
    cfg.params_n["cp"][cfg.n_values[i]] = cp;
  }
  return cfg;
}

ExperimentConfig large_graph_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.topology = "iridium";
  cfg.n_values = {50, 75};
  cfg.seed = seed;
  cfg.solvers = {"admm", "cp"};
  SolverParams admm;
  admm.r = 40.0;
  admm.pct = 1e-4;
  cfg.params["admm"] = admm;
  const double tau[] = {3e-4, 2e-4};
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    SolverParams cp;
    cp.sigma = 10.0;
    cp.tau = tau[i];
    cfg.params_n["cp"][cfg.n_values[i]] = cp;
  }
  return cfg;
}

bool same_results(const Report& a, const Report& b) {
  if (a.version != b.version || a.seed != b.seed || a.topology != b.topology ||
      a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    ReportRow x = a.rows[i];
    ReportRow y = b.rows[i];
    x.t_median = y.t_median = 0.0;
    x.t_mean = y.t_mean = 0.0;
    // NaN marks failed rows; compare those by their error text.
    if (!x.error.empty() || !y.error.empty()) {
      if (x.error != y.error || x.solver != y.solver || x.n != y.n) return false;
      continue;
    }
    if (!(x == y)) return false;
  }
  return true;
}

int worker_threads() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("NUMFLOW_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) threads = static_cast<int>(cap);
  }
  return threads;
}

Network load_topology(const std::string& topology) {
  if (topology == "small") return small_topology();
  if (topology == "iridium") return iridium_topology();
  return network_from_json(read_json_file(topology));
}

Instance experiment_instance(const Network& net, std::uint64_t seed, int n) {
  GenOptions opts;
  opts.endpoints = net.gateways().empty() ? EndpointRule::kAllPairs
                                          : EndpointRule::kGatewayConstrained;
  return gen_instance(net, n, derive_seed(seed, static_cast<std::uint64_t>(n)), opts);
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Network net = load_topology(cfg.topology);
  Report rep;
  rep.seed = cfg.seed;
  rep.topology = cfg.topology;

  std::vector<int> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<std::string> solvers = cfg.solvers;
  std::sort(solvers.begin(), solvers.end());
  solvers.erase(std::unique(solvers.begin(), solvers.end()), solvers.end());

  std::vector<std::optional<Instance>> instances(ns.size());
  std::vector<std::string> gen_errors(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    try {
      instances[i] = experiment_instance(net, cfg.seed, ns[i]);
    } catch (const std::exception& e) {
      gen_errors[i] = e.what();
    }
  }

  rep.rows.resize(solvers.size() * ns.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    for (std::size_t idx = next++; idx < rep.rows.size(); idx = next++) {
      const std::string& solver = solvers[idx / ns.size()];
      const std::size_t ni = idx % ns.size();
      const SolverParams params = cfg.params_for(solver, ns[ni]);
      if (!instances[ni]) {
        ReportRow row;
        row.solver = solver;
        row.n = ns[ni];
        row.f_star = row.l_max = std::numeric_limits<double>::quiet_NaN();
        row.params = params;
        row.error = gen_errors[ni];
        rep.rows[idx] = std::move(row);
        continue;
      }
      rep.rows[idx] = run_row(solver, ns[ni], *instances[ni], params, cfg);
    }
  };
  const int threads = std::min<int>(worker_threads(), static_cast<int>(rep.rows.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rep;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "dat") return ReportFormat::kDat;
  throw Error(ErrorCode::kInvalidParams, "format must be csv, json or dat");
}

std::string format_report(const Report& rep, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::kCsv:
      os << "solver,N,f_star,l_max,n_iter,t_sec,converged\n";
      for (const auto& r : rep.rows) {
        os << r.solver << ',' << r.n << ',' << sig6(r.f_star) << ',' << sig6(r.l_max)
           << ',' << r.n_iter << ',' << sig6(r.t_median) << ','
           << (r.converged ? "true" : "false") << '\n';
      }
      break;
    case ReportFormat::kJson: {
      Json j = to_json(rep);
      j["env"] = Json{{"version", rep.version}, {"seed", rep.seed}};
      os << j.dump(2) << '\n';
      break;
    }
    case ReportFormat::kDat: {
      // One gnuplot index block per solver.
      std::string current;
      for (const auto& r : rep.rows) {
        if (r.solver != current) {
          if (!current.empty()) os << "\n\n";
          current = r.solver;
          os << "# solver " << current << "\n# N f_star l_max n_iter t_sec t_mean\n";
        }
        os << r.n << ' ' << sig6(r.f_star) << ' ' << sig6(r.l_max) << ' ' << r.n_iter
           << ' ' << sig6(r.t_median) << ' ' << sig6(r.t_mean) << '\n';
      }
      break;
    }
  }
  return os.str();
}

void emit_report(const Report& rep, ReportFormat format, const std::string& path) {
  write_text_file(path, format_report(rep, format));
}

}  // namespace numflow
