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


#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "numflow/network.hpp"
#include "numflow/solvers.hpp"

namespace numflow {

inline constexpr const char* kVersion = "1.0.0";

// Runs solver `name` (admm, cp, gradproj, pwl, oracle). Throws
// Error(kInvalidParams) for unknown names.
Solution solve_by_name(const std::string& name, const Instance& inst,
                       const SolverParams& params);

bool is_solver_name(const std::string& name);

// Largest eigenvalue of Q^T Q by power iteration from the all-ones vector
// (deterministic).
double norm_sq(const RoutingMatrix& q, int iterations = 200);

struct ExperimentConfig {
  std::string topology = "small";       // small, iridium, or a network file
  std::vector<int> n_values;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers = {"admm", "cp", "gradproj"};
  std::map<std::string, SolverParams> params;                   // per solver
  std::map<std::string, std::map<int, SolverParams>> params_n;  // per solver, N
  int repetitions = 10;
  // Retry a non-converged CP row with tau = 0.9 / (sigma ||Q||^2) when the
  // configured steps violate sigma tau ||Q||^2 < 1.
  bool cp_step_fallback = true;

  SolverParams params_for(const std::string& solver, int n) const;
  // Throws Error(kInvalidParams).
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Table II set-up on small_topology(): N = 10..30, ADMM r = 20, pct = 1e-4,
// with the per-N gradient-projection and Chambolle-Pock steps.
ExperimentConfig small_graph_config(std::uint64_t seed = 1);

// Table III set-up on iridium_topology(): N = 50, 75, ADMM r = 40.
ExperimentConfig large_graph_config(std::uint64_t seed = 1);

struct ReportRow {
  std::string solver;
  int n = 0;
  double f_star = 0.0;
  double l_max = 0.0;
  int n_iter = 0;
  double t_median = 0.0;
  double t_mean = 0.0;
  bool converged = false;
  double kkt_residual = 0.0;
  SolverParams params;  // as run, after any CP step fallback
  std::string error;    // non-empty for failed rows
  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::string topology;
  std::vector<ReportRow> rows;  // ordered by solver, then N
  bool operator==(const Report&) const = default;
};

// Equality ignoring the wall-time fields.
bool same_results(const Report& a, const Report& b);

// NUMFLOW_THREADS if set to a positive integer, else the hardware count.
int worker_threads();

Network load_topology(const std::string& topology);

// Instance for one row: seed derive_seed(cfg.seed, N); the gateway rule when
// the network has gateways.
Instance experiment_instance(const Network& net, std::uint64_t seed, int n);

Report run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { kCsv, kJson, kDat };

ReportFormat parse_report_format(const std::string& name);
std::string format_report(const Report& rep, ReportFormat format);
// Throws Error(kIoError).
void emit_report(const Report& rep, ReportFormat format, const std::string& path);

}  // namespace numflow
