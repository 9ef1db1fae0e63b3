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

#include <string>

#include "json.hpp"
#include "numflow/experiment.hpp"
#include "numflow/kkt.hpp"
#include "numflow/multipath.hpp"
#include "numflow/network.hpp"
#include "numflow/pwl.hpp"
#include "numflow/solvers.hpp"
#include "numflow/utility.hpp"

namespace numflow {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// Encoders emit a fixed field order. Decoders throw Error(kParseError) on
// missing or mistyped fields and re-validate through the constructors.

Json to_json(const PwlConcave& f);        // {breakpoints, slopes, offset}
PwlConcave pwl_from_json(const Json& j);

// {family: log|power|quad|pwl, ...parameters}
Json to_json(const UtilityFamily& f);
UtilityFamily utility_from_json(const Json& j);

// {version, nodes, links: [{tail, head, cap}], gateways}
Json to_json(const Network& net);
Network network_from_json(const Json& j);

// {version, mode: single|multipath, J, seed, nodes, links, gateways,
//  classes: [{src, dst, paths, flows}]}
Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

// {r, pct, alpha, sigma, tau, theta, max_iter, tol}; absent fields keep
// their defaults.
Json to_json(const SolverParams& p);
SolverParams params_from_json(const Json& j, SolverParams base = {});

Json to_json(const Solution& s);
Solution solution_from_json(const Json& j);

Json to_json(const MultipathAllocation& a);
MultipathAllocation allocation_from_json(const Json& j);

Json to_json(const KktReport& r);

// {topology, n, seed, solvers, repetitions, cp_step_fallback,
//  params: {solver: {...}}, params_n: {solver: {"N": {...}}}}
Json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

Json to_json(const Report& r);
Report report_from_json(const Json& j);

// Throw Error(kIoError) or Error(kParseError).
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace numflow
