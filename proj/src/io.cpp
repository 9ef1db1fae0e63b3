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


#include "numflow/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

#include "numflow/errors.hpp"

namespace numflow {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

// Non-finite values are written as null.
double as_double(const Json& j, const char* what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) parse_fail(std::string("'") + what + "' must be a number");
  return j.get<double>();
}

double get_double(const Json& j, const char* key) { return as_double(field(j, key), key); }

int get_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) parse_fail(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t get_u64(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    parse_fail(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) parse_fail(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) parse_fail(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

const Json& get_array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) parse_fail(std::string("'") + key + "' must be an array");
  return v;
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string("'") + what + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_double(v, what));
  return out;
}

std::vector<std::vector<double>> nested(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string("'") + what + "' must be an array");
  std::vector<std::vector<double>> out;
  for (const auto& v : j) out.push_back(doubles(v, what));
  return out;
}

Json links_json(const Network& net) {
  Json links = Json::array();
  for (const auto& l : net.links()) {
    links.push_back(Json{{"tail", l.tail}, {"head", l.head}, {"cap", l.capacity}});
  }
  return links;
}

Network network_fields(const Json& j) {
  std::vector<Link> links;
  for (const auto& l : get_array(j, "links")) {
    links.push_back({get_int(l, "tail"), get_int(l, "head"), get_double(l, "cap")});
  }
  std::vector<NodeId> gateways;
  if (j.contains("gateways")) {
    for (const auto& g : get_array(j, "gateways")) {
      if (!g.is_number_integer()) parse_fail("gateway ids must be integers");
      gateways.push_back(g.get<int>());
    }
  }
  return Network(get_int(j, "nodes"), std::move(links), std::move(gateways));
}

}  // namespace

Json to_json(const PwlConcave& f) {
  return Json{{"breakpoints", f.breakpoints()}, {"slopes", f.slopes()}, {"offset", f.offset()}};
}

PwlConcave pwl_from_json(const Json& j) {
  const double offset = j.contains("offset") ? get_double(j, "offset") : 0.0;
  return PwlConcave(doubles(field(j, "breakpoints"), "breakpoints"),
                    doubles(field(j, "slopes"), "slopes"), offset);
}

Json to_json(const UtilityFamily& f) {
  Json j{{"family", std::string(tag_name(tag_of(f)))}};
  std::visit(
      [&j](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, WeightedLog>) {
          j["w"] = u.w;
        } else if constexpr (std::is_same_v<T, NegPower>) {
          j["w"] = u.w;
          j["a"] = u.a;
        } else if constexpr (std::is_same_v<T, Quadratic>) {
          j["z"] = u.z;
          if (u.k != 1.0 || u.lower != 0.0) {
            j["k"] = u.k;
            j["lower"] = u.lower;
          }
        } else {
          const Json p = to_json(u.f);
          for (auto it = p.begin(); it != p.end(); ++it) j[it.key()] = it.value();
        }
      },
      f);
  return j;
}

UtilityFamily utility_from_json(const Json& j) {
  const std::string family = get_string(j, "family");
  UtilityFamily f;
  if (family == "log") {
    f = WeightedLog{get_double(j, "w")};
  } else if (family == "power") {
    f = NegPower{get_double(j, "w"), get_double(j, "a")};
  } else if (family == "quad") {
    Quadratic q{get_double(j, "z")};
    if (j.contains("k")) q.k = get_double(j, "k");
    if (j.contains("lower")) q.lower = get_double(j, "lower");
    f = q;
  } else if (family == "pwl") {
    f = PiecewiseLinear{pwl_from_json(j)};
  } else {
    parse_fail("unknown utility family '" + family + "'");
  }
  validate_utility(f);
  return f;
}

Json to_json(const Network& net) {
  return Json{{"version", kFormatVersion},
              {"nodes", net.node_count()},
              {"links", links_json(net)},
              {"gateways", net.gateways()}};
}

Network network_from_json(const Json& j) { return network_fields(j); }

Json to_json(const Instance& inst) {
  Json classes = Json::array();
  for (const auto& cls : inst.classes) {
    Json flows = Json::array();
    for (const auto& f : cls.flows) flows.push_back(to_json(f));
    classes.push_back(Json{{"src", cls.source},
                           {"dst", cls.destination},
                           {"paths", cls.paths},
                           {"flows", std::move(flows)}});
  }
  return Json{{"version", kFormatVersion},
              {"mode", inst.mode == PathMode::kSinglePath ? "single" : "multipath"},
              {"J", inst.paths_per_class},
              {"seed", inst.seed},
              {"nodes", inst.network.node_count()},
              {"links", links_json(inst.network)},
              {"gateways", inst.network.gateways()},
              {"classes", std::move(classes)}};
}

Instance instance_from_json(const Json& j) {
  if (get_int(j, "version") != kFormatVersion) parse_fail("unsupported instance version");
  const std::string mode_name = get_string(j, "mode");
  PathMode mode = PathMode::kSinglePath;
  if (mode_name == "multipath") {
    mode = PathMode::kMultipath;
  } else if (mode_name != "single") {
    parse_fail("mode must be 'single' or 'multipath'");
  }
  Network net = network_fields(j);
  std::vector<FlowClass> classes;
  for (const auto& c : get_array(j, "classes")) {
    FlowClass cls;
    cls.source = get_int(c, "src");
    cls.destination = get_int(c, "dst");
    for (const auto& p : get_array(c, "paths")) {
      if (!p.is_array()) parse_fail("each path must be an array of link ids");
      Path path;
      for (const auto& l : p) {
        if (!l.is_number_integer()) parse_fail("link ids must be integers");
        path.push_back(l.get<int>());
      }
      validate_path(net, cls.source, cls.destination, path);
      cls.paths.push_back(std::move(path));
    }
    for (const auto& f : get_array(c, "flows")) cls.flows.push_back(utility_from_json(f));
    classes.push_back(std::move(cls));
  }
  const std::uint64_t seed = j.contains("seed") ? get_u64(j, "seed") : 0;
  Instance inst = make_instance(std::move(net), std::move(classes), mode, seed);
  if (j.contains("J") && !inst.classes.empty() && get_int(j, "J") != inst.paths_per_class) {
    parse_fail("J disagrees with the class path counts");
  }
  return inst;
}

Json to_json(const SolverParams& p) {
  return Json{{"r", p.r},         {"pct", p.pct},       {"alpha", p.alpha},
              {"sigma", p.sigma}, {"tau", p.tau},       {"theta", p.theta},
              {"max_iter", p.max_iter}, {"tol", p.tol}};
}

SolverParams params_from_json(const Json& j, SolverParams base) {
  if (!j.is_object()) parse_fail("solver parameters must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "r") base.r = as_double(*it, "r");
    else if (key == "pct") base.pct = as_double(*it, "pct");
    else if (key == "alpha") base.alpha = as_double(*it, "alpha");
    else if (key == "sigma") base.sigma = as_double(*it, "sigma");
    else if (key == "tau") base.tau = as_double(*it, "tau");
    else if (key == "theta") base.theta = as_double(*it, "theta");
    else if (key == "max_iter") base.max_iter = get_int(j, "max_iter");
    else if (key == "tol") base.tol = as_double(*it, "tol");
    else parse_fail("unknown solver parameter '" + key + "'");
  }
  base.validate();
  return base;
}

Json to_json(const Solution& s) {
  return Json{{"solver", s.solver},
              {"f_star", s.objective},
              {"l_max", s.l_max},
              {"n_iter", s.n_iter},
              {"t_sec", s.wall_time},
              {"converged", s.converged},
              {"kkt_residual", s.kkt_residual},
              {"tol", s.tol},
              {"consensus_gap", s.consensus_gap},
              {"x", s.x},
              {"u", s.u},
              {"lambda", s.lambda},
              {"rho", s.rho}};
}

Solution solution_from_json(const Json& j) {
  Solution s;
  s.solver = get_string(j, "solver");
  s.objective = get_double(j, "f_star");
  s.l_max = get_double(j, "l_max");
  s.n_iter = get_int(j, "n_iter");
  s.wall_time = get_double(j, "t_sec");
  s.converged = get_bool(j, "converged");
  s.kkt_residual = get_double(j, "kkt_residual");
  s.tol = get_double(j, "tol");
  s.consensus_gap = get_double(j, "consensus_gap");
  s.x = doubles(field(j, "x"), "x");
  s.u = nested(field(j, "u"), "u");
  s.lambda = doubles(field(j, "lambda"), "lambda");
  s.rho = doubles(field(j, "rho"), "rho");
  return s;
}

Json to_json(const MultipathAllocation& a) {
  return Json{{"f_star", a.objective}, {"l_max", a.l_max},   {"n_iter", a.n_iter},
              {"converged", a.converged}, {"x", a.x},        {"u", a.u},
              {"lambda", a.lambda},      {"mu", a.mu}};
}

MultipathAllocation allocation_from_json(const Json& j) {
  MultipathAllocation a;
  a.objective = get_double(j, "f_star");
  a.l_max = get_double(j, "l_max");
  a.n_iter = get_int(j, "n_iter");
  a.converged = get_bool(j, "converged");
  a.x = nested(field(j, "x"), "x");
  for (const auto& cls : get_array(j, "u")) a.u.push_back(nested(cls, "u"));
  a.lambda = doubles(field(j, "lambda"), "lambda");
  a.mu = nested(field(j, "mu"), "mu");
  return a;
}

Json to_json(const KktReport& r) {
  return Json{{"primal_infeasibility", r.primal_infeasibility},
              {"dual_infeasibility", r.dual_infeasibility},
              {"complementary_slackness", r.complementary_slackness},
              {"stationarity", r.stationarity},
              {"consistency", r.consistency},
              {"max_residual", r.max_residual()},
              {"tol", r.tol},
              {"passed", r.passed}};
}

Json to_json(const ExperimentConfig& c) {
  Json params = Json::object();
  for (const auto& [name, p] : c.params) params[name] = to_json(p);
  Json params_n = Json::object();
  for (const auto& [name, by_n] : c.params_n) {
    Json inner = Json::object();
    for (const auto& [n, p] : by_n) inner[std::to_string(n)] = to_json(p);
    params_n[name] = std::move(inner);
  }
  return Json{{"topology", c.topology},
              {"n", c.n_values},
              {"seed", c.seed},
              {"solvers", c.solvers},
              {"repetitions", c.repetitions},
              {"cp_step_fallback", c.cp_step_fallback},
              {"params", std::move(params)},
              {"params_n", std::move(params_n)}};
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  if (j.contains("topology")) c.topology = get_string(j, "topology");
  for (const auto& n : get_array(j, "n")) {
    if (!n.is_number_integer()) parse_fail("'n' entries must be integers");
    c.n_values.push_back(n.get<int>());
  }
  if (j.contains("seed")) c.seed = get_u64(j, "seed");
  if (j.contains("solvers")) {
    c.solvers.clear();
    for (const auto& s : get_array(j, "solvers")) {
      if (!s.is_string()) parse_fail("'solvers' entries must be strings");
      c.solvers.push_back(s.get<std::string>());
    }
  }
  if (j.contains("repetitions")) c.repetitions = get_int(j, "repetitions");
  if (j.contains("cp_step_fallback")) c.cp_step_fallback = get_bool(j, "cp_step_fallback");
  if (j.contains("params")) {
    const Json& params = field(j, "params");
    if (!params.is_object()) parse_fail("'params' must be an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
      c.params[it.key()] = params_from_json(it.value());
    }
  }
  if (j.contains("params_n")) {
    const Json& params_n = field(j, "params_n");
    if (!params_n.is_object()) parse_fail("'params_n' must be an object");
    for (auto it = params_n.begin(); it != params_n.end(); ++it) {
      if (!it.value().is_object()) parse_fail("'params_n' entries must be objects");
      const auto base_it = c.params.find(it.key());
      const SolverParams base = base_it == c.params.end() ? SolverParams{} : base_it->second;
      for (auto in = it.value().begin(); in != it.value().end(); ++in) {
        int n = 0;
        try {
          std::size_t used = 0;
          n = std::stoi(in.key(), &used);
          if (used != in.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          parse_fail("'params_n' keys must be class counts");
        }
        c.params_n[it.key()][n] = params_from_json(in.value(), base);
      }
    }
  }
  c.validate();
  return c;
}

Json to_json(const Report& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"solver", row.solver},
                        {"N", row.n},
                        {"f_star", row.f_star},
                        {"l_max", row.l_max},
                        {"n_iter", row.n_iter},
                        {"t_sec", row.t_median},
                        {"t_mean", row.t_mean},
                        {"converged", row.converged},
                        {"kkt_residual", row.kkt_residual},
                        {"params", to_json(row.params)},
                        {"error", row.error}});
  }
  return Json{{"version", r.version},
              {"seed", r.seed},
              {"topology", r.topology},
              {"rows", std::move(rows)}};
}

Report report_from_json(const Json& j) {
  Report r;
  r.version = get_string(j, "version");
  r.seed = get_u64(j, "seed");
  r.topology = get_string(j, "topology");
  for (const auto& row : get_array(j, "rows")) {
    ReportRow out;
    out.solver = get_string(row, "solver");
    out.n = get_int(row, "N");
    out.f_star = get_double(row, "f_star");
    out.l_max = get_double(row, "l_max");
    out.n_iter = get_int(row, "n_iter");
    out.t_median = get_double(row, "t_sec");
    out.t_mean = get_double(row, "t_mean");
    out.converged = get_bool(row, "converged");
    out.kkt_residual = get_double(row, "kkt_residual");
    out.params = params_from_json(field(row, "params"));
    out.error = get_string(row, "error");
    r.rows.push_back(std::move(out));
  }
  return r;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    parse_fail("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

}  // namespace numflow
