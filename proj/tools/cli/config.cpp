#include "cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace riemobs::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, "field " + field + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(join(path, key), "unknown key");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!(v > 0.0)) fail(field, "must be positive");
  return v;
}

int count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(field, "expected a positive integer");
  return static_cast<int>(j.get<long long>());
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

Vec vector_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Mat matrix_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  Mat m(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != rows) fail(rf, "expected a row of length " + std::to_string(rows));
    for (std::size_t k = 0; k < rows; ++k) m(i, k) = number(j[i][k], rf + "[" + std::to_string(k) + "]");
  }
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm())) fail(field, "matrix is not symmetric");
  if (!cholesky_spd(m)) fail(field, "matrix is not positive definite");
  return m;
}

Polynomial polynomial_of(const json& j, int nvars, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of terms");
  std::vector<Polynomial::Term> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tf = field + "[" + std::to_string(i) + "]";
    expect_object(j[i], tf);
    reject_unknown(j[i], tf, {"coeff", "exponents"});
    if (!j[i].contains("coeff") || !j[i].contains("exponents")) fail(tf, "needs coeff and exponents");
    Polynomial::Term t;
    t.coeff = number(j[i]["coeff"], tf + ".coeff");
    const json& ex = j[i]["exponents"];
    if (!ex.is_array() || static_cast<int>(ex.size()) != nvars) {
      fail(tf + ".exponents", "expected " + std::to_string(nvars) + " exponents");
    }
    for (const auto& e : ex) {
      if (!e.is_number_integer() || e.get<int>() < 0) fail(tf + ".exponents", "exponents must be non-negative integers");
      t.exponents.push_back(e.get<int>());
    }
    terms.push_back(std::move(t));
  }
  return Polynomial(nvars, std::move(terms));
}

int benchmark_dim(const std::string& name) {
  if (name == "oscillator") return 3;
  return 2;
}

MetricRecipe recipe_of(const json& j, const std::string& bench, const std::string& field) {
  MetricRecipe r;
  if (j.is_string()) {
    r.base = j.get<std::string>();
    return r;
  }
  expect_object(j, field);
  reject_unknown(j, field, {"type", "base", "q", "r", "h_perp", "params"});
  if (j.contains("type")) r.type = text(j["type"], field + ".type");
  if (r.type != "builtin" && r.type != "pmod" && r.type != "product") {
    fail(field + ".type", "expected builtin, pmod or product");
  }
  if (j.contains("base")) r.base = text(j["base"], field + ".base");
  if (j.contains("q")) r.q = matrix_of(j["q"], field + ".q");
  if (j.contains("r")) r.r = matrix_of(j["r"], field + ".r");
  if (j.contains("h_perp")) {
    const json& hp = j["h_perp"];
    if (hp.is_string()) {
      r.h_perp_builtin = hp.get<std::string>();
    } else if (hp.is_array()) {
      for (std::size_t i = 0; i < hp.size(); ++i) {
        r.h_perp_poly.push_back(polynomial_of(hp[i], benchmark_dim(bench), field + ".h_perp[" + std::to_string(i) + "]"));
      }
    } else {
      fail(field + ".h_perp", "expected a builtin name or an array of polynomials");
    }
  }
  if (j.contains("params")) {
    expect_object(j["params"], field + ".params");
    for (const auto& [k, v] : j["params"].items()) r.params[k] = number(v, field + ".params." + k);
  }
  if (r.type == "product" && r.h_perp_builtin.empty() && r.h_perp_poly.empty()) {
    fail(field + ".h_perp", "product recipes need h_perp");
  }
  return r;
}

DistanceMethod distance_of(const json& j, const std::string& field) {
  const std::string s = text(j, field);
  if (s == "geodesic") return DistanceMethod::Geodesic;
  if (s == "constant-metric") return DistanceMethod::ConstantMetric;
  if (s == "euclidean-bound") return DistanceMethod::EuclideanBound;
  fail(field, "expected geodesic, constant-metric or euclidean-bound");
}

std::string line_of(const std::string& src, std::size_t byte) {
  const std::size_t upto = std::min(byte, src.size());
  const auto line = 1 + std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
  return std::to_string(line);
}

}  // namespace

bool known_condition(const std::string& name) {
  return name == "a2" || name == "a3-nullity" || name == "a3-direct" || name == "submersion";
}

std::string default_metric(const std::string& benchmark) {
  if (benchmark == "oscillator") return "ex8";
  if (benchmark == "linear") return "const";
  return "product";
}

JobConfig parse_config(const std::string& src) {
  json root;
  try {
    root = json::parse(src);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "line " + line_of(src, e.byte) + ": malformed JSON");
  }
  expect_object(root, "");
  reject_unknown(root, "", {"benchmark", "epsilon", "metric", "conditions", "sampling", "tolerance", "q_min",
                            "simulation", "geodesic", "output"});
  JobConfig cfg;
  if (root.contains("benchmark")) cfg.benchmark = text(root["benchmark"], "benchmark");
  const auto names = benchmark_names();
  if (std::find(names.begin(), names.end(), cfg.benchmark) == names.end()) {
    fail("benchmark", "unknown benchmark '" + cfg.benchmark + "'");
  }
  if (root.contains("epsilon")) {
    cfg.epsilon = number(root["epsilon"], "epsilon");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) fail("epsilon", "must lie in (0, 1)");
  }
  if (root.contains("metric")) cfg.metric = recipe_of(root["metric"], cfg.benchmark, "metric");
  if (root.contains("conditions")) {
    const json& c = root["conditions"];
    if (!c.is_array()) fail("conditions", "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string name = text(c[i], "conditions[" + std::to_string(i) + "]");
      if (!known_condition(name)) fail("conditions[" + std::to_string(i) + "]", "unknown condition '" + name + "'");
      cfg.conditions.push_back(name);
    }
  }
  if (root.contains("sampling")) {
    const json& s = root["sampling"];
    expect_object(s, "sampling");
    reject_unknown(s, "sampling", {"seed", "samples", "trials", "reach"});
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) fail("sampling.seed", "expected a non-negative integer");
      cfg.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("samples")) cfg.samples = count(s["samples"], "sampling.samples");
    if (s.contains("trials")) cfg.trials = count(s["trials"], "sampling.trials");
    if (s.contains("reach")) cfg.reach = positive(s["reach"], "sampling.reach");
  }
  if (root.contains("tolerance")) cfg.tol = positive(root["tolerance"], "tolerance");
  if (root.contains("q_min")) cfg.q_min = number(root["q_min"], "q_min");
  if (root.contains("simulation")) {
    const json& s = root["simulation"];
    expect_object(s, "simulation");
    reject_unknown(s, "simulation",
                   {"x0", "xhat0", "dt", "horizon", "sample_every", "basin", "rate", "gain", "distance"});
    SimulationBlock& b = cfg.simulation;
    if (s.contains("x0")) b.x0 = vector_of(s["x0"], "simulation.x0");
    if (s.contains("xhat0")) b.xhat0 = vector_of(s["xhat0"], "simulation.xhat0");
    if (s.contains("dt")) b.dt = positive(s["dt"], "simulation.dt");
    if (s.contains("horizon")) b.horizon = positive(s["horizon"], "simulation.horizon");
    if (s.contains("sample_every")) b.sample_every = count(s["sample_every"], "simulation.sample_every");
    if (s.contains("basin")) b.basin = positive(s["basin"], "simulation.basin");
    if (s.contains("rate")) b.rate = number(s["rate"], "simulation.rate");
    if (s.contains("gain")) {
      const json& g = s["gain"];
      if (g.is_string()) {
        if (g.get<std::string>() != "scan") fail("simulation.gain", "expected a positive number or \"scan\"");
      } else {
        b.gain = positive(g, "simulation.gain");
      }
    }
    if (s.contains("distance")) b.distance = distance_of(s["distance"], "simulation.distance");
  }
  if (root.contains("geodesic")) {
    const json& g = root["geodesic"];
    expect_object(g, "geodesic");
    reject_unknown(g, "geodesic", {"from", "to", "velocity", "length", "metric", "chart"});
    GeodesicBlock& b = cfg.geodesic;
    if (g.contains("from")) b.from = vector_of(g["from"], "geodesic.from");
    if (g.contains("to")) b.to = vector_of(g["to"], "geodesic.to");
    if (g.contains("velocity")) b.velocity = vector_of(g["velocity"], "geodesic.velocity");
    if (g.contains("length")) b.length = positive(g["length"], "geodesic.length");
    if (g.contains("metric")) b.metric = matrix_of(g["metric"], "geodesic.metric");
    if (g.contains("chart")) {
      b.chart = text(g["chart"], "geodesic.chart");
      if (b.chart != "ex8") fail("geodesic.chart", "only the ex8 chart is available");
    }
  }
  if (root.contains("output")) cfg.out = text(root["output"], "output");
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Polynomial parse_polynomial(const std::string& json_text, int nvars) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "line " + line_of(json_text, e.byte) + ": malformed JSON");
  }
  return polynomial_of(j, nvars, "polynomial");
}

}  // namespace riemobs::cli
