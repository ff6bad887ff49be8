#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "cli/output.hpp"

namespace riemobs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string short_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string coords(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + short_num(v(i));
  return s + ")";
}

void check_state(const Vec& x, const SystemModel& model, const std::string& field) {
  if (x.size() != model.n()) {
    throw Error(ErrorCode::ConfigError, "field " + field + ": expected " + std::to_string(model.n()) + " entries");
  }
  if (!model.region.contains(x)) {
    throw Error(ErrorCode::ConfigError,
                "field " + field + ": " + coords(x) + " lies outside region " + model.region.name, x);
  }
}

Ex8Parameters ex8_params_of(const BenchmarkSpec& bench) {
  Ex8Parameters prm;
  prm.a = bench.params.at("a");
  prm.b = bench.params.at("b");
  prm.c = bench.params.at("c");
  prm.q = bench.params.at("q");
  prm.epsilon = bench.params.at("epsilon");
  return prm;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Fail: return kExitFail;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

NamedMetric resolve_metric(const BenchmarkSpec& bench, MetricRecipe recipe) {
  if (recipe.base.empty()) recipe.base = default_metric(bench.name);
  return build_from_recipe(bench, recipe);
}

int cmd_check(const JobConfig& cfg, std::ostream& out) {
  if (cfg.conditions.empty()) throw Error(ErrorCode::ConfigError, "field conditions: name at least one condition");
  const BenchmarkSpec bench = make_benchmark(cfg.benchmark, cfg.epsilon);
  const NamedMetric metric = resolve_metric(bench, cfg.metric);
  const SamplingOptions so{cfg.seed, cfg.samples};

  std::vector<ConditionReport> reports;
  for (const std::string& c : cfg.conditions) {
    if (c == "a2") {
      reports.push_back(check_a2(bench.model, metric.p, so, cfg.q_min.value_or(metric.q_min)));
    } else if (c == "a3-nullity") {
      reports.push_back(check_a3_nullity(bench.model, metric.p, bench.q, so, cfg.tol.value_or(Defaults::nullity_tol)));
    } else if (c == "submersion") {
      reports.push_back(check_submersion(metric.p, bench.q, bench.model.h, bench.model.region, so,
                                         cfg.tol.value_or(Defaults::submersion_tol)));
    } else if (c == "a3-direct") {
      MonotonicityOptions mo;
      mo.seed = cfg.seed;
      mo.trials = cfg.trials;
      mo.reach = cfg.reach;
      mo.grid = Defaults::direct_grid;
      mo.tol = cfg.tol.value_or(Defaults::monotonicity_tol);
      reports.push_back(check_geodesic_monotonicity_direct(bench.model, metric.p, bench.gap, mo));
    } else {
      throw Error(ErrorCode::ConfigError, "field conditions: unknown condition '" + c + "'");
    }
  }

  Verdict overall = Verdict::Pass;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) overall = Verdict::Fail;
    else if (r.verdict == Verdict::Inconclusive && overall == Verdict::Pass) overall = Verdict::Inconclusive;
  }

  json doc;
  doc["benchmark"] = bench.name;
  doc["metric"] = metric.name;
  doc["disclaimer"] = kSampledDisclaimer;
  doc["verdict"] = std::string(to_string(overall));
  doc["reports"] = json::array();
  for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
  write_text_file(fs::path(cfg.out) / "report.json", doc.dump(2) + "\n");

  for (const auto& r : reports) {
    out << std::left << std::setw(12) << r.condition << std::setw(14) << to_string(r.verdict) << "margin "
        << short_num(r.margin);
    if (!r.detail.empty()) out << " [" << r.detail << "]";
    if (r.witness) out << " at " << coords(r.witness->point);
    out << "\n";
  }
  out << "(" << kSampledDisclaimer << ")\n";
  return exit_code_for(overall);
}

int cmd_simulate(const JobConfig& cfg, std::ostream& out) {
  const BenchmarkSpec bench = make_benchmark(cfg.benchmark, cfg.epsilon);
  const NamedMetric metric = resolve_metric(bench, cfg.metric);
  const SimulationBlock& sb = cfg.simulation;

  ObserverConfig oc;
  oc.dt = sb.dt.value_or(bench.sim.dt);
  oc.horizon = sb.horizon.value_or(bench.sim.horizon);
  oc.sample_every = sb.sample_every.value_or(bench.sim.sample_every);
  oc.basin = sb.basin.value_or(bench.sim.basin);
  oc.rate = sb.rate.value_or(bench.sim.rate);
  oc.method = sb.distance;
  if (oc.method == DistanceMethod::ConstantMetric && !metric.p.is_constant()) {
    throw Error(ErrorCode::ConfigError, "field simulation.distance: constant-metric needs a constant metric");
  }
  if (oc.method == DistanceMethod::EuclideanBound) {
    const auto [lo, hi] = metric_eigen_bounds(metric.p, bench.model.region, Defaults::eigen_bound_samples, cfg.seed);
    oc.lambda_min = lo;
    oc.lambda_max = hi;
  }
  const Vec x0 = sb.x0.value_or(bench.sim.x0);
  const Vec xhat0 = sb.xhat0.value_or(bench.sim.xhat0);
  check_state(x0, bench.model, "simulation.x0");
  check_state(xhat0, bench.model, "simulation.xhat0");

  GainScan scan;
  if (sb.gain) {
    oc.gain = [k = *sb.gain](const Vec&) { return k; };
    scan.run = simulate(bench.model, metric.p, bench.gap, oc, x0, xhat0);
  } else {
    scan = scan_gain(bench.model, metric.p, bench.gap, oc, x0, xhat0);
  }
  const ObserverRun& run = scan.run;

  CertificateReport cert;
  cert.rate = oc.rate;
  std::string cert_note;
  try {
    cert = contraction_certificate(run, oc.rate, Defaults::envelope_slack);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientSamples) throw;
    cert.verdict = Verdict::Inconclusive;
    cert_note = e.what();
  }
  const double fitted = fitted_decay_rate(run);

  {
    std::ostringstream csv;
    write_run_csv(csv, run);
    write_text_file(fs::path(cfg.out) / "run.csv", csv.str());
  }

  json doc;
  doc["benchmark"] = bench.name;
  doc["metric"] = metric.name;
  doc["distance_method"] = std::string(to_string(oc.method));
  doc["fitted_decay_rate"] = json_number(fitted);
  json c;
  c["rate"] = json_number(cert.rate);
  c["verdict"] = std::string(to_string(cert.verdict));
  c["samples"] = cert.samples;
  c["worst_ratio"] = json_number(cert.worst_ratio);
  c["slack"] = Defaults::envelope_slack;
  c["first_violation_time"] = cert.first_violation_time ? json_number(*cert.first_violation_time) : json(nullptr);
  if (!cert_note.empty()) c["note"] = cert_note;
  doc["certificate"] = c;
  json g;
  g["policy"] = sb.gain ? "fixed" : "scan";
  if (sb.gain) g["chosen"] = *sb.gain;
  else g["chosen"] = scan.chosen ? json(*scan.chosen) : json(nullptr);
  g["scan"] = json::array();
  for (const auto& e : scan.entries) {
    g["scan"].push_back({{"gain", e.gain},
                         {"verdict", std::string(to_string(e.verdict))},
                         {"fitted_rate", json_number(e.fitted_rate)},
                         {"worst_ratio", json_number(e.worst_ratio)}});
  }
  doc["gain"] = g;
  doc["truncated"] = run.truncated;
  if (run.truncated) doc["truncation_reason"] = run.truncation_reason;
  doc["missing_distances"] = run.missing_distances;
  doc["samples"] = run.size();
  doc["note"] = kConvexityNote;
  write_text_file(fs::path(cfg.out) / "summary.json", doc.dump(2) + "\n");

  out << "distance " << to_string(oc.method) << ", " << run.size() << " samples";
  if (run.truncated) out << ", truncated: " << run.truncation_reason;
  out << "\n";
  if (!sb.gain) {
    for (const auto& e : scan.entries) {
      out << "  k_E " << std::setw(6) << e.gain << "  " << std::setw(13) << to_string(e.verdict) << " fitted rate "
          << short_num(e.fitted_rate) << "\n";
    }
  }
  out << "certificate at rate " << short_num(oc.rate) << ": " << to_string(cert.verdict) << ", fitted decay rate "
      << short_num(fitted) << "\n";
  return exit_code_for(cert.verdict);
}

int cmd_geodesic(const JobConfig& cfg, std::ostream& out) {
  const GeodesicBlock& gb = cfg.geodesic;
  MetricField p;
  if (gb.metric) {
    p = MetricField::constant(*gb.metric);
  } else {
    const BenchmarkSpec bench = make_benchmark(cfg.benchmark, cfg.epsilon);
    p = resolve_metric(bench, cfg.metric).p;
    if (gb.chart == "ex8") {
      if (bench.name != "oscillator") throw Error(ErrorCode::ConfigError, "field geodesic.chart: needs the oscillator");
      p = pullback_metric(p, ex8_inverse_chart(ex8_params_of(bench)));
    }
  }
  if (!gb.from) throw Error(ErrorCode::ConfigError, "field geodesic.from: missing start point");
  const Vec& from = *gb.from;
  auto dims = [&](const Vec& v, const std::string& field) {
    if (v.size() != p.dim()) {
      throw Error(ErrorCode::ConfigError, "field " + field + ": expected " + std::to_string(p.dim()) + " entries");
    }
  };
  dims(from, "geodesic.from");
  Geodesic curve;
  if (gb.to) {
    dims(*gb.to, "geodesic.to");
    try {
      curve = geodesic_bvp(p, from, *gb.to).curve;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
      out << "no convergence, residual " << short_num(e.residual()) << "\n";
      return kExitFail;
    }
  } else if (gb.velocity) {
    dims(*gb.velocity, "geodesic.velocity");
    curve = geodesic_ivp(p, from, *gb.velocity, gb.length, gb.length / Defaults::geodesic_steps);
  } else {
    throw Error(ErrorCode::ConfigError, "field geodesic: give either 'to' or 'velocity'");
  }
  std::ostringstream csv;
  write_geodesic_csv(csv, curve, p);
  write_text_file(fs::path(cfg.out) / "geodesic.csv", csv.str());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", curve.length);
  out << buf << "\n";
  return kExitPass;
}

int cmd_report(const std::string& dir, std::ostream& out) {
  const fs::path base(dir);
  const fs::path report = base / "report.json", summary = base / "summary.json", run = base / "run.csv";
  if (!fs::exists(report) && !fs::exists(summary) && !fs::exists(run)) {
    throw Error(ErrorCode::MissingArtifacts, "no report.json, summary.json or run.csv in '" + dir + "'");
  }
  std::ostringstream table;
  table << std::left << std::setw(14) << "condition" << std::setw(14) << "verdict" << std::setw(22) << "margin"
        << std::setw(10) << "samples"
        << "witness\n";
  auto row = [&](const std::string& cond, const std::string& verdict, const std::string& margin, const std::string& n,
                 const std::string& witness) {
    table << std::left << std::setw(14) << cond << std::setw(14) << verdict << std::setw(22) << margin << std::setw(10)
          << n << witness << "\n";
  };
  auto num_text = [](const json& v) {
    if (v.is_number()) return short_num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return std::string("-");
  };
  std::string header;
  if (fs::exists(report)) {
    const json doc = json::parse(read_file(report));
    header += "benchmark " + doc.value("benchmark", "?") + ", metric " + doc.value("metric", "?") + "\n";
    for (const auto& r : doc.at("reports")) {
      std::string witness = "-";
      if (r.contains("witness") && r["witness"].is_object()) {
        Vec pt(r["witness"]["point"].size());
        for (std::size_t i = 0; i < r["witness"]["point"].size(); ++i) {
          const auto& c = r["witness"]["point"][i];
          pt(static_cast<Eigen::Index>(i)) = c.is_number() ? c.get<double>() : std::nan("");
        }
        witness = coords(pt);
      }
      row(r.at("condition").get<std::string>(), r.at("verdict").get<std::string>(), num_text(r.at("margin")),
          std::to_string(r.at("samples").get<int>()), witness);
    }
  }
  if (fs::exists(summary)) {
    const json doc = json::parse(read_file(summary));
    const json& c = doc.at("certificate");
    row("contraction", c.at("verdict").get<std::string>(), "rate " + num_text(c.at("rate")),
        std::to_string(c.at("samples").get<int>()), "-");
    std::string chosen = doc.at("gain").at("chosen").is_number() ? short_num(doc["gain"]["chosen"].get<double>()) : "none";
    header += "simulation: " + doc.value("distance_method", "?") + " distance, k_E " + chosen + ", fitted decay rate " +
              num_text(doc.at("fitted_decay_rate")) + "\n";
  }
  if (fs::exists(run)) {
    std::ifstream in(run);
    std::string line;
    std::getline(in, line);
    const auto cols = split(line, ',');
    int it = -1, id = -1, iv = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == "t") it = static_cast<int>(i);
      if (cols[i] == "dist") id = static_cast<int>(i);
      if (cols[i] == "valid") iv = static_cast<int>(i);
    }
    if (it < 0 || id < 0 || iv < 0) throw Error(ErrorCode::MissingArtifacts, "run.csv has no t/dist/valid columns");
    std::ostringstream dat;
    dat << "# t dist\n";
    while (std::getline(in, line)) {
      const auto cells = split(line, ',');
      if (static_cast<int>(cells.size()) <= iv || cells[iv] != "1") continue;
      const double d = std::strtod(cells[id].c_str(), nullptr);
      if (!std::isfinite(d)) continue;
      dat << cells[it] << ' ' << cells[id] << '\n';
    }
    write_text_file(base / "dist_vs_t.dat", dat.str());
  }
  const std::string text = header + table.str() + "(" + kSampledDisclaimer + ")\n";
  write_text_file(base / "report.txt", text);
  out << text;
  return kExitPass;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemannian observer analysis: condition checks, simulations and geodesics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, benchmark, metric;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0, epsilon = 0.0;
  std::vector<std::string> conditions;
  auto* o_config = app.add_option("--config", config_path, "JSON job file");
  auto* o_seed = app.add_option("--seed", seed, "sampling seed");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_samples = app.add_option("--samples", samples, "sample count for pointwise checks")->check(CLI::PositiveNumber);
  auto* o_tol = app.add_option("--tol", tol, "tolerance override")->check(CLI::PositiveNumber);
  auto* o_bench = app.add_option("--benchmark", benchmark, "linear | oscillator | planar | circle");
  auto* o_metric = app.add_option("--metric", metric, "metric name within the benchmark");
  auto* o_cond = app.add_option("--condition", conditions, "a2 | a3-nullity | a3-direct | submersion (repeatable)");
  auto* o_eps = app.add_option("--epsilon", epsilon, "oscillator region parameter");

  auto* check = app.add_subcommand("check", "run condition checks and write report.json");
  auto* sim = app.add_subcommand("simulate", "co-simulate plant and observer, write run.csv and summary.json");
  auto* geo = app.add_subcommand("geodesic", "integrate or connect a geodesic, write geodesic.csv");
  auto* rep = app.add_subcommand("report", "summarise artifacts in the output directory");

  std::vector<double> from, to, velocity;
  double length = 0.0, gain = 0.0;
  std::string chart, distance;
  auto* o_from = geo->add_option("--from", from, "start point")->delimiter(',');
  auto* o_to = geo->add_option("--to", to, "end point")->delimiter(',');
  auto* o_vel = geo->add_option("--velocity", velocity, "initial velocity")->delimiter(',');
  auto* o_len = geo->add_option("--length", length, "parameter length for --velocity runs");
  auto* o_chart = geo->add_option("--chart", chart, "ex8: use (y, xi) coordinates");
  auto* o_gain = sim->add_option("--gain", gain, "constant k_E instead of the scan")->check(CLI::PositiveNumber);
  auto* o_dist = sim->add_option("--distance", distance, "geodesic | constant-metric | euclidean-bound");

  std::vector<std::string> argv_s;
  argv_s.push_back("riemobs");
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  auto to_vec = [](const std::vector<double>& v) { return Vec(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()))); };
  try {
    JobConfig cfg = o_config->count() ? load_config(config_path) : JobConfig{};
    if (o_seed->count()) cfg.seed = seed;
    if (o_out->count()) cfg.out = out_dir;
    if (o_samples->count()) cfg.samples = samples;
    if (o_tol->count()) cfg.tol = tol;
    if (o_bench->count()) {
      const auto names = benchmark_names();
      if (std::find(names.begin(), names.end(), benchmark) == names.end()) {
        throw Error(ErrorCode::ConfigError, "--benchmark: unknown benchmark '" + benchmark + "'");
      }
      cfg.benchmark = benchmark;
    }
    if (o_metric->count()) {
      cfg.metric = MetricRecipe{};
      cfg.metric.base = metric;
    }
    if (o_eps->count()) {
      if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::ConfigError, "--epsilon must lie in (0, 1)");
      cfg.epsilon = epsilon;
    }
    if (o_cond->count()) {
      cfg.conditions.clear();
      for (const auto& c : conditions) {
        if (!known_condition(c)) throw Error(ErrorCode::ConfigError, "--condition: unknown condition '" + c + "'");
        cfg.conditions.push_back(c);
      }
    }
    if (o_from->count()) cfg.geodesic.from = to_vec(from);
    if (o_to->count()) cfg.geodesic.to = to_vec(to);
    if (o_vel->count()) cfg.geodesic.velocity = to_vec(velocity);
    if (o_len->count()) {
      if (!(length > 0.0)) throw Error(ErrorCode::ConfigError, "--length must be positive");
      cfg.geodesic.length = length;
    }
    if (o_chart->count()) {
      if (chart != "ex8") throw Error(ErrorCode::ConfigError, "--chart: only ex8 is available");
      cfg.geodesic.chart = chart;
    }
    if (o_gain->count()) cfg.simulation.gain = gain;
    if (o_dist->count()) {
      if (distance == "geodesic") cfg.simulation.distance = DistanceMethod::Geodesic;
      else if (distance == "constant-metric") cfg.simulation.distance = DistanceMethod::ConstantMetric;
      else if (distance == "euclidean-bound") cfg.simulation.distance = DistanceMethod::EuclideanBound;
      else throw Error(ErrorCode::ConfigError, "--distance: unknown method '" + distance + "'");
    }

    if (check->parsed()) return cmd_check(cfg, out);
    if (sim->parsed()) return cmd_simulate(cfg, out);
    if (geo->parsed()) return cmd_geodesic(cfg, out);
    if (rep->parsed()) return cmd_report(cfg.out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::MissingArtifacts:
      case ErrorCode::DimensionMismatch:
      case ErrorCode::PreconditionViolation:
      case ErrorCode::UnsupportedQ:
      case ErrorCode::NonpositiveWeight:
      case ErrorCode::RankViolation:
      case ErrorCode::NoFeasiblePoint:
        return kExitConfig;
      default:
        return kExitFail;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}

}  // namespace riemobs::cli
