#include "cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace riemobs::cli {

using nlohmann::json;

std::string format_full(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_full(v);
}

json json_vector(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

json report_to_json(const ConditionReport& r) {
  json j;
  j["condition"] = r.condition;
  j["verdict"] = std::string(to_string(r.verdict));
  j["margin"] = json_number(r.margin);
  if (r.witness) {
    j["witness"] = {{"point", json_vector(r.witness->point)}, {"direction", json_vector(r.witness->direction)}};
  } else {
    j["witness"] = nullptr;
  }
  j["samples"] = r.samples_checked;
  j["inconclusive_samples"] = r.inconclusive_samples;
  j["seed"] = r.seed;
  j["tolerance"] = json_number(r.tolerance);
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

void write_run_csv(std::ostream& os, const ObserverRun& run) {
  if (run.size() == 0) return;
  const Eigen::Index n = run.x.front().size();
  const Eigen::Index p = run.y.front().size();
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",xhat_" << i;
  for (Eigen::Index i = 1; i <= p; ++i) os << ",y_" << i;
  os << ",dist,dist_method,valid\n";
  const std::string method(to_string(run.method));
  for (std::size_t k = 0; k < run.size(); ++k) {
    os << format_full(run.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_full(run.x[k](i));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_full(run.xhat[k](i));
    for (Eigen::Index i = 0; i < p; ++i) os << ',' << format_full(run.y[k](i));
    os << ',' << format_full(run.dist[k]) << ',' << method << ',' << (run.valid[k] ? 1 : 0) << '\n';
  }
}

void write_geodesic_csv(std::ostream& os, const Geodesic& g, const MetricField& p) {
  if (g.samples.empty()) return;
  const Eigen::Index n = g.samples.front().point.size();
  os << "s";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  os << ",speed\n";
  for (const auto& s : g.samples) {
    os << format_full(s.s);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_full(s.point(i));
    const double speed = std::sqrt(std::max(0.0, s.velocity.dot(p.eval(s.point) * s.velocity)));
    os << ',' << format_full(speed) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  f << content;
}

}  // namespace riemobs::cli
