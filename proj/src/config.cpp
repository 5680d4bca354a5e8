#include "vorlab/config.hpp"

#include "vorlab/runtime.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "vorlab/errors.hpp"

namespace vorlab {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["source"] = c.source;
  j["nmax"] = c.nmax;
  j["scan_kind"] = c.scan_kind;
  j["m_grid"] = c.m_grid;
  j["delta_exponent"] = c.delta_exponent;
  j["delta_fixed"] = c.delta_fixed;
  j["m_fixed"] = c.m_fixed;
  j["resonance_d"] = c.resonance_d;
  j["k"] = c.k;
  j["h"] = c.h;
  j["seed"] = c.seed;
  j["alpha_samples"] = c.alpha_samples;
  j["x_samples"] = c.x_samples;
  j["tolerance"] = c.tolerance;
  j["tail_tol"] = c.tail_tol;
  j["bound_slack"] = c.bound_slack;
  return j;
}

}  // namespace

std::string RunConfig::to_json_string() const { return config_json(*this).dump(); }

std::uint64_t RunConfig::hash() const {
  std::string s = to_json_string();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

ScanConfig RunConfig::scan_config() const {
  ScanConfig sc;
  sc.m_grid = m_grid;
  sc.delta_exponent = delta_exponent;
  sc.delta_fixed = delta_fixed;
  sc.m_fixed = m_fixed;
  sc.resonance_d = resonance_d;
  sc.k = k;
  sc.h = h;
  sc.seed = seed;
  sc.alpha_samples = alpha_samples;
  sc.x_samples = x_samples;
  sc.tolerance = tolerance;
  return sc;
}

void write_scan_csv(const std::string& path, const ScanResult& result) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write CSV: " + path);
  out << "kind,M,Delta,alpha_desc,value\n";
  for (const auto& p : result.points) {
    out << scan_kind_name(result.kind) << "," << fmt_double(p.x) << ","
        << fmt_double(p.delta) << "," << p.descriptor << "," << fmt_double(p.y) << "\n";
  }
}

void write_scan_json(const std::string& path, const ScanResult& result,
                     const RunConfig& config, std::uint64_t table_checksum) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["kind"] = scan_kind_name(result.kind);
  j["slope"] = result.slope;
  j["intercept"] = result.intercept;
  j["ci_halfwidth"] = result.ci_halfwidth;
  j["target_slope"] = result.target_slope;
  j["tolerance"] = result.tolerance;
  j["one_sided"] = result.one_sided;
  j["pass"] = result.pass;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : result.points) {
    j["points"].push_back({{"x", p.x}, {"y", p.y}, {"delta", p.delta}, {"desc", p.descriptor}});
  }
  j["config"] = nlohmann::ordered_json::parse(config.to_json_string());
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config.hash()));
  j["config_hash"] = hex;
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(table_checksum));
  j["table_checksum"] = hex;
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write JSON: " + path);
  out << j.dump(2) << "\n";
}

int effective_thread_count() {
  const char* env = std::getenv("VORLAB_THREADS");
  if (env != nullptr) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void apply_thread_cap() {
#ifdef _OPENMP
  omp_set_num_threads(std::min(effective_thread_count(), 64));
#endif
}

}  // namespace vorlab
