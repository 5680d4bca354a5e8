#pragma once

// Run configuration for the command-line front end: fully serializable, and
// embedded verbatim in every JSON summary so reported exponents can be
// reproduced bit for bit.

#include <cstdint>
#include <string>
#include <vector>

#include "vorlab/experiments.hpp"

namespace vorlab {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunConfig {
  std::string command;        // scan, verify-voronoi, ...
  std::string source;         // "builtin-tau", "constant", or a file path
  long nmax = 100000;
  std::string scan_kind = "resonance";
  std::vector<double> m_grid;
  double delta_exponent = 0.7;
  double delta_fixed = 0.0;
  double m_fixed = 0.0;
  long resonance_d = 1;
  long k = 1;
  long h = 0;
  std::uint64_t seed = 7;
  int alpha_samples = 512;
  int x_samples = 200;
  double tolerance = -1.0;
  double tail_tol = 1e-4;
  double bound_slack = 3.0;
  std::string csv_path;
  std::string json_path;

  std::string to_json_string() const;
  std::uint64_t hash() const;
  ScanConfig scan_config() const;
};

// CSV rows (kind, M, Delta, alpha_desc, value) plus a JSON summary with the
// fitted slope, the config echo, and the coefficient-table checksum.
void write_scan_csv(const std::string& path, const ScanResult& result);
void write_scan_json(const std::string& path, const ScanResult& result,
                     const RunConfig& config, std::uint64_t table_checksum);

}  // namespace vorlab
