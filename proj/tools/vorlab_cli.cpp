// Command-line front door: scans, identity verifications, data validation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "vorlab/config.hpp"
#include "vorlab/errors.hpp"
#include "vorlab/experiments.hpp"
#include "vorlab/forms.hpp"
#include "vorlab/oscillatory.hpp"
#include "vorlab/special_fn.hpp"
#include "vorlab/sums.hpp"
#include "vorlab/voronoi.hpp"
#include "vorlab/weights.hpp"

namespace {

using nlohmann::ordered_json;
using namespace vorlab;

FormKind sniff_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# kind=", 0) == 0) {
      std::string v = line.substr(7);
      if (v == "maass") return FormKind::kMaass;
      if (v == "holomorphic") return FormKind::kHolomorphic;
      return FormKind::kSynthetic;
    }
    if (!line.empty() && line[0] != '#') break;
  }
  return FormKind::kMaass;
}

CoefficientTable resolve_source(const std::string& source, long nmax) {
  if (source == "builtin-tau") return builtin_tau(nmax);
  if (source == "constant") return constant_table(nmax);
  return load_coefficients(source, sniff_kind(source));
}

void emit_json(const std::string& path, const ordered_json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  }
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_selftest_bessel(const std::vector<double>& kappas, const std::string& csv_path) {
  std::ofstream csv;
  if (!csv_path.empty()) {
    csv.open(csv_path);
    csv << "kappa,x,series_im,asymptotic_im,relative_gap\n";
  }
  bool ok = true;
  for (double kappa : kappas) {
    auto rec = make_bessel_asymptotic(kappa);
    for (double frac : {0.80, 0.90, 1.00, 1.10, 1.20}) {
      double x = frac * rec.crossover_x;
      auto s = bessel_j_imag_diff(kappa, x, BesselMethod::kSeries);
      auto a = bessel_j_imag_diff(kappa, x, BesselMethod::kAsymptotic);
      double gap = std::abs(s - a) / std::max(std::abs(s), 1e-300);
      if (gap > 1e-6) ok = false;
      if (csv.is_open()) {
        char line[160];
        std::snprintf(line, sizeof line, "%.6g,%.10g,%.17g,%.17g,%.3e\n", kappa, x,
                      s.imag(), a.imag(), gap);
        csv << line;
      }
      std::printf("kappa=%-8g x=%-10.4f gap=%.3e %s\n", kappa, x, gap,
                  gap <= 1e-6 ? "ok" : "FAIL");
    }
  }
  return ok ? 0 : 1;
}

int cmd_verify_voronoi(const RunConfig& cfg, double a, double b, long k_max) {
  auto t0 = std::chrono::steady_clock::now();
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  ordered_json out;
  out["check"] = "voronoi-two-sided";
  if (table.kind() != FormKind::kMaass) {
    out["skipped"] = true;
    out["reason"] = "two-sided identity applies to Maass tables only";
    emit_json(cfg.json_path, out);
    std::puts("verify-voronoi: skipped (Maass identity only)");
    return 0;
  }
  PlateauWindow pw = make_plateau_window(a, b - a, (b - a) / 8.0);
  TestFunction f = plateau_test_function(pw);
  bool all_ok = true;
  out["cases"] = ordered_json::array();
  for (long k = 1; k <= k_max; ++k) {
    RationalApprox r = make_rational(k == 1 ? 0 : 1, k);
    SumSpec lhs_spec;
    lhs_spec.m = a;
    lhs_spec.delta = b - a;
    lhs_spec.alpha = static_cast<double>(r.h) / static_cast<double>(r.k);
    lhs_spec.weight = f.value;
    lhs_spec.endpoint_rule = EndpointRule::kPrimed;
    std::complex<double> lhs = evaluate_sum(table, lhs_spec);
    VoronoiOptions opt;
    opt.bound_slack = cfg.bound_slack;
    VoronoiRhs rhs = voronoi_rhs(table, f, a, b, r, cfg.tail_tol, opt);
    double gap = std::abs(lhs - rhs.value);
    bool pass = gap <= 1e-4 * (1.0 + std::abs(lhs));
    all_ok = all_ok && pass;
    ordered_json rec;
    rec["k"] = k;
    rec["h"] = r.h;
    rec["lhs"] = {lhs.real(), lhs.imag()};
    rec["rhs"] = {rhs.value.real(), rhs.value.imag()};
    rec["gap"] = gap;
    rec["budget"] = rhs.tail_bound;
    rec["truncation_n"] = rhs.truncation_n;
    rec["pass"] = pass;
    out["cases"].push_back(rec);
    std::printf("k=%ld gap=%.3e (tail<=%.2e, N=%ld) %s\n", k, gap, rhs.tail_bound,
                rhs.truncation_n, pass ? "ok" : "FAIL");
  }
  out["elapsed_s"] = elapsed_s(t0);
  emit_json(cfg.json_path, out);
  return all_ok ? 0 : 1;
}

int cmd_verify_truncated(const RunConfig& cfg, double x) {
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  RationalApprox r = make_rational(cfg.h, cfg.k);
  std::complex<double> direct(0.0, 0.0);
  {
    SumSpec s;
    s.m = 1.0;
    s.delta = x - 1.0;
    s.alpha = static_cast<double>(r.h) / static_cast<double>(r.k);
    s.endpoint_rule = EndpointRule::kPrimed;
    direct = evaluate_sum(table, s);
  }
  std::vector<std::pair<double, double>> pts;
  ordered_json cases = ordered_json::array();
  for (long n : {64L, 128L, 256L, 512L}) {
    TruncatedVoronoi tv = truncated_voronoi_main(table, x, n, r);
    double resid = std::abs(direct - tv.main);
    pts.emplace_back(static_cast<double>(n), resid);
    cases.push_back({{"N", n}, {"residual", resid}, {"bound", tv.residual_bound}});
    std::printf("N=%-5ld residual=%.6e bound=%.3e\n", n, resid, tv.residual_bound);
  }
  FitResult fit = fit_exponent(pts, FitMode::kTwoSided);
  bool pass = std::fabs(fit.slope + 0.5) <= 0.15;
  std::printf("slope=%.4f (target -0.5 +- 0.15) %s\n", fit.slope, pass ? "ok" : "FAIL");
  ordered_json out;
  out["check"] = "truncated-voronoi-residual";
  out["x"] = x;
  out["slope"] = fit.slope;
  out["cases"] = cases;
  out["pass"] = pass;
  emit_json(cfg.json_path, out);
  return pass ? 0 : 1;
}

int cmd_verify_transform(const RunConfig& cfg) {
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  struct Config {
    long h, k;
    double m_center, half, u;
    int j;
  };
  // Quadratic-phase instances f(x) = x^2 / (2C) with C chosen so f'(M(r)) = r.
  std::vector<Config> configs = {
      {1, 1, 10000.0, 1800.0, 320.0, 2},
      {1, 2, 10000.0, 1700.0, 340.0, 2},
      {2, 3, 10500.0, 1600.0, 330.0, 2},
  };
  bool all_ok = true;
  ordered_json out;
  out["check"] = "transformation-formula";
  out["cases"] = ordered_json::array();
  for (const auto& c : configs) {
    double rv = static_cast<double>(c.h) / static_cast<double>(c.k);
    double big_c = c.m_center / rv;  // f'(m_center) = r
    PhaseSpec phase;
    phase.f = [big_c](double x) { return x * x / (2.0 * big_c); };
    phase.fp = [big_c](double x) { return x / big_c; };
    phase.fpp = [big_c](double x) {
      (void)x;
      return 1.0 / big_c;
    };
    phase.phase_scale = c.m_center * rv;  // F = M^2 f'' = M r
    phase.amp_bound = 1.0;
    phase.mu = 0.5 * c.m_center;
    TransformSetup setup = transform_setup(phase, make_rational(c.h, c.k),
                                           c.m_center - c.half, c.m_center + c.half, c.u, c.j);
    TransformResult rhs = transform_rhs(setup, table);
    std::complex<double> lhs = smoothed_nonlinear_sum(table, phase, setup.window());
    double gap = std::abs(lhs - rhs.value);
    bool pass = gap <= 5.0 * rhs.error_budget && setup.warnings.empty();
    all_ok = all_ok && pass;
    ordered_json rec;
    rec["h"] = c.h;
    rec["k"] = c.k;
    rec["m1"] = setup.m1;
    rec["m2"] = setup.m2;
    rec["n1"] = setup.n1;
    rec["n2"] = setup.n2;
    rec["lhs"] = {lhs.real(), lhs.imag()};
    rec["rhs"] = {rhs.value.real(), rhs.value.imag()};
    rec["gap"] = gap;
    rec["budget"] = rhs.error_budget;
    rec["warnings"] = setup.warnings;
    rec["pass"] = pass;
    out["cases"].push_back(rec);
    std::printf("h/k=%ld/%ld gap=%.4e budget=%.4e warnings=%zu %s\n", c.h, c.k, gap,
                rhs.error_budget, setup.warnings.size(), pass ? "ok" : "FAIL");
  }
  emit_json(cfg.json_path, out);
  return all_ok ? 0 : 1;
}

int cmd_verify_afe(const RunConfig& cfg) {
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  ScanConfig sc = cfg.scan_config();
  if (sc.m_grid.empty()) sc.m_grid = {1e4, 2e4, 4e4, 8e4, 1.6e5, 3.2e5, 6.4e5};
  ScanResult res = run_scan(table, ScanKind::kAfeError, sc);
  double target = table.theta() / 2.0 - 1.0 / 12.0 + 0.05;
  bool pass = res.slope <= target;
  std::printf("afe error slope=%.4f target<=%.4f %s\n", res.slope, target,
              pass ? "ok" : "FAIL");
  ordered_json out;
  out["check"] = "afe-error-exponent";
  out["slope"] = res.slope;
  out["target"] = target;
  out["pass"] = pass;
  out["points"] = ordered_json::array();
  for (const auto& p : res.points) out["points"].push_back({{"N", p.x}, {"err", p.y}});
  emit_json(cfg.json_path, out);
  return pass ? 0 : 1;
}

int cmd_scan(const RunConfig& cfg) {
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  ScanKind kind = scan_kind_from_name(cfg.scan_kind);
  ScanResult res = run_scan(table, kind, cfg.scan_config());
  std::printf("%s: slope=%.4f target=%.4f%s tol=%.3f pass=%s\n", scan_kind_name(kind),
              res.slope, res.target_slope, res.one_sided ? " (upper)" : "", res.tolerance,
              res.pass ? "true" : "false");
  if (!cfg.csv_path.empty()) write_scan_csv(cfg.csv_path, res);
  if (!cfg.json_path.empty()) write_scan_json(cfg.json_path, res, cfg, table.checksum());
  return res.pass ? 0 : 1;
}

int cmd_validate(const RunConfig& cfg, double tol) {
  CoefficientTable table = resolve_source(cfg.source, cfg.nmax);
  ValidationReport rep = validate_hecke(table, tol);
  std::printf("pairs=%ld max_residual=%.3e violations=%zu/%zu %s\n", rep.pairs_checked,
              rep.max_residual, rep.multiplicative.size(), rep.prime_power.size(),
              rep.passed() ? "ok" : "FAIL");
  for (size_t i = 0; i < rep.multiplicative.size() && i < 10; ++i) {
    const auto& v = rep.multiplicative[i];
    std::printf("  t(%ld) t(%ld) != t(%ld), residual %.3e\n", v.m, v.n, v.m * v.n,
                v.residual);
  }
  ordered_json out;
  out["check"] = "hecke-relations";
  out["tol"] = tol;
  out["pairs"] = rep.pairs_checked;
  out["max_residual"] = rep.max_residual;
  out["violations"] = rep.multiplicative.size() + rep.prime_power.size();
  out["pass"] = rep.passed();
  emit_json(cfg.json_path, out);
  return rep.passed() ? 0 : 1;
}

int cmd_dump_weights(double m1, double m2, double u, int j, const std::string& csv_path) {
  SmoothWindow w = make_smooth_window(m1, m2, u, j);
  PartitionOfUnity part = partition_build(m1, m2 - m1);
  PlateauWindow pl = make_plateau_window(m1, m2 - m1, u);
  std::ofstream out(csv_path.empty() ? "/dev/stdout" : csv_path);
  out << "x,eta,plateau,w_m1,w_0,w_p1,partition_sum\n";
  char line[240];
  for (int i = 0; i <= 1000; ++i) {
    double x = m1 - u + (m2 - m1 + 2 * u) * i / 1000.0;
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", x,
                  eta_eval(w, x), plateau_eval(pl, x, 0), part.weight(-1, x),
                  part.weight(0, x), part.weight(1, x), part.weight_sum(x));
    out << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for coefficient-weighted exponential sums"};
  app.require_subcommand(1);

  RunConfig cfg;
  double opt_a = 50.0, opt_b = 150.0, opt_x = 1e4, opt_tol = 1e-6;
  long opt_kmax = 3;
  std::vector<double> kappas = {1.0, 5.0, 9.5337};
  std::string weights_csv;
  double w_m1 = 100.0, w_m2 = 200.0, w_u = 10.0;
  int w_j = 2;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--source", cfg.source, "builtin-tau, constant, or a coefficient file");
    sub->add_option("--nmax", cfg.nmax, "table length for generated sources");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--csv", cfg.csv_path, "CSV output path");
    sub->add_option("--json", cfg.json_path, "JSON summary path");
    sub->add_option("--tail-tol", cfg.tail_tol, "dual-series tail tolerance");
    sub->add_option("--twist-k", cfg.k, "denominator of the rational twist");
    sub->add_option("--twist-h", cfg.h, "numerator of the rational twist");
  };

  auto* self = app.add_subcommand("selftest-bessel", "series vs asymptotic crossover check");
  self->add_option("--kappa", kappas, "kappa values");
  self->add_option("--csv", cfg.csv_path, "CSV output path");

  auto* vv = app.add_subcommand("verify-voronoi", "two-sided Voronoi identity");
  add_common(vv);
  vv->add_option("--a", opt_a, "interval start");
  vv->add_option("--b", opt_b, "interval end");
  vv->add_option("--kmax", opt_kmax, "check k = 1..kmax");

  auto* vt = app.add_subcommand("verify-truncated", "truncated identity residual slope");
  add_common(vt);
  vt->add_option("--x", opt_x, "endpoint of the long sum");

  auto* vf = app.add_subcommand("verify-transform", "smoothed-sum transformation formula");
  add_common(vf);

  auto* va = app.add_subcommand("verify-afe", "approximate functional equation exponent");
  add_common(va);
  va->add_option("--m-grid", cfg.m_grid, "M grid");

  auto* sc = app.add_subcommand("scan", "exponent scan");
  add_common(sc);
  sc->add_option("--kind", cfg.scan_kind, "scan kind");
  sc->add_option("--m-grid", cfg.m_grid, "grid (M, or Delta for mean_square_short)");
  sc->add_option("--delta-exponent", cfg.delta_exponent, "Delta = M^e");
  sc->add_option("--m-fixed", cfg.m_fixed, "fixed M for mean_square_short");
  sc->add_option("--d", cfg.resonance_d, "resonance shift d");
  sc->add_option("--alpha-samples", cfg.alpha_samples, "random alphas in the panel");
  sc->add_option("--x-samples", cfg.x_samples, "x samples for mean squares");
  sc->add_option("--tolerance", cfg.tolerance, "slope tolerance override");

  auto* vc = app.add_subcommand("validate-coefficients", "Hecke-relation report");
  vc->add_option("--file", cfg.source, "coefficient file")->required();
  vc->add_option("--tol", opt_tol, "violation tolerance");
  vc->add_option("--json", cfg.json_path, "JSON summary path");
  vc->add_option("--nmax", cfg.nmax, "table length for generated sources");

  auto* dw = app.add_subcommand("dump-weights", "sampled weight curves as CSV");
  dw->add_option("--m1", w_m1, "window start");
  dw->add_option("--m2", w_m2, "window end");
  dw->add_option("--u", w_u, "ramp width");
  dw->add_option("--j", w_j, "smoothing order");
  dw->add_option("--csv", weights_csv, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (self->parsed()) return cmd_selftest_bessel(kappas, cfg.csv_path);
    if (vv->parsed()) {
      cfg.command = "verify-voronoi";
      if (cfg.source.empty()) {
        std::fprintf(stderr, "verify-voronoi needs --source (a Maass coefficient file)\n");
        return 2;
      }
      return cmd_verify_voronoi(cfg, opt_a, opt_b, opt_kmax);
    }
    if (vt->parsed()) {
      cfg.command = "verify-truncated";
      if (cfg.source.empty()) cfg.source = "builtin-tau";
      return cmd_verify_truncated(cfg, opt_x);
    }
    if (vf->parsed()) {
      cfg.command = "verify-transform";
      if (cfg.source.empty()) {
        std::fprintf(stderr, "verify-transform needs --source (a Maass coefficient file)\n");
        return 2;
      }
      return cmd_verify_transform(cfg);
    }
    if (va->parsed()) {
      cfg.command = "verify-afe";
      if (cfg.source.empty()) cfg.source = "builtin-tau";
      return cmd_verify_afe(cfg);
    }
    if (sc->parsed()) {
      cfg.command = "scan";
      if (cfg.source.empty()) cfg.source = "builtin-tau";
      if (cfg.m_grid.empty()) cfg.m_grid = {1e4, 3e4, 1e5, 3e5};
      return cmd_scan(cfg);
    }
    if (vc->parsed()) return cmd_validate(cfg, opt_tol);
    if (dw->parsed()) return cmd_dump_weights(w_m1, w_m2, w_u, w_j, weights_csv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
