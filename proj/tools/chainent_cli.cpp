#include "invariants.hpp"

#include <chainent/io.hpp>

#include <CLI11.hpp>
#include <fmt/core.h>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

using namespace chainent;
namespace cio = chainent::io;

namespace {

struct ModelOptions {
  std::string file;
  std::string preset;
  double alpha = 0.8;
  double gamma = 0.5;
  std::vector<double> a, b;

  void attach(CLI::App* app) {
    app->add_option("--model", file, "model JSON file");
    app->add_option("--preset", preset, "xx | xy")->check(CLI::IsMember({"xx", "xy"}));
    app->add_option("--alpha", alpha, "preset coupling");
    app->add_option("--gamma", gamma, "anisotropy");
    app->add_option("--a", a, "custom a(0..n)")->delimiter(',');
    app->add_option("--b", b, "custom b(1..n)")->delimiter(',');
  }

  ChainModel build() const {
    if (!file.empty()) return cio::load_model(file);
    if (preset == "xx") return make_xx_model(alpha);
    if (preset == "xy") return make_xy_model(alpha, gamma);
    if (!a.empty()) return make_custom_model(a, b, gamma);
    throw Error(ErrorKind::ConfigError, "cli", "give --model, --preset or --a/--b");
  }
};

std::vector<int> parse_int_range(const std::string& spec) {
  std::vector<int> v;
  int lo, hi, step = 1;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo)) throw Error(ErrorKind::ConfigError, "cli", "bad range " + spec);
  if (in >> c1) {
    if (c1 != ':' || !(in >> hi)) throw Error(ErrorKind::ConfigError, "cli", "bad range " + spec);
    if (in >> c2 && (c2 != ':' || !(in >> step))) throw Error(ErrorKind::ConfigError, "cli", "bad range " + spec);
  } else {
    hi = lo;
  }
  if (step <= 0 || hi < lo || lo < 0) throw Error(ErrorKind::ConfigError, "cli", "bad range " + spec);
  for (int L = lo; L <= hi; L += step) v.push_back(L);
  return v;
}

// start:stop:count, endpoints included.
std::vector<double> parse_path(const std::string& spec) {
  double lo, hi;
  int count;
  char c1, c2;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1) {
    throw Error(ErrorKind::ConfigError, "cli", "bad path " + spec);
  }
  std::vector<double> v;
  for (int k = 0; k < count; ++k) v.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ENTROPY_NUM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 1) throw Error(ErrorKind::ConfigError, "cli", "ENTROPY_NUM_THREADS must be a positive integer");
    n = static_cast<unsigned>(v);
  }
  return n;
}

// Results land in input order whatever the scheduling; the first failure by index is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<std::optional<T>> out(n);
  std::vector<std::exception_ptr> err(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  unsigned k = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<T> res;
  for (std::size_t i = 0; i < n; ++i) {
    if (err[i]) std::rethrow_exception(err[i]);
    res.push_back(std::move(*out[i]));
  }
  return res;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::ConfigError, "cli", "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int entropy_scan(const ModelOptions& mo, const std::string& Lspec, const std::string& methods, const std::string& out) {
  auto s = analyze(mo.build());
  auto Ls = parse_int_range(Lspec);
  bool want_exact = false, want_theta = false;
  for (auto& m : split(methods)) {
    if (m == "exact") want_exact = true;
    else if (m == "theta") want_theta = true;
    else throw Error(ErrorKind::ConfigError, "cli", "unknown method " + m);
  }
  double S_theta = want_theta ? entropy_theta(s).value : 0.0;
  auto exact = want_exact ? parallel_map<double>(Ls.size(), [&](std::size_t i) { return entropy_exact(s, Ls[i]).value; })
                          : std::vector<double>(Ls.size());
  Output o(out);
  std::vector<std::string> header{"L"};
  if (want_exact) header.push_back("S_exact");
  if (want_theta) header.push_back("S_theta");
  if (want_exact && want_theta) header.push_back("abs_diff");
  cio::CsvWriter w(o.stream(), header);
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    std::vector<double> row{double(Ls[i])};
    if (want_exact) row.push_back(exact[i]);
    if (want_theta) row.push_back(S_theta);
    if (want_exact && want_theta) row.push_back(std::abs(exact[i] - S_theta));
    w.row(row);
  }
  return 0;
}

int determinant_scan(const ModelOptions& mo, const std::string& Lspec, const std::vector<double>& lams, const std::string& out) {
  auto s = analyze(mo.build());
  auto Ls = parse_int_range(Lspec);
  std::optional<Curve> curve;
  std::optional<ThetaAsymptotics> ta;
  if (!s.critical() && !symbol_is_constant(s)) {
    curve.emplace(s);
    ta.emplace(*curve);
  }
  for (double lam : lams)
    if (std::abs(lam) <= 1.0) throw Error(ErrorKind::ConfigError, "cli", "--lambda values must satisfy |lambda| > 1");
  struct Row {
    cplx direct, spectral, asym;
  };
  int Lmax = 1;
  for (int L : Ls) Lmax = std::max(Lmax, L);
  auto g = fourier_coefficients_auto(s, Lmax);
  const std::size_t n = Ls.size() * lams.size();
  auto rows = parallel_map<Row>(n, [&](std::size_t k) {
    int L = Ls[k / lams.size()];
    double lam = lams[k % lams.size()];
    Row r;
    r.direct = toeplitz_determinant_direct(g, lam, L);
    r.spectral = toeplitz_determinant_spectral(spectrum_toeplitz(g, L), lam);
    r.asym = ta ? determinant_asymptotic(*ta, lam, L).value : cplx(std::nan(""), std::nan(""));
    return r;
  });
  Output o(out);
  cio::CsvWriter w(o.stream(), {"L", "lambda", "D_direct_re", "D_direct_im", "D_spectral_re", "D_spectral_im",
                                "D_asym_re", "D_asym_im", "ratio_minus_one"});
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = rows[k];
    w.row({double(Ls[k / lams.size()]), lams[k % lams.size()], r.direct.real(), r.direct.imag(), r.spectral.real(),
           r.spectral.imag(), r.asym.real(), r.asym.imag(), std::abs(r.direct / r.asym - 1.0)});
  }
  return 0;
}

int critical_scan(const ModelOptions& mo, const std::string& path, int L, double threshold, const std::string& out) {
  if (mo.preset.empty()) throw Error(ErrorKind::ConfigError, "cli", "critical-scan follows a preset along --alpha-path");
  auto alphas = parse_path(path);
  struct Row {
    double d, S, est, pairs;
  };
  auto rows = parallel_map<Row>(alphas.size(), [&](std::size_t i) {
    auto m = mo.preset == "xx" ? make_xx_model(alphas[i]) : make_xy_model(alphas[i], mo.gamma);
    auto s = analyze(m);
    Row r{s.crit_distance, entropy_exact(s, L).value, std::nan(""), 0.0};
    try {
      auto e = critical_entropy_estimate(s, threshold);
      r.est = e.value;
      r.pairs = e.diagnostics.at("pairs");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoDegeneratePairs && e.kind() != ErrorKind::CriticalSymbol) throw;
    }
    return r;
  });
  Output o(out);
  cio::CsvWriter w(o.stream(), {"alpha", "d", "S_exact", "S_critical", "pairs", "pairs_log_d"});
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto& r = rows[i];
    w.row({alphas[i], r.d, r.S, r.est, r.pairs, -r.pairs * std::log(r.d) / 6.0});
  }
  return 0;
}

int dump_curve(const ModelOptions& mo, const std::string& out) {
  auto m = mo.build();
  auto s = analyze(m);
  cio::json j = {{"label", m.label}, {"symbol", cio::symbol_json(s)}};
  if (!s.critical()) {
    Curve c(s);
    j["curve"] = cio::curve_json(c);
  }
  Output o(out);
  o.stream() << j.dump(2) << '\n';
  return 0;
}

int verify_rh(const ModelOptions& mo, double lam, int samples, double delta, const std::string& format, const std::string& out) {
  auto s = analyze(mo.build());
  Curve c(s);
  ThetaAsymptotics ta(c);
  RHSolution rh(ta, s, lam);
  auto jumps = verify_jumps(rh, samples, delta);
  auto f = wiener_hopf_factors(rh, s);
  auto inf = verify_theta_infinity(rh);
  double det = verify_determinant_ratio(rh);
  Output o(out);
  if (format == "json") {
    cio::json cuts = cio::json::array();
    for (auto& r : jumps) {
      cuts.push_back({{"cut", r.cut}, {"outer", r.outer}, {"jump_residual", r.residual},
                      {"jump_residual_half_delta", r.residual_half}, {"jump_extrapolated", r.extrapolated},
                      {"factor_continuity", r.continuity}});
    }
    cio::json j = {{"lambda", lam},
                   {"delta", delta},
                   {"cuts", cuts},
                   {"factorization", {{"u_residual", f.u_residual}, {"v_residual", f.v_residual},
                                      {"symbol_oracle", f.oracle_residual}, {"u_minus_infinity", f.u_minus_infinity},
                                      {"transposed", f.transposed}, {"sign_flips", f.sign_flips}}},
                   {"theta_infinity", {{"diagonal_mismatch", inf.diagonal_mismatch}, {"off_diagonal", inf.off_diagonal}}},
                   {"det_theta_over_g", det}};
    o.stream() << j.dump(2) << '\n';
    return 0;
  }
  cio::CsvWriter w(o.stream(), {"cut", "outer", "jump_residual", "jump_residual_half_delta", "jump_extrapolated",
                                "factor_continuity", "factorization_residual"});
  for (auto& r : jumps) {
    w.row({double(r.cut), r.outer ? 1.0 : 0.0, r.residual, r.residual_half, r.extrapolated, r.continuity,
           f.u_residual});
  }
  return 0;
}

int entropy_single(const ModelOptions& mo, const std::string& method, int L, int sigma, double threshold, const std::string& out) {
  auto s = analyze(mo.build());
  EntropyEstimate e;
  if (method == "exact") {
    e = entropy_exact(s, L);
  } else if (method == "theta") {
    e = entropy_theta(s);
  } else if (method == "critical") {
    e = critical_entropy_estimate(s, threshold);
  } else {
    if (s.critical()) throw Error(ErrorKind::CriticalSymbol, "cli", "series needs a non-critical symbol");
    Curve c(s);
    ThetaAsymptotics ta(c);
    if (sigma < 0) {
      e = xy_series_entropy(ta);
    } else {
      if (c.genus() != 1) throw Error(ErrorKind::GenusMismatch, "asymptotics", "the XY series needs a genus-1 curve");
      e = xy_series_entropy(c.data().Pi(0, 0), sigma);
    }
  }
  Output o(out);
  o.stream() << cio::to_json(e).dump(2) << '\n';
  return 0;
}

int run_check(const ModelOptions& mo, bool any_model) {
  std::vector<ChainModel> models;
  if (any_model) {
    models.push_back(mo.build());
  } else {
    models.push_back(make_xy_model(0.8, 0.5));
    models.push_back(make_custom_model({-2, 1, 0.25}, {1, 0.125}, 0.5));
  }
  bool ok = true;
  for (const auto& m : models) {
    auto cs = tools::run_invariants(m);
    for (const auto& r : cs.results()) {
      std::string note = r.note.empty() ? "" : "  (" + r.note + ")";
      fmt::print("{} {:<42} {:<9} {:.3e} vs {:.0e}{}\n", r.pass ? "PASS" : "FAIL", r.name, m.label, r.value, r.tol, note);
    }
    ok = ok && cs.all_passed();
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement entropy of quasi-free fermion chains"};
  app.require_subcommand(0, 1);
  ModelOptions top;
  bool check = false;
  app.add_flag("--check", check, "run the invariant suite (default models unless one is given)");
  top.attach(&app);

  ModelOptions mo;
  std::string out, Lspec = "8:256:8", methods = "exact,theta", path, format = "csv", method = "exact";
  std::vector<double> lams{2.0};
  int L = 256, samples = 8, sigma = -1;
  double delta = 1e-6, threshold = 0.1, lam = 2.0;

  auto* es = app.add_subcommand("entropy-scan", "S_L over a range of L");
  mo.attach(es);
  es->add_option("--L", Lspec, "start:stop:step");
  es->add_option("--method", methods, "comma list of exact, theta");
  es->add_option("-o,--output", out, "CSV path (default stdout)");

  auto* ds = app.add_subcommand("determinant-scan", "D_L(lambda) direct, spectral and asymptotic");
  mo.attach(ds);
  ds->add_option("--L", Lspec, "start:stop:step");
  ds->add_option("--lambda", lams, "comma list, |lambda| > 1")->delimiter(',');
  ds->add_option("-o,--output", out, "CSV path");

  auto* cs = app.add_subcommand("critical-scan", "exact entropy along a preset path towards criticality");
  mo.attach(cs);
  cs->add_option("--alpha-path", path, "start:stop:count")->required();
  cs->add_option("--L", L, "block length");
  cs->add_option("--threshold", threshold, "pairing threshold on |z - 1/conj(z)|");
  cs->add_option("-o,--output", out, "CSV path");

  auto* dc = app.add_subcommand("dump-curve", "curve data as JSON");
  mo.attach(dc);
  dc->add_option("-o,--output", out, "JSON path");

  auto* vr = app.add_subcommand("verify-rh", "Riemann-Hilbert residual report");
  mo.attach(vr);
  vr->add_option("--lambda", lam, "|lambda| > 1");
  vr->add_option("--samples", samples, "points per cut")->check(CLI::PositiveNumber);
  vr->add_option("--delta", delta, "straddle offset")->check(CLI::PositiveNumber);
  vr->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  vr->add_option("-o,--output", out, "output path");

  auto* en = app.add_subcommand("entropy", "one entropy value as JSON");
  mo.attach(en);
  en->add_option("--method", method, "exact | theta | series | critical")
      ->check(CLI::IsMember({"exact", "theta", "series", "critical"}));
  en->add_option("--L", L, "block length for the exact method")->check(CLI::NonNegativeNumber);
  en->add_option("--sigma", sigma, "series branch 0 | 1 (default: matched to theta)");
  en->add_option("--threshold", threshold, "pairing threshold for the critical estimate");
  en->add_option("-o,--output", out, "JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check) {
      bool given = !top.file.empty() || !top.preset.empty() || !top.a.empty();
      return run_check(top, given);
    }
    if (*es) return entropy_scan(mo, Lspec, methods, out);
    if (*ds) return determinant_scan(mo, Lspec, lams, out);
    if (*cs) return critical_scan(mo, path, L, threshold, out);
    if (*dc) return dump_curve(mo, out);
    if (*vr) return verify_rh(mo, lam, samples, delta, format, out);
    if (*en) return entropy_single(mo, method, L, sigma, threshold, out);
    std::cout << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
