#pragma once

#include <chainent/asymptotics.hpp>
#include <chainent/curve.hpp>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace chainent::io {

using json = nlohmann::json;

inline std::string format_number(double x) { return fmt::format("{:.17g}", x); }

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), cols_(header.size()) {
    write_strings(header);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(format_number(v));
    write_strings(s);
  }

  void write_strings(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw Error(ErrorKind::ConfigError, "io", "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t cols_;
};

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const VecC& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const MatC& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(VecC(m.row(i).transpose())));
  return a;
}

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (auto z : v) a.push_back(to_json(z));
  return a;
}

inline json to_json(const EntropyEstimate& e) {
  json d = json::object();
  for (const auto& [k, v] : e.diagnostics) d[k] = v;
  return {{"value", e.value}, {"method", e.method}, {"diagnostics", d}};
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::ConfigError, "io", std::string("model JSON lacks \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::ConfigError, "io", std::string("bad value for \"") + key + "\": " + ex.what());
  }
}

// {"n", "a", "b", "gamma"} or {"preset": "xx" | "xy", "alpha", "gamma"}.
inline ChainModel model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "io", "model JSON must be an object");
  if (j.contains("preset")) {
    auto preset = require<std::string>(j, "preset");
    double alpha = require<double>(j, "alpha");
    if (preset == "xx") return make_xx_model(alpha);
    if (preset == "xy") return make_xy_model(alpha, require<double>(j, "gamma"));
    throw Error(ErrorKind::ConfigError, "io", "unknown preset \"" + preset + "\"");
  }
  auto a = require<std::vector<double>>(j, "a");
  auto b = require<std::vector<double>>(j, "b");
  auto model = make_custom_model(a, b, require<double>(j, "gamma"));
  if (j.contains("n") && require<int>(j, "n") != model.n) {
    throw Error(ErrorKind::ConfigError, "io", "\"n\" disagrees with the length of \"b\"");
  }
  return model;
}

inline ChainModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "io", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::ConfigError, "io", path + ": " + ex.what());
  }
  return model_from_json(j);
}

inline json symbol_json(const SymbolData& s) {
  json fam = json::array();
  for (auto f : s.family) fam.push_back(f == Family::Root ? "root" : "reciprocal");
  return {{"roots", to_json(s.roots)},
          {"lambda", to_json(s.lambda)},
          {"family", fam},
          {"swapped", s.swapped},
          {"crit_distance", s.crit_distance},
          {"critical", s.critical()}};
}

inline json curve_json(const Curve& c) {
  const auto& d = c.data();
  json e = json::array();
  for (Eigen::Index i = 0; i < d.e.size(); ++i) e.push_back(static_cast<int>(d.e(i)));
  json outside = json::array();
  for (bool b : d.cut_outside) outside.push_back(b);
  return {{"genus", d.genus},
          {"lambda", to_json(d.lambda)},
          {"cut_outside", outside},
          {"e", e},
          {"Pi", to_json(d.Pi)},
          {"tau_half", to_json(d.tau_half)},
          {"kappa", to_json(d.kappa)},
          {"omega_inf", to_json(d.omega_inf)},
          {"K", to_json(d.K)},
          {"delta_zero", to_json(d.delta_zero)},
          {"quad_nodes", d.quad_nodes},
          {"quad_error", d.quad_error}};
}

}  // namespace chainent::io
