#pragma once

#include <chainent/errors.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace chainent {

using cplx = std::complex<double>;

// Laurent polynomial sum_k coeffs[k] z^(low + k).
struct ComplexPolynomial {
  std::vector<cplx> coeffs;
  int low = 0;

  int degree() const { return low + static_cast<int>(coeffs.size()) - 1; }

  cplx operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return low == 0 ? acc : acc * std::pow(z, low);
  }

  cplx derivative(cplx z) const {
    cplx acc = 0.0;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
      acc = acc * z + coeffs[k] * double(low + k);
    }
    return acc * std::pow(z, low - 1);
  }

  double norm() const {
    double s = 0;
    for (auto c : coeffs) s += std::norm(c);
    return std::sqrt(s);
  }
};

struct ChainModel {
  int n = 0;
  std::vector<double> a;  // a(0..n)
  std::vector<double> b;  // b(1..n)
  double gamma = 0.0;
  std::string label;

  double a_at(int j) const { return a[std::abs(j)]; }
  double b_at(int j) const {
    if (j == 0) return 0.0;
    double v = b[std::abs(j) - 1];
    return j > 0 ? v : -v;
  }
  // Coefficient of z^j in q.
  double q_coeff(int j) const { return a_at(j) - gamma * b_at(j); }
};

inline constexpr double kLeadingTol = 1e-12;

inline ChainModel make_custom_model(std::vector<double> a, std::vector<double> b,
                                    double gamma, std::string label = "custom") {
  if (a.size() < 2) {
    throw Error(ErrorKind::DegenerateModel, "model",
                "interaction range n must be at least 1");
  }
  const int n = static_cast<int>(a.size()) - 1;
  if (static_cast<int>(b.size()) != n) {
    throw Error(ErrorKind::DegenerateModel, "model",
                "b must have exactly n = " + std::to_string(n) + " entries");
  }
  if (!std::isfinite(gamma)) {
    throw Error(ErrorKind::DegenerateModel, "model", "gamma is not finite");
  }
  ChainModel m{n, std::move(a), std::move(b), gamma, std::move(label)};
  const double lo = m.a[n] - gamma * m.b[n - 1];
  const double hi = m.a[n] + gamma * m.b[n - 1];
  if (std::abs(lo) < kLeadingTol || std::abs(hi) < kLeadingTol) {
    throw Error(ErrorKind::DegenerateModel, "model",
                "effective leading coefficients a(n)-gamma*b(n) and "
                "a(n)+gamma*b(n) must be nonzero");
  }
  return m;
}

// p(z) = alpha (1-gamma) z^2 - 2z + alpha (1+gamma), twice the normalized XY form.
inline ChainModel make_xy_model(double alpha, double gamma) {
  if (!(alpha > 0)) throw Error(ErrorKind::DegenerateModel, "model", "alpha must be positive");
  if (gamma >= 1.0 || gamma < 0.0) {
    throw Error(ErrorKind::DegenerateModel, "model", "gamma must lie in [0, 1)");
  }
  return make_custom_model({-2.0, alpha}, {alpha}, gamma, "xy");
}

inline ChainModel make_xx_model(double alpha) {
  auto m = make_xy_model(alpha, 0.0);
  m.label = "xx";
  return m;
}

// q(z) = sum_{j=-n}^{n} (a(j) - gamma b(j)) z^j
inline ComplexPolynomial build_q(const ChainModel& m) {
  ComplexPolynomial q;
  q.low = -m.n;
  for (int j = -m.n; j <= m.n; ++j) q.coeffs.emplace_back(m.q_coeff(j));
  return q;
}

// p(z) = z^n q(z), degree exactly 2n.
inline ComplexPolynomial build_p(const ChainModel& m) {
  if (m.n < 1) throw Error(ErrorKind::DegenerateModel, "model", "n must be >= 1");
  ComplexPolynomial p = build_q(m);
  p.low = 0;
  if (std::abs(p.coeffs.front()) < kLeadingTol || std::abs(p.coeffs.back()) < kLeadingTol) {
    throw Error(ErrorKind::DegenerateModel, "model", "p(z) must have degree 2n and p(0) != 0");
  }
  return p;
}

}  // namespace chainent
