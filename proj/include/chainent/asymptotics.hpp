#pragma once

#include <chainent/curve.hpp>
#include <chainent/exact_engine.hpp>
#include <chainent/theta.hpp>

namespace chainent {

// beta(lambda) = log((lambda+1)/(lambda-1)) / (2 pi i), principal branch.
inline cplx beta(cplx lam) {
  if (std::abs(lam.imag()) < 1e-300 && std::abs(lam.real()) <= 1.0) {
    throw Error(ErrorKind::DomainError, "asymptotics", "beta is undefined on [-1, 1]");
  }
  return std::log((lam + 1.0) / (lam - 1.0)) / cplx(0, 2 * std::numbers::pi);
}

// lambda = coth(u/2) maps u in (0, inf) onto (1, inf); then beta = -i u / (2 pi)
// and d lambda = -csch^2(u/2) du / 2.
inline double lambda_of_u(double u) { return 1.0 / std::tanh(0.5 * u); }
inline double dlambda_du(double u) {
  double s = std::sinh(0.5 * u);
  return -0.5 / (s * s);
}

inline double beta_squared_integral(int panels = 80) {
  const double two_pi = 2 * std::numbers::pi;
  return quad::integrate(
      [&](double u) {
        double b = u / two_pi;
        return b * b * dlambda_du(u);
      },
      0.0, 80.0, panels);
}

// Everything the theta-side formulas need, computed once per curve.
class ThetaAsymptotics {
 public:
  explicit ThetaAsymptotics(const Curve& c)
      : curve_(&c), ctx_(make_theta_context(c.data().Pi)) {
    e_ = c.data().e.cast<cplx>();
    tau_ = c.data().tau_half;
    log_theta_tau_ = log_theta(tau_, ctx_);
    if (std::exp(log_theta_tau_.real()) < 1e-12) {
      throw Error(ErrorKind::ZeroOnPath, "asymptotics", "theta(tau/2) vanishes");
    }
  }

  const ThetaContext& context() const { return ctx_; }
  const Curve& curve() const { return *curve_; }

  // log[theta(b e + tau/2) theta(b e - tau/2) / theta(tau/2)^2]
  cplx log_ratio(cplx b) const {
    return log_theta(b * e_ + tau_, ctx_) + log_theta(b * e_ - tau_, ctx_) - 2.0 * log_theta_tau_;
  }

  cplx theta_ratio(cplx lam) const { return std::exp(log_ratio(beta(lam))); }

  // Entropy integrand in the u variable (lambda = coth(u/2)).
  cplx integrand_u(double u) const { return log_ratio(cplx(0, -u / (2 * std::numbers::pi))); }

  // -2 pi <e, (Im Pi)^{-1} e>
  double endpoint_model() const {
    Eigen::VectorXd e = curve_->data().e;
    return -2 * std::numbers::pi * e.dot(ctx_.Yinv * e);
  }

 private:
  const Curve* curve_;
  ThetaContext ctx_;
  VecC e_;
  VecC tau_;
  cplx log_theta_tau_;
};

inline EntropyEstimate entropy_theta(const ThetaAsymptotics& ta, double tol = 1e-9) {
  const double umax = 60.0;
  double max_imag = 0.0;
  auto run = [&](int panels) {
    const auto& r = quad::gauss_legendre(20);
    const double h = umax / panels;
    double s = 0;
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < 20; ++i) {
        double u = (p + 0.5) * h + 0.5 * h * r.x[i];
        cplx F = ta.integrand_u(u);
        max_imag = std::max(max_imag, std::abs(std::remainder(F.imag(), 2 * std::numbers::pi)));
        s -= r.w[i] * F.real() * dlambda_du(u);
      }
    }
    return 0.25 * h * s;  // 1/2 from the formula, 1/2 from the Gauss-Legendre map
  };
  int panels = 24;
  double prev = run(panels), cur = prev, err = 1.0;
  for (panels *= 2; panels <= 768; panels *= 2) {
    cur = run(panels);
    err = std::abs(cur - prev);
    if (err < tol) break;
    prev = cur;
  }
  if (err >= tol) throw Error(ErrorKind::QuadratureFailure, "asymptotics", "entropy quadrature did not converge");
  if (max_imag > 1e-8) {
    throw Error(ErrorKind::ZeroOnPath, "asymptotics", "entropy integrand is not real");
  }
  EntropyEstimate est;
  est.method = "theta_integral";
  est.value = cur;
  est.diagnostics["quadrature_error"] = err;
  est.diagnostics["integrand_imag_max"] = max_imag;
  est.diagnostics["endpoint_model"] = ta.endpoint_model();
  est.diagnostics["panels"] = panels;
  return est;
}

// g constant on the circle: every root is paired with its reciprocal.
inline bool symbol_is_constant(const SymbolData& s) {
  for (std::size_t j = 0; j < s.roots.size(); ++j) {
    bool paired = false;
    for (std::size_t k = 0; k < s.roots.size(); ++k)
      if (k != j && std::abs(s.roots[j] * s.roots[k] - 1.0) < 1e-9) paired = true;
    if (!paired) return false;
  }
  return true;
}

inline EntropyEstimate entropy_theta(const SymbolData& s) {
  if (s.critical()) throw Error(ErrorKind::CriticalSymbol, "asymptotics", "symbol is critical");
  if (symbol_is_constant(s)) {
    EntropyEstimate est;
    est.method = "theta_integral";
    est.diagnostics["constant_symbol"] = 1.0;
    return est;
  }
  Curve c(s);
  return entropy_theta(ThetaAsymptotics(c));
}

struct EndpointFit {
  double fitted = 0.0;   // constant term of a + b/u + c/u^2
  double last = 0.0;     // F / beta^2 at the largest u
  double model = 0.0;    // -2 pi <e, Y^{-1} e>
  double rel_error = 0.0;
};

// F(lambda)/beta^2 as lambda -> 1+, i.e. u -> infinity.
inline EndpointFit endpoint_fit(const ThetaAsymptotics& ta, double u0 = 100.0, double u1 = 1000.0, int samples = 24) {
  Eigen::MatrixXd X(samples, 3);
  Eigen::VectorXd y(samples);
  EndpointFit fit;
  for (int i = 0; i < samples; ++i) {
    double u = u0 * std::pow(u1 / u0, double(i) / (samples - 1));
    double b2 = -std::pow(u / (2 * std::numbers::pi), 2);
    double r = ta.integrand_u(u).real() / b2;
    X(i, 0) = 1;
    X(i, 1) = 1 / u;
    X(i, 2) = 1 / (u * u);
    y(i) = r;
    fit.last = r;
  }
  Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
  fit.fitted = coef(0);
  fit.model = ta.endpoint_model();
  fit.rel_error = std::abs(fit.fitted - fit.model) / std::abs(fit.model);
  return fit;
}

struct DeterminantAsymptotic {
  cplx value;        // (1 - lambda^2)^L * ratio
  cplx theta_ratio;  // Widom's E[Phi]
};

inline DeterminantAsymptotic determinant_asymptotic(const ThetaAsymptotics& ta, cplx lam, int L) {
  cplx r = ta.theta_ratio(lam);
  return {std::pow(1.0 - lam * lam, L) * r, r};
}

// G[Phi] = exp(mean of log det Phi over the circle).
inline cplx widom_G(const SymbolData& s, cplx lam, int samples = 64) {
  cplx acc = 0;
  double phase = 0;
  for (int k = 0; k < samples; ++k) {
    cplx d = eval_symbol(s, 2 * std::numbers::pi * k / samples, lam).determinant();
    phase = k ? phase + std::remainder(std::arg(d) - phase, 2 * std::numbers::pi) : std::arg(d);
    acc += cplx(std::log(std::abs(d)), phase);
  }
  return std::exp(acc / double(samples));
}

// -(1/6) sum over roots close to the circle of log|z - 1/conj(z)|.
inline EntropyEstimate critical_entropy_estimate(const SymbolData& s, double threshold = 0.1) {
  EntropyEstimate est;
  est.method = "critical_scaling";
  int pairs = 0;
  for (auto z : s.roots) {
    double d = std::abs(z - 1.0 / std::conj(z));
    if (d < threshold) {
      if (d == 0.0) throw Error(ErrorKind::CriticalSymbol, "asymptotics", "root exactly on the unit circle");
      est.value -= std::log(d) / 6.0;
      ++pairs;
    }
  }
  if (pairs == 0) throw Error(ErrorKind::NoDegeneratePairs, "asymptotics", "no root within the pairing threshold");
  est.diagnostics["pairs"] = pairs;
  return est;
}

// S = sum_{m in Z} (1 + mu_m) log(2 / (1 + mu_m)),  mu_m = -i tan((m + (1 - sigma)/2) pi tau).
// For sigma = 0 this is 2 sum_{m >= 0} e(1, mu_m).
inline EntropyEstimate xy_series_entropy(cplx tau, int sigma, int terms = 0) {
  if (sigma != 0 && sigma != 1) throw Error(ErrorKind::DomainError, "asymptotics", "sigma must be 0 or 1");
  auto term = [&](int m) {
    cplx mu = cplx(0, -1) * std::tan((m + 0.5 * (1 - sigma)) * std::numbers::pi * tau);
    cplx a = 1.0 + mu;
    if (std::abs(a) < 1e-300) return cplx(0.0);
    return a * std::log(2.0 / a);
  };
  cplx S = term(0);
  double last = std::abs(S);
  int m = 1;
  const int cap = terms > 0 ? terms : 100000;
  for (; m <= cap; ++m) {
    cplx t = term(m) + term(-m);
    S += t;
    last = std::abs(t);
    if (terms == 0 && last < 1e-16) break;
  }
  EntropyEstimate est;
  est.method = "xy_series";
  est.value = S.real();
  est.diagnostics["terms"] = m;
  est.diagnostics["tail"] = last;
  est.diagnostics["imag"] = S.imag();
  est.diagnostics["sigma"] = sigma;
  return est;
}

// The sigma branch is picked by agreement with the theta integral.
inline EntropyEstimate xy_series_entropy(const ThetaAsymptotics& ta) {
  if (ta.curve().genus() != 1) {
    throw Error(ErrorKind::GenusMismatch, "asymptotics", "the XY series needs a genus-1 curve");
  }
  cplx tau = ta.curve().data().Pi(0, 0);
  double ref = entropy_theta(ta).value;
  auto s0 = xy_series_entropy(tau, 0), s1 = xy_series_entropy(tau, 1);
  auto& best = std::abs(s0.value - ref) <= std::abs(s1.value - ref) ? s0 : s1;
  best.diagnostics["theta_reference"] = ref;
  best.diagnostics["mismatch"] = std::abs(best.value - ref);
  return best;
}

}  // namespace chainent
