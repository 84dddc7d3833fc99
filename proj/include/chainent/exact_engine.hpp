#pragma once

#include <chainent/quadrature.hpp>
#include <chainent/symbol.hpp>

#include <Eigen/Dense>
#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>

namespace chainent {

struct EntropyEstimate {
  double value = 0.0;
  std::string method;
  std::map<std::string, double> diagnostics;
};

struct SpectrumResult {
  int L = 0;
  std::vector<double> nu;  // descending, clamped to [0, 1]
};

struct CorrelationMatrix {
  int L = 0;
  Eigen::MatrixXd entries;
};

// g_l for l = -max_index..max_index, stored at offset max_index.
struct FourierCoefficients {
  int max_index = 0;
  std::vector<double> values;
  double tail = 0.0;       // max |g_{+-max_index}|
  double imag_residue = 0.0;
  int grid = 0;

  double operator[](int l) const { return values[l + max_index]; }
};

namespace detail {

inline std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

// Full DFT of g on an N-point grid: out[j] = (1/N) sum_k g(theta_k) e^{-i j theta_k}.
inline std::vector<cplx> dft_of_g(const SymbolData& s, int N) {
  std::vector<cplx> in(N), out(N);
  for (int k = 0; k < N; ++k) in[k] = eval_g_circle(s, 2.0 * std::numbers::pi * k / N);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(N, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  for (auto& v : out) v /= double(N);
  return out;
}

inline FourierCoefficients pack(const std::vector<cplx>& dft, int max_index) {
  const int N = static_cast<int>(dft.size());
  FourierCoefficients f;
  f.max_index = max_index;
  f.grid = N;
  f.values.resize(2 * max_index + 1);
  for (int l = -max_index; l <= max_index; ++l) {
    cplx v = dft[((l % N) + N) % N];
    f.values[l + max_index] = v.real();
    f.imag_residue = std::max(f.imag_residue, std::abs(v.imag()));
  }
  f.tail = std::max(std::abs(f[max_index]), std::abs(f[-max_index]));
  return f;
}

// Angles in [0, 2pi) where q has a zero on the unit circle.
inline std::vector<double> circle_zero_angles(const SymbolData& s) {
  std::vector<double> t;
  for (auto z : s.roots) {
    if (std::abs(1.0 - std::abs(z)) < 1e-6) {
      double a = std::arg(z);
      if (a < 0) a += 2.0 * std::numbers::pi;
      t.push_back(a);
    }
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(), [](double x, double y) { return std::abs(x - y) < 1e-10; }),
          t.end());
  return t;
}

}  // namespace detail

// Single-shot FFT; throws TailTooLarge if the requested range has not decayed.
inline FourierCoefficients fourier_coefficients(const SymbolData& s, int max_index, int grid,
                                                double tail_tol = 1e-12) {
  if (grid < 8 * max_index || (grid & (grid - 1)) != 0) {
    throw Error(ErrorKind::DomainError, "exact_engine", "grid must be a power of two >= 8*max_index");
  }
  auto f = detail::pack(detail::dft_of_g(s, grid), max_index);
  if (f.imag_residue > 1e-12) {
    throw Error(ErrorKind::DomainError, "exact_engine", "Fourier coefficients are not real");
  }
  if (f.tail > tail_tol) {
    throw Error(ErrorKind::TailTooLarge, "exact_engine",
                "|g_max_index| = " + std::to_string(f.tail) + " exceeds tail tolerance");
  }
  return f;
}

// Fourier coefficients of a symbol with zeros on the circle: Gauss-Legendre on each
// arc between consecutive zeros, where g is smooth.
inline FourierCoefficients fourier_coefficients_piecewise(const SymbolData& s, int max_index) {
  auto cuts = detail::circle_zero_angles(s);
  const double twopi = 2.0 * std::numbers::pi;
  std::vector<std::pair<double, double>> arcs;
  if (cuts.empty()) {
    arcs.emplace_back(0.0, twopi);
  } else {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      double a = cuts[i], b = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + twopi;
      arcs.emplace_back(a, b);
    }
  }
  const int order = 24;
  const auto& r = quad::gauss_legendre(order);
  std::vector<cplx> acc(2 * max_index + 1, 0.0);
  for (auto [a, b] : arcs) {
    int panels = std::max(8, static_cast<int>(std::ceil((b - a) * (max_index + 16) / 4.0)));
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      double c = a + (p + 0.5) * h;
      for (int i = 0; i < order; ++i) {
        double th = c + 0.5 * h * r.x[i];
        cplx gv = eval_g_circle(s, th) * (0.5 * h * r.w[i] / twopi);
        cplx step = std::polar(1.0, -th), e = std::polar(1.0, max_index * th);
        for (int l = -max_index; l <= max_index; ++l) {
          acc[l + max_index] += gv * e;
          e *= step;
        }
      }
    }
  }
  FourierCoefficients f;
  f.max_index = max_index;
  f.values.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    f.values[i] = acc[i].real();
    f.imag_residue = std::max(f.imag_residue, std::abs(acc[i].imag()));
  }
  f.tail = std::max(std::abs(f[max_index]), std::abs(f[-max_index]));
  return f;
}

// Coefficients accurate to ~1e-14 for |l| <= max_index, whatever the symbol.
inline FourierCoefficients fourier_coefficients_auto(const SymbolData& s, int max_index) {
  if (!detail::circle_zero_angles(s).empty()) return fourier_coefficients_piecewise(s, max_index);
  int N = 64;
  while (N < 8 * max_index) N *= 2;
  for (;; N *= 2) {
    auto dft = detail::dft_of_g(s, N);
    double alias = std::abs(dft[N / 2]);
    if (alias < 1e-15 || N >= (1 << 24)) {
      auto f = detail::pack(dft, max_index);
      f.tail = std::max(f.tail, alias);
      return f;
    }
  }
}

// Block (j,k) = [[0, g_{j-k}], [-g_{k-j}, 0]].
inline CorrelationMatrix build_correlation_matrix(const FourierCoefficients& g, int L) {
  if (L - 1 > g.max_index) {
    throw Error(ErrorKind::DomainError, "exact_engine", "not enough Fourier coefficients for L");
  }
  CorrelationMatrix c{L, Eigen::MatrixXd::Zero(2 * L, 2 * L)};
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < L; ++k) {
      c.entries(2 * j, 2 * k + 1) = g[j - k];
      c.entries(2 * j + 1, 2 * k) = -g[k - j];
    }
  }
  return c;
}

inline SpectrumResult spectrum(const CorrelationMatrix& c) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(c.entries);
  auto sv = svd.singularValues();
  SpectrumResult r{c.L, {}};
  for (int j = 0; j < c.L; ++j) {
    double u = sv(2 * j), v = sv(2 * j + 1);
    if (std::abs(u - v) > 1e-8) {
      throw Error(ErrorKind::PairingFailure, "exact_engine", "singular values do not pair");
    }
    r.nu.push_back(std::clamp(0.5 * (u + v), 0.0, 1.0));
  }
  return r;
}

// Same spectrum from the L x L Toeplitz block A_{jk} = g_{j-k}.
inline SpectrumResult spectrum_toeplitz(const FourierCoefficients& g, int L) {
  if (L == 0) return {0, {}};
  Eigen::MatrixXd A(L, L);
  for (int j = 0; j < L; ++j)
    for (int k = 0; k < L; ++k) A(j, k) = g[j - k];
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  SpectrumResult r{L, {}};
  for (int j = 0; j < L; ++j) r.nu.push_back(std::clamp(svd.singularValues()(j), 0.0, 1.0));
  return r;
}

inline double binary_entropy(double x, double nu) {
  if (std::abs(nu) > x * (1 + 1e-12)) {
    throw Error(ErrorKind::DomainError, "exact_engine", "binary_entropy needs |nu| <= x");
  }
  auto term = [](double t) { return t <= 0 ? 0.0 : -t * std::log(t); };
  return term(0.5 * (x + nu)) + term(0.5 * (x - nu));
}

inline double entropy_from_spectrum(const SpectrumResult& s) {
  double S = 0;
  for (double nu : s.nu) S += binary_entropy(1.0, nu);
  return S;
}

inline EntropyEstimate entropy_exact(const SymbolData& s, int L) {
  EntropyEstimate e;
  e.method = "exact";
  if (L == 0) return e;
  auto g = fourier_coefficients_auto(s, L);
  auto sp = spectrum_toeplitz(g, L);
  e.value = entropy_from_spectrum(sp);
  e.diagnostics["fourier_tail"] = g.tail;
  e.diagnostics["L"] = L;
  return e;
}

// Entropies for several L from one set of coefficients.
inline std::vector<double> entropy_exact_sweep(const SymbolData& s, const std::vector<int>& Ls) {
  int Lmax = 0;
  for (int L : Ls) Lmax = std::max(Lmax, L);
  auto g = fourier_coefficients_auto(s, std::max(Lmax, 1));
  std::vector<double> out;
  for (int L : Ls) out.push_back(L == 0 ? 0.0 : entropy_from_spectrum(spectrum_toeplitz(g, L)));
  return out;
}

// D_L(lambda) = (-1)^L prod (lambda^2 - nu_j^2)
inline cplx toeplitz_determinant_spectral(const SpectrumResult& s, cplx lam) {
  cplx d = (s.L % 2) ? -1.0 : 1.0;
  for (double nu : s.nu) d *= lam * lam - nu * nu;
  return d;
}

// det(i lambda I + C_L) by partial-pivot LU.
inline cplx toeplitz_determinant_direct(const FourierCoefficients& g, cplx lam, int L) {
  auto c = build_correlation_matrix(g, L);
  Eigen::MatrixXcd M = c.entries.cast<cplx>();
  M.diagonal().array() += cplx(0, 1) * lam;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
}

inline cplx toeplitz_determinant_direct(const SymbolData& s, cplx lam, int L) {
  return toeplitz_determinant_direct(fourier_coefficients_auto(s, std::max(L, 1)), lam, L);
}

// (T_M)_{jk} = (1/M) sum_l q(e^{i k_l})/|q(e^{i k_l})| e^{-i k_l (j-k)},  k_l = 2 pi l / M.
inline Eigen::MatrixXd finite_chain_correlation(const ChainModel& m, int M) {
  if (M <= 2 * m.n) throw Error(ErrorKind::DomainError, "exact_engine", "M must exceed 2n");
  auto q = build_q(m);
  std::vector<cplx> phase(M);
  for (int l = 0; l < M; ++l) {
    cplx v = q(std::polar(1.0, 2.0 * std::numbers::pi * l / M));
    if (std::abs(v) < 1e-12) throw Error(ErrorKind::ZeroMode, "exact_engine", "finite-M zero mode");
    phase[l] = v / std::abs(v);
  }
  std::vector<double> row(M);
  for (int d = 0; d < M; ++d) {
    cplx acc = 0;
    for (int l = 0; l < M; ++l) acc += phase[l] * std::polar(1.0, -2.0 * std::numbers::pi * l * d / M);
    row[d] = acc.real() / M;
  }
  Eigen::MatrixXd T(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) T(j, k) = row[((j - k) % M + M) % M];
  return T;
}

}  // namespace chainent
