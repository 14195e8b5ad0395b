#ifndef OPTSPLINE_VERIFY_HPP
#define OPTSPLINE_VERIFY_HPP

// Optimality checks for a designed kernel, including an independent dense
// least-squares solve of the same grid-discretized problem.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "design.hpp"

namespace optspline {

/// Inverse of a FirFilter by sampling 1 / F(e^{jw}) on an n_freq-point
/// frequency grid and transforming back; taps center-K .. center+K where
/// center is the one invert_fir would use. Independent of the root-splitting
/// route.
inline FirFilter frequency_grid_inverse(const FirFilter &f, long half_width, std::size_t n_freq = 8192) {
  const FirFilter src = f.trimmed();
  const long center = -detail::floor_div2(src.first() + src.last());
  FirFilter out{std::vector<double>(static_cast<std::size_t>(2 * half_width + 1), 0.0),
                center - half_width};
  std::vector<std::complex<double>> inv_response(n_freq);
  for (std::size_t q = 0; q < n_freq; ++q) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n_freq);
    std::complex<double> F = 0.0;
    for (long n = src.first(); n <= src.last(); ++n)
      F += src.at(n) * std::polar(1.0, -w * static_cast<double>(n));
    inv_response[q] = 1.0 / F;
  }
  for (long k = out.first(); k <= out.last(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t q = 0; q < n_freq; ++q) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n_freq);
      acc += inv_response[q] * std::polar(1.0, w * static_cast<double>(k));
    }
    out.taps[static_cast<std::size_t>(k - out.origin)] = acc.real() / static_cast<double>(n_freq);
  }
  return out;
}

/// Solves the grid-discretized constrained least-squares design directly.
/// Unknowns are the kernel samples rho(j / grid), j = 0..(m+1) grid; the
/// integer samples are pinned to (0, rho_d[1..m], 0). Every grid point t at
/// which the reconstruction sum_j b[j] rho(t - j) can be nonzero contributes
/// one residual row x(t) - r(t). The normal matrix is formed densely and
/// solved with an LDLT factorization.
inline TabulatedKernel dense_constrained_ls(const DesignSpec &spec) {
  spec.validate();
  const long m = spec.order;
  const long g = spec.grid;
  const long n_unknown = (m + 1) * g + 1;
  const long half = (spec.inverse_max_taps - 1) / 2;

  const FirFilter inv = frequency_grid_inverse(spec.rho_d, half);
  const FirFilter b = convolve(target_samples(spec), inv);

  // free-variable numbering; pinned samples sit at multiples of g
  std::vector<long> free_index(static_cast<std::size_t>(n_unknown), -1);
  long n_free = 0;
  for (long j = 0; j < n_unknown; ++j)
    if (j % g != 0)
      free_index[static_cast<std::size_t>(j)] = n_free++;
  auto pinned_value = [&](long j) { return spec.rho_d.at(j / g); };

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n_free, n_free);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);

  const long t_lo = std::min(b.first() * g, -static_cast<long>(spec.window) * g);
  const long t_hi = std::max((b.last() + m + 1) * g, static_cast<long>(spec.window) * g);
  std::vector<long> cols;
  std::vector<double> coef;
  for (long i = t_lo; i <= t_hi; ++i) {
    cols.clear();
    coef.clear();
    double row_rhs = spec.target(static_cast<double>(i) / g);
    for (long jj = b.first(); jj <= b.last(); ++jj) {
      const long col = i - jj * g;
      if (col < 0 || col >= n_unknown)
        continue;
      const double c = b.at(jj);
      const long fi = free_index[static_cast<std::size_t>(col)];
      if (fi < 0)
        row_rhs -= c * pinned_value(col);
      else {
        cols.push_back(fi);
        coef.push_back(c);
      }
    }
    for (std::size_t p = 0; p < cols.size(); ++p) {
      rhs(cols[p]) += coef[p] * row_rhs;
      for (std::size_t q = 0; q < cols.size(); ++q)
        normal(cols[p], cols[q]) += coef[p] * coef[q];
    }
  }

  const Eigen::VectorXd sol = normal.ldlt().solve(rhs);

  TabulatedKernel out{spec.order, spec.grid, 0, std::vector<double>(static_cast<std::size_t>(n_unknown)), false};
  for (long j = 0; j < n_unknown; ++j) {
    const long fi = free_index[static_cast<std::size_t>(j)];
    out.samples[static_cast<std::size_t>(j)] = fi < 0 ? pinned_value(j) : sol(fi);
  }
  return out;
}

struct OptimalityOptions {
  int directions = 100;
  double step = 1e-5;
  std::uint64_t seed = 12345;
  bool run_oracle = true;
  int oracle_grid = 256;
};

struct OptimalityReport {
  /// (a) max |(v * rho)(t) - w(t)| on non-integer grid points, and max |w|.
  double residual = 0.0;
  double w_scale = 0.0;
  /// (b) central-difference directional derivatives of the error functional,
  /// each divided by ||gamma|| ||x|| (continuous L2 norms).
  std::vector<double> normalized_derivatives;
  double max_normalized_derivative = 0.0;
  /// (c) relative L2 distance between the kernel and the dense oracle,
  /// compared on the oracle grid.
  bool oracle_ran = false;
  double oracle_distance = 0.0;
};

/// Random perturbation that keeps a kernel inside the feasible set: zero at
/// every integer and outside (0, m+1).
inline TabulatedKernel random_feasible_direction(const TabulatedKernel &like, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  TabulatedKernel gamma = like;
  for (std::size_t j = 0; j < gamma.samples.size(); ++j)
    gamma.samples[j] = (j % static_cast<std::size_t>(gamma.grid) == 0) ? 0.0 : normal(rng);
  return gamma;
}

inline OptimalityReport verify_optimality(const OptimizedKernel &k, const DesignSpec &spec,
                                          const OptimalityOptions &opts = {}) {
  OptimalityReport report;

  const DesignContext ctx(spec);
  const NormalSystem sys = build_normal_system(spec, ctx);
  const auto [res, scale] = normal_residual(k.kernel, sys);
  report.residual = res;
  report.w_scale = scale;

  const double target_norm = std::sqrt(error_breakdown(k.kernel, spec).target_energy);
  std::mt19937_64 rng(opts.seed);
  for (int d = 0; d < opts.directions; ++d) {
    const TabulatedKernel gamma = random_feasible_direction(k.kernel, rng);
    double gamma_sq = 0.0;
    for (double v : gamma.samples)
      gamma_sq += v * v;
    const double gamma_norm = std::sqrt(gamma_sq / gamma.grid);

    TabulatedKernel plus = k.kernel, minus = k.kernel;
    for (std::size_t j = 0; j < plus.samples.size(); ++j) {
      plus.samples[j] += opts.step * gamma.samples[j];
      minus.samples[j] -= opts.step * gamma.samples[j];
    }
    const double deriv =
        (error_functional(plus, spec) - error_functional(minus, spec)) / (2.0 * opts.step);
    const double normalized = deriv / (gamma_norm * target_norm);
    report.normalized_derivatives.push_back(normalized);
    report.max_normalized_derivative = std::max(report.max_normalized_derivative, std::abs(normalized));
  }

  if (opts.run_oracle) {
    const int og = (k.kernel.grid % opts.oracle_grid == 0) ? opts.oracle_grid : k.kernel.grid;
    DesignSpec oracle_spec = spec;
    oracle_spec.grid = og;
    const TabulatedKernel oracle = dense_constrained_ls(oracle_spec);
    const long stride = k.kernel.grid / og;
    double diff = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < oracle.samples.size(); ++j) {
      const double mine = k.kernel.samples[j * static_cast<std::size_t>(stride)];
      diff += (mine - oracle.samples[j]) * (mine - oracle.samples[j]);
      norm += oracle.samples[j] * oracle.samples[j];
    }
    report.oracle_ran = true;
    report.oracle_distance = std::sqrt(diff / norm);
  }
  return report;
}

} // namespace optspline

#endif
