#ifndef OPTSPLINE_DESIGN_HPP
#define OPTSPLINE_DESIGN_HPP

// Least-squares design of a compact-support basis kernel rho on (0, m+1) with
// prescribed integer samples rho_d, such that the interpolator built from it
// (prefilter by the inverse of rho_d, then convolve with rho) reproduces a
// target signal x from its integer samples as closely as possible in L2.
//
// For every fractional offset tau in [0, 1) the unknowns R_n(tau) = rho(tau+n),
// n = 0..m, enter the reconstruction of x(tau + j) only, so the problem
// separates into one small normal system per grid column:
//
//   sum_n v[i - n] R_n(tau) = W_i(tau),   i = 0..m
//
// with b = x_d * inv(rho_d), v the autocorrelation of b, and
// W_i(tau) = w(tau + i), w(t) = sum_l b[l] x(t + l). The matrix is the same
// symmetric Toeplitz matrix for every column, so it is factored once.
//
// When x has the interpolation property (x_d = delta, e.g. the ideal lowpass
// sinc), b is just the inverse filter and the reconstruction error equals the
// L2 distance between x and the cardinal kernel of rho.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <string>
#include <vector>

#include "errors.hpp"
#include "filters.hpp"
#include "kernel.hpp"

namespace optspline {

/// Target signal for the design. The ideal lowpass impulse response
/// sin(2 pi fc t) / (pi t) has the interpolation property for fc = 1/2.
struct TargetFilter {
  enum class Kind { ideal_lowpass_sinc, tabulated };

  Kind kind = Kind::ideal_lowpass_sinc;
  double cutoff = 0.5;
  TabulatedKernel table;
  /// Where a tabulated target was read from, for config echoes.
  std::string source;

  static TargetFilter ideal_lowpass(double cutoff = 0.5) {
    TargetFilter t;
    t.kind = Kind::ideal_lowpass_sinc;
    t.cutoff = cutoff;
    return t;
  }

  static TargetFilter tabulated(TabulatedKernel table) {
    TargetFilter t;
    t.kind = Kind::tabulated;
    t.table = std::move(table);
    return t;
  }

  double operator()(double t) const {
    if (kind == Kind::tabulated)
      return table(t);
    const double bw = 2.0 * cutoff;
    if (t == 0.0)
      return bw;
    const double arg = bw * t;
    // exact zeros where bw * t is a nonzero integer
    if (arg == std::round(arg))
      return 0.0;
    return std::sin(std::numbers::pi * arg) / (std::numbers::pi * t);
  }

  const char *kind_name() const {
    return kind == Kind::tabulated ? "tabulated" : "ideal_lowpass_sinc";
  }
};

inline constexpr int kDefaultTargetWindow = 64;
/// Tap cap for inverses inside the design and the resampler. Truncation is
/// normally decided by kDefaultInverseEps; slowly decaying inverses such as
/// that of (0.233, 0.480, 0.233) need ~245 taps to get there.
inline constexpr int kDesignInverseMaxTaps = 1025;

/// Inputs of one kernel design: the order m, the prescribed integer samples
/// rho_d (taps at n = 1..m), the target, and the grid resolution. `window`
/// bounds the target's integer samples (|n| <= window) and the interval
/// [-window, window] over which reconstruction errors are integrated.
struct DesignSpec {
  int order = 3;
  FirFilter rho_d;
  TargetFilter target;
  int grid = kDefaultGrid;
  int window = kDefaultTargetWindow;
  double inverse_eps = kDefaultInverseEps;
  int inverse_max_taps = kDesignInverseMaxTaps;

  void validate() const {
    if (order < 1)
      throw std::invalid_argument("design: order must be >= 1");
    if (grid < 2 || grid % 2 != 0)
      throw std::invalid_argument("design: grid must be an even integer >= 2");
    if (window < 1)
      throw std::invalid_argument("design: window must be >= 1");
    const FirFilter t = rho_d.trimmed();
    if (t.taps.empty())
      throw NotAppropriate("design: rho_d is identically zero");
    if (t.first() < 1 || t.last() > order)
      throw std::invalid_argument("design: rho_d taps must lie at n = 1.." + std::to_string(order));
  }
};

/// Integer samples m taps at n = 1..m.
inline FirFilter rho_taps(std::vector<double> taps) { return FirFilter{std::move(taps), 1}; }

/// The default cubic design: rho_d = (0.233, 0.480, 0.233), ideal lowpass target.
inline DesignSpec paper_cubic_spec(int grid = kDefaultGrid) {
  DesignSpec s;
  s.order = 3;
  s.rho_d = rho_taps({0.233, 0.480, 0.233});
  s.target = TargetFilter::ideal_lowpass(0.5);
  s.grid = grid;
  return s;
}

/// Integer samples x[n] of the target for |n| <= window.
inline FirFilter target_samples(const DesignSpec &spec) {
  FirFilter x{std::vector<double>(static_cast<std::size_t>(2 * spec.window + 1)), -spec.window};
  for (long n = -spec.window; n <= spec.window; ++n)
    x.taps[static_cast<std::size_t>(n + spec.window)] = spec.target(static_cast<double>(n));
  return x.trimmed();
}

/// Discrete reconstruction filter b = x_d * inv, so that the reconstruction
/// of the target from its samples is r(t) = sum_j b[j] rho(t - j).
inline FirFilter reconstruction_filter(const FirFilter &target_d, const InverseTaps &inv) {
  return convolve(target_d, inv.filter);
}

/// Normal-equation data: v, the segment functions W_0..W_m on the grid
/// tau = g / grid, g = 0..grid-1, and the Toeplitz matrix T[i][j] = v[i - j].
struct NormalSystem {
  int order = 0;
  int grid = 0;
  FirFilter v;
  std::vector<std::vector<double>> W;
  std::vector<double> T; // row-major (order+1)^2

  std::size_t dim() const { return static_cast<std::size_t>(order + 1); }
  double t(std::size_t i, std::size_t j) const { return T[i * dim() + j]; }
};

/// Everything derived from rho_d and the target that the stages share.
struct DesignContext {
  InverseTaps inverse;
  FirFilter target_d;
  FirFilter b;

  explicit DesignContext(const DesignSpec &spec)
      : inverse(invert_fir(spec.rho_d, spec.inverse_eps, spec.inverse_max_taps)),
        target_d(target_samples(spec)), b(reconstruction_filter(target_d, inverse)) {}
};

/// v = autocorrelation of b. With an interpolating target this is the
/// autocorrelation of the inverse of rho_d.
inline FirFilter build_v(const DesignSpec &spec, const DesignContext &ctx) {
  (void)spec;
  return autocorrelate(ctx.b);
}

inline FirFilter build_v(const DesignSpec &spec) {
  spec.validate();
  return build_v(spec, DesignContext(spec));
}

/// w(t) = sum_l b[l] x(t + l) over the support of b, sliced into the unit
/// segments W_n(tau) = w(tau + n) for n = 0..m.
inline std::vector<std::vector<double>> build_w(const DesignSpec &spec, const DesignContext &ctx) {
  const std::size_t dim = static_cast<std::size_t>(spec.order + 1);
  const std::size_t g = static_cast<std::size_t>(spec.grid);
  std::vector<std::vector<double>> W(dim, std::vector<double>(g, 0.0));
  const FirFilter &b = ctx.b;
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t k = 0; k < g; ++k) {
      const double t = static_cast<double>(n) + static_cast<double>(k) / spec.grid;
      double acc = 0.0;
      for (long l = b.first(); l <= b.last(); ++l) {
        const double tap = b.taps[static_cast<std::size_t>(l - b.origin)];
        if (tap != 0.0)
          acc += tap * spec.target(t + static_cast<double>(l));
      }
      W[n][k] = acc;
    }
  }
  return W;
}

inline std::vector<std::vector<double>> build_w(const DesignSpec &spec) {
  spec.validate();
  return build_w(spec, DesignContext(spec));
}

inline NormalSystem build_normal_system(const DesignSpec &spec, const DesignContext &ctx) {
  NormalSystem sys;
  sys.order = spec.order;
  sys.grid = spec.grid;
  sys.v = build_v(spec, ctx);
  sys.W = build_w(spec, ctx);
  const std::size_t dim = sys.dim();
  sys.T.assign(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      sys.T[i * dim + j] = sys.v.at(static_cast<long>(i) - static_cast<long>(j));
  return sys;
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class Cholesky {
public:
  Cholesky(const std::vector<double> &a, std::size_t n) : n_(n), l_(n * n, 0.0) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = a[j * n + j];
      for (std::size_t k = 0; k < j; ++k)
        d -= l_[j * n + k] * l_[j * n + k];
      if (!(d > 0.0) || !std::isfinite(d))
        throw SingularSystem("Cholesky: matrix is not positive definite (pivot " +
                             std::to_string(j) + ")");
      const double ljj = std::sqrt(d);
      l_[j * n + j] = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = a[i * n + j];
        for (std::size_t k = 0; k < j; ++k)
          s -= l_[i * n + k] * l_[j * n + k];
        l_[i * n + j] = s / ljj;
      }
    }
  }

  /// Solves A x = b in place.
  void solve(std::vector<double> &x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = x[i];
      for (std::size_t k = 0; k < i; ++k)
        s -= l_[i * n_ + k] * x[k];
      x[i] = s / l_[i * n_ + i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      for (std::size_t k = i + 1; k < n_; ++k)
        s -= l_[k * n_ + i] * x[k];
      x[i] = s / l_[i * n_ + i];
    }
  }

private:
  std::size_t n_;
  std::vector<double> l_;
};

/// R = T^{-1} W column by column with a single factorization.
inline std::vector<std::vector<double>> solve_segments(const NormalSystem &sys) {
  const std::size_t dim = sys.dim();
  const Cholesky chol(sys.T, dim);
  std::vector<std::vector<double>> R(dim, std::vector<double>(sys.W.empty() ? 0 : sys.W[0].size()));
  std::vector<double> col(dim);
  for (std::size_t k = 0; k < R[0].size(); ++k) {
    for (std::size_t i = 0; i < dim; ++i)
      col[i] = sys.W[i][k];
    chol.solve(col);
    for (std::size_t i = 0; i < dim; ++i)
      R[i][k] = col[i];
  }
  return R;
}

/// Designed kernel plus diagnostics.
struct OptimizedKernel {
  TabulatedKernel kernel;
  DesignSpec spec;
  /// Largest |rho(n) - rho_d[n]| over n = 0..m before snapping.
  double snap_delta = 0.0;
  /// max |(v * rho)(t) - w(t)| over non-integer grid points in (0, m+1).
  double residual = 0.0;
  /// max |w| over the same points.
  double w_scale = 0.0;
  /// Reconstruction error of the target (squared L2 over [-window, window]).
  double error = 0.0;
  double trunc_error = 0.0;
};

inline constexpr double kSnapLimit = 1e-3;

/// Concatenates the segments, zeroes the endpoints and pins the integer samples
/// to rho_d.
inline OptimizedKernel assemble_kernel(const std::vector<std::vector<double>> &R,
                                       const DesignSpec &spec) {
  const std::size_t dim = static_cast<std::size_t>(spec.order + 1);
  if (R.size() != dim)
    throw std::invalid_argument("assemble_kernel: expected " + std::to_string(dim) + " segments");
  const std::size_t g = R[0].size();
  for (const auto &seg : R)
    if (seg.size() != g)
      throw std::invalid_argument("assemble_kernel: segments differ in length");
  if (g != static_cast<std::size_t>(spec.grid))
    throw std::invalid_argument("assemble_kernel: segment length does not match the grid");

  OptimizedKernel out;
  out.spec = spec;
  TabulatedKernel &k = out.kernel;
  k.order = spec.order;
  k.grid = spec.grid;
  k.origin = 0;
  k.samples.assign(dim * g + 1, 0.0);
  for (std::size_t n = 0; n < dim; ++n)
    std::copy(R[n].begin(), R[n].end(), k.samples.begin() + static_cast<long>(n * g));

  double delta = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    const double want = spec.rho_d.at(static_cast<long>(n));
    delta = std::max(delta, std::abs(k.samples[n * g] - want));
    k.samples[n * g] = want;
  }
  k.samples.back() = 0.0;
  if (delta > kSnapLimit)
    throw ConstraintViolation("assembled kernel misses rho_d at an integer by " +
                              std::to_string(delta));
  out.snap_delta = delta;
  return out;
}

/// max |(v * rho)(t) - w(t)| over non-integer grid points t in (0, m+1).
/// Returns {residual, max |w|}.
inline std::pair<double, double> normal_residual(const TabulatedKernel &rho, const NormalSystem &sys) {
  const long g = sys.grid;
  const long m = sys.order;
  double res = 0.0, scale = 0.0;
  for (long n = 0; n <= m; ++n) {
    for (long k = 1; k < g; ++k) {
      const long i = n * g + k;
      double acc = 0.0;
      for (long lag = -m; lag <= m; ++lag)
        acc += sys.v.at(lag) * rho.at_index(i - lag * g);
      const double w = sys.W[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
      res = std::max(res, std::abs(acc - w));
      scale = std::max(scale, std::abs(w));
    }
  }
  return {res, scale};
}

namespace detail {

/// Simpson weights on a grid of `grid` points per unit interval (grid even),
/// spanning [-window, window]; index i corresponds to t = i / grid - window.
inline double simpson_weight(long i, long n_last, long grid) {
  if (i == 0 || i == n_last)
    return 1.0 / (3.0 * grid);
  const long r = i % grid;
  if (r == 0)
    return 2.0 / (3.0 * grid);
  return (r % 2 == 1 ? 4.0 : 2.0) / (3.0 * grid);
}

} // namespace detail

/// Squared-L2 quantities over [-window, window] on the kernel's grid.
struct ErrorBreakdown {
  double error = 0.0;         ///< integral of (x - r)^2
  double target_energy = 0.0; ///< integral of x^2
};

/// Reconstruction error of the target when `y` is used as the basis kernel:
/// r(t) = sum_j b[j] y(t - j) with b = x_d * inv(y's integer samples).
/// With an interpolating target this is || x - y_cardinal ||^2.
inline ErrorBreakdown error_breakdown(const TabulatedKernel &y, const DesignSpec &spec) {
  if (y.grid % 2 != 0)
    throw std::invalid_argument("error_functional: kernel grid must be even");
  const InverseTaps inv = invert_fir(sample_at_integers(y), spec.inverse_eps, spec.inverse_max_taps);
  const FirFilter b = reconstruction_filter(target_samples(spec), inv);
  const long g = y.grid;
  const long W = spec.window;
  const long n_last = 2 * W * g;
  std::vector<double> r(static_cast<std::size_t>(n_last + 1), 0.0);
  for (long j = b.first(); j <= b.last(); ++j) {
    const double tap = b.taps[static_cast<std::size_t>(j - b.origin)];
    if (tap == 0.0)
      continue;
    const long lo = std::max((j + y.origin) * g, -W * g);
    const long hi = std::min((j + y.origin + y.support_length()) * g, W * g);
    for (long i = lo; i <= hi; ++i)
      r[static_cast<std::size_t>(i + W * g)] += tap * y.at_index(i - j * g);
  }
  ErrorBreakdown out;
  for (long i = 0; i <= n_last; ++i) {
    const double t = static_cast<double>(i - W * g) / g;
    const double x = spec.target(t);
    const double e = x - r[static_cast<std::size_t>(i)];
    const double w = detail::simpson_weight(i, n_last, g);
    out.error += w * e * e;
    out.target_energy += w * x * x;
  }
  return out;
}

inline double error_functional(const TabulatedKernel &y, const DesignSpec &spec) {
  return error_breakdown(y, spec).error;
}

/// 10 log10(||x||^2 / error) in dB; +infinity for an exact reconstruction.
inline double snr_db(const TabulatedKernel &y, const DesignSpec &spec) {
  const ErrorBreakdown e = error_breakdown(y, spec);
  if (e.error <= 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(e.target_energy / e.error);
}

/// Full pipeline: v and W, one Cholesky solve per grid column, assembly, and
/// the post-solve diagnostics.
inline OptimizedKernel design_optimized_spline(const DesignSpec &spec) {
  spec.validate();
  const DesignContext ctx(spec);
  const NormalSystem sys = build_normal_system(spec, ctx);
  OptimizedKernel out = assemble_kernel(solve_segments(sys), spec);
  const auto [res, scale] = normal_residual(out.kernel, sys);
  out.residual = res;
  out.w_scale = scale;
  out.trunc_error = ctx.inverse.trunc_error;
  out.error = error_functional(out.kernel, spec);
  return out;
}

/// Cardinal (interpolating) form of a designed kernel on [-W, W].
inline TabulatedKernel designed_cardinal(const OptimizedKernel &k, long half_window) {
  const InverseTaps inv =
      invert_fir(sample_at_integers(k.kernel), k.spec.inverse_eps, k.spec.inverse_max_taps);
  return cardinal_table(k.kernel, inv, half_window);
}

} // namespace optspline

#endif
