#ifndef OPTSPLINE_KERNEL_HPP
#define OPTSPLINE_KERNEL_HPP

// Compact-support interpolation kernels: exact piecewise-polynomial kernels
// (B-splines, Keys cubic convolution) and grid-tabulated kernels, together
// with the cardinal construction that turns a basis kernel into an
// interpolating one.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "filters.hpp"

namespace optspline {

inline constexpr int kMaxBsplineOrder = 15;
inline constexpr int kDefaultGrid = 1024;
inline constexpr int kDefaultCardinalTaps = 64;

/// Kernel made of polynomial pieces on unit intervals. pieces[k] holds the
/// ascending-power coefficients of the kernel on [k, k+1) in the local
/// variable s = t - k. The kernel vanishes for t <= 0 and t >= support().
/// A symmetric kernel is evaluated on the left half only, which keeps full
/// relative precision in both tails.
struct PiecewisePolyKernel {
  int order = 0;
  std::vector<std::vector<double>> pieces;
  bool symmetric = false;

  int support() const { return static_cast<int>(pieces.size()); }

  double operator()(double t) const {
    const double len = static_cast<double>(pieces.size());
    if (!(t > 0.0) || t >= len)
      return 0.0;
    if (symmetric && t > 0.5 * len)
      t = len - t;
    const double k = std::floor(t);
    const double s = t - k;
    const auto &c = pieces[static_cast<std::size_t>(k)];
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;)
      acc = acc * s + c[i];
    return acc;
  }
};

inline double eval_kernel(const PiecewisePolyKernel &k, double t) { return k(t); }

namespace detail {

inline std::vector<double> poly_mul(const std::vector<double> &a, const std::vector<double> &b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] += a[i] * b[j];
  return out;
}

inline void poly_add_into(std::vector<double> &acc, const std::vector<double> &p, double scale) {
  if (acc.size() < p.size())
    acc.resize(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    acc[i] += scale * p[i];
}

/// p(a + b s) expanded in s.
inline std::vector<double> poly_compose_affine(const std::vector<double> &p, double a, double b) {
  std::vector<double> out{0.0};
  for (std::size_t i = p.size(); i-- > 0;) {
    out = poly_mul(out, {a, b});
    out[0] += p[i];
  }
  return out;
}

} // namespace detail

/// Polynomial B-spline of order m on (0, m+1).
///
/// Pieces come from the Cox-de Boor recursion
///   beta^m(t) = (t beta^{m-1}(t) + (m+1-t) beta^{m-1}(t-1)) / m
/// carried out on the local polynomial coefficients. It equals the alternating
/// sum of shifted one-sided powers but combines only nonnegative terms, so it
/// keeps full precision up to kMaxBsplineOrder.
inline PiecewisePolyKernel make_bspline(int m) {
  if (m < 0 || m > kMaxBsplineOrder)
    throw std::invalid_argument("make_bspline: order must be in [0, " +
                                std::to_string(kMaxBsplineOrder) + "], got " + std::to_string(m));
  std::vector<std::vector<double>> pieces{{1.0}};
  for (int order = 1; order <= m; ++order) {
    std::vector<std::vector<double>> next(static_cast<std::size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
      std::vector<double> acc(static_cast<std::size_t>(order + 1), 0.0);
      if (k < order) // t * beta^{order-1}(t), t = k + s
        detail::poly_add_into(acc, detail::poly_mul({static_cast<double>(k), 1.0},
                                                    pieces[static_cast<std::size_t>(k)]),
                              1.0 / order);
      if (k >= 1) // (order+1-t) * beta^{order-1}(t-1)
        detail::poly_add_into(acc,
                              detail::poly_mul({static_cast<double>(order + 1 - k), -1.0},
                                               pieces[static_cast<std::size_t>(k - 1)]),
                              1.0 / order);
      acc.resize(static_cast<std::size_t>(order + 1));
      next[static_cast<std::size_t>(k)] = std::move(acc);
    }
    pieces = std::move(next);
  }
  return PiecewisePolyKernel{m, std::move(pieces), true};
}

/// Keys cubic convolution kernel, shifted to live on (0, 4). a = -0.5 is the
/// usual "bicubic" choice.
inline PiecewisePolyKernel make_keys_kernel(double a = -0.5) {
  // |x| < 1 and 1 <= |x| < 2 branches, ascending powers of |x|
  const std::vector<double> inner{1.0, 0.0, -(a + 3.0), a + 2.0};
  const std::vector<double> outer{-4.0 * a, 8.0 * a, -5.0 * a, a};
  PiecewisePolyKernel k{3, {}, true};
  k.pieces.push_back(detail::poly_compose_affine(outer, 2.0, -1.0)); // |x| = 2 - s
  k.pieces.push_back(detail::poly_compose_affine(inner, 1.0, -1.0)); // |x| = 1 - s
  k.pieces.push_back(detail::poly_compose_affine(inner, 0.0, 1.0));  // |x| = s
  k.pieces.push_back(detail::poly_compose_affine(outer, 1.0, 1.0));  // |x| = 1 + s
  return k;
}

/// Kernel sampled on a uniform grid of step 1/grid. samples[j] is the value at
/// t = origin + j / grid; values in between are linearly interpolated and the
/// kernel is zero outside [origin, origin + support_length()].
struct TabulatedKernel {
  int order = 0;
  int grid = kDefaultGrid;
  long origin = 0;
  std::vector<double> samples;
  /// Presentation only: CSV export shifts t by -(order+1)/2.
  bool centered = false;

  long support_length() const {
    return samples.empty() ? 0 : static_cast<long>(samples.size() - 1) / grid;
  }
  double step() const { return 1.0 / grid; }
  double t_at(std::size_t j) const {
    return static_cast<double>(origin) + static_cast<double>(j) / grid;
  }

  /// Sample at grid index i relative to t = 0, i.e. t = i / grid; zero off the table.
  double at_index(long i) const {
    const long j = i - origin * grid;
    if (j < 0 || j >= static_cast<long>(samples.size()))
      return 0.0;
    return samples[static_cast<std::size_t>(j)];
  }

  double operator()(double t) const {
    const double x = (t - static_cast<double>(origin)) * grid;
    if (!(x >= 0.0) || x > static_cast<double>(samples.size() - 1))
      return 0.0;
    const double j = std::floor(x);
    const std::size_t i = static_cast<std::size_t>(j);
    if (i + 1 >= samples.size())
      return samples.back();
    const double f = x - j;
    return samples[i] + f * (samples[i + 1] - samples[i]);
  }
};

inline double eval_kernel(const TabulatedKernel &k, double t) { return k(t); }

/// Tabulate a piecewise-polynomial kernel at t = j / grid, j = 0 .. grid * support.
inline TabulatedKernel tabulate(const PiecewisePolyKernel &k, int grid = kDefaultGrid) {
  if (grid < 2)
    throw std::invalid_argument("tabulate: grid must be >= 2");
  TabulatedKernel out{k.order, grid, 0, {}, false};
  const long n = static_cast<long>(grid) * k.support();
  out.samples.resize(static_cast<std::size_t>(n + 1));
  for (long j = 0; j <= n; ++j)
    out.samples[static_cast<std::size_t>(j)] = k(static_cast<double>(j) / grid);
  out.samples.front() = 0.0;
  out.samples.back() = 0.0;
  return out;
}

/// Integer samples k(1) .. k(support - 1); endpoint zeros are dropped.
inline FirFilter sample_at_integers(const PiecewisePolyKernel &k) {
  FirFilter f{{}, 1};
  for (int n = 1; n < k.support(); ++n)
    f.taps.push_back(k(static_cast<double>(n)));
  return f;
}

/// Integer samples strictly inside the tabulated support.
inline FirFilter sample_at_integers(const TabulatedKernel &k) {
  FirFilter f{{}, k.origin + 1};
  for (long n = 1; n < k.support_length(); ++n)
    f.taps.push_back(k.samples[static_cast<std::size_t>(n * k.grid)]);
  return f;
}

/// Cardinal kernel sum_j inv[j] y(t - j) of a tabulated kernel, sampled on the
/// kernel's own grid over [-half_window, half_window]. Exact at grid points.
inline TabulatedKernel cardinal_table(const TabulatedKernel &y, const InverseTaps &inv,
                                      long half_window) {
  const long g = y.grid;
  TabulatedKernel out{y.order, y.grid, -half_window, {}, false};
  const long n = 2 * half_window * g;
  out.samples.assign(static_cast<std::size_t>(n + 1), 0.0);
  const FirFilter &a = inv.filter;
  for (long jj = a.first(); jj <= a.last(); ++jj) {
    const double tap = a.taps[static_cast<std::size_t>(jj - a.origin)];
    if (tap == 0.0)
      continue;
    // y(t - jj) is nonzero for t in [jj + origin, jj + origin + support]
    const long lo = std::max((jj + y.origin) * g, -half_window * g);
    const long hi = std::min((jj + y.origin + y.support_length()) * g, half_window * g);
    for (long i = lo; i <= hi; ++i)
      out.samples[static_cast<std::size_t>(i + half_window * g)] += tap * y.at_index(i - jj * g);
  }
  return out;
}

/// Cardinal spline c(t) = sum_j inv[j] k(t - j), where inv is the inverse of
/// the kernel's integer-sample filter truncated to n_taps on each side of its
/// center. Tabulated on [-W, W] with W = n_taps + ceil(support / 2), which
/// covers the whole truncated expansion.
inline TabulatedKernel cardinal_from_basis(const PiecewisePolyKernel &k, int grid = kDefaultGrid,
                                           int n_taps = kDefaultCardinalTaps) {
  if (grid < 2)
    throw std::invalid_argument("cardinal_from_basis: grid must be >= 2");
  const InverseTaps inv = invert_fir(sample_at_integers(k), 1e-300, 2 * n_taps + 1);
  const long half_window = n_taps + (k.support() + 1) / 2;
  TabulatedKernel out{k.order, grid, -half_window, {}, false};
  const long n = 2 * half_window * grid;
  out.samples.assign(static_cast<std::size_t>(n + 1), 0.0);
  const FirFilter &a = inv.filter;
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i - half_window * grid) / grid;
    const long j_lo = std::max(a.first(), static_cast<long>(std::floor(t)) - k.support());
    const long j_hi = std::min(a.last(), static_cast<long>(std::ceil(t)));
    double acc = 0.0;
    for (long j = j_lo; j <= j_hi; ++j)
      acc += a.taps[static_cast<std::size_t>(j - a.origin)] * k(t - static_cast<double>(j));
    out.samples[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// Writes `t,value` rows at every grid point with 17 significant digits.
inline void write_kernel_csv(std::ostream &os, const TabulatedKernel &k) {
  const double shift = k.centered ? -(k.order + 1) / 2.0 : 0.0;
  os << "t,value\n";
  os << std::setprecision(17);
  for (std::size_t j = 0; j < k.samples.size(); ++j)
    os << k.t_at(j) + shift << ',' << k.samples[j] << '\n';
}

inline void write_kernel_csv(const std::string &path, const TabulatedKernel &k) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  write_kernel_csv(os, k);
}

/// Reads a kernel written by write_kernel_csv. The first abscissa must be an
/// integer and the spacing uniform; order is taken as support - 1.
inline TabulatedKernel read_kernel_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("kernel CSV: empty input");
  if (line.rfind("t,value", 0) != 0)
    throw std::runtime_error("kernel CSV: expected header 't,value'");
  std::vector<double> ts, vs;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r")
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("kernel CSV: missing comma on line " + std::to_string(lineno));
    try {
      std::size_t used = 0;
      ts.push_back(std::stod(line.substr(0, comma), &used));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception &) {
      throw std::runtime_error("kernel CSV: malformed number on line " + std::to_string(lineno));
    }
  }
  if (ts.size() < 3)
    throw std::runtime_error("kernel CSV: need at least 3 rows");
  const double h = ts[1] - ts[0];
  if (!(h > 0.0))
    throw std::runtime_error("kernel CSV: abscissae must increase");
  const long grid = std::lround(1.0 / h);
  if (grid < 2 || std::abs(1.0 / h - static_cast<double>(grid)) > 1e-6 * grid)
    throw std::runtime_error("kernel CSV: spacing is not 1/G for an integer G >= 2");
  for (std::size_t j = 1; j < ts.size(); ++j)
    if (std::abs(ts[j] - ts[0] - static_cast<double>(j) / grid) > 1e-9)
      throw std::runtime_error("kernel CSV: non-uniform spacing at row " + std::to_string(j + 1));
  const long origin = std::lround(ts[0]);
  if (std::abs(ts[0] - static_cast<double>(origin)) > 1e-9)
    throw std::runtime_error("kernel CSV: first abscissa must be an integer");
  if ((ts.size() - 1) % static_cast<std::size_t>(grid) != 0)
    throw std::runtime_error("kernel CSV: table must span a whole number of sample periods");
  TabulatedKernel k;
  k.grid = static_cast<int>(grid);
  k.origin = origin;
  k.samples = std::move(vs);
  k.order = static_cast<int>(k.support_length()) - 1;
  return k;
}

inline TabulatedKernel read_kernel_csv(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open kernel CSV '" + path + "'");
  return read_kernel_csv(is);
}

} // namespace optspline

#endif
