#ifndef OPTSPLINE_FILTERS_HPP
#define OPTSPLINE_FILTERS_HPP

// Discrete half of the interpolation pipeline: finite filters, their stable
// two-sided inverses, and the prefilter that turns samples into spline
// coefficients.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "sample_train.hpp"

namespace optspline {

/// Finite discrete filter f[n]. `origin` is the time index n of taps[0], so
/// the filter spans n = origin .. origin + taps.size() - 1.
struct FirFilter {
  std::vector<double> taps;
  long origin = 0;

  static FirFilter delta(long at = 0) { return FirFilter{{1.0}, at}; }

  std::size_t size() const { return taps.size(); }
  long first() const { return origin; }
  long last() const { return origin + static_cast<long>(taps.size()) - 1; }

  double at(long n) const {
    const long i = n - origin;
    if (i < 0 || i >= static_cast<long>(taps.size()))
      return 0.0;
    return taps[static_cast<std::size_t>(i)];
  }

  double abs_sum() const {
    double s = 0.0;
    for (double t : taps)
      s += std::abs(t);
    return s;
  }

  /// Same filter with exact-zero taps removed from both ends.
  FirFilter trimmed() const {
    std::size_t lo = 0, hi = taps.size();
    while (lo < hi && taps[lo] == 0.0)
      ++lo;
    while (hi > lo && taps[hi - 1] == 0.0)
      --hi;
    if (lo == hi)
      return FirFilter{{}, origin};
    return FirFilter{std::vector<double>(taps.begin() + static_cast<long>(lo),
                                         taps.begin() + static_cast<long>(hi)),
                     origin + static_cast<long>(lo)};
  }

  friend bool operator==(const FirFilter &, const FirFilter &) = default;
};

/// Truncated two-sided stable inverse of a FirFilter. `filter` spans the
/// symmetric index range center - K .. center + K.
struct InverseTaps {
  FirFilter filter;
  long center = 0;
  FirFilter source;
  /// Bound on the discarded tail mass, plus a floating-point allowance for the
  /// kept taps (zero when the inverse is exact).
  double trunc_error = 0.0;

  long half_width() const { return (static_cast<long>(filter.size()) - 1) / 2; }
  double at(long n) const { return filter.at(n); }
};

enum class BoundaryMode { mirror, zero };

inline const char *to_string(BoundaryMode mode) {
  return mode == BoundaryMode::mirror ? "mirror" : "zero";
}

inline BoundaryMode boundary_from_string(const std::string &s) {
  if (s == "mirror")
    return BoundaryMode::mirror;
  if (s == "zero")
    return BoundaryMode::zero;
  throw std::invalid_argument("unknown boundary mode '" + s + "' (expected mirror|zero)");
}

namespace detail {

using cplx = std::complex<double>;

inline cplx horner(const std::vector<double> &coeffs, cplx z) {
  cplx acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;)
    acc = acc * z + coeffs[i];
  return acc;
}

inline cplx horner_derivative(const std::vector<double> &coeffs, cplx z) {
  cplx acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;)
    acc = acc * z + static_cast<double>(i) * coeffs[i];
  return acc;
}

/// All complex roots of sum_i coeffs[i] w^i (Aberth-Ehrlich iteration).
/// coeffs.front() and coeffs.back() must be nonzero.
inline std::vector<cplx> polynomial_roots(const std::vector<double> &coeffs) {
  const std::size_t degree = coeffs.size() - 1;
  std::vector<cplx> roots(degree);
  if (degree == 0)
    return roots;
  if (degree == 1) {
    roots[0] = -coeffs[0] / coeffs[1];
    return roots;
  }

  // Initial guesses on a circle whose radius is the geometric mean of the root
  // moduli, rotated off the real axis to break symmetry.
  const double radius =
      std::pow(std::abs(coeffs.front() / coeffs.back()), 1.0 / static_cast<double>(degree));
  for (std::size_t i = 0; i < degree; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(degree) + 0.4;
    roots[i] = std::polar(radius, angle);
  }

  for (int iter = 0; iter < 800; ++iter) {
    double max_step = 0.0;
    for (std::size_t i = 0; i < degree; ++i) {
      const cplx p = horner(coeffs, roots[i]);
      if (p == 0.0)
        continue;
      const cplx ratio = p / horner_derivative(coeffs, roots[i]);
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < degree; ++j)
        if (j != i)
          repulsion += 1.0 / (roots[i] - roots[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
        continue;
      roots[i] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(roots[i])));
    }
    if (max_step < 1e-15)
      break;
  }
  return roots;
}

/// Monic polynomial with the given roots, real parts of the coefficients.
inline std::vector<double> poly_from_roots(const std::vector<cplx> &roots) {
  std::vector<cplx> c{1.0};
  for (const cplx &r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    out[i] = c[i].real();
  return out;
}

/// First n coefficients of the power series 1 / p(w); p[0] must be nonzero.
inline std::vector<double> reciprocal_series(const std::vector<double> &p, std::size_t n) {
  std::vector<double> s(n, 0.0);
  s[0] = 1.0 / p[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    const std::size_t upto = std::min(k, p.size() - 1);
    for (std::size_t i = 1; i <= upto; ++i)
      acc += p[i] * s[k - i];
    s[k] = -acc / p[0];
  }
  return s;
}

inline long floor_div2(long v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

} // namespace detail

inline constexpr double kUnitCircleTolerance = 1e-9;
inline constexpr double kDefaultInverseEps = 1e-12;
inline constexpr int kDefaultInverseMaxTaps = 129;

/// Stable two-sided inverse of `f`, truncated at the first index beyond which
/// every tap is below `eps` in magnitude, or at `max_taps` taps.
///
/// The tap polynomial is factored; roots outside the unit circle give a causal
/// geometric series and roots inside give an anticausal one. Throws
/// NotAppropriate when a root (or the centroid of a tight cluster of roots,
/// which is how a multiple root shows up numerically) lies within
/// kUnitCircleTolerance of the unit circle.
inline InverseTaps invert_fir(const FirFilter &f, double eps = kDefaultInverseEps,
                              int max_taps = kDefaultInverseMaxTaps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("invert_fir: eps must be positive");
  if (max_taps < 1)
    throw std::invalid_argument("invert_fir: max_taps must be at least 1");

  const FirFilter src = f.trimmed();
  if (src.taps.empty())
    throw NotAppropriate("invert_fir: filter has no nonzero tap");

  const long kmin = src.first();
  const long kmax = src.last();
  const long center = -detail::floor_div2(kmin + kmax);
  const long max_half = (max_taps - 1) / 2;

  InverseTaps out;
  out.source = f;
  out.center = center;

  if (src.size() == 1) {
    const double inv = 1.0 / src.taps[0];
    out.filter = FirFilter{{inv}, -kmin};
    out.trunc_error = std::fma(src.taps[0], inv, -1.0) == 0.0 ? 0.0 : DBL_EPSILON;
    return out;
  }

  const std::vector<double> &q = src.taps; // Q(w) = sum q_i w^i, w = z^{-1}
  const std::vector<detail::cplx> roots = detail::polynomial_roots(q);

  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(std::abs(roots[i]) - 1.0) <= kUnitCircleTolerance) {
      std::ostringstream msg;
      msg << "filter has a zero on the unit circle near " << roots[i]
          << "; no stable inverse exists";
      throw NotAppropriate(msg.str());
    }
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < 1e-5) {
        const detail::cplx mid = 0.5 * (roots[i] + roots[j]);
        if (std::abs(std::abs(mid) - 1.0) <= kUnitCircleTolerance) {
          std::ostringstream msg;
          msg << "filter has a multiple zero on the unit circle near " << mid
              << "; no stable inverse exists";
          throw NotAppropriate(msg.str());
        }
      }
    }
  }

  std::vector<detail::cplx> outside, inside;
  double decay = 0.0;
  for (const auto &r : roots) {
    if (std::abs(r) > 1.0) {
      outside.push_back(r);
      decay = std::max(decay, 1.0 / std::abs(r));
    } else {
      inside.push_back(r);
      decay = std::max(decay, std::abs(r));
    }
  }
  const long n_inside = static_cast<long>(inside.size());

  // Q(w) = q_L * C(w) * w^d * A(1/w), with C monic over the outside roots and
  // A(u) = prod (1 - r u) over the inside roots.
  const std::vector<double> causal_poly = detail::poly_from_roots(outside);
  std::vector<double> anti_poly;
  {
    const std::vector<double> monic = detail::poly_from_roots(inside);
    // prod (1 - r u) has coefficients of prod (u - r) reversed
    anti_poly.assign(monic.rbegin(), monic.rend());
  }

  const double span = static_cast<double>(kmax - kmin);
  std::size_t n_series = static_cast<std::size_t>(max_half + static_cast<long>(span) + 16);
  if (decay > 0.0) {
    const double need = std::log(1e-20) / std::log(decay);
    n_series = std::max(n_series, static_cast<std::size_t>(std::ceil(need)) + 1);
  }
  n_series = std::min<std::size_t>(n_series, 8192);

  const std::vector<double> sc = detail::reciprocal_series(causal_poly, n_series);
  const std::vector<double> sa = detail::reciprocal_series(anti_poly, n_series);
  const double lead = q.back();

  // g[k] with k = n_c - n_a - (kmin + d); stored at offset so index 0 is the
  // most negative k.
  const long shift = kmin + n_inside;
  const long g_lo = -static_cast<long>(n_series - 1) - shift;
  std::vector<double> g(2 * n_series - 1, 0.0);
  for (std::size_t nc = 0; nc < n_series; ++nc) {
    if (sc[nc] == 0.0)
      continue;
    for (std::size_t na = 0; na < n_series; ++na)
      g[nc - na + n_series - 1] += sc[nc] * sa[na];
  }
  for (double &v : g)
    v /= lead;

  auto g_at = [&](long k) -> double {
    const long i = k - g_lo;
    if (i < 0 || i >= static_cast<long>(g.size()))
      return 0.0;
    return g[static_cast<std::size_t>(i)];
  };

  long half = 0;
  for (long k = g_lo; k < g_lo + static_cast<long>(g.size()); ++k)
    if (std::abs(g_at(k)) >= eps)
      half = std::max(half, std::abs(k - center));
  half = std::min(half, max_half);

  FirFilter kept{std::vector<double>(static_cast<std::size_t>(2 * half + 1)), center - half};
  for (long k = center - half; k <= center + half; ++k)
    kept.taps[static_cast<std::size_t>(k - kept.origin)] = g_at(k);

  double dropped = 0.0;
  for (long k = g_lo; k < g_lo + static_cast<long>(g.size()); ++k)
    if (std::abs(k - center) > half)
      dropped += std::abs(g_at(k));
  // geometric tail beyond the computed series
  double sum_c = 0.0, sum_a = 0.0;
  for (double v : sc)
    sum_c += std::abs(v);
  for (double v : sa)
    sum_a += std::abs(v);
  if (decay > 0.0 && decay < 1.0) {
    const double tail = (std::abs(sc.back()) * sum_a + std::abs(sa.back()) * sum_c) *
                        decay / (1.0 - decay) / std::abs(lead);
    dropped += tail;
  }
  const double rounding = 4.0 * DBL_EPSILON * kept.abs_sum() * static_cast<double>(src.size());

  out.filter = std::move(kept);
  out.trunc_error = dropped + rounding;
  return out;
}

/// Time reversal f[-n].
inline FirFilter flip(const FirFilter &f) {
  FirFilter out{std::vector<double>(f.taps.rbegin(), f.taps.rend()), -f.last()};
  return out;
}

/// Full linear convolution.
inline FirFilter convolve(const FirFilter &a, const FirFilter &b) {
  if (a.taps.empty() || b.taps.empty())
    return FirFilter{{}, a.origin + b.origin};
  FirFilter out{std::vector<double>(a.size() + b.size() - 1, 0.0), a.origin + b.origin};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.taps[i + j] += a.taps[i] * b.taps[j];
  return out;
}

inline FirFilter convolve(const InverseTaps &a, const FirFilter &b) { return convolve(a.filter, b); }
inline FirFilter convolve(const FirFilter &a, const InverseTaps &b) { return convolve(a, b.filter); }
inline FirFilter convolve(const InverseTaps &a, const InverseTaps &b) {
  return convolve(a.filter, b.filter);
}

/// v[k] = sum_j a[j] a[j + k]; symmetric about lag 0.
inline FirFilter autocorrelate(const FirFilter &a) {
  const long n = static_cast<long>(a.size());
  if (n == 0)
    return FirFilter{{}, 0};
  FirFilter v{std::vector<double>(static_cast<std::size_t>(2 * n - 1), 0.0), -(n - 1)};
  for (long k = 0; k < n; ++k) {
    double acc = 0.0;
    for (long j = 0; j + k < n; ++j)
      acc += a.taps[static_cast<std::size_t>(j)] * a.taps[static_cast<std::size_t>(j + k)];
    v.taps[static_cast<std::size_t>(n - 1 + k)] = acc;
    v.taps[static_cast<std::size_t>(n - 1 - k)] = acc;
  }
  return v;
}

inline FirFilter autocorrelate(const InverseTaps &a) { return autocorrelate(a.filter); }

/// Sample of `x` at time n after extension by `mode`. Mirror is whole-sample
/// symmetric about the first and last samples.
inline double extended_sample(const SampleTrain &x, long n, BoundaryMode mode) {
  const long len = static_cast<long>(x.size());
  long i = n - x.origin;
  if (i >= 0 && i < len)
    return x.values[static_cast<std::size_t>(i)];
  if (mode == BoundaryMode::zero || len == 0)
    return 0.0;
  if (len == 1)
    return x.values[0];
  const long period = 2 * (len - 1);
  i %= period;
  if (i < 0)
    i += period;
  if (i >= len)
    i = period - i;
  return x.values[static_cast<std::size_t>(i)];
}

/// Spline coefficients c[n] = sum_k inv[k] x[n - k] over the support of `x`.
inline SampleTrain prefilter(const SampleTrain &x, const InverseTaps &inv,
                             BoundaryMode boundary = BoundaryMode::mirror) {
  if (x.empty())
    throw std::invalid_argument("prefilter: empty signal");
  SampleTrain out{std::vector<double>(x.size(), 0.0), x.origin};
  const FirFilter &h = inv.filter;
  for (long n = x.first(); n <= x.last(); ++n) {
    double acc = 0.0;
    for (long k = h.first(); k <= h.last(); ++k) {
      const double tap = h.taps[static_cast<std::size_t>(k - h.origin)];
      if (tap != 0.0)
        acc += tap * extended_sample(x, n - k, boundary);
    }
    out.values[static_cast<std::size_t>(n - x.origin)] = acc;
  }
  return out;
}

} // namespace optspline

#endif
