#ifndef OPTSPLINE_RESAMPLE_HPP
#define OPTSPLINE_RESAMPLE_HPP

// Prefilter-plus-convolution resampling of 1-D signals and grayscale images
// with any compact-support kernel, and the PSNR measure used to compare them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "design.hpp"
#include "errors.hpp"
#include "filters.hpp"
#include "kernel.hpp"
#include "sample_train.hpp"

namespace optspline {

using Kernel = std::variant<PiecewisePolyKernel, TabulatedKernel>;

struct ResampleConfig {
  Kernel kernel;
  int factor = 2;
  BoundaryMode boundary = BoundaryMode::mirror;
};

/// Kernel support as [origin, origin + length].
inline std::pair<double, double> kernel_extent(const Kernel &k) {
  return std::visit(
      [](const auto &kk) -> std::pair<double, double> {
        using K = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<K, PiecewisePolyKernel>)
          return {0.0, static_cast<double>(kk.support())};
        else
          return {static_cast<double>(kk.origin), static_cast<double>(kk.support_length())};
      },
      k);
}

inline double kernel_value(const Kernel &k, double t) {
  return std::visit([t](const auto &kk) { return kk(t); }, k);
}

/// Kernel shifted so its support is centered on 0.
class CenteredKernel {
public:
  explicit CenteredKernel(Kernel k) : kernel_(std::move(k)) {
    const auto [origin, length] = kernel_extent(kernel_);
    shift_ = origin + length / 2.0;
    half_ = length / 2.0;
  }

  double operator()(double u) const { return kernel_value(kernel_, u + shift_); }
  double half_support() const { return half_; }

  /// Samples at the integers inside the support, as a filter.
  FirFilter integer_samples() const {
    const long lo = static_cast<long>(std::ceil(-half_));
    const long hi = static_cast<long>(std::floor(half_));
    FirFilter f{{}, lo};
    for (long n = lo; n <= hi; ++n)
      f.taps.push_back((*this)(static_cast<double>(n)));
    return f;
  }

private:
  Kernel kernel_;
  double shift_ = 0.0;
  double half_ = 0.0;
};

/// Upsamples lines by an integer factor R: prefilter with the inverse of the
/// kernel's integer samples, then evaluate sum_n c[n] phi(t - n) at t = j / R.
/// The output of a length-n line has n R samples: the (n-1) R + 1 lattice
/// points plus R - 1 trailing samples mirrored about the last input sample.
class Upsampler {
public:
  explicit Upsampler(const ResampleConfig &cfg)
      : factor_(cfg.factor), boundary_(cfg.boundary), kernel_(cfg.kernel),
        inverse_(invert_fir(kernel_.integer_samples(), kDefaultInverseEps, kDesignInverseMaxTaps)) {
    if (factor_ < 1)
      throw std::invalid_argument("resample: factor must be >= 1");
    const double h = kernel_.half_support();
    // phase r: t = n0 + r / R, taps over n = n0 + d, d in [d_lo, d_hi]
    d_lo_ = static_cast<long>(std::floor(-h)) - 1;
    d_hi_ = static_cast<long>(std::ceil(h)) + 1;
    phases_.assign(static_cast<std::size_t>(factor_),
                   std::vector<double>(static_cast<std::size_t>(d_hi_ - d_lo_ + 1), 0.0));
    for (int r = 0; r < factor_; ++r) {
      const double frac = static_cast<double>(r) / factor_;
      for (long d = d_lo_; d <= d_hi_; ++d)
        phases_[static_cast<std::size_t>(r)][static_cast<std::size_t>(d - d_lo_)] =
            kernel_(frac - static_cast<double>(d));
    }
  }

  int factor() const { return factor_; }
  const InverseTaps &inverse() const { return inverse_; }

  /// Spline coefficients over [-pad, n - 1 + pad] (index 0 is n = -pad).
  std::vector<double> coefficients(std::span<const double> line) const {
    const long n = static_cast<long>(line.size());
    const long pad = pad_();
    SampleTrain x{std::vector<double>(line.begin(), line.end()), 0};
    std::vector<double> c(static_cast<std::size_t>(n + 2 * pad), 0.0);
    const FirFilter &a = inverse_.filter;
    for (long i = -pad; i < n + pad; ++i) {
      double acc = 0.0;
      for (long k = a.first(); k <= a.last(); ++k) {
        const double tap = a.taps[static_cast<std::size_t>(k - a.origin)];
        if (tap != 0.0)
          acc += tap * extended_sample(x, i - k, boundary_);
      }
      c[static_cast<std::size_t>(i + pad)] = acc;
    }
    return c;
  }

  /// Writes n R samples into `out`.
  void apply(std::span<const double> line, std::span<double> out) const {
    const long n = static_cast<long>(line.size());
    if (n < 1)
      throw std::invalid_argument("resample: empty line");
    if (static_cast<long>(out.size()) != n * factor_)
      throw DimensionMismatch("resample: output line has the wrong length");
    if (n == 1) {
      std::fill(out.begin(), out.end(), line[0]);
      return;
    }
    const std::vector<double> c = coefficients(line);
    const long pad = pad_();
    const long lattice = (n - 1) * factor_ + 1;
    for (long j = 0; j < lattice; ++j) {
      const long n0 = j / factor_;
      const auto &w = phases_[static_cast<std::size_t>(j % factor_)];
      double acc = 0.0;
      for (long d = d_lo_; d <= d_hi_; ++d) {
        const double wt = w[static_cast<std::size_t>(d - d_lo_)];
        if (wt != 0.0)
          acc += wt * c[static_cast<std::size_t>(n0 + d + pad)];
      }
      out[static_cast<std::size_t>(j)] = acc;
    }
    for (long r = 1; r < factor_; ++r)
      out[static_cast<std::size_t>(lattice - 1 + r)] = out[static_cast<std::size_t>(lattice - 1 - r)];
  }

private:
  long pad_() const { return std::max(-d_lo_, d_hi_) + 1; }

  int factor_;
  BoundaryMode boundary_;
  CenteredKernel kernel_;
  InverseTaps inverse_;
  long d_lo_ = 0, d_hi_ = 0;
  std::vector<std::vector<double>> phases_;
};

/// Interpolates x at t = origin + j / R, j = 0 .. (len - 1) R. The result's
/// origin is x.origin * R in units of 1/R.
inline SampleTrain interpolate_1d(const SampleTrain &x, const ResampleConfig &cfg) {
  if (x.size() < 2)
    throw std::invalid_argument("interpolate_1d: need at least 2 samples");
  const Upsampler up(cfg);
  std::vector<double> full(x.size() * static_cast<std::size_t>(cfg.factor));
  up.apply(x.values, full);
  full.resize((x.size() - 1) * static_cast<std::size_t>(cfg.factor) + 1);
  return SampleTrain{std::move(full), x.origin * cfg.factor};
}

/// Row-major grayscale raster of real-valued pixels on the 0..255 scale.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
  int bit_depth = 8;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w < 1 || h < 1)
      throw std::invalid_argument("GrayImage: dimensions must be >= 1");
  }

  double &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  /// round(clamp(pixel, 0, 255)).
  static std::uint8_t quantize(double v) {
    if (!(v > 0.0))
      return 0;
    if (v >= 255.0)
      return 255;
    return static_cast<std::uint8_t>(std::lround(v));
  }

  std::vector<std::uint8_t> quantized() const {
    std::vector<std::uint8_t> out(pixels.size());
    std::transform(pixels.begin(), pixels.end(), out.begin(), quantize);
    return out;
  }
};

inline GrayImage transpose(const GrayImage &img) {
  GrayImage out(img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.at(y, x) = img.at(x, y);
  return out;
}

/// Separable enlargement: every row, then every column. Output is
/// (R w) x (R h); see Upsampler for the trailing-sample convention.
inline GrayImage enlarge_image(const GrayImage &img, const ResampleConfig &cfg) {
  const Upsampler up(cfg);
  const int R = cfg.factor;
  GrayImage rows(img.width * R, img.height);
  for (int y = 0; y < img.height; ++y) {
    std::span<const double> in(img.pixels.data() + static_cast<std::size_t>(y) * img.width,
                               static_cast<std::size_t>(img.width));
    std::span<double> out(rows.pixels.data() + static_cast<std::size_t>(y) * rows.width,
                          static_cast<std::size_t>(rows.width));
    up.apply(in, out);
  }
  GrayImage result(img.width * R, img.height * R);
  std::vector<double> col_in(static_cast<std::size_t>(img.height));
  std::vector<double> col_out(static_cast<std::size_t>(img.height) * R);
  for (int x = 0; x < rows.width; ++x) {
    for (int y = 0; y < img.height; ++y)
      col_in[static_cast<std::size_t>(y)] = rows.at(x, y);
    up.apply(col_in, col_out);
    for (int y = 0; y < result.height; ++y)
      result.at(x, y) = col_out[static_cast<std::size_t>(y)];
  }
  return result;
}

enum class DownsampleMode { decimate, average };

inline const char *to_string(DownsampleMode m) {
  return m == DownsampleMode::decimate ? "decimate" : "average";
}

inline DownsampleMode downsample_mode_from_string(const std::string &s) {
  if (s == "decimate")
    return DownsampleMode::decimate;
  if (s == "average")
    return DownsampleMode::average;
  throw std::invalid_argument("unknown downsample mode '" + s + "' (expected decimate|average)");
}

/// decimate keeps pixel (f i, f j); average pools f x f blocks.
inline GrayImage downsample(const GrayImage &img, int factor, DownsampleMode mode) {
  if (factor < 1)
    throw std::invalid_argument("downsample: factor must be >= 1");
  if (img.width % factor != 0 || img.height % factor != 0)
    throw DimensionMismatch("downsample: factor " + std::to_string(factor) +
                            " does not divide " + std::to_string(img.width) + "x" +
                            std::to_string(img.height));
  GrayImage out(img.width / factor, img.height / factor);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      if (mode == DownsampleMode::decimate) {
        out.at(x, y) = img.at(x * factor, y * factor);
        continue;
      }
      double acc = 0.0;
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx)
          acc += img.at(x * factor + dx, y * factor + dy);
      out.at(x, y) = acc / (factor * factor);
    }
  return out;
}

/// 10 log10(255^2 / MSE) over the 8-bit views; +infinity for identical views.
inline double psnr(const GrayImage &a, const GrayImage &b) {
  if (a.width != b.width || a.height != b.height)
    throw DimensionMismatch("psnr: images differ in size");
  const auto qa = a.quantized();
  const auto qb = b.quantized();
  double sse = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    const double d = static_cast<double>(qa[i]) - static_cast<double>(qb[i]);
    sse += d * d;
  }
  if (sse == 0.0)
    return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(qa.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Names accepted by make_named_kernel.
inline const std::vector<std::string> &kernel_names() {
  static const std::vector<std::string> names{"bspline1", "bspline3", "bicubic-keys",
                                              "optspline3-paper"};
  return names;
}

inline Kernel make_named_kernel(const std::string &name, int grid = kDefaultGrid) {
  if (name == "bspline1")
    return make_bspline(1);
  if (name == "bspline3")
    return make_bspline(3);
  if (name == "bicubic-keys")
    return make_keys_kernel(-0.5);
  if (name == "optspline3-paper")
    return design_optimized_spline(paper_cubic_spec(grid)).kernel;
  throw std::invalid_argument("unknown kernel name '" + name + "'");
}

} // namespace optspline

#endif
