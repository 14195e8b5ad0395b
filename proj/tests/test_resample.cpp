#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "optspline/design.hpp"
#include "optspline/pgm.hpp"
#include "optspline/resample.hpp"
#include "oracles.hpp"

using namespace optspline;

namespace {

const Kernel &optimized_kernel() {
  static const Kernel k = design_optimized_spline(paper_cubic_spec()).kernel;
  return k;
}

std::vector<std::pair<std::string, Kernel>> all_kernels() {
  return {{"bspline1", make_bspline(1)},
          {"bspline3", make_bspline(3)},
          {"bicubic-keys", make_keys_kernel()},
          {"bspline3-table", tabulate(make_bspline(3), 256)},
          {"optspline3", optimized_kernel()}};
}

// Kernels whose integer translates sum to one.
std::vector<std::pair<std::string, Kernel>> unity_kernels() {
  return {{"bspline1", make_bspline(1)},
          {"bspline3", make_bspline(3)},
          {"bicubic-keys", make_keys_kernel()},
          {"bspline5", make_bspline(5)}};
}

GrayImage random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage img(w, h);
  for (double &p : img.pixels)
    p = u(rng);
  return img;
}

} // namespace

TEST(CenteredKernel, OddAndEvenOrders) {
  const CenteredKernel c3(make_bspline(3));
  EXPECT_NEAR(c3(0.0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(c3.integer_samples(), (FirFilter{{0.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0.0}, -2}));
  const CenteredKernel c2(make_bspline(2));
  const FirFilter s2 = c2.integer_samples();
  EXPECT_EQ(s2.origin, -1);
  ASSERT_EQ(s2.size(), 3u);
  EXPECT_NEAR(s2.taps[1], 0.75, 1e-15);
  EXPECT_NEAR(s2.taps[0], 0.125, 1e-15);
}

TEST(Interpolate1d, LengthAndOrigin) {
  const SampleTrain x{{1, 2, 3, 4, 5}, 3};
  const SampleTrain y = interpolate_1d(x, {make_bspline(3), 3, BoundaryMode::mirror});
  EXPECT_EQ(y.size(), 13u);
  EXPECT_EQ(y.origin, 9);
  EXPECT_THROW(interpolate_1d(SampleTrain{{1}, 0}, {make_bspline(3), 2, BoundaryMode::mirror}),
               std::invalid_argument);
}

TEST(Interpolate1d, SampleConsistency) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50.0, 200.0);
  for (const auto &[name, k] : all_kernels())
    for (int R : {2, 3, 4})
      for (BoundaryMode mode : {BoundaryMode::mirror, BoundaryMode::zero}) {
        SampleTrain x{std::vector<double>(97), 0};
        for (double &v : x.values)
          v = u(rng);
        const SampleTrain y = interpolate_1d(x, {k, R, mode});
        for (std::size_t j = 0; j < x.size(); ++j)
          EXPECT_NEAR(y.values[j * R], x.values[j], 1e-6) << name << " R=" << R << " j=" << j;
      }
}

TEST(Interpolate1d, ConstantIsPreserved) {
  for (const auto &[name, k] : unity_kernels()) {
    const SampleTrain x{std::vector<double>(64, 42.5), 0};
    const SampleTrain y = interpolate_1d(x, {k, 4, BoundaryMode::mirror});
    for (double v : y.values)
      EXPECT_NEAR(v, 42.5, 1e-9) << name;
  }
}

TEST(Interpolate1d, ImpulseGivesCubicCardinal) {
  SampleTrain x{std::vector<double>(121, 0.0), -60};
  x.values[60] = 1.0;
  const SampleTrain y = interpolate_1d(x, {make_bspline(3), 2, BoundaryMode::zero});
  for (long k = -15; k <= 15; ++k) {
    EXPECT_NEAR(y.at(2 * k + 1), oracle::cubic_cardinal(k + 0.5), 1e-9) << k;
    EXPECT_NEAR(y.at(2 * k), k == 0 ? 1.0 : 0.0, 1e-9) << k;
  }
}

// Measured away from the ends, where the mirror extension is not a sinusoid
// and the error reflects the boundary rather than the kernel.
TEST(Interpolate1d, SinusoidOptimizedBeatsBspline) {
  SampleTrain x{std::vector<double>(256), 0};
  for (std::size_t n = 0; n < x.size(); ++n)
    x.values[n] = std::sin(2.0 * std::numbers::pi * 0.1 * static_cast<double>(n));
  auto max_error = [&](const Kernel &k) {
    const SampleTrain y = interpolate_1d(x, {k, 2, BoundaryMode::mirror});
    double worst = 0.0;
    for (std::size_t j = 32; j + 32 < y.size(); ++j)
      worst = std::max(worst, std::abs(y.values[j] - std::sin(2.0 * std::numbers::pi * 0.1 * j / 2.0)));
    return worst;
  };
  EXPECT_LT(max_error(optimized_kernel()), max_error(make_bspline(3)));
}

TEST(Interpolate1d, LinearRampIsReproduced) {
  SampleTrain x{std::vector<double>(80), 0};
  for (std::size_t n = 0; n < x.size(); ++n)
    x.values[n] = 3.0 + 0.75 * static_cast<double>(n);
  for (const auto &[name, k] : unity_kernels()) {
    const SampleTrain y = interpolate_1d(x, {k, 2, BoundaryMode::mirror});
    for (std::size_t j = 2 * 20; j < 2 * 60; ++j)
      EXPECT_NEAR(y.values[j], 3.0 + 0.75 * static_cast<double>(j) / 2.0, 1e-6) << name << " j=" << j;
  }
}

TEST(Upsampler, TrailingSamplesMirrorLastSample) {
  const Upsampler up({make_bspline(3), 2, BoundaryMode::mirror});
  const std::vector<double> line{1, 5, 2, 8};
  std::vector<double> out(8);
  up.apply(line, out);
  EXPECT_NEAR(out[6], 8.0, 1e-9);
  EXPECT_DOUBLE_EQ(out[7], out[5]);
  std::vector<double> wrong(7);
  EXPECT_THROW(up.apply(line, wrong), DimensionMismatch);
}

TEST(Enlarge, ConstantImage) {
  const GrayImage img(16, 12, 128.0);
  for (const auto &[name, k] : unity_kernels()) {
    const GrayImage big = enlarge_image(img, {k, 2, BoundaryMode::mirror});
    EXPECT_EQ(big.width, 32);
    EXPECT_EQ(big.height, 24);
    for (auto q : big.quantized())
      EXPECT_EQ(q, 128) << name;
  }
}

TEST(Enlarge, SizeConvention) {
  const GrayImage big = enlarge_image(random_image(256, 256, 1), {make_bspline(3), 2, BoundaryMode::mirror});
  EXPECT_EQ(big.width, 512);
  EXPECT_EQ(big.height, 512);
}

TEST(Enlarge, HorizontalRamp) {
  GrayImage img(80, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 80; ++x)
      img.at(x, y) = 10.0 + 4.0 * x;
  for (const auto &[name, k] : unity_kernels()) {
    const GrayImage big = enlarge_image(img, {k, 2, BoundaryMode::mirror});
    for (int y = 0; y < big.height; ++y)
      for (int x = 40; x < 120; ++x)
        EXPECT_NEAR(big.at(x, y), 10.0 + 2.0 * x, 1e-6) << name;
  }
}

// Constants and ramps are reproduced only by kernels whose translates sum to
// one; these check the designed kernel separately.
TEST(OptimizedKernel, ConstantImageStaysConstant) {
  const GrayImage big = enlarge_image(GrayImage(16, 12, 128.0), {optimized_kernel(), 2, BoundaryMode::mirror});
  int off = 0;
  for (auto q : big.quantized())
    off += q != 128 ? 1 : 0;
  EXPECT_EQ(off, 0) << "pixels differing from 128";
}

TEST(OptimizedKernel, RampIsReproduced) {
  SampleTrain x{std::vector<double>(80), 0};
  for (std::size_t n = 0; n < x.size(); ++n)
    x.values[n] = 3.0 + 0.75 * static_cast<double>(n);
  const SampleTrain y = interpolate_1d(x, {optimized_kernel(), 2, BoundaryMode::mirror});
  double worst = 0.0;
  for (std::size_t j = 2 * 20; j < 2 * 60; ++j)
    worst = std::max(worst, std::abs(y.values[j] - (3.0 + 0.75 * static_cast<double>(j) / 2.0)));
  EXPECT_LE(worst, 1e-6);
}

TEST(Enlarge, SeparableInEitherOrder) {
  const GrayImage img = random_image(24, 17, 9);
  for (const auto &[name, k] : all_kernels()) {
    const ResampleConfig cfg{k, 2, BoundaryMode::mirror};
    const GrayImage rows_first = enlarge_image(img, cfg);
    const GrayImage cols_first = transpose(enlarge_image(transpose(img), cfg));
    ASSERT_EQ(rows_first.pixels.size(), cols_first.pixels.size());
    for (std::size_t i = 0; i < rows_first.pixels.size(); ++i)
      EXPECT_NEAR(rows_first.pixels[i], cols_first.pixels[i], 1e-9) << name;
  }
}

TEST(Enlarge, SamplesAtEvenCoordinatesAreKept) {
  const GrayImage img = random_image(20, 14, 2);
  for (const auto &[name, k] : all_kernels()) {
    const GrayImage big = enlarge_image(img, {k, 2, BoundaryMode::mirror});
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        EXPECT_NEAR(big.at(2 * x, 2 * y), img.at(x, y), 1e-6) << name;
  }
}

TEST(GrayImage, QuantizeRoundsAndClamps) {
  EXPECT_EQ(GrayImage::quantize(-3.0), 0);
  EXPECT_EQ(GrayImage::quantize(300.0), 255);
  EXPECT_EQ(GrayImage::quantize(127.5), 128);
  EXPECT_EQ(GrayImage::quantize(127.49), 127);
  EXPECT_EQ(GrayImage::quantize(std::nan("")), 0);
  EXPECT_THROW(GrayImage(0, 3), std::invalid_argument);
}

TEST(Downsample, Examples) {
  const GrayImage c(4, 4, 77.0);
  for (DownsampleMode mode : {DownsampleMode::decimate, DownsampleMode::average}) {
    const GrayImage d = downsample(c, 2, mode);
    EXPECT_EQ(d.width, 2);
    EXPECT_EQ(d.height, 2);
    for (double p : d.pixels)
      EXPECT_EQ(p, 77.0);
  }
  GrayImage chk(2, 2);
  chk.pixels = {0, 255, 255, 0};
  EXPECT_EQ(downsample(chk, 2, DownsampleMode::average).pixels[0], 127.5);
  EXPECT_EQ(downsample(chk, 2, DownsampleMode::decimate).pixels[0], 0.0);
  EXPECT_THROW(downsample(GrayImage(5, 4), 2, DownsampleMode::decimate), DimensionMismatch);
  const GrayImage big = random_image(512, 512, 3);
  const GrayImage small = downsample(big, 2, DownsampleMode::decimate);
  EXPECT_EQ(small.width, 256);
  EXPECT_EQ(small.at(10, 7), big.at(20, 14));
}

TEST(Psnr, Examples) {
  const GrayImage a = random_image(8, 8, 5);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  EXPECT_DOUBLE_EQ(psnr(GrayImage(8, 8, 0.0), GrayImage(8, 8, 255.0)), 0.0);
  const GrayImage b = random_image(8, 8, 6);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  EXPECT_THROW(psnr(a, GrayImage(4, 8)), DimensionMismatch);
}

TEST(Pgm, RoundTrip) {
  GrayImage img = random_image(13, 7, 8);
  for (double &p : img.pixels)
    p = std::round(p);
  std::stringstream ss;
  write_pgm(ss, img);
  EXPECT_EQ(ss.str().substr(0, 11), "P5\n13 7\n255");
  EXPECT_EQ(ss.str().size(), 12u + 13u * 7u);
  const GrayImage back = read_pgm(ss);
  EXPECT_EQ(back.width, 13);
  EXPECT_EQ(back.height, 7);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Pgm, AcceptsCommentsAndRejectsOtherFormats) {
  std::string data = "P5\n# a comment\n2 1\n255\n";
  data += static_cast<char>(10);
  data += static_cast<char>(250);
  std::istringstream ok(data);
  const GrayImage img = read_pgm(ok);
  EXPECT_EQ(img.pixels, (std::vector<double>{10, 250}));

  std::istringstream ascii("P2\n2 1\n255\n1 2\n");
  EXPECT_THROW(read_pgm(ascii), std::runtime_error);
  std::istringstream deep("P5\n2 1\n65535\n");
  EXPECT_THROW(read_pgm(deep), std::runtime_error);
  std::istringstream truncated("P5\n4 4\n255\nab");
  EXPECT_THROW(read_pgm(truncated), std::runtime_error);
}

TEST(NamedKernels, AllResolve) {
  for (const auto &name : kernel_names())
    EXPECT_NO_THROW(make_named_kernel(name, 64)) << name;
  EXPECT_THROW(make_named_kernel("lanczos3"), std::invalid_argument);
}
