// Upsamples a short sinusoid by 4 with three kernels and prints the largest
// deviation from the underlying continuous signal.

#include <cmath>
#include <iostream>
#include <numbers>

#include "optspline/optspline.hpp"

int main() {
  using namespace optspline;

  const double f = 0.1; // cycles per sample
  const int R = 4;
  SampleTrain x{std::vector<double>(128), 0};
  for (std::size_t n = 0; n < x.size(); ++n)
    x.values[n] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(n));

  const std::pair<const char *, Kernel> kernels[] = {
      {"bicubic-keys", make_keys_kernel()},
      {"bspline3", make_bspline(3)},
      {"optspline3", design_optimized_spline(paper_cubic_spec()).kernel},
  };
  for (const auto &[name, k] : kernels) {
    const SampleTrain y = interpolate_1d(x, {k, R, BoundaryMode::mirror});
    double worst = 0.0;
    // skip the borders, where the mirror extension is not a sinusoid
    for (std::size_t j = 16 * R; j + 16 * R < y.size(); ++j) {
      const double t = static_cast<double>(j) / R;
      worst = std::max(worst, std::abs(y.values[j] - std::sin(2.0 * std::numbers::pi * f * t)));
    }
    std::cout << name << ": max error " << worst << "\n";
  }
}
