#ifndef OPTSPLINE_SAMPLE_TRAIN_HPP
#define OPTSPLINE_SAMPLE_TRAIN_HPP

#include <cstddef>
#include <vector>

namespace optspline {

/// Uniformly sampled signal x[n] with unit sample period. `origin` is the time
/// index n of values[0].
struct SampleTrain {
  std::vector<double> values;
  long origin = 0;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  long first() const { return origin; }
  long last() const { return origin + static_cast<long>(values.size()) - 1; }

  /// x[n], zero outside the stored range.
  double at(long n) const {
    const long i = n - origin;
    if (i < 0 || i >= static_cast<long>(values.size()))
      return 0.0;
    return values[static_cast<std::size_t>(i)];
  }
};

} // namespace optspline

#endif
