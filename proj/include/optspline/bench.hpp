#ifndef OPTSPLINE_BENCH_HPP
#define OPTSPLINE_BENCH_HPP

// Enlargement benchmark: downsample each reference image by 2, enlarge it back
// with every method, and compare against the reference by PSNR.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "design.hpp"
#include "kernel.hpp"
#include "pgm.hpp"
#include "resample.hpp"

namespace optspline {

struct NamedImage {
  std::string name;
  GrayImage image;
};

struct BenchConfig {
  std::string image_dir;
  /// When > 0, benchmark generated images instead of a directory.
  int synthetic_count = 0;
  int synthetic_size = 512;
  std::uint64_t seed = 1;
  int grid = kDefaultGrid;
  int window = kDefaultTargetWindow;
  BoundaryMode boundary = BoundaryMode::mirror;
  DownsampleMode downsample_mode = DownsampleMode::decimate;
  int threads = 1;
};

struct BenchRow {
  std::string name;
  int width = 0, height = 0;
  double psnr_bicubic = 0.0;
  double psnr_bspline3 = 0.0;
  double psnr_optspline3 = 0.0;
};

struct KernelMetrics {
  double snr_cardinal_db = 0.0;
  double snr_optimized_db = 0.0;
  double e_h_cardinal = 0.0;
  double e_h_optimized = 0.0;
};

struct BenchReport {
  BenchConfig config;
  KernelMetrics kernels;
  std::vector<BenchRow> rows;
};

/// Synthetic test images. "checker-noise" is an 8-pixel checkerboard with
/// Gaussian noise; "texture" is a sum of random oriented sinusoids over a
/// smooth gradient.
inline GrayImage synthetic_image(const std::string &kind, int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(size, size);
  if (kind == "checker-noise") {
    std::normal_distribution<double> noise(0.0, 12.0);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const bool on = ((x / 8) + (y / 8)) % 2 == 0;
        img.at(x, y) = std::clamp((on ? 190.0 : 60.0) + noise(rng), 0.0, 255.0);
      }
    return img;
  }
  if (kind == "texture") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Wave {
      double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    for (int i = 0; i < 12; ++i) {
      const double f = 0.01 + 0.2 * u(rng) * u(rng); // cycles per pixel, mostly low
      const double angle = 2.0 * std::numbers::pi * u(rng);
      waves.push_back({f * std::cos(angle), f * std::sin(angle), 2.0 * std::numbers::pi * u(rng),
                       8.0 + 20.0 * u(rng)});
    }
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        double v = 80.0 + 90.0 * static_cast<double>(x + y) / (2.0 * size);
        for (const Wave &w : waves)
          v += w.amp * std::sin(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
        img.at(x, y) = std::clamp(std::round(v), 0.0, 255.0);
      }
    return img;
  }
  throw std::invalid_argument("unknown synthetic image kind '" + kind + "'");
}

inline std::vector<NamedImage> synthetic_corpus(int count, int size, std::uint64_t seed) {
  std::vector<NamedImage> out;
  for (int i = 0; i < count; ++i) {
    const std::string kind = (i % 2 == 0) ? "texture" : "checker-noise";
    std::ostringstream name;
    name << "synthetic-" << std::setw(2) << std::setfill('0') << i << '-' << kind;
    out.push_back({name.str(), synthetic_image(kind, size, seed + static_cast<std::uint64_t>(i))});
  }
  return out;
}

/// Every *.pgm in `dir`, sorted by file name.
inline std::vector<NamedImage> load_pgm_dir(const std::string &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::runtime_error("bench: '" + dir + "' is not a directory");
  std::vector<fs::path> paths;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<NamedImage> out;
  for (const auto &p : paths)
    out.push_back({p.stem().string(), read_pgm(p.string())});
  return out;
}

inline BenchRow bench_one(const NamedImage &ref, const ResampleConfig &bicubic,
                          const ResampleConfig &bspline3, const ResampleConfig &optspline3,
                          DownsampleMode mode) {
  if (ref.image.width % 2 != 0 || ref.image.height % 2 != 0)
    throw DimensionMismatch("bench: image '" + ref.name + "' has odd dimensions");
  const GrayImage low = downsample(ref.image, 2, mode);
  BenchRow row;
  row.name = ref.name;
  row.width = ref.image.width;
  row.height = ref.image.height;
  row.psnr_bicubic = psnr(enlarge_image(low, bicubic), ref.image);
  row.psnr_bspline3 = psnr(enlarge_image(low, bspline3), ref.image);
  row.psnr_optspline3 = psnr(enlarge_image(low, optspline3), ref.image);
  return row;
}

inline BenchReport run_bench(const BenchConfig &cfg, std::vector<NamedImage> images) {
  if (images.empty())
    throw std::runtime_error("bench: no images to process");
  std::sort(images.begin(), images.end(),
            [](const NamedImage &a, const NamedImage &b) { return a.name < b.name; });

  BenchReport report;
  report.config = cfg;

  DesignSpec spec = paper_cubic_spec(cfg.grid);
  spec.window = cfg.window;
  const OptimizedKernel opt = design_optimized_spline(spec);
  DesignSpec cubic_spec = spec;
  cubic_spec.rho_d = sample_at_integers(make_bspline(3));
  const TabulatedKernel cubic = tabulate(make_bspline(3), cfg.grid);
  report.kernels.e_h_optimized = opt.error;
  report.kernels.snr_optimized_db = snr_db(opt.kernel, spec);
  report.kernels.e_h_cardinal = error_functional(cubic, cubic_spec);
  report.kernels.snr_cardinal_db = snr_db(cubic, cubic_spec);

  const ResampleConfig bicubic{make_keys_kernel(-0.5), 2, cfg.boundary};
  const ResampleConfig bspline3{make_bspline(3), 2, cfg.boundary};
  const ResampleConfig optspline3{opt.kernel, 2, cfg.boundary};

  report.rows.resize(images.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(images.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      try {
        report.rows[i] = bench_one(images[i], bicubic, bspline3, optspline3, cfg.downsample_mode);
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(images.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  for (const auto &e : errors)
    if (!e.empty())
      throw std::runtime_error(e);
  return report;
}

inline BenchReport run_bench(const BenchConfig &cfg) {
  if (cfg.synthetic_count > 0)
    return run_bench(cfg, synthetic_corpus(cfg.synthetic_count, cfg.synthetic_size, cfg.seed));
  return run_bench(cfg, load_pgm_dir(cfg.image_dir));
}

/// JSON cannot hold infinities; they are written as the string "inf".
inline nlohmann::json json_number(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return v;
}

inline nlohmann::json config_to_json(const BenchConfig &cfg) {
  nlohmann::json j;
  j["image_dir"] = cfg.image_dir;
  j["synthetic_count"] = cfg.synthetic_count;
  j["synthetic_size"] = cfg.synthetic_size;
  j["seed"] = cfg.seed;
  j["grid"] = cfg.grid;
  j["window"] = cfg.window;
  j["boundary"] = to_string(cfg.boundary);
  j["downsample_mode"] = to_string(cfg.downsample_mode);
  j["factor"] = 2;
  return j;
}

/// The report deliberately leaves out the thread count, which does not affect
/// any number.
inline nlohmann::json to_json(const BenchReport &r) {
  nlohmann::json j;
  j["config"] = config_to_json(r.config);
  j["kernels"] = {{"snr_cardinal_db", r.kernels.snr_cardinal_db},
                  {"snr_optimized_db", r.kernels.snr_optimized_db},
                  {"e_h_cardinal", r.kernels.e_h_cardinal},
                  {"e_h_optimized", r.kernels.e_h_optimized}};
  j["images"] = nlohmann::json::array();
  double gap = 0.0;
  std::size_t n_gap = 0;
  for (const BenchRow &row : r.rows) {
    j["images"].push_back({{"name", row.name},
                           {"width", row.width},
                           {"height", row.height},
                           {"psnr_bicubic", json_number(row.psnr_bicubic)},
                           {"psnr_bspline3", json_number(row.psnr_bspline3)},
                           {"psnr_optspline3", json_number(row.psnr_optspline3)}});
    if (std::isfinite(row.psnr_optspline3) && std::isfinite(row.psnr_bicubic)) {
      gap += row.psnr_optspline3 - row.psnr_bicubic;
      ++n_gap;
    }
  }
  j["mean_gap_optspline3_minus_bicubic_db"] = n_gap ? gap / static_cast<double>(n_gap) : 0.0;
  return j;
}

inline std::string to_csv(const BenchReport &r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name,psnr_bicubic,psnr_bspline3,psnr_optspline3\n";
  for (const BenchRow &row : r.rows)
    os << row.name << ',' << row.psnr_bicubic << ',' << row.psnr_bspline3 << ','
       << row.psnr_optspline3 << '\n';
  return os.str();
}

} // namespace optspline

#endif
