// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// usage: acceptance [--only N] [--corpus DIR] [--cli PATH] [--work DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optspline/optspline.hpp"
#include "optspline/verify.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace optspline;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

struct Paths {
  std::string corpus = OPTSPLINE_NATURAL_CORPUS;
  std::string cli = OPTSPLINE_CLI_PATH;
  std::string work = (fs::temp_directory_path() / "optspline_acceptance").string();
};

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

Outcome bspline_exactness() {
  const auto b3 = make_bspline(3);
  const FirFilter s = sample_at_integers(b3);
  double sample_err = std::abs(s.taps[0] - 1.0 / 6.0);
  sample_err = std::max(sample_err, std::abs(s.taps[1] - 2.0 / 3.0));
  sample_err = std::max(sample_err, std::abs(s.taps[2] - 1.0 / 6.0));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double unity_err = 0.0;
  bool support_ok = true;
  for (int m = 0; m <= 5; ++m) {
    const auto b = make_bspline(m);
    for (int i = 0; i < 10000; ++i) {
      const double t = u(rng);
      double sum = 0.0;
      for (int n = static_cast<int>(std::floor(t)) - m - 1; n <= static_cast<int>(std::ceil(t)); ++n)
        sum += b(t - n);
      unity_err = std::max(unity_err, std::abs(sum - 1.0));
      if ((t <= 0.0 || t >= m + 1.0) && b(t) != 0.0)
        support_ok = false;
    }
    support_ok = support_ok && b.support() == m + 1 && b(0.0) == 0.0 && b(m + 1.0) == 0.0 &&
                 b(m + 1.0 - 1e-6) > 0.0 && b(1e-6) > 0.0;
  }
  return {sample_err <= 1e-12 && unity_err <= 1e-9 && support_ok,
          "sample err " + fmt(sample_err) + ", unity err " + fmt(unity_err) +
              ", support " + (support_ok ? "exact" : "WRONG")};
}

Outcome inverse_round_trip() {
  const FirFilter cubic{{1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0}, -1};
  const InverseTaps inv = invert_fir(cubic);
  const FirFilter prod = convolve(cubic, inv);
  double rt = 0.0;
  for (long n = inv.filter.first(); n <= inv.filter.last(); ++n)
    rt = std::max(rt, std::abs(prod.at(n) - (n == 0 ? 1.0 : 0.0)));
  double closed = 0.0;
  for (long k = inv.filter.first(); k <= inv.filter.last(); ++k)
    closed = std::max(closed, std::abs(inv.at(k) - oracle::cubic_inverse_tap(k)));
  double dft = 0.0;
  for (const auto &[k, v] : oracle::dft_inverse(cubic.taps, cubic.origin, 0, 20))
    dft = std::max(dft, std::abs(inv.at(k) - v));
  return {rt <= 1e-10 && closed <= 1e-9 && dft <= 1e-9,
          "round trip " + fmt(rt) + ", closed form " + fmt(closed) + ", frequency grid " + fmt(dft)};
}

Outcome cardinal_interpolation() {
  const TabulatedKernel c = cardinal_from_basis(make_bspline(3), 1024, 64);
  double worst = 0.0;
  for (int n = -20; n <= 20; ++n)
    worst = std::max(worst, std::abs(c(n) - (n == 0 ? 1.0 : 0.0)));
  return {worst <= 1e-6, "max |c(n) - delta[n]| = " + fmt(worst)};
}

Outcome normal_residual_check() {
  const Timer timer;
  const OptimizedKernel k = design_optimized_spline(paper_cubic_spec(1024));
  const double secs = timer.seconds();
  const double ratio = k.residual / k.w_scale;
  return {ratio <= 1e-8 && secs < 5.0,
          "residual / max|w| = " + fmt(ratio) + ", " + fmt(secs) + " s"};
}

Outcome oracle_equivalence() {
  const Timer timer;
  double worst = 0.0;
  std::string detail;
  for (int m : {1, 3}) {
    DesignSpec s = paper_cubic_spec(256);
    if (m == 1) {
      s.order = 1;
      s.rho_d = rho_taps({1.0});
    }
    const OptimizedKernel k = design_optimized_spline(s);
    OptimalityOptions opts;
    opts.directions = 0;
    const OptimalityReport r = verify_optimality(k, s, opts);
    worst = std::max(worst, r.oracle_distance);
    detail += "m=" + std::to_string(m) + ": " + fmt(r.oracle_distance) + ", ";
  }
  const double secs = timer.seconds();
  return {worst <= 1e-6 && secs < 30.0, detail + fmt(secs) + " s"};
}

Outcome first_order_optimality() {
  const DesignSpec s = paper_cubic_spec(1024);
  const OptimizedKernel k = design_optimized_spline(s);
  OptimalityOptions opts;
  opts.directions = 100;
  opts.run_oracle = false;
  const OptimalityReport r = verify_optimality(k, s, opts);
  return {r.normalized_derivatives.size() == 100 && r.max_normalized_derivative <= 1e-5,
          "max |dE/d gamma| / (|gamma| |h|) = " + fmt(r.max_normalized_derivative) + " over " +
              std::to_string(r.normalized_derivatives.size()) + " directions"};
}

Outcome snr_reproduction() {
  const DesignSpec opt_spec = paper_cubic_spec(1024);
  const OptimizedKernel k = design_optimized_spline(opt_spec);
  const double snr_opt = snr_db(k.kernel, opt_spec);
  DesignSpec cubic_spec = opt_spec;
  cubic_spec.rho_d = sample_at_integers(make_bspline(3));
  const double snr_cubic = snr_db(tabulate(make_bspline(3), 1024), cubic_spec);
  const bool ok = std::abs(snr_cubic - 13.15) <= 2.0 && std::abs(snr_opt - 20.39) <= 2.0 &&
                  snr_opt - snr_cubic >= 3.0;
  return {ok, "cardinal cubic " + fmt(snr_cubic, 4) + " dB (ref 13.15), optimized " +
                  fmt(snr_opt, 4) + " dB (ref 20.39), gap " + fmt(snr_opt - snr_cubic, 4) + " dB"};
}

Outcome image_benchmark(const Paths &paths) {
  const Timer timer;
  BenchConfig cfg;
  cfg.image_dir = paths.corpus;
  const BenchReport r = run_bench(cfg);
  const double secs = timer.seconds();
  int wins = 0;
  double gap = 0.0;
  std::string per_image;
  for (const BenchRow &row : r.rows) {
    const double d = row.psnr_optspline3 - row.psnr_bicubic;
    wins += d >= 0.0 ? 1 : 0;
    gap += d;
    per_image += " " + row.name + "=" + fmt(d, 3);
  }
  const int n = static_cast<int>(r.rows.size());
  gap /= n;
  const bool enough = n >= 7;
  const int need = n - (n + 6) / 7; // 6 of 7
  const bool ok = enough && wins >= need && gap >= 0.3 && secs < 60.0;
  return {ok, std::to_string(wins) + "/" + std::to_string(n) + " images with optspline3 >= bicubic, mean gap " +
                  fmt(gap, 3) + " dB, " + fmt(secs, 3) + " s; gap per image:" + per_image};
}

Outcome pipeline_invariants() {
  const std::vector<std::pair<std::string, Kernel>> kernels{
      {"bspline1", make_bspline(1)},
      {"bspline3", make_bspline(3)},
      {"bicubic-keys", make_keys_kernel()},
      {"optspline3", design_optimized_spline(paper_cubic_spec()).kernel}};

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage img(33, 28);
  for (double &p : img.pixels)
    p = u(rng);

  bool ok = true;
  std::string detail;
  for (const auto &[name, k] : kernels) {
    const ResampleConfig cfg{k, 2, BoundaryMode::mirror};
    // sample consistency
    SampleTrain x{std::vector<double>(101), 0};
    for (double &v : x.values)
      v = u(rng);
    const SampleTrain y = interpolate_1d(x, cfg);
    double sample_err = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      sample_err = std::max(sample_err, std::abs(y.values[2 * j] - x.values[j]));
    // separability
    const GrayImage a = enlarge_image(img, cfg);
    const GrayImage b = transpose(enlarge_image(transpose(img), cfg));
    double sep_err = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
      sep_err = std::max(sep_err, std::abs(a.pixels[i] - b.pixels[i]));
    // DC preservation after 8-bit rounding
    int dc_off = 0;
    for (double level : {0.0, 17.0, 128.0, 255.0}) {
      const GrayImage big = enlarge_image(GrayImage(20, 20, level), cfg);
      for (auto q : big.quantized())
        dc_off += q != static_cast<std::uint8_t>(level) ? 1 : 0;
    }
    // linear reproduction away from the borders
    SampleTrain ramp{std::vector<double>(80), 0};
    for (std::size_t n = 0; n < ramp.size(); ++n)
      ramp.values[n] = -4.0 + 1.25 * static_cast<double>(n);
    const SampleTrain yr = interpolate_1d(ramp, cfg);
    double ramp_err = 0.0;
    for (std::size_t j = 40; j < 120; ++j)
      ramp_err = std::max(ramp_err, std::abs(yr.values[j] - (-4.0 + 1.25 * static_cast<double>(j) / 2.0)));

    const bool kernel_ok = sample_err <= 1e-6 && sep_err <= 1e-9 && dc_off == 0 && ramp_err <= 1e-6;
    ok = ok && kernel_ok;
    detail += "; " + name + (kernel_ok ? " ok" : " FAILS") + " (sample " + fmt(sample_err) +
              ", separability " + fmt(sep_err) + ", DC off-pixels " + std::to_string(dc_off) +
              ", ramp " + fmt(ramp_err) + ")";
  }
  GrayImage other = img;
  for (double &p : other.pixels)
    p = 255.0 - p;
  const bool sym = psnr(img, other) == psnr(other, img);
  ok = ok && sym;
  return {ok, std::string("psnr symmetry ") + (sym ? "yes" : "NO") + detail};
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Outcome determinism(const Paths &paths) {
  const fs::path root = fs::path(paths.work) / "determinism";
  fs::remove_all(root);
  auto run = [&](const std::string &tag, int threads) {
    const fs::path out = root / tag;
    fs::create_directories(out);
    const std::string cmd = "\"" + paths.cli + "\" bench \"" + paths.corpus + "\" --threads " +
                            std::to_string(threads) + " --out-dir \"" + out.string() + "\" > \"" +
                            (out / "stdout.txt").string() + "\"";
    return std::system(cmd.c_str());
  };
  const int rc1 = run("first", 1);
  const int rc2 = run("second", 1);
  const int rc3 = run("threads4", 4);
  if (rc1 != 0 || rc2 != 0 || rc3 != 0)
    return {false, "bench command failed"};
  bool same = true;
  for (const char *file : {"bench.json", "bench.csv", "stdout.txt"}) {
    const std::string a = slurp(root / "first" / file);
    same = same && !a.empty() && a == slurp(root / "second" / file) && a == slurp(root / "threads4" / file);
  }
  return {same, same ? "bench.json, bench.csv and stdout byte-identical across 3 runs (1, 1, 4 threads)"
                     : "reports differ"};
}

} // namespace

int main(int argc, char **argv) {
  Paths paths;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (a == "--corpus" && i + 1 < argc)
      paths.corpus = argv[++i];
    else if (a == "--cli" && i + 1 < argc)
      paths.cli = argv[++i];
    else if (a == "--work" && i + 1 < argc)
      paths.work = argv[++i];
    else {
      std::cerr << "usage: acceptance [--only N] [--corpus DIR] [--cli PATH] [--work DIR]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "B-spline exactness", bspline_exactness},
      {2, "inverse-filter round trip", inverse_round_trip},
      {3, "cardinal interpolation", cardinal_interpolation},
      {4, "normal-equation residual", normal_residual_check},
      {5, "oracle equivalence", oracle_equivalence},
      {6, "first-order optimality", first_order_optimality},
      {7, "SNR reproduction", snr_reproduction},
      {8, "image benchmark ordering", [&] { return image_benchmark(paths); }},
      {9, "pipeline invariants", pipeline_invariants},
      {10, "determinism", [&] { return determinism(paths); }},
  };

  int failed = 0;
  for (const Criterion &c : criteria) {
    if (only != 0 && c.id != only)
      continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
