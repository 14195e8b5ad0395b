// optspline: design optimized spline kernels, measure their SNR against a
// target filter, enlarge PGM images and run the enlargement benchmark.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numeric failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "optspline/optspline.hpp"

namespace fs = std::filesystem;
using namespace optspline;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string default_out_dir() {
  if (const char *env = std::getenv("OPTSPLINE_OUT_DIR"); env && *env)
    return env;
  return ".";
}

void write_text(const fs::path &path, const std::string &text) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
}

/// Built-in kernel name or path to a kernel CSV.
Kernel load_kernel(const std::string &name_or_path, int grid) {
  for (const auto &n : kernel_names())
    if (n == name_or_path)
      return make_named_kernel(n, grid);
  if (fs::path(name_or_path).extension() == ".csv")
    return read_kernel_csv(name_or_path);
  throw CLI::ValidationError("kernel", "unknown kernel '" + name_or_path +
                                           "' (expected bspline1|bspline3|bicubic-keys|"
                                           "optspline3-paper or a .csv file)");
}

TabulatedKernel as_table(const Kernel &k, int grid) {
  if (const auto *p = std::get_if<PiecewisePolyKernel>(&k))
    return tabulate(*p, grid);
  return std::get<TabulatedKernel>(k);
}

struct Common {
  int grid = kDefaultGrid;
  int window = kDefaultTargetWindow;
  std::string boundary = "mirror";
  std::string out_dir = default_out_dir();
};

int cmd_design(const std::string &spec_file, const Common &c, bool grid_set, bool window_set,
               const std::string &kernel_name) {
  DesignSpec spec = read_design_spec(spec_file);
  if (grid_set)
    spec.grid = c.grid;
  if (window_set)
    spec.window = c.window;
  spec.validate();
  OptimizedKernel k = design_optimized_spline(spec);
  k.kernel.centered = false;

  const fs::path csv = fs::path(c.out_dir) / kernel_name;
  if (csv.has_parent_path())
    fs::create_directories(csv.parent_path());
  write_kernel_csv(csv.string(), k.kernel);

  nlohmann::json j;
  j["spec"] = design_spec_to_json(spec);
  j["kernel_csv"] = csv.string();
  j["residual"] = k.residual;
  j["w_scale"] = k.w_scale;
  j["snap_delta"] = k.snap_delta;
  j["trunc_error"] = k.trunc_error;
  j["e_h"] = k.error;
  j["snr_db"] = json_number(snr_db(k.kernel, spec));
  const std::string text = j.dump(2) + "\n";
  write_text(fs::path(c.out_dir) / (fs::path(kernel_name).stem().string() + ".metrics.json"), text);
  std::cout << text;
  return 0;
}

int cmd_snr(const std::string &kernel_arg, const std::string &spec_file, const Common &c,
            bool window_set) {
  const TabulatedKernel k = as_table(load_kernel(kernel_arg, c.grid), c.grid);
  DesignSpec spec = spec_file.empty() ? paper_cubic_spec(k.grid) : read_design_spec(spec_file);
  if (window_set || spec_file.empty())
    spec.window = c.window;
  const ErrorBreakdown e = error_breakdown(k, spec);
  nlohmann::json j;
  j["kernel"] = kernel_arg;
  j["target"] = spec.target.kind_name();
  j["window"] = spec.window;
  j["grid"] = k.grid;
  j["e_h"] = e.error;
  j["target_energy"] = e.target_energy;
  j["snr_db"] = json_number(snr_db(k, spec));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_enlarge(const std::string &in, const std::string &kernel_arg, const std::string &out,
                int factor, const Common &c) {
  const GrayImage img = read_pgm(in);
  const ResampleConfig cfg{load_kernel(kernel_arg, c.grid), factor, boundary_from_string(c.boundary)};
  const GrayImage big = enlarge_image(img, cfg);
  fs::path path(out);
  if (path.is_relative() && !path.has_parent_path())
    path = fs::path(c.out_dir) / path;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  write_pgm(path.string(), big);
  std::cout << path.string() << ": " << big.width << "x" << big.height << "\n";
  return 0;
}

int cmd_bench(BenchConfig cfg, const Common &c, const std::string &mode) {
  cfg.grid = c.grid;
  cfg.window = c.window;
  cfg.boundary = boundary_from_string(c.boundary);
  cfg.downsample_mode = downsample_mode_from_string(mode);
  if (cfg.synthetic_count <= 0 && cfg.image_dir.empty())
    throw CLI::ValidationError("bench", "give an image directory or --synthetic N");
  const BenchReport report = run_bench(cfg);
  const std::string json = to_json(report).dump(2) + "\n";
  write_text(fs::path(c.out_dir) / "bench.json", json);
  write_text(fs::path(c.out_dir) / "bench.csv", to_csv(report));
  std::cout << json;
  return 0;
}

int cmd_synth(const std::string &dir, int count, int size, std::uint64_t seed) {
  fs::create_directories(dir);
  for (const NamedImage &img : synthetic_corpus(count, size, seed)) {
    const fs::path p = fs::path(dir) / (img.name + ".pgm");
    write_pgm(p.string(), img.image);
    std::cout << p.string() << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Optimized compact-support spline kernels and image enlargement"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--grid", common.grid, "Samples per unit interval for tabulated kernels")
        ->check(CLI::Range(2, 1 << 16));
    sub->add_option("--window", common.window, "Target truncation window (sample periods)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--boundary", common.boundary, "Boundary extension: mirror|zero")
        ->check(CLI::IsMember({"mirror", "zero"}));
    sub->add_option("--out-dir", common.out_dir, "Output directory (default $OPTSPLINE_OUT_DIR or .)");
  };

  std::string spec_file, kernel_csv_name = "kernel.csv";
  auto *design = app.add_subcommand("design", "Design an optimized kernel from a JSON spec");
  design->add_option("spec", spec_file, "Design spec JSON")->required()->check(CLI::ExistingFile);
  design->add_option("--kernel-out", kernel_csv_name, "Kernel CSV file name inside --out-dir");
  add_common(design);

  std::string snr_kernel, snr_spec;
  auto *snr = app.add_subcommand("snr", "SNR of a kernel's cardinal form against a target");
  snr->add_option("kernel", snr_kernel, "Kernel CSV or built-in name")->required();
  snr->add_option("--spec", snr_spec, "Design spec JSON providing target and window")
      ->check(CLI::ExistingFile);
  add_common(snr);

  std::string in_pgm, enlarge_kernel, out_pgm;
  int factor = 2;
  auto *enlarge = app.add_subcommand("enlarge", "Enlarge a PGM image");
  enlarge->add_option("input", in_pgm, "Input PGM (P5)")->required()->check(CLI::ExistingFile);
  enlarge->add_option("kernel", enlarge_kernel, "Kernel CSV or built-in name")->required();
  enlarge->add_option("output", out_pgm, "Output PGM")->required();
  enlarge->add_option("--factor", factor, "Integer enlargement factor")->check(CLI::Range(2, 16));
  add_common(enlarge);

  BenchConfig bench_cfg;
  std::string downsample_mode = "decimate";
  auto *bench = app.add_subcommand("bench", "Downsample, enlarge and score a set of images");
  bench->add_option("images", bench_cfg.image_dir, "Directory of PGM images");
  bench->add_option("--synthetic", bench_cfg.synthetic_count, "Use N generated images instead");
  bench->add_option("--synthetic-size", bench_cfg.synthetic_size, "Side of generated images")
      ->check(CLI::Range(4, 8192));
  bench->add_option("--seed", bench_cfg.seed, "Seed for generated images");
  bench->add_option("--threads", bench_cfg.threads, "Worker threads")->check(CLI::Range(1, 256));
  bench->add_option("--downsample-mode", downsample_mode, "decimate|average")
      ->check(CLI::IsMember({"decimate", "average"}));
  add_common(bench);

  std::string synth_dir;
  int synth_count = 7, synth_size = 512;
  std::uint64_t synth_seed = 1;
  auto *synth = app.add_subcommand("synth", "Write generated test images as PGM");
  synth->add_option("dir", synth_dir, "Output directory")->required();
  synth->add_option("--count", synth_count, "Number of images")->check(CLI::Range(1, 1000));
  synth->add_option("--size", synth_size, "Image side")->check(CLI::Range(4, 8192));
  synth->add_option("--seed", synth_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*design)
      return cmd_design(spec_file, common, design->count("--grid") > 0,
                        design->count("--window") > 0, kernel_csv_name);
    if (*snr)
      return cmd_snr(snr_kernel, snr_spec, common, snr->count("--window") > 0);
    if (*enlarge)
      return cmd_enlarge(in_pgm, enlarge_kernel, out_pgm, factor, common);
    if (*bench)
      return cmd_bench(bench_cfg, common, downsample_mode);
    if (*synth)
      return cmd_synth(synth_dir, synth_count, synth_size, synth_seed);
  } catch (const NotAppropriate &e) {
    std::cerr << "error: NotAppropriate: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SingularSystem &e) {
    std::cerr << "error: SingularSystem: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ConstraintViolation &e) {
    std::cerr << "error: ConstraintViolation: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CLI::ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
