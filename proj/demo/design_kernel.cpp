// Designs the cubic kernel with integer samples (0.233, 0.480, 0.233), compares
// its cardinal form with the cubic B-spline's against the ideal lowpass
// filter, and writes the kernel to kernel.csv.

#include <iostream>

#include "optspline/optspline.hpp"

int main() {
  using namespace optspline;

  const DesignSpec spec = paper_cubic_spec();
  const OptimizedKernel opt = design_optimized_spline(spec);

  DesignSpec bspline_spec = spec;
  bspline_spec.rho_d = sample_at_integers(make_bspline(3));
  const TabulatedKernel cubic = tabulate(make_bspline(3), spec.grid);

  std::cout << "optimized kernel: SNR " << snr_db(opt.kernel, spec) << " dB\n"
            << "cubic B-spline:   SNR " << snr_db(cubic, bspline_spec) << " dB\n"
            << "rho(1.5) = " << opt.kernel(1.5) << ", beta3(1.5) = " << make_bspline(3)(1.5) << "\n";

  write_kernel_csv("kernel.csv", opt.kernel);
  std::cout << "wrote kernel.csv\n";
}
