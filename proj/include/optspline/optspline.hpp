#ifndef OPTSPLINE_OPTSPLINE_HPP
#define OPTSPLINE_OPTSPLINE_HPP

#include "errors.hpp"
#include "sample_train.hpp"
#include "filters.hpp"
#include "kernel.hpp"
#include "design.hpp"
#include "resample.hpp"
#include "pgm.hpp"
#include "spec_json.hpp"
#include "bench.hpp"

#endif
