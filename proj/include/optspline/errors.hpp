#ifndef OPTSPLINE_ERRORS_HPP
#define OPTSPLINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optspline {

/// A discrete filter has a zero on (or numerically on) the unit circle and
/// therefore no stable two-sided inverse.
class NotAppropriate : public std::runtime_error {
public:
  explicit NotAppropriate(const std::string &what) : std::runtime_error(what) {}
};

/// Cholesky factorization of the normal matrix broke down.
class SingularSystem : public std::runtime_error {
public:
  explicit SingularSystem(const std::string &what) : std::runtime_error(what) {}
};

/// An assembled kernel misses its prescribed integer samples by more than the
/// allowed slack.
class ConstraintViolation : public std::runtime_error {
public:
  explicit ConstraintViolation(const std::string &what) : std::runtime_error(what) {}
};

class DimensionMismatch : public std::invalid_argument {
public:
  explicit DimensionMismatch(const std::string &what) : std::invalid_argument(what) {}
};

} // namespace optspline

#endif
