#ifndef MTF_ERRORS_HPP
#define MTF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mtf {

/// A series or iterative scheme failed to reach its tolerance.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Best error estimate available when the scheme gave up.
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// An adaptive quadrature could not certify the requested tolerance.
class ToleranceError : public NonConvergenceError {
public:
  using NonConvergenceError::NonConvergenceError;
};

/// Integer overflow in an exact computation.
class OverflowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mtf

#endif
