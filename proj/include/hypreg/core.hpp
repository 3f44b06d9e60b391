#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hypreg {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline const cplx two_pi_i{0.0, 2.0 * pi};

// Error families. The CLI maps them to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Shapes or end terms that do not match.
struct StructuralError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
// Quadrature or tracing that did not reach its tolerance.
struct NumericalError : Error {
  using Error::Error;
};
struct GeometryError : NumericalError {
  using NumericalError::NumericalError;
};

struct Tolerances {
  double path = 1e-12;     // per path segment
  double surface = 1e-5;   // 2-d quadrature, relative
  double lattice = 1e-8;   // lattice membership
  double subspace = 1e-10; // rank decisions
};

} // namespace hypreg
