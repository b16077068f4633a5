#pragma once
#include <cmath>
#include <limits>

namespace submono {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr const char* kVersion = "0.1.0";

// Extended arithmetic on [0, +inf] used everywhere pointwise expressions are
// evaluated.  The conventions are the usual measure-theoretic ones:
//   0 * inf = 0,   0/0 = 0,   inf/inf = 0,   x/inf = 0,   x/0 = inf (x > 0),
//   exp(log 0) = 0.
namespace ext {

inline double mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline double div(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(b)) return 0.0;
  if (b == 0.0) return kInf;
  return a / b;
}

// pow on [0, inf] with 0^0 = inf^0 = 1.
inline double pow(double base, double e) {
  if (e == 0.0) return 1.0;
  if (base == 0.0) return e > 0.0 ? 0.0 : kInf;
  if (std::isinf(base)) return e > 0.0 ? kInf : 0.0;
  return std::pow(base, e);
}

inline double log(double x) { return std::log(x); }   // log(0) = -inf
inline double exp(double x) { return std::exp(x); }   // exp(-inf) = 0

} // namespace ext
} // namespace submono
