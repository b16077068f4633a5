#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "submono/ids.hpp"
#include "submono/measure.hpp"
#include "submono/rng.hpp"

namespace submono {

struct NotPositiveOnPrefix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedStatement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonnegative measurable function modeled as a piecewise power-law (segments
// may vanish; values in [0, inf]).
struct TestFunction {
  PiecewiseFn fn;
  bool strictly_positive = false;

  TestFunction() = default;
  explicit TestFunction(PiecewiseFn f) : fn(std::move(f)) {
    strictly_positive = fn.strictly_positive();
  }

  double operator()(double t) const { return fn(t); }
  const std::vector<double>& edges() const { return fn.edges(); }

  TestFunction pow(double theta) const { return TestFunction(fn.powed(theta)); }
  TestFunction scale(double lambda) const { return TestFunction(fn.scaled(lambda)); }
  TestFunction reciprocal() const { return TestFunction(fn.reciprocal()); }
  TestFunction truncate(double A) const { return TestFunction(fn.truncated(A)); }
  TestFunction add_const(double lambda) const { return TestFunction(fn.plus_const(lambda)); }
  TestFunction plus(const TestFunction& g) const { return TestFunction(fn.plus(g.fn)); }
};

struct GeneratorProfile {
  std::uint64_t seed = 1;
  int min_segments = 1;
  int max_segments = 4;
  double expo_lo = -0.3;
  double expo_hi = 1.5;
  double coef_lo = 0.25;
  double coef_hi = 4.0;
  double decay_min = 2.5;   // last nonzero tail segment decays at least this fast
  double zero_prob = 0.15;  // chance a segment is identically zero
  double break_lo = 0.05;
  double break_hi = 20.0;
};

TestFunction random_testfn(const GeneratorProfile& profile);

// Near-extremizer f_eps for the given statement: V^{sigma+eps} cut to {V <= 1},
// where sigma is the critical exponent making the right-hand side marginally
// divergent at zero.  Exact when the weight is a single power; otherwise a
// log-log fit on a refinement grid.
TestFunction extremal_family(StatementId id, const Params& params, const Weight& w, double eps);

// critical exponent sigma for statements admitting one
std::optional<double> extremal_sigma(StatementId id, const Params& params);

// Strict positivization of Remark-A type: returns g >= f, strictly positive,
// with (∫ g^p v)^{1/p} <= (1+eps)(∫ f^p v)^{1/p}.
TestFunction positivize(const TestFunction& f, double A, double eps, const Weight& w, double p);

// Piecewise power-law fit of a positive pointwise function by log-log
// interpolation on a geometric grid; exact wherever the input is a power.
struct PowerFit {
  PiecewiseFn fn;
  double residual;  // max relative mismatch at probe points
};
PowerFit fit_piecewise_power(const std::function<double(double)>& g, double t_lo, double t_hi,
                             int points_per_decade = 32, std::vector<double> cuts = {});

} // namespace submono
