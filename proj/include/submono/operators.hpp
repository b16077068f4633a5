#pragma once
#include <functional>
#include <memory>
#include <string>

#include "submono/funcspace.hpp"

namespace submono {

struct NotStrictlyPositive : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedPhi : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lazy pointwise evaluator: downstream functionals choose their own
// quadrature nodes; breakpoints are hint cuts for panel placement.
struct PointwiseFn {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
  std::string provenance;
  double operator()(double t) const { return eval(t); }
};

PointwiseFn hardy_avg(const TestFunction& f, const Weight& w);  // (1/V)∫_0^t f v
PointwiseFn copson(const TestFunction& f, const Weight& w);     // ∫_t^∞ f v/V
PointwiseFn geo_mean(const TestFunction& f, const Weight& w);   // exp((1/V)∫_0^t ln f · v)
PointwiseFn harm_mean(const TestFunction& f, const Weight& w, double r);  // (V/∫_0^t f^{-1}v)^r
PointwiseFn phi_mean(const TestFunction& f, const Weight& w, const Phi& phi);

// geometric mean of an arbitrary positive pointwise function (quadrature path)
PointwiseFn geo_mean_pointwise(const std::function<double(double)>& g,
                               const std::vector<double>& cuts, const Weight& w);

PointwiseFn as_pointwise(const TestFunction& f);
PointwiseFn constant_one();

// Cumulative evaluator for a pointwise integrand with cached edge values;
// exact per-cell closed forms where the supplied exact integrator yields one.
class CumulativeEval {
public:
  // exact_cell(i, a, b) returns the integral over (a,b) inside segment i, or
  // NaN to request quadrature.  integrand used for the quadrature fallback.
  CumulativeEval(std::function<double(double)> integrand, std::vector<double> edges,
                 std::function<double(std::size_t, double, double)> exact_cell);
  double prefix(double t) const;  // ∫_0^t; +inf legal, -inf never (signed ok)
  const std::vector<double>& edges() const { return edges_; }

private:
  double cell(std::size_t i, double a, double b, double scale = 0.0) const;
  std::function<double(double)> integrand_;
  std::vector<double> edges_;  // 0 = e_0 < ... < e_k (finite); beyond e_k cells are computed per call
  std::function<double(std::size_t, double, double)> exact_;
  std::vector<double> cum_;
};

} // namespace submono
