#pragma once
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "submono/extended.hpp"

namespace submono {

// One power-law term c * t^e.  Coefficients live in [0, +inf]; +inf marks a
// pointwise-infinite branch (e.g. the reciprocal of a vanishing function).
struct Monomial {
  double coef = 0.0;
  double expo = 0.0;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// exact antiderivative of a monomial over (x0, x1), 0 <= x0 < x1 <= inf
double mono_integral(const Monomial& m, double x0, double x1);
// exact value of ∫ coef * s^expo * ln(s) ds over (x0, x1), finite endpoints
double mono_log_integral(const Monomial& m, double x0, double x1);

// Piecewise function on (0, inf): finitely many segments, each a finite sum of
// monomials with nonnegative coefficients.  Closed under +, *, scaling by
// lambda >= 0, adding a nonnegative constant and truncation; exact powers and
// reciprocals are available on segments holding a single monomial.
class PiecewiseFn {
public:
  PiecewiseFn();  // the zero function
  PiecewiseFn(std::vector<double> edges, std::vector<std::vector<Monomial>> segments);

  static PiecewiseFn constant(double c);
  static PiecewiseFn power(double coef, double expo);
  // convenience: one monomial per segment, edges = {0, interior..., inf}
  static PiecewiseFn single(const std::vector<double>& interior_edges,
                            const std::vector<Monomial>& terms);

  double operator()(double t) const;

  const std::vector<double>& edges() const { return edges_; }
  std::size_t segment_count() const { return segs_.size(); }
  const std::vector<Monomial>& terms(std::size_t i) const { return segs_[i]; }
  std::size_t segment_index(double t) const;  // t in (edges[i], edges[i+1]]

  bool is_zero() const;
  bool single_term() const;          // at most one monomial per segment
  bool strictly_positive() const;    // positive on all of (0, inf)

  PiecewiseFn scaled(double lambda) const;  // lambda >= 0
  PiecewiseFn plus(const PiecewiseFn& g) const;
  PiecewiseFn plus_const(double c) const;   // c >= 0
  PiecewiseFn times(const PiecewiseFn& g) const;
  PiecewiseFn powed(double theta) const;    // needs single_term()
  PiecewiseFn reciprocal() const;           // needs single_term()
  PiecewiseFn truncated(double A) const;    // zero on (A, inf)

  bool operator==(const PiecewiseFn& o) const;

private:
  void normalize();
  std::vector<double> edges_;              // 0 = e_0 < ... < e_k = inf
  std::vector<std::vector<Monomial>> segs_;  // empty vector = zero segment
};

std::vector<double> merge_edges(const std::vector<double>& a, const std::vector<double>& b);

// Exact integral of a PiecewiseFn over prefixes (0, t]; +inf is a legal value.
class PrefixIntegral {
public:
  explicit PrefixIntegral(const PiecewiseFn& f);
  double operator()(double t) const;
  double total() const { return cum_.back(); }
  double between(double a, double b) const;  // ∫_a^b, needs finite prefixes

private:
  PiecewiseFn f_;
  std::vector<double> cum_;  // cumulative at every edge (cum_[0] = 0)
};

} // namespace submono
