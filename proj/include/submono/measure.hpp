#pragma once
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "submono/piecewise.hpp"

namespace submono {

struct IntegralResult {
  double value = 0.0;
  enum class Method { ClosedForm, Quadrature } method = Method::ClosedForm;
  double error = 0.0;
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what, double partial_ = 0.0)
      : std::runtime_error(what), partial(partial_) {}
  double partial;
};

// Weight on (0, inf): piecewise power-law density v(t) = c_i t^{gamma_i},
// strictly positive, with V(t) = ∫_0^t v finite for every finite t.
class Weight {
public:
  // interior breakpoints 0 < b_1 < ... < b_{k-1} < inf; one (c, gamma) per segment
  Weight(std::vector<double> interior_edges, std::vector<Monomial> segments);

  static Weight one() { return Weight({}, {Monomial{1.0, 0.0}}); }
  static Weight power(double c, double gamma) { return Weight({}, {Monomial{c, gamma}}); }

  double density(double t) const { return v_(t); }
  const PiecewiseFn& density_fn() const { return v_; }
  const std::vector<double>& edges() const { return v_.edges(); }
  const Monomial& segment(std::size_t i) const { return v_.terms(i)[0]; }
  std::size_t segment_count() const { return v_.segment_count(); }

  double primitive(double t) const;            // V(t), t in [0, inf]
  double primitive_inverse(double y) const;    // min { t : V(t) = y }
  double total() const { return Vedge_.back(); }  // V(inf)
  double edge_primitive(std::size_t i) const { return Vedge_[i]; }

private:
  PiecewiseFn v_;
  std::vector<double> Vedge_;  // V at every edge; Vedge_.back() = V(inf)
};

// ∫_a^b V(s)^alpha v(s) ds, exact (dV = v dt); divergence is a legal inf.
IntegralResult power_moment(const Weight& w, double alpha, double a, double b);

// V(t)^a where t may be deep enough that t^{gamma+1} underflows; on the
// first cell V is the pure power c t^{gamma+1}/(gamma+1), so going through
// the log keeps a representable result representable instead of producing
// pow(0, a<0) = inf.
double primitive_pow(const Weight& w, double t, double a);

// ∫_0^t ln(V(s)) v(s) ds = V(t)(ln V(t) - 1); plain real (may be negative).
double log_moment(const Weight& w, double t);

// Adaptive double-exponential quadrature between breakpoints; the infinite
// endpoint is mapped by t = L + exp(pi/2 sinh u).  Nonnegative integrands
// only; a pointwise +inf value makes the result +inf.  Throws NonConvergence
// when the error estimate will not settle within the level budget.  `scale`
// is the magnitude the caller will combine the result with: the error target
// becomes tol * max(|integral|, scale), so a sliver of a much larger total
// is not held to an unreachable relative tolerance of its own value.
IntegralResult integrate(const std::function<double(double)>& g, double a, double b,
                         double tol = 1e-10, std::vector<double> hints = {},
                         double scale = 0.0);

} // namespace submono
