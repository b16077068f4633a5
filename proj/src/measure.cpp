#include "submono/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace submono {

Weight::Weight(std::vector<double> interior_edges, std::vector<Monomial> segments) {
  if (segments.empty()) throw std::invalid_argument("weight: needs at least one segment");
  if (interior_edges.size() + 1 != segments.size())
    throw std::invalid_argument("weight: segment/edge count mismatch");
  for (double b : interior_edges)
    if (!(b > 0.0) || std::isinf(b)) throw std::invalid_argument("weight: bad breakpoint");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& m = segments[i];
    if (!(m.coef > 0.0) || std::isinf(m.coef) || std::isnan(m.expo))
      throw std::invalid_argument("weight: coefficients must be positive and finite");
    if (i == 0 && !(m.expo > -1.0))
      throw std::invalid_argument("weight: first exponent must exceed -1");
  }
  v_ = PiecewiseFn::single(interior_edges, segments);
  const auto& e = v_.edges();
  Vedge_.assign(e.size(), 0.0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    Vedge_[i + 1] = Vedge_[i] + mono_integral(v_.terms(i)[0], e[i], e[i + 1]);
}

double Weight::primitive(double t) const {
  if (t <= 0.0) return 0.0;
  if (std::isinf(t)) return Vedge_.back();
  std::size_t i = v_.segment_index(t);
  return Vedge_[i] + mono_integral(v_.terms(i)[0], v_.edges()[i], t);
}

double Weight::primitive_inverse(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= Vedge_.back()) return kInf;
  std::size_t i = 0;
  while (i + 2 < Vedge_.size() && Vedge_[i + 1] < y) ++i;
  const Monomial& m = v_.terms(i)[0];
  const double b = v_.edges()[i];
  const double rem = y - Vedge_[i];
  if (m.expo == -1.0) return b * std::exp(rem / m.coef);
  const double p = m.expo + 1.0;
  const double base = (b == 0.0) ? 0.0 : std::pow(b, p);
  const double x = base + rem * p / m.coef;
  if (!(x > 0.0)) return v_.edges()[i + 1];  // rounding pushed past the segment top
  return std::pow(x, 1.0 / p);
}

IntegralResult power_moment(const Weight& w, double alpha, double a, double b) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("power_moment: need 0 <= a < b");
  const double Va = w.primitive(a), Vb = w.primitive(b);
  double value;
  if (alpha == -1.0) {
    if (Va == 0.0 || std::isinf(Vb))
      value = kInf;
    else
      value = std::log(Vb / Va);
  } else if (alpha > -1.0) {
    const double hi = ext::pow(Vb, alpha + 1.0);
    value = std::isinf(hi) ? kInf : (hi - ext::pow(Va, alpha + 1.0)) / (alpha + 1.0);
  } else {
    const double lo = ext::pow(Va, alpha + 1.0);  // inf when Va == 0
    value = std::isinf(lo) ? kInf : (lo - ext::pow(Vb, alpha + 1.0)) / (-(alpha + 1.0));
  }
  return IntegralResult{value, IntegralResult::Method::ClosedForm, 0.0};
}

double log_moment(const Weight& w, double t) {
  if (!(t > 0.0) || std::isinf(t)) throw std::invalid_argument("log_moment: t in (0, inf)");
  const double V = w.primitive(t);
  return V * (std::log(V) - 1.0);
}

double primitive_pow(const Weight& w, double t, double a) {
  const double V = w.primitive(t);
  if (V == 0.0 && t > 0.0 && a != 0.0 && t <= w.edges()[1]) {
    const Monomial& m = w.segment(0);
    const double k = m.expo + 1.0;
    return std::exp(a * (std::log(m.coef / k) + k * std::log(t)));
  }
  return ext::pow(V, a);
}

namespace {

// One tanh-sinh pass over a finite panel (a, b).  Nodes are placed by their
// distance d*(b-a) from each endpoint with d = 1/(1+exp(pi*sinh(kh))), which
// stays accurate when d underflows toward an endpoint singularity.
struct PanelResult {
  double value;
  double error;
  bool hit_inf;
};

PanelResult tanh_sinh_panel(const std::function<double(double)>& g, double a, double b,
                            double tol, int max_level, double scale) {
  const double width = b - a;
  const double half = 0.5 * width;
  const double mid = 0.5 * (a + b);
  const double umax = 6.2;  // beyond this d underflows past double range

  // A panel a few hundred ulps wide has too few representable points for
  // refinement to mean anything; the midpoint rule is already position-exact
  // there, with the variation across the panel as the honest error bound.
  if (width <= 512.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
    double gm = g(mid);
    if (std::isnan(gm)) throw NonConvergence("integrand returned NaN");
    if (std::isinf(gm)) return {kInf, 0.0, true};
    double glo = g(a + 0.25 * width), ghi = g(b - 0.25 * width);
    if (std::isinf(glo) || std::isinf(ghi)) return {kInf, 0.0, true};
    double spread = std::max({glo, gm, ghi}) - std::min({glo, gm, ghi});
    return {gm * width, width * spread + 4e-16 * std::abs(gm) * width, false};
  }

  struct Hit {
    bool inf = false;
  };
  // Each side of a node pair is kept independently: near a singular endpoint
  // the inner node still carries mass after the opposite node has collided
  // with its boundary, and dropping it stalls convergence well above tol.
  struct LevelState {
    bool inf = false;
    int evaluated = 0;
  };
  auto add_nodes = [&](double u, double& sum, LevelState& st) {
    const double y = 1.5707963267948966 * std::sinh(u);
    const double d = 1.0 / (1.0 + std::exp(2.0 * y));
    if (d == 0.0) return false;  // all later nodes underflow too
    const double xlo = a + width * d;
    const double xhi = b - width * d;
    const double wgt = 1.5707963267948966 * std::cosh(u) * 4.0 * d * (1.0 - d);
    double c = 0.0;
    if (xlo > a) {
      double glo = g(xlo);
      if (std::isnan(glo)) throw NonConvergence("integrand returned NaN");
      if (std::isinf(glo)) {
        st.inf = true;
        return false;
      }
      c += glo;
      ++st.evaluated;
    }
    if (xhi < b) {
      double ghi = g(xhi);
      if (std::isnan(ghi)) throw NonConvergence("integrand returned NaN");
      if (std::isinf(ghi)) {
        st.inf = true;
        return false;
      }
      c += ghi;
      ++st.evaluated;
    }
    sum += wgt * c;
    return true;
  };

  double h = 1.0;
  double sum = 0.0;
  LevelState st;
  {
    double gm = g(mid);
    if (std::isnan(gm)) throw NonConvergence("integrand returned NaN");
    if (std::isinf(gm)) return {kInf, 0.0, true};
    sum = 1.5707963267948966 * gm;  // u = 0: wgt = (pi/2)*cosh(0)*4*(1/2)*(1/2)
    for (int k = 1; k * h <= umax; ++k)
      if (!add_nodes(k * h, sum, st)) break;
    if (st.inf) return {kInf, 0.0, true};
  }
  double prev = half * h * sum;
  double prev_err = kInf;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    st.evaluated = 0;
    for (int k = 1; k * h <= umax; k += 2)  // odd multiples = new nodes
      if (!add_nodes(k * h, sum, st)) break;
    if (st.inf) return {kInf, 0.0, true};
    double cur = half * h * sum;
    // same cutoff as the tail map: nothing finite in this domain gets close
    // to 1e150, so a partial sum that large is a divergent endpoint
    if (cur > 1e150) return {kInf, 0.0, true};
    double err = std::abs(cur - prev);
    if (st.evaluated == 0) {
      // every refinement node collided with the panel edges: the panel is at
      // floating-point resolution and no better estimate exists
      return {cur, err, false};
    }
    const double ref = std::max({std::abs(cur), scale, 1e-300});
    if (err <= tol * ref && level >= 2) return {cur, err, false};
    // noise floor: once the update is tiny relative to the value yet stops
    // contracting the way the map guarantees for smooth integrands, more
    // nodes only average rounding noise and the requested tol is unreachable
    if (level >= 4 && err <= 1e-10 * ref && err * 8.0 >= prev_err)
      return {cur, err, false};
    prev = cur;
    prev_err = err;
  }
  throw NonConvergence("quadrature did not settle", prev);
}

// Tail integral over (L, inf) via the exp-sinh map t = L + exp(pi/2 sinh u).
// Nodes reach t ~ 1e307, so a divergent tail overflows its node terms (or the
// running estimate) and is reported as infinite instead of stalling the way a
// rational map does, where nodes stop near t ~ 1/ulp long before any blow-up
// is visible.
PanelResult exp_sinh_tail(const std::function<double(double)>& g, double L,
                          double tol, int max_level, double scale) {
  const double umax = 6.9;  // exp argument overflows just past this

  struct LevelState {
    bool inf = false;
    int evaluated = 0;
  };
  // One node at u: returns false when deeper nodes on that side are futile
  // (t rounded onto L, or t past double range).
  auto add_node = [&](double u, double& sum, LevelState& st) {
    const double y = 1.5707963267948966 * std::sinh(u);
    const double ey = std::exp(y);
    const double t = L + ey;
    if (t <= L || std::isinf(t)) return false;
    double gt = g(t);
    if (std::isnan(gt)) throw NonConvergence("integrand returned NaN");
    // multiply ey last: cosh(u)*ey alone can overflow even when gt has
    // underflowed to an exact 0, and inf * 0 would poison the sum
    const double term = 1.5707963267948966 * std::cosh(u) * gt * ey;
    if (std::isinf(gt) || std::isinf(term)) {
      st.inf = true;
      return false;
    }
    sum += term;
    ++st.evaluated;
    return true;
  };

  double h = 1.0;
  double sum = 0.0;
  LevelState st;
  {
    double g0 = g(L + 1.0);
    if (std::isnan(g0)) throw NonConvergence("integrand returned NaN");
    if (std::isinf(g0)) return {kInf, 0.0, true};
    sum = 1.5707963267948966 * g0;  // u = 0: cosh(0) * e^0 = 1
    for (double sgn : {1.0, -1.0}) {
      for (int k = 1; k * h <= umax; ++k)
        if (!add_node(sgn * k * h, sum, st)) break;
      if (st.inf) return {kInf, 0.0, true};
    }
  }
  double prev = h * sum;
  double prev_err = kInf;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    st.evaluated = 0;
    for (double sgn : {1.0, -1.0}) {
      for (int k = 1; k * h <= umax; k += 2)  // odd multiples = new nodes
        if (!add_node(sgn * k * h, sum, st)) break;
      if (st.inf) return {kInf, 0.0, true};
    }
    double cur = h * sum;
    // No finite quantity in this domain comes anywhere near 1e150; a partial
    // sum that large means the tail carries infinite mass but grows too
    // slowly to overflow a single node term.
    if (cur > 1e150) return {kInf, 0.0, true};
    double err = std::abs(cur - prev);
    if (st.evaluated == 0) return {cur, err, false};
    const double ref = std::max({std::abs(cur), scale, 1e-300});
    if (err <= tol * ref && level >= 2) return {cur, err, false};
    // same noise-floor stop as the finite panels
    if (level >= 4 && err <= 1e-10 * ref && err * 8.0 >= prev_err)
      return {cur, err, false};
    prev = cur;
    prev_err = err;
  }
  throw NonConvergence("quadrature did not settle", prev);
}

} // namespace

IntegralResult integrate(const std::function<double(double)>& g, double a, double b,
                         double tol, std::vector<double> hints, double scale) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("integrate: need 0 <= a < b");
  std::vector<double> cuts{a};
  std::sort(hints.begin(), hints.end());
  for (double h : hints)
    if (h > a && h < b && !std::isinf(h) && h != cuts.back()) cuts.push_back(h);

  double total = 0.0, err = 0.0;
  const int max_level = 11;
  bool infinite_tail = std::isinf(b);
  if (!infinite_tail) cuts.push_back(b);

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = tanh_sinh_panel(g, cuts[i], cuts[i + 1], 0.25 * tol, max_level, scale);
    if (r.hit_inf) return {kInf, IntegralResult::Method::Quadrature, 0.0};
    total += r.value;
    err += r.error;
  }
  if (infinite_tail) {
    auto r = exp_sinh_tail(g, cuts.back(), 0.25 * tol, max_level, scale);
    if (r.hit_inf) return {kInf, IntegralResult::Method::Quadrature, 0.0};
    total += r.value;
    err += r.error;
  }
  return {total, IntegralResult::Method::Quadrature, err};
}

} // namespace submono
