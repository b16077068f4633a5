#include "submono/operators.hpp"

#include <algorithm>
#include <cmath>

namespace submono {

namespace {

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

std::vector<double> merged_finite_edges(const TestFunction& f, const Weight& w) {
  auto e = merge_edges(f.fn.edges(), w.edges());
  e.pop_back();  // drop inf
  return e;
}

// dominant exponent of a monomial sum near zero (smallest) / infinity (largest)
double min_expo(const std::vector<Monomial>& terms) {
  double e = kInf;
  for (const auto& m : terms) e = std::min(e, m.expo);
  return e;
}
double max_expo(const std::vector<Monomial>& terms) {
  double e = -kInf;
  for (const auto& m : terms) e = std::max(e, m.expo);
  return e;
}

} // namespace

CumulativeEval::CumulativeEval(std::function<double(double)> integrand,
                               std::vector<double> edges,
                               std::function<double(std::size_t, double, double)> exact_cell)
    : integrand_(std::move(integrand)), edges_(std::move(edges)), exact_(std::move(exact_cell)) {
  cum_.assign(edges_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
    cum_[i + 1] = cum_[i] + cell(i, edges_[i], edges_[i + 1], std::abs(cum_[i]));
}

double CumulativeEval::cell(std::size_t i, double a, double b, double scale) const {
  if (b <= a) return 0.0;
  double ex = exact_ ? exact_(i, a, b) : quiet_nan();
  if (!std::isnan(ex)) return ex;
  return integrate(integrand_, a, b, 1e-11, {}, scale).value;
}

double CumulativeEval::prefix(double t) const {
  if (t <= 0.0) return 0.0;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  std::size_t icell = std::min(i, edges_.size() - 1);
  double base = cum_[icell];
  if (std::isinf(base)) return base;
  if (t == edges_[icell]) return base;
  return base + cell(icell, edges_[icell], t, std::abs(base));
}

PointwiseFn as_pointwise(const TestFunction& f) {
  PiecewiseFn fn = f.fn;
  std::vector<double> cuts(fn.edges().begin() + 1, fn.edges().end() - 1);
  return PointwiseFn{[fn](double t) { return fn(t); }, cuts, "testfn"};
}

PointwiseFn constant_one() {
  return PointwiseFn{[](double) { return 1.0; }, {}, "one"};
}

PointwiseFn hardy_avg(const TestFunction& f, const Weight& w) {
  auto P = std::make_shared<PrefixIntegral>(f.fn.times(w.density_fn()));
  Weight wc = w;
  TestFunction fc = f;
  auto cuts = merged_finite_edges(f, w);
  cuts.erase(cuts.begin());  // drop the leading 0
  return PointwiseFn{
      [P, wc, fc](double t) -> double {
        const double Pt = (*P)(t);
        const double V = wc.primitive(t);
        if (t > 0.0 && !std::isinf(Pt) && (Pt == 0.0 || V == 0.0) && !fc.fn.terms(0).empty()) {
          // underflow of t^{gamma+1}: on the first cell the average is
          // exactly c t^g (gamma+1)/(g + gamma + 1) for f's leading monomial
          const auto& terms = fc.fn.terms(0);
          const Monomial* lead = &terms[0];
          for (const auto& m : terms)
            if (m.expo < lead->expo) lead = &m;
          const double k = wc.segment(0).expo + 1.0;
          return std::exp(std::log(lead->coef) + lead->expo * std::log(t) +
                          std::log(k / (lead->expo + k)));
        }
        return ext::div(Pt, V);
      },
      cuts, "hardy_avg"};
}

namespace {

// Is V a pure power on segment i of w?  (so that v/V is again a monomial)
bool primitive_pure_on(const Weight& w, std::size_t i) {
  const Monomial& m = w.segment(i);
  if (m.expo <= -1.0) return false;
  double b = w.edges()[i];
  double head = (b == 0.0) ? 0.0 : m.coef * std::pow(b, m.expo + 1.0) / (m.expo + 1.0);
  return w.edge_primitive(i) == head;
}

struct CopsonState {
  CopsonState(TestFunction f_, Weight w_) : f(std::move(f_)), w(std::move(w_)) {}
  std::vector<double> edges;           // 0 .. e_m (finite)
  std::vector<double> suffix;          // suffix[i] = ∫_{e_i}^∞ q
  std::function<double(double)> q;     // integrand f v / V
  TestFunction f;
  Weight w;
  bool divergent = false;
};

} // namespace

PointwiseFn copson(const TestFunction& f, const Weight& w) {
  auto st = std::make_shared<CopsonState>(f, w);
  st->edges = merged_finite_edges(f, w);
  st->q = [fc = f, wc = w](double s) {
    return ext::div(ext::mul(fc(s), wc.density(s)), wc.primitive(s));
  };

  const std::size_t m = st->edges.size() - 1;  // last finite edge index
  // tail divergence by exponent analysis on (e_m, inf)
  const auto& ftail = f.fn.terms(f.fn.segment_count() - 1);
  double tail = 0.0;
  if (!ftail.empty()) {
    double gf = max_expo(ftail);
    double gv = w.segment(w.segment_count() - 1).expo;
    bool divergent = std::isinf(w.total()) ? (gf >= 0.0) : (gf + gv >= -1.0);
    if (divergent) {
      tail = kInf;
      st->divergent = true;
    } else if (primitive_pure_on(w, w.segment_count() - 1)) {
      const Monomial& vm = w.segment(w.segment_count() - 1);
      double k = vm.expo + 1.0;
      for (const auto& t : ftail)  // f v / V = c_f c_v s^{g+gv} / (c_v s^k / k)
        tail += mono_integral(Monomial{t.coef * k, t.expo - 1.0}, st->edges[m], kInf);
    } else {
      tail = integrate(st->q, st->edges[m], kInf, 1e-11).value;
    }
  }
  st->suffix.assign(st->edges.size(), 0.0);
  st->suffix[m] = tail;
  for (std::size_t i = m; i-- > 0;) {
    double a = st->edges[i], b = st->edges[i + 1];
    double mid = 0.5 * (a + b);
    double piece;
    std::size_t wi = w.density_fn().segment_index(mid);
    std::size_t fi = f.fn.segment_index(mid);
    if (primitive_pure_on(w, wi)) {
      const Monomial& vm = w.segment(wi);
      double k = vm.expo + 1.0;
      piece = 0.0;
      for (const auto& t : f.fn.terms(fi))
        piece += mono_integral(Monomial{t.coef * k, t.expo - 1.0}, a, b);
    } else if (f.fn.terms(fi).empty()) {
      piece = 0.0;
    } else {
      piece = integrate(st->q, a, b, 1e-11, {}, st->suffix[i + 1]).value;
    }
    st->suffix[i] = st->suffix[i + 1] + piece;
  }

  auto cuts = st->edges;
  cuts.erase(cuts.begin());
  return PointwiseFn{
      [st](double t) -> double {
        if (st->divergent) return kInf;
        if (t <= 0.0) return st->suffix.front();
        const auto& e = st->edges;
        if (t >= e.back()) {
          if (st->suffix.back() == 0.0) return 0.0;
          std::size_t fi = st->f.fn.segment_index(t * 2.0);
          std::size_t wi = st->w.density_fn().segment_index(t * 2.0);
          if (primitive_pure_on(st->w, wi)) {
            const Monomial& vm = st->w.segment(wi);
            double k = vm.expo + 1.0, val = 0.0;
            for (const auto& m2 : st->f.fn.terms(fi))
              val += mono_integral(Monomial{m2.coef * k, m2.expo - 1.0}, t, kInf);
            return val;
          }
          return integrate(st->q, t, kInf, 1e-11).value;
        }
        auto it = std::upper_bound(e.begin(), e.end(), t);
        std::size_t i = static_cast<std::size_t>(it - e.begin()) - 1;
        double b = e[i + 1];
        if (t == e[i]) return st->suffix[i];
        double mid = 0.5 * (t + b);
        std::size_t fi = st->f.fn.segment_index(mid);
        std::size_t wi = st->w.density_fn().segment_index(mid);
        double piece;
        if (primitive_pure_on(st->w, wi)) {
          const Monomial& vm = st->w.segment(wi);
          double k = vm.expo + 1.0;
          piece = 0.0;
          for (const auto& m2 : st->f.fn.terms(fi))
            piece += mono_integral(Monomial{m2.coef * k, m2.expo - 1.0}, t, b);
        } else if (st->f.fn.terms(fi).empty()) {
          piece = 0.0;
        } else {
          // the piece joins suffix[i+1]; its own relative accuracy is moot
          piece = integrate(st->q, t, b, 1e-11, {}, st->suffix[i + 1]).value;
        }
        return st->suffix[i + 1] + piece;
      },
      cuts, "copson"};
}

namespace {

// first point beyond which f vanishes on a set of positive measure
double first_zero_edge(const TestFunction& f) {
  for (std::size_t i = 0; i < f.fn.segment_count(); ++i)
    if (f.fn.terms(i).empty()) return f.fn.edges()[i];
  return kInf;
}

} // namespace

PointwiseFn geo_mean(const TestFunction& f, const Weight& w) {
  auto edges = merged_finite_edges(f, w);
  TestFunction fc = f;
  Weight wc = w;
  double zedge = first_zero_edge(f);
  auto exact = [fc, wc](std::size_t, double a, double b) -> double {
    double mid = (a == 0.0) ? 0.5 * b : 0.5 * (a + b);
    std::size_t fi = fc.fn.segment_index(mid);
    const auto& terms = fc.fn.terms(fi);
    if (terms.empty()) return -kInf;
    if (terms.size() != 1 || std::isinf(terms[0].coef))
      return std::numeric_limits<double>::quiet_NaN();
    const Monomial& vm = wc.segment(wc.density_fn().segment_index(mid));
    // ∫ (ln c + g ln s) v = ln(c)·∫v + g·∫ v ln s
    return std::log(terms[0].coef) * mono_integral(vm, a, b) +
           terms[0].expo * mono_log_integral(vm, a, b);
  };
  auto cum = std::make_shared<CumulativeEval>(
      [fc, wc](double s) { return std::log(fc(s)) * wc.density(s); }, edges, exact);
  auto cuts = edges;
  cuts.erase(cuts.begin());
  return PointwiseFn{
      [cum, wc, fc, zedge](double t) -> double {
        if (t <= 0.0) return 0.0;
        if (t > zedge)
          throw NotStrictlyPositive("geo_mean: f vanishes on a positive-measure subset of (0,t)");
        double L = cum->prefix(t);
        if (std::isinf(L)) return L > 0 ? kInf : 0.0;
        const double V = wc.primitive(t);
        if (V == 0.0) {
          // t^{gamma+1} underflowed, so L/V would be 0/0; at this depth only
          // the leading monomial of f survives and the ratio has the closed
          // form ln c + g (ln t - 1/(gamma+1))
          const auto& terms = fc.fn.terms(0);
          if (terms.empty()) return 0.0;
          const Monomial* lead = &terms[0];
          for (const auto& m : terms)
            if (m.expo < lead->expo) lead = &m;
          const double k = wc.segment(0).expo + 1.0;
          return std::exp(std::log(lead->coef) + lead->expo * (std::log(t) - 1.0 / k));
        }
        return std::exp(L / V);
      },
      cuts, "geo_mean"};
}

PointwiseFn geo_mean_pointwise(const std::function<double(double)>& g,
                               const std::vector<double>& cuts, const Weight& w) {
  std::vector<double> edges{0.0};
  for (double c : cuts)
    if (c > 0.0 && !std::isinf(c)) edges.push_back(c);
  for (std::size_t i = 1; i + 1 < w.edges().size(); ++i) edges.push_back(w.edges()[i]);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Weight wc = w;
  auto cum = std::make_shared<CumulativeEval>(
      [g, wc](double s) { return std::log(g(s)) * wc.density(s); }, edges, nullptr);
  auto hint = edges;
  hint.erase(hint.begin());
  return PointwiseFn{
      [cum, wc](double t) -> double {
        if (t <= 0.0) return 0.0;
        double L = cum->prefix(t);
        if (std::isinf(L)) return L > 0 ? kInf : 0.0;
        return std::exp(L / wc.primitive(t));
      },
      hint, "geo_mean_pointwise"};
}

namespace {

// prefix of f^theta · v (theta < 0 covers the harmonic case)
PointwiseFn power_mean(const TestFunction& f, const Weight& w, double theta, double outer_pow,
                       const char* name) {
  auto edges = merged_finite_edges(f, w);
  TestFunction fc = f;
  Weight wc = w;
  double zedge = first_zero_edge(f);

  // divergence of ∫_0 f^theta v by exponent analysis on the first cell
  // (near zero f is dominated by its smallest exponent term; the first
  // segment is nonempty whenever any evaluation point t <= zedge exists)
  bool div0 = false;
  if (!f.fn.terms(0).empty()) {
    double g0 = min_expo(f.fn.terms(0));
    div0 = wc.segment(0).expo + theta * g0 <= -1.0;
  }

  std::shared_ptr<CumulativeEval> cum;
  if (!div0) {
    auto exact = [fc, wc, theta](std::size_t, double a, double b) -> double {
      double mid = (a == 0.0) ? 0.5 * b : 0.5 * (a + b);
      std::size_t fi = fc.fn.segment_index(mid);
      const auto& terms = fc.fn.terms(fi);
      if (terms.empty()) return theta > 0.0 ? 0.0 : kInf;
      if (terms.size() != 1 || std::isinf(terms[0].coef))
        return std::numeric_limits<double>::quiet_NaN();
      const Monomial& vm = wc.segment(wc.density_fn().segment_index(mid));
      Monomial prod{std::pow(terms[0].coef, theta) * vm.coef, theta * terms[0].expo + vm.expo};
      return mono_integral(prod, a, b);
    };
    cum = std::make_shared<CumulativeEval>(
        [fc, wc, theta](double s) { return std::pow(fc(s), theta) * wc.density(s); }, edges,
        exact);
  }
  auto cuts = edges;
  cuts.erase(cuts.begin());
  bool harmonic = theta < 0.0;
  std::string msg = std::string(name) + ": f vanishes on a positive-measure subset of (0,t)";
  return PointwiseFn{
      [cum, fc, wc, div0, theta, outer_pow, harmonic, zedge, msg](double t) -> double {
        if (t <= 0.0) return 0.0;
        if (t > zedge) throw NotStrictlyPositive(msg);
        double P = div0 ? kInf : cum->prefix(t);
        double V = wc.primitive(t);
        if (!div0 && (P == 0.0 || V == 0.0) && !fc.fn.terms(0).empty()) {
          // t^{gamma+1} underflowed on one side of the ratio; on the first
          // cell P/V = c^theta t^{theta g} (gamma+1)/(theta g + gamma + 1)
          // with c, g from the leading monomial of f
          const auto& terms = fc.fn.terms(0);
          const Monomial* lead = &terms[0];
          for (const auto& m : terms)
            if (m.expo < lead->expo) lead = &m;
          const double k = wc.segment(0).expo + 1.0;
          const double lr = theta * (std::log(lead->coef) + lead->expo * std::log(t)) +
                            std::log(k / (theta * lead->expo + k));
          return std::exp((harmonic ? -lr : lr) * outer_pow);
        }
        if (harmonic)  // (V / ∫ f^{-1} v)^r with ∞/∞ and x/∞ treated as 0
          return ext::pow(ext::div(V, P), outer_pow);
        return ext::pow(ext::div(P, V), outer_pow);
      },
      cuts, name};
}

} // namespace

PointwiseFn harm_mean(const TestFunction& f, const Weight& w, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("harm_mean: r must be positive");
  return power_mean(f, w, -1.0, r, "harm_mean");
}

PointwiseFn phi_mean(const TestFunction& f, const Weight& w, const Phi& phi) {
  switch (phi.kind) {
    case Phi::Kind::Ln: {
      auto g = geo_mean(f, w);
      g.provenance = "phi_mean[ln]";
      return g;
    }
    case Phi::Kind::Reciprocal: {
      auto g = harm_mean(f, w, 1.0);
      g.provenance = "phi_mean[1/s]";
      return g;
    }
    case Phi::Kind::Power: {
      if (!(phi.theta > 0.0) || !(phi.theta < 1.0))
        throw UnsupportedPhi("phi_mean: power exponent must lie in (0,1)");
      auto g = power_mean(f, w, phi.theta, 1.0 / phi.theta, "phi_mean[s^theta]");
      return g;
    }
  }
  throw UnsupportedPhi("phi_mean: unknown phi");
}

} // namespace submono
