#include "submono/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace submono {

namespace {

double lq_constant(double q) { return q >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / q - 1.0); }

std::vector<double> finite_positive(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs)
    if (x > 0.0 && !std::isinf(x)) out.push_back(x);
  return out;
}

std::vector<double> merged_breaks(const PointwiseFn& g, const PiecewiseFn& w) {
  std::vector<double> out = finite_positive(g.breakpoints);
  for (std::size_t i = 1; i + 1 < w.edges().size(); ++i) out.push_back(w.edges()[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Deterministic grid for weighted sups: breakpoints plus a geometric sweep.
// Piecewise-power data attains its sup at segment edges (each segment is
// log-convex in ln t), so the sweep only guards genuinely curved inputs.
double grid_sup(const PointwiseFn& g, const PiecewiseFn& mult) {
  std::vector<double> nodes = merged_breaks(g, mult);
  for (int k = 0; k <= 16 * 16; ++k)
    nodes.push_back(1e-8 * std::pow(10.0, 16.0 * k / (16.0 * 16.0)));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double best = 0.0;
  for (double t : nodes) {
    double val = ext::mul(g(t), mult(t));
    if (val > best) best = val;
    if (std::isinf(best)) break;
  }
  return best;
}

// sup of a piecewise power-law over (0, inf), exact via edge evaluation
double edge_sup(const PiecewiseFn& w) {
  double best = std::max(w(0.0), w(kInf));
  for (std::size_t i = 1; i + 1 < w.edges().size(); ++i)
    best = std::max(best, w(w.edges()[i]));
  // interior edge values approached from the right as well
  for (std::size_t i = 1; i + 1 < w.edges().size(); ++i) {
    double e = w.edges()[i];
    best = std::max(best, w(std::nextafter(e, kInf)));
  }
  return best;
}

double eval_lq(double q, const PiecewiseFn& outer, const PointwiseFn& g, double tol) {
  if (std::isinf(q)) return grid_sup(g, outer);
  auto hints = merged_breaks(g, outer);
  auto r = integrate(
      [&](double t) { return ext::mul(ext::pow(g(t), q), outer(t)); }, 0.0, kInf, tol, hints);
  return ext::pow(r.value, 1.0 / q);
}

PointwiseFn iterated_inner(const Functional& rho, const PointwiseFn& g) {
  std::vector<double> edges{0.0};
  for (double e : merged_breaks(g, rho.inner)) edges.push_back(e);
  double rr = rho.r;
  PiecewiseFn win = rho.inner;
  PointwiseFn gc = g;
  auto cum = std::make_shared<CumulativeEval>(
      [gc, win, rr](double s) { return ext::mul(ext::pow(gc(s), rr), win(s)); }, edges,
      nullptr);
  return PointwiseFn{
      [cum, rr](double t) { return ext::pow(cum->prefix(t), 1.0 / rr); }, edges, "iterated-inner"};
}

PointwiseFn derived_compose(const Functional& rho, const PointwiseFn& g) {
  PointwiseFn gc = g;
  PointwiseFn fac = rho.factor;
  double m = rho.m;
  std::vector<double> breaks = finite_positive(g.breakpoints);
  for (double b : fac.breakpoints)
    if (b > 0.0 && !std::isinf(b)) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return PointwiseFn{
      [gc, fac, m](double t) { return ext::mul(ext::pow(gc(t), m), fac(t)); }, breaks,
      "derived-arg"};
}

double derived_constant(double base_K, double m) {
  if (m >= 1.0) return std::pow(std::pow(2.0, m - 1.0) * base_K, 1.0 / m);
  return std::pow(2.0 * base_K, 1.0 / m) / 2.0;
}

} // namespace

const char* kind_name(Functional::Kind k) {
  switch (k) {
    case Functional::Kind::WeightedLq: return "weighted_lq";
    case Functional::Kind::SupForm: return "sup_form";
    case Functional::Kind::Iterated: return "iterated";
    case Functional::Kind::DerivedT3: return "derived_t3";
    case Functional::Kind::DerivedT4: return "derived_t4";
  }
  return "?";
}

Functional make_weighted_lq(double q, PiecewiseFn outer_weight) {
  if (!(q > 0.0)) throw std::invalid_argument("make_weighted_lq: q must be positive");
  Functional rho;
  rho.kind = Functional::Kind::WeightedLq;
  rho.q = q;
  rho.outer = std::move(outer_weight);
  rho.K = std::isinf(q) ? 1.0 : lq_constant(q);
  rho.label = "weighted_lq";
  return rho;
}

Functional make_sup_form(PiecewiseFn multiplier, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("make_sup_form: q must be positive");
  Functional rho;
  rho.kind = Functional::Kind::SupForm;
  rho.q = q;
  rho.outer = std::move(multiplier);
  rho.K = std::isinf(q) ? 1.0 : lq_constant(q);
  rho.label = "sup_form";
  return rho;
}

Functional make_iterated(double r, PiecewiseFn inner_weight, double q, PiecewiseFn outer_weight) {
  if (!(r > 0.0) || !(q > 0.0)) throw std::invalid_argument("make_iterated: exponents positive");
  Functional rho;
  rho.kind = Functional::Kind::Iterated;
  rho.r = r;
  rho.inner = std::move(inner_weight);
  rho.q = q;
  rho.outer = std::move(outer_weight);
  rho.K = lq_constant(r) * (std::isinf(q) ? 1.0 : lq_constant(q));
  rho.label = "iterated";
  return rho;
}

Functional derived_t3(Functional base, double m, PointwiseFn w) {
  if (!(m > 0.0)) throw std::invalid_argument("derived_t3: m must be positive");
  Functional rho;
  rho.kind = Functional::Kind::DerivedT3;
  rho.m = m;
  rho.K = derived_constant(base.K, m);
  rho.factor = std::move(w);
  rho.base = std::make_shared<Functional>(std::move(base));
  rho.label = "derived_t3";
  return rho;
}

Functional derived_t4(Functional base, double m, PointwiseFn U, PointwiseFn Utilde) {
  if (!(m > 0.0)) throw std::invalid_argument("derived_t4: m must be positive");
  Functional rho;
  rho.kind = Functional::Kind::DerivedT4;
  rho.m = m;
  rho.K = derived_constant(base.K, m);
  PointwiseFn Uc = std::move(U), Tc = std::move(Utilde);
  std::vector<double> breaks = Uc.breakpoints;
  breaks.insert(breaks.end(), Tc.breakpoints.begin(), Tc.breakpoints.end());
  rho.factor = PointwiseFn{
      [Uc, Tc](double t) { return ext::div(Uc(t), Tc(t)); }, breaks, "U/Utilde"};
  rho.base = std::make_shared<Functional>(std::move(base));
  rho.label = "derived_t4";
  return rho;
}

double apply(const Functional& rho, const PointwiseFn& g, double tol) {
  switch (rho.kind) {
    case Functional::Kind::WeightedLq:
    case Functional::Kind::SupForm:
      return eval_lq(rho.q, rho.outer, g, tol);
    case Functional::Kind::Iterated:
      return eval_lq(rho.q, rho.outer, iterated_inner(rho, g), tol);
    case Functional::Kind::DerivedT3:
    case Functional::Kind::DerivedT4:
      return ext::pow(apply(*rho.base, derived_compose(rho, g), tol), 1.0 / rho.m);
  }
  throw std::logic_error("apply: unknown functional kind");
}

double apply(const Functional& rho, const TestFunction& f, double tol) {
  return apply(rho, as_pointwise(f), tol);
}

double rho_one(const Functional& rho) {
  switch (rho.kind) {
    case Functional::Kind::WeightedLq:
    case Functional::Kind::SupForm:
      if (std::isinf(rho.q)) return edge_sup(rho.outer);
      return ext::pow(PrefixIntegral(rho.outer).total(), 1.0 / rho.q);
    default:
      return apply(rho, constant_one(), 1e-10);
  }
}

AxiomReport check_axioms(const Functional& rho, const GeneratorProfile& profile, int n) {
  if (n < 1) throw std::invalid_argument("check_axioms: n must be >= 1");
  AxiomReport rep;
  rep.n = n;
  rep.seed = profile.seed;
  Rng rng(profile.seed);
  const double rho1 = rho_one(rho);
  const double tol = 1e-10;
  for (int trial = 0; trial < n; ++trial) {
    GeneratorProfile pf = profile;
    pf.seed = rng.raw();
    GeneratorProfile ph = profile;
    ph.seed = rng.raw();
    double lambda = rng.log_uniform(1e-2, 1e2);
    TestFunction f = random_testfn(pf);
    TestFunction g = f.plus(random_testfn(ph));

    double rf = apply(rho, f, tol);
    double rg = apply(rho, g, tol);
    if (rf > rg * (1.0 + 1e-9) + 1e-12) ++rep.lattice_violations;

    if (!std::isinf(rho1) && std::isfinite(rf)) {
      double rf1 = apply(rho, f.add_const(1.0), tol);
      double denom = rf + rho1;
      if (denom > 0.0 && std::isfinite(rf1))
        rep.K_quasi = std::max(rep.K_quasi, rf1 / denom);
    }
    if (std::isfinite(rf) && rf > 0.0) {
      double rl = apply(rho, f.scale(lambda), tol);
      if (std::isfinite(rl)) rep.K_weak = std::max(rep.K_weak, rl / (lambda * rf));
    }
  }
  return rep;
}

double general_lambda_check(const Functional& rho, double K, const TestFunction& f, double c,
                            double lambda) {
  if (!(c > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("general_lambda_check: c and lambda must be positive");
  double lhs = K * K * K * c * apply(rho, f) + K * K * lambda * rho_one(rho);
  double rhs = apply(rho, f.scale(c).add_const(lambda));
  return lhs - rhs;
}

} // namespace submono
