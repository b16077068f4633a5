#include "submono/statements.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace submono {

namespace {

std::vector<double> finite_interior(const std::vector<double>& edges) {
  std::vector<double> out;
  for (double e : edges)
    if (e > 0.0 && !std::isinf(e)) out.push_back(e);
  return out;
}

std::vector<double> merged_interior(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = finite_interior(a);
  for (double e : finite_interior(b)) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// V restricted to segment i is the plain monomial primitive (no offset from
// earlier segments), so powers of V stay closed under integration there
bool primitive_pure(const Weight& w, std::size_t i) {
  const Monomial& m = w.segment(i);
  const double a = w.edges()[i];
  if (a == 0.0) return true;
  if (m.expo <= -1.0) return false;
  return w.edge_primitive(i) == m.coef * std::pow(a, m.expo + 1.0) / (m.expo + 1.0);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void require(std::vector<Violation>& out, bool ok, const char* field, std::string text) {
  if (!ok) out.push_back({field, std::move(text)});
}

// shared parameter checks ------------------------------------------------

void check_alpha_window(std::vector<Violation>& out, double alpha, double pp) {
  const double lo = std::max(-1.0 / pp, -1.0 + 1.0 / pp);  // max{-1/p, -1/p'}
  require(out, alpha > lo, "alpha",
          "alpha = " + fmt(alpha) + " must exceed max{-1/p, -1/p'} = " + fmt(lo));
}

void check_beta_window(std::vector<Violation>& out, double beta, double r) {
  const double rconj_inv = (r == 1.0) ? 0.0 : 1.0 - 1.0 / r;  // 1/r'
  std::string text = "beta = " + fmt(beta) + " must exceed -1/r' = " + fmt(-rconj_inv);
  if (beta > -1.0 && beta <= -rconj_inv)
    text += " (literal constraint; the downstream argument only uses beta > -1)";
  require(out, beta > -rconj_inv, "beta", std::move(text));
}

void check_balance(std::vector<Violation>& out, double lhs_combo, double r, const char* field,
                   const std::string& lhs_desc) {
  require(out, lhs_combo < r - 1.0, field,
          lhs_desc + " = " + fmt(lhs_combo) + " must be less than r - 1 = " + fmt(r - 1.0));
}

const Weight& second_weight(const StatementInstance& inst) {
  if (!inst.u) throw std::invalid_argument("statement requires a second weight u");
  return *inst.u;
}

} // namespace

Quantifier quantifier(StatementId id) {
  switch (id) {
    case StatementId::T1_ii:
    case StatementId::T1_iv:
    case StatementId::T1_vii:
    case StatementId::T3_ii:
    case StatementId::T3_iii:
      return Quantifier::ForAllParams;
    case StatementId::T1_iii:
    case StatementId::T1_v:
    case StatementId::T1_viii:
      return Quantifier::ExistsParams;
    default:
      return Quantifier::None;
  }
}

std::vector<Violation> validate(const StatementInstance& inst) {
  std::vector<Violation> out;
  const Params& par = inst.params;
  switch (inst.id) {
    case StatementId::T1_i:
    case StatementId::T1_vi:
      require(out, par.p > 1.0, "p", "p = " + fmt(par.p) + " must lie in (1, inf)");
      break;
    case StatementId::T1_ii:
    case StatementId::T1_iii:
      require(out, par.p > 1.0, "p", "p = " + fmt(par.p) + " must lie in (1, inf)");
      require(out, par.r >= 1.0, "r", "r = " + fmt(par.r) + " must lie in [1, inf)");
      check_alpha_window(out, par.alpha, par.p);
      break;
    case StatementId::T1_iv:
    case StatementId::T1_v:
      require(out, par.p > 1.0, "p", "p = " + fmt(par.p) + " must lie in (1, inf)");
      require(out, par.r >= 1.0, "r", "r = " + fmt(par.r) + " must lie in [1, inf)");
      check_alpha_window(out, par.alpha, par.p);
      check_beta_window(out, par.beta, par.r);
      check_balance(out, par.alpha * par.p - par.beta * par.r, par.r, "alpha,beta",
                    "alpha*p - beta*r");
      break;
    case StatementId::T1_vii:
    case StatementId::T1_viii:
      require(out, par.p > 1.0, "p", "p = " + fmt(par.p) + " must lie in (1, inf)");
      require(out, par.r > 0.0, "r", "r = " + fmt(par.r) + " must lie in (0, inf)");
      break;
    case StatementId::T1_ix:
      require(out, par.p > 1.0, "p", "p = " + fmt(par.p) + " must lie in (1, inf)");
      if (par.phi.kind == Phi::Kind::Power)
        require(out, par.phi.theta > 0.0 && par.phi.theta < 1.0, "phi",
                "power-type phi needs theta in (0, 1), got " + fmt(par.phi.theta));
      break;
    case StatementId::T3_i:
      require(out, par.p > 0.0, "p", "p = " + fmt(par.p) + " must lie in (0, inf)");
      require(out, inst.u.has_value(), "u", "a second weight u is required");
      break;
    case StatementId::T3_ii:
      require(out, par.p > 0.0, "p", "p = " + fmt(par.p) + " must lie in (0, inf)");
      require(out, inst.u.has_value(), "u", "a second weight u is required");
      require(out, par.r >= 1.0, "r", "r = " + fmt(par.r) + " must lie in [1, inf)");
      require(out, par.m >= 1.0 / par.p, "m",
              "m = " + fmt(par.m) + " must be at least 1/p = " + fmt(1.0 / par.p));
      check_alpha_window(out, par.alpha, par.m * par.p);
      break;
    case StatementId::T3_iii:
      require(out, par.p > 0.0, "p", "p = " + fmt(par.p) + " must lie in (0, inf)");
      require(out, inst.u.has_value(), "u", "a second weight u is required");
      require(out, par.r >= 1.0, "r", "r = " + fmt(par.r) + " must lie in [1, inf)");
      require(out, par.m > 1.0 / par.p, "m",
              "m = " + fmt(par.m) + " must exceed 1/p = " + fmt(1.0 / par.p));
      check_alpha_window(out, par.alpha, par.m * par.p);
      require(out, par.beta > -1.0, "beta", "beta = " + fmt(par.beta) + " must exceed -1");
      check_balance(out, par.alpha * par.m * par.p - par.beta * par.r, par.r, "alpha,beta",
                    "alpha*m*p - beta*r");
      break;
    case StatementId::T4_i:
    case StatementId::T4_ii:
    case StatementId::T4_iii:
      require(out, par.p > 0.0, "p", "p = " + fmt(par.p) + " must lie in (0, inf)");
      require(out, par.m > 0.0, "m", "m = " + fmt(par.m) + " must lie in (0, inf)");
      require(out, par.m * par.p > 1.0, "m,p",
              "m*p = " + fmt(par.m * par.p) + " must exceed 1");
      require(out, par.alpha > -1.0, "alpha", "alpha = " + fmt(par.alpha) + " must exceed -1");
      require(out, par.beta > -1.0, "beta", "beta = " + fmt(par.beta) + " must exceed -1");
      require(out, inst.u.has_value(), "u", "a second weight u is required");
      break;
  }
  return out;
}

// left-hand sides ----------------------------------------------------------

PointwiseFn statement_argument(const StatementInstance& inst, const TestFunction& f) {
  const Params& par = inst.params;
  const Weight& v = inst.v;
  switch (inst.id) {
    case StatementId::T1_i:
      return hardy_avg(f, v);
    case StatementId::T1_ii:
    case StatementId::T1_iii: {
      PointwiseFn C = copson(f, v);
      const double e = par.r / par.p, a = par.alpha;
      Weight vc = v;
      auto eval = [C, vc, e, a](double t) {
        return ext::mul(primitive_pow(vc, t, a), ext::pow(C(t), e));
      };
      return {eval, C.breakpoints, "copson-power"};
    }
    case StatementId::T1_iv:
    case StatementId::T1_v: {
      PointwiseFn H = hardy_avg(f, v);
      const double e = par.r / par.p;
      const double a = par.alpha - par.beta * par.r / par.p;
      Weight vc = v;
      auto eval = [H, vc, e, a](double t) {
        return ext::mul(primitive_pow(vc, t, a), ext::pow(H(t), e));
      };
      return {eval, H.breakpoints, "avg-power"};
    }
    case StatementId::T1_vi:
      return geo_mean(f, v);
    case StatementId::T1_vii:
    case StatementId::T1_viii:
      return harm_mean(f, v, par.r);
    case StatementId::T1_ix:
      return phi_mean(f, v, par.phi);
    case StatementId::T3_i:
      return geo_mean(f, second_weight(inst));
    case StatementId::T3_ii: {
      const Weight& u = second_weight(inst);
      PointwiseFn C = copson(f, u);
      PointwiseFn w3 = t3_derived_weight(u, v, par.p);
      const double e = par.r / par.p, a = par.alpha * par.m;
      Weight uc = u;
      auto eval = [C, w3, uc, e, a](double t) {
        return ext::mul(ext::mul(primitive_pow(uc, t, a), ext::pow(C(t), e)), w3(t));
      };
      return {eval, merged_interior(C.breakpoints, w3.breakpoints), "copson-derived"};
    }
    case StatementId::T3_iii: {
      const Weight& u = second_weight(inst);
      // the inner average mixes the weights: prefix of f v, normalized by U
      PiecewiseFn fv = f.fn.times(v.density_fn());
      PrefixIntegral P(fv);
      PointwiseFn w3 = t3_derived_weight(u, v, par.p);
      const double e = par.r / par.p;
      const double a = par.alpha * par.m - par.beta * par.r / par.p;
      // leading first-cell monomial of f v, for the deep-t fallback below
      bool lead_ok = !fv.terms(0).empty();
      Monomial lead{1.0, 0.0};
      if (lead_ok) {
        lead = fv.terms(0)[0];
        for (const auto& mo : fv.terms(0))
          if (mo.expo < lead.expo) lead = mo;
        lead_ok = lead.expo > -1.0;
      }
      Weight uc = u;
      auto eval = [P, w3, uc, e, a, lead, lead_ok](double t) {
        const double U = uc.primitive(t);
        const double Pt = P(t);
        if ((U == 0.0 || Pt == 0.0) && t > 0.0 && lead_ok && t <= uc.edges()[1]) {
          // underflow depth: U and the prefix are both pure powers here
          const Monomial& mu = uc.segment(0);
          const double ku = mu.expo + 1.0;
          const double lU = std::log(mu.coef / ku) + ku * std::log(t);
          const double lP =
              std::log(lead.coef / (lead.expo + 1.0)) + (lead.expo + 1.0) * std::log(t);
          return ext::mul(std::exp(a * lU + e * (lP - lU)), w3(t));
        }
        return ext::mul(ext::mul(ext::pow(U, a), ext::pow(ext::div(Pt, U), e)), w3(t));
      };
      std::vector<double> cuts =
          merged_interior(merged_interior(f.edges(), v.edges()), u.edges());
      return {eval, cuts, "mixed-avg-derived"};
    }
    case StatementId::T4_i:
      return harm_mean(f, second_weight(inst), 1.0);
    case StatementId::T4_ii: {
      const Weight& u = second_weight(inst);
      Weight ut = t4_derived_weight(u, v, par.p);
      PointwiseFn C = copson(f, ut);
      const double m = par.m, a = par.alpha * par.m - 1.0;
      Weight uc = u;
      auto eval = [C, uc, ut, m, a](double t) {
        return ext::mul(ext::pow(C(t), m), ext::mul(uc.primitive(t), primitive_pow(ut, t, a)));
      };
      return {eval, merged_interior(C.breakpoints, u.edges()), "copson-tilde"};
    }
    case StatementId::T4_iii: {
      const Weight& u = second_weight(inst);
      Weight ut = t4_derived_weight(u, v, par.p);
      PointwiseFn H = hardy_avg(f, ut);
      const double m = par.m;
      const double a = -(par.beta - par.alpha) * par.m - 1.0;
      Weight uc = u;
      auto eval = [H, uc, ut, m, a](double t) {
        return ext::mul(ext::pow(H(t), m), ext::mul(uc.primitive(t), primitive_pow(ut, t, a)));
      };
      return {eval, merged_interior(H.breakpoints, u.edges()), "avg-tilde"};
    }
  }
  throw std::logic_error("statement_argument: unknown id");
}

double lhs(const StatementInstance& inst, const TestFunction& f, double tol) {
  return apply(inst.rho, statement_argument(inst, f), tol);
}

// right-hand sides ----------------------------------------------------------

double weighted_moment(const TestFunction& f, double rf, const Weight& w, double eta) {
  if (!(rf > 0.0)) throw std::invalid_argument("weighted_moment: rf > 0 required");
  const PiecewiseFn& v = w.density_fn();
  std::vector<double> E = merged_interior(f.edges(), w.edges());

  auto integrand = [&](double t) {
    return ext::mul(ext::mul(ext::pow(f(t), rf), ext::pow(w.primitive(t), eta)), v(t));
  };

  double total = 0.0;
  double lo = 0.0;
  for (std::size_t c = 0; c <= E.size(); ++c) {
    const double hi = (c < E.size()) ? E[c] : kInf;
    const double probe = std::isinf(hi) ? lo * 2.0 + 1.0 : 0.5 * (lo + hi);
    const auto& terms = f.fn.terms(f.fn.segment_index(probe));
    if (terms.empty()) {
      lo = hi;
      continue;
    }
    const std::size_t wi = v.segment_index(probe);
    const Monomial& mw = w.segment(wi);

    if (lo == 0.0) {
      // behavior at the origin is governed by the smallest f exponent
      double gmin = terms[0].expo;
      for (const auto& tm : terms) gmin = std::min(gmin, tm.expo);
      if (rf * gmin + eta * (mw.expo + 1.0) + mw.expo <= -1.0) return kInf;
    }
    if (std::isinf(hi)) {
      // tail divergence from the largest f exponent and the growth of V
      double gmax = terms[0].expo;
      for (const auto& tm : terms) gmax = std::max(gmax, tm.expo);
      bool divergent;
      if (!std::isinf(w.total())) {
        divergent = rf * gmax + mw.expo >= -1.0;
      } else if (mw.expo > -1.0) {
        divergent = rf * gmax + eta * (mw.expo + 1.0) + mw.expo >= -1.0;
      } else {
        // mw.expo == -1: V grows like log; the log factor only decides ties
        const double e = rf * gmax - 1.0;
        divergent = e > -1.0 || (e == -1.0 && eta >= -1.0);
      }
      if (divergent) return kInf;
    }

    const bool exact_ok =
        terms.size() == 1 && (eta == 0.0 || primitive_pure(w, wi));
    if (exact_ok) {
      const Monomial& mf = terms[0];
      const double cv = eta == 0.0 ? 1.0 : std::pow(mw.coef / (mw.expo + 1.0), eta);
      Monomial cell{std::pow(mf.coef, rf) * cv * mw.coef,
                    rf * mf.expo + eta * (mw.expo + 1.0) + mw.expo};
      total += mono_integral(cell, lo, hi);
    } else {
      total += integrate(integrand, lo, hi, 1e-10).value;
    }
    if (std::isinf(total)) return kInf;
    lo = hi;
  }
  return total;
}

double rhs(const StatementInstance& inst, const TestFunction& f) {
  const Params& par = inst.params;
  double integral = 0.0, p = par.p;
  switch (inst.id) {
    case StatementId::T1_i:
    case StatementId::T1_vi:
    case StatementId::T1_ix:
      integral = weighted_moment(f, par.p, inst.v, 0.0);
      break;
    case StatementId::T1_ii:
    case StatementId::T1_iii:
      integral = weighted_moment(f, par.r, inst.v, par.alpha * par.p);
      break;
    case StatementId::T1_iv:
    case StatementId::T1_v:
      integral = weighted_moment(f, par.r, inst.v, par.alpha * par.p - par.beta * par.r);
      break;
    case StatementId::T1_vii:
    case StatementId::T1_viii:
      integral = weighted_moment(f, par.r * par.p, inst.v, 0.0);
      break;
    case StatementId::T3_i:
    case StatementId::T4_i:
      integral = weighted_moment(f, par.p, inst.v, 0.0);
      break;
    case StatementId::T3_ii:
      integral = weighted_moment(f, par.r, second_weight(inst), par.alpha * par.m * par.p);
      break;
    case StatementId::T3_iii:
      integral = weighted_moment(f, par.r, second_weight(inst),
                                 par.alpha * par.m * par.p - par.beta * par.r);
      break;
    case StatementId::T4_ii: {
      Weight ut = t4_derived_weight(second_weight(inst), inst.v, par.p);
      integral = weighted_moment(f, par.m * par.p, ut, par.alpha * par.m * par.p);
      break;
    }
    case StatementId::T4_iii: {
      Weight ut = t4_derived_weight(second_weight(inst), inst.v, par.p);
      integral =
          weighted_moment(f, par.m * par.p, ut, -(par.beta - par.alpha) * par.m * par.p);
      break;
    }
  }
  return ext::pow(integral, 1.0 / p);
}

EvalRecord evaluate(const StatementInstance& inst, const TestFunction& f, double tol) {
  EvalRecord rec;
  rec.lhs = lhs(inst, f, tol);
  rec.rhs = rhs(inst, f);
  rec.ratio = ext::div(rec.lhs, rec.rhs);
  return rec;
}

double constant_term_check(const StatementInstance& inst) {
  return ext::div(rho_one(inst.rho), ext::pow(inst.v.total(), 1.0 / inst.params.p));
}

// derived weights -----------------------------------------------------------

PointwiseFn t3_derived_weight(const Weight& u, const Weight& v, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("t3_derived_weight: p > 0 required");
  std::vector<double> edges = merged_interior(u.edges(), v.edges());

  // L(t) = ∫_0^t log(u/v) u ds, exact per cell:
  // log(u/v)(s) = log(cu/cv) + (gu - gv) log s against the monomial u
  // copies, not references: the returned closure outlives the arguments
  const PiecewiseFn ud = u.density_fn();
  const PiecewiseFn vd = v.density_fn();
  auto cell = [ud, vd](double a, double b) {
    const double probe = 0.5 * (a + b);
    const Monomial& mu = ud.terms(ud.segment_index(probe))[0];
    const Monomial& mv = vd.terms(vd.segment_index(probe))[0];
    double out = 0.0;
    if (mu.coef != mv.coef) out += std::log(mu.coef / mv.coef) * mono_integral(mu, a, b);
    if (mu.expo != mv.expo) out += (mu.expo - mv.expo) * mono_log_integral(mu, a, b);
    return out;
  };
  std::vector<double> cum{0.0};
  double lo = 0.0;
  for (double e : edges) {
    cum.push_back(cum.back() + cell(lo, e));
    lo = e;
  }

  Weight uc = u;
  const Monomial u0 = ud.terms(0)[0];
  const Monomial v0 = vd.terms(0)[0];
  auto eval = [uc, edges, cum, cell, p, u0, v0](double t) {
    const double U = uc.primitive(t);
    if (U == 0.0) {
      // t^{gamma+1} underflowed; on the first cell L/U has a closed form
      double lr = 0.0;
      if (u0.coef != v0.coef) lr += std::log(u0.coef / v0.coef);
      if (u0.expo != v0.expo) lr += (u0.expo - v0.expo) * (std::log(t) - 1.0 / (u0.expo + 1.0));
      return std::exp(lr / p);
    }
    std::size_t i = std::upper_bound(edges.begin(), edges.end(), t) - edges.begin();
    const double a = (i == 0) ? 0.0 : edges[i - 1];
    const double L = cum[i] + (t > a ? cell(a, t) : 0.0);
    return std::exp(L / (p * U));
  };
  return {eval, edges, "t3-derived-weight"};
}

Weight t4_derived_weight(const Weight& u, const Weight& v, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("t4_derived_weight: p > 0 required");
  std::vector<double> edges = merged_interior(u.edges(), v.edges());
  const PiecewiseFn& ud = u.density_fn();
  const PiecewiseFn& vd = v.density_fn();

  std::vector<Monomial> segs;
  double lo = 0.0;
  for (std::size_t c = 0; c <= edges.size(); ++c) {
    const double hi = (c < edges.size()) ? edges[c] : kInf;
    const double probe = std::isinf(hi) ? lo * 2.0 + 1.0 : 0.5 * (lo + hi);
    const Monomial& mu = ud.terms(ud.segment_index(probe))[0];
    const Monomial& mv = vd.terms(vd.segment_index(probe))[0];
    if (mu == mv) {
      // the exponent average collapses; evaluating the powers would only add
      // rounding noise to an identity
      segs.push_back(mu);
    } else {
      segs.push_back({std::pow(mu.coef, p / (p + 1.0)) * std::pow(mv.coef, 1.0 / (p + 1.0)),
                      (p * mu.expo + mv.expo) / (p + 1.0)});
    }
    lo = hi;
  }
  return Weight(edges, segs);
}

} // namespace submono
