#include "doctest.h"

#include <cmath>

#include "submono/statements.hpp"

using namespace submono;

namespace {

Weight finite_mass_weight() {
  // 1 on (0,1], s^-2 beyond: V(t) = t then 2 - 1/t, V(inf) = 2
  return Weight({1.0}, {Monomial{1.0, 0.0}, Monomial{1.0, -2.0}});
}

PiecewiseFn chi01() {
  return PiecewiseFn({0.0, 1.0, kInf}, {{Monomial{1.0, 0.0}}, {}});
}

Functional l2_chi01() { return make_weighted_lq(2.0, chi01()); }

TestFunction const_fn(double c) { return TestFunction(PiecewiseFn::constant(c)); }

StatementInstance t1(StatementId id, Params par, Weight v, Functional rho) {
  StatementInstance inst;
  inst.id = id;
  inst.params = par;
  inst.v = std::move(v);
  inst.rho = std::move(rho);
  return inst;
}

GeneratorProfile positive_profile(std::uint64_t seed) {
  GeneratorProfile prof;
  prof.seed = seed;
  prof.zero_prob = 0.0;
  return prof;
}

// Approx never matches an infinity, but two statements can legitimately both
// evaluate to +inf for the same draw
void check_same(double x, double y, double eps) {
  if (std::isinf(x) || std::isinf(y)) {
    CHECK(x == y);
  } else {
    CHECK(x == doctest::Approx(y).epsilon(eps));
  }
}

} // namespace

TEST_CASE("parameter validation lists the broken constraints") {
  Params ok;
  ok.p = 2.0;
  ok.r = 1.0;
  ok.alpha = 0.0;
  ok.beta = 1.0;
  StatementInstance inst = t1(StatementId::T1_iv, ok, finite_mass_weight(), l2_chi01());
  CHECK(validate(inst).empty());

  inst.params.alpha = 1.0;  // alpha*p - beta*r = 1 >= r - 1 = 0
  auto viols = validate(inst);
  REQUIRE(viols.size() == 1);
  CHECK(viols[0].constraint.find("less than r - 1") != std::string::npos);

  StatementInstance bad2 = t1(StatementId::T1_ii, ok, finite_mass_weight(), l2_chi01());
  bad2.params.alpha = -0.6;
  viols = validate(bad2);
  REQUIRE(viols.size() == 1);
  CHECK(viols[0].field == "alpha");

  // r = 1 makes the literal lower bound for beta equal to 0
  StatementInstance bad3 = t1(StatementId::T1_iv, ok, finite_mass_weight(), l2_chi01());
  bad3.params.beta = -0.5;
  viols = validate(bad3);
  REQUIRE(!viols.empty());
  CHECK(viols[0].constraint.find("-1/r'") != std::string::npos);
  CHECK(viols[0].constraint.find("beta > -1") != std::string::npos);

  StatementInstance t3 = t1(StatementId::T3_ii, ok, finite_mass_weight(), l2_chi01());
  t3.params.m = 1.0;
  viols = validate(t3);  // u is missing
  REQUIRE(viols.size() == 1);
  CHECK(viols[0].field == "u");

  StatementInstance t4 = t1(StatementId::T4_i, ok, finite_mass_weight(), l2_chi01());
  t4.u = Weight::one();
  t4.params.m = 0.4;  // m*p = 0.8
  viols = validate(t4);
  REQUIRE(viols.size() == 1);
  CHECK(viols[0].field == "m,p");

  CHECK(quantifier(StatementId::T1_iv) == Quantifier::ForAllParams);
  CHECK(quantifier(StatementId::T1_v) == Quantifier::ExistsParams);
  CHECK(quantifier(StatementId::T1_i) == Quantifier::None);
}

TEST_CASE("averaging a constant: the worked example") {
  Params par;
  par.p = 2.0;
  StatementInstance inst = t1(StatementId::T1_i, par, finite_mass_weight(), l2_chi01());
  EvalRecord rec = evaluate(inst, const_fn(1.0));
  CHECK(rec.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rec.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rec.ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("the geometric statement sees t/e pointwise for f(s)=s") {
  Params par;
  par.p = 2.0;
  StatementInstance inst = t1(StatementId::T1_vi, par, Weight::one(), l2_chi01());
  TestFunction f(PiecewiseFn::power(1.0, 1.0));
  PointwiseFn arg = statement_argument(inst, f);
  for (double t : {0.3, 1.0, 2.0, 17.0})
    CHECK(arg(t) == doctest::Approx(t / std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("constant-term side condition") {
  Params par;
  par.p = 2.0;
  StatementInstance fin = t1(StatementId::T1_ii, par, finite_mass_weight(), l2_chi01());
  CHECK(constant_term_check(fin) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  StatementInstance infv = t1(StatementId::T1_ii, par, Weight::one(), l2_chi01());
  CHECK(constant_term_check(infv) == 0.0);  // V(inf) = inf passes trivially

  // rho(1) = inf against a finite-mass weight: the check blows up
  StatementInstance blow =
      t1(StatementId::T1_ii, par, finite_mass_weight(), make_weighted_lq(2.0, PiecewiseFn::constant(1.0)));
  CHECK(std::isinf(constant_term_check(blow)));
}

TEST_CASE("weighted moment backend: exact cells, quadrature cells, divergence") {
  Weight v = finite_mass_weight();

  // single-power f, eta = 0: fully closed form
  TestFunction one = const_fn(1.0);
  CHECK(weighted_moment(one, 2.0, v, 0.0) == doctest::Approx(2.0).epsilon(1e-14));

  // multi-term segment falls back to quadrature: ∫_0^2 (1+t)^2 dt = 26/3
  TestFunction bump(PiecewiseFn({0.0, 2.0, kInf}, {{Monomial{1.0, 0.0}, Monomial{1.0, 1.0}}, {}}));
  CHECK(weighted_moment(bump, 2.0, Weight::one(), 0.0) == doctest::Approx(26.0 / 3.0).epsilon(1e-9));

  // eta != 0 with an impure second segment: compare against direct quadrature
  TestFunction g(PiecewiseFn({0.0, 3.0, kInf}, {{Monomial{1.0, 0.2}}, {}}));
  double got = weighted_moment(g, 1.5, v, 1.5);
  double want = integrate(
                    [&](double t) {
                      return ext::mul(ext::pow(g(t), 1.5),
                                      ext::mul(ext::pow(v.primitive(t), 1.5), v.density(t)));
                    },
                    0.0, kInf, 1e-11, {1.0, 3.0})
                    .value;
  CHECK(got == doctest::Approx(want).epsilon(1e-8));

  // divergence classification, no quadrature involved
  CHECK(std::isinf(weighted_moment(one, 2.0, Weight::one(), 0.0)));          // tail
  TestFunction sing(PiecewiseFn({0.0, 1.0, kInf}, {{Monomial{1.0, -0.5}}, {}}));
  CHECK(std::isinf(weighted_moment(sing, 2.0, Weight::one(), 0.0)));         // origin
  CHECK(std::isinf(weighted_moment(one, 1.0, Weight::one(), -2.0)));         // origin via V^eta
  CHECK(weighted_moment(sing, 1.0, Weight::one(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("two-sided homogeneity: the ratio ignores scaling") {
  Weight v = finite_mass_weight();
  Functional rho = l2_chi01();
  Params par;
  par.p = 2.0;
  par.r = 1.5;
  par.phi = Phi{Phi::Kind::Ln, 0.5};

  for (std::uint64_t s = 0; s < 6; ++s) {
    TestFunction f = random_testfn(positive_profile(900 + s));
    Rng rng(7000 + s);
    const double lam = rng.log_uniform(0.1, 10.0);
    for (StatementId id :
         {StatementId::T1_i, StatementId::T1_vi, StatementId::T1_vii, StatementId::T1_ix}) {
      StatementInstance inst = t1(id, par, v, rho);
      EvalRecord base = evaluate(inst, f);
      EvalRecord scaled = evaluate(inst, f.scale(lam));
      REQUIRE(base.rhs > 0.0);
      CHECK(scaled.ratio == doctest::Approx(base.ratio).epsilon(1e-9));
    }
  }
}

TEST_CASE("the geometric left side never beats the averaging left side") {
  Weight v = finite_mass_weight();
  Functional rho = l2_chi01();
  Params par;
  par.p = 2.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    TestFunction f = random_testfn(positive_profile(430 + s));
    double li = lhs(t1(StatementId::T1_i, par, v, rho), f);
    double lvi = lhs(t1(StatementId::T1_vi, par, v, rho), f);
    CHECK(lvi <= li * (1.0 + 1e-8) + 1e-12);
  }
}

TEST_CASE("means of a constant function all collapse to rho(1)") {
  Weight v = finite_mass_weight();
  Functional rho = l2_chi01();
  Params par;
  par.p = 2.0;
  par.r = 2.0;
  par.phi = Phi{Phi::Kind::Reciprocal, 0.5};
  TestFunction f = const_fn(1.0);

  const double expected = rho_one(rho);
  double lvi = lhs(t1(StatementId::T1_vi, par, v, rho), f);
  double lvii = lhs(t1(StatementId::T1_vii, par, v, rho), f);
  double lix = lhs(t1(StatementId::T1_ix, par, v, rho), f);
  CHECK(lvi == doctest::Approx(expected).epsilon(1e-9));
  CHECK(lvii == doctest::Approx(lvi).epsilon(1e-12));
  CHECK(lix == doctest::Approx(lvi).epsilon(1e-12));
}

TEST_CASE("derived weight of the geometric reduction") {
  SUBCASE("u = v collapses to one, exactly") {
    Weight u({0.5, 4.0}, {Monomial{2.0, 0.3}, Monomial{1.0, 0.0}, Monomial{3.0, -1.5}});
    PointwiseFn w = t3_derived_weight(u, u, 2.0);
    for (double t : {0.1, 0.5, 1.0, 3.9, 4.0, 25.0}) CHECK(w(t) == 1.0);
  }

  SUBCASE("u = 1, v = s, p = 1 gives e/t") {
    PointwiseFn w = t3_derived_weight(Weight::one(), Weight::power(1.0, 1.0), 1.0);
    for (double t : {0.2, 1.0, 2.0, 13.0})
      CHECK(w(t) == doctest::Approx(std::exp(1.0) / t).epsilon(1e-13));
  }

  SUBCASE("piecewise case agrees with a sign-split quadrature oracle") {
    Weight u({1.0}, {Monomial{2.0, 0.0}, Monomial{1.0, 0.5}});
    Weight v({2.0}, {Monomial{1.0, 0.3}, Monomial{4.0, -0.5}});
    const double p = 1.7;
    PointwiseFn w = t3_derived_weight(u, v, p);

    auto logratio_u = [&](double s) { return std::log(u.density(s) / v.density(s)) * u.density(s); };
    for (double t : {0.4, 1.3, 2.0, 5.0, 40.0}) {
      // sign changes where u = v inside a cell; on (2,inf) that is
      // s^0.5 = 4 s^-0.5, i.e. s = 4 (the other cells have no crossing)
      std::vector<double> hints{1.0, 2.0, 4.0};
      double pos = integrate([&](double s) { return std::max(logratio_u(s), 0.0); }, 0.0, t,
                             1e-12, hints)
                       .value;
      double neg = integrate([&](double s) { return std::max(-logratio_u(s), 0.0); }, 0.0, t,
                             1e-12, hints)
                       .value;
      double oracle = std::exp((pos - neg) / (p * u.primitive(t)));
      CHECK(w(t) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("derived weight of the harmonic reduction") {
  SUBCASE("u = v reproduces u exactly") {
    Weight u({0.7}, {Monomial{1.3, 0.4}, Monomial{2.0, -1.2}});
    Weight ut = t4_derived_weight(u, u, 2.0);
    CHECK(ut.density_fn() == u.density_fn());
  }

  SUBCASE("u = 1, v = s, p = 1: square-root interpolation") {
    Weight ut = t4_derived_weight(Weight::one(), Weight::power(1.0, 1.0), 1.0);
    CHECK(ut.segment(0).coef == doctest::Approx(1.0));
    CHECK(ut.segment(0).expo == doctest::Approx(0.5));
    CHECK(ut.primitive(4.0) == doctest::Approx((2.0 / 3.0) * 8.0).epsilon(1e-14));
  }

  SUBCASE("first exponent stays integrable") {
    Rng rng(5151);
    for (int k = 0; k < 50; ++k) {
      double gu = rng.uniform(-0.95, 1.5), gv = rng.uniform(-0.95, 1.5);
      double p = rng.log_uniform(0.5, 4.0);
      Weight ut = t4_derived_weight(Weight::power(1.0, gu), Weight::power(1.0, gv), p);
      CHECK(ut.segment(0).expo > -1.0);
    }
  }
}

TEST_CASE("two-weight statements collapse onto the one-weight ones when u = v") {
  Weight v({1.0}, {Monomial{1.0, 0.2}, Monomial{1.0, -2.0}});
  Functional rho = l2_chi01();

  Params p3;
  p3.p = 2.0;
  p3.r = 1.5;
  p3.alpha = 0.25;
  p3.m = 2.0;
  StatementInstance a = t1(StatementId::T3_ii, p3, v, rho);
  a.u = v;
  Params p1 = p3;
  p1.alpha = p3.alpha * p3.m;
  StatementInstance b = t1(StatementId::T1_ii, p1, v, rho);
  CHECK(validate(a).empty());
  CHECK(validate(b).empty());

  Params p3c;
  p3c.p = 2.0;
  p3c.r = 1.0;
  p3c.alpha = 0.0;
  p3c.beta = 1.0;
  p3c.m = 1.0;
  StatementInstance c = t1(StatementId::T3_iii, p3c, v, rho);
  c.u = v;
  StatementInstance d = t1(StatementId::T1_iv, p3c, v, rho);

  Params p4;
  p4.p = 2.0;
  p4.m = 1.0;
  StatementInstance e = t1(StatementId::T4_i, p4, v, rho);
  e.u = v;
  Params p7 = p4;
  p7.r = 1.0;
  StatementInstance g = t1(StatementId::T1_vii, p7, v, rho);

  Params pgeo;
  pgeo.p = 2.0;
  StatementInstance h = t1(StatementId::T3_i, pgeo, v, rho);
  h.u = v;
  StatementInstance i = t1(StatementId::T1_vi, pgeo, v, rho);

  for (std::uint64_t s = 0; s < 8; ++s) {
    TestFunction f = random_testfn(positive_profile(2200 + s));
    EvalRecord ra = evaluate(a, f), rb = evaluate(b, f);
    check_same(ra.lhs, rb.lhs, 1e-10);
    check_same(ra.rhs, rb.rhs, 1e-12);

    EvalRecord rc = evaluate(c, f), rd = evaluate(d, f);
    check_same(rc.lhs, rd.lhs, 1e-10);
    check_same(rc.rhs, rd.rhs, 1e-12);

    EvalRecord re = evaluate(e, f), rg = evaluate(g, f);
    check_same(re.lhs, rg.lhs, 1e-10);
    check_same(re.rhs, rg.rhs, 1e-12);

    EvalRecord rh = evaluate(h, f), ri = evaluate(i, f);
    check_same(rh.lhs, ri.lhs, 1e-10);
    check_same(rh.rhs, ri.rhs, 1e-12);
  }
}

TEST_CASE("the classical two-weight inequality is the averaging statement in disguise") {
  // with v := u^{1-p'} and rho carrying the weight w V^q, both sides of the
  // prefix-integral inequality match the averaging statement verbatim
  const double p = 2.0, q = 2.0, gu = 0.3;
  Weight u = Weight::power(2.0, gu);
  Weight v = Weight::power(0.5, -gu);  // u^{1-p'} for p = 2
  // V(t) = t^{0.7}/1.4; outer = w V^q with w = chi_(0,1) + t^-4 tail
  const double cV = 0.5 / 0.7;
  PiecewiseFn outer({0.0, 1.0, kInf},
                    {{Monomial{cV * cV, 2.0 * (1.0 - gu)}}, {Monomial{cV * cV, 2.0 * (1.0 - gu) - 4.0}}});
  PiecewiseFn wfn({0.0, 1.0, kInf}, {{Monomial{1.0, 0.0}}, {Monomial{1.0, -4.0}}});

  Params par;
  par.p = p;
  StatementInstance inst = t1(StatementId::T1_i, par, v, make_weighted_lq(q, outer));

  for (std::uint64_t s = 0; s < 6; ++s) {
    TestFunction f = random_testfn(positive_profile(3100 + s));
    PiecewiseFn h = f.fn.times(v.density_fn());
    PrefixIntegral P(h);
    std::vector<double> cuts{1.0};  // P has kinks at f's edges, w at 1
    for (double e : f.edges())
      if (e > 0.0 && !std::isinf(e)) cuts.push_back(e);
    double direct_lhs = std::pow(
        integrate([&](double t) { return std::pow(P(t), q) * wfn(t); }, 0.0, kInf, 1e-11, cuts)
            .value,
        1.0 / q);
    double direct_rhs =
        std::pow(PrefixIntegral(h.times(h).times(u.density_fn())).total(), 1.0 / p);

    EvalRecord rec = evaluate(inst, f);
    CHECK(rec.lhs == doctest::Approx(direct_lhs).epsilon(1e-7));
    CHECK(rec.rhs == doctest::Approx(direct_rhs).epsilon(1e-12));
  }
}
