#include "doctest.h"

#include <cmath>

#include "submono/operators.hpp"
#include "helpers.hpp"

using namespace submono;

namespace {

Weight lebesgue() { return Weight({}, {Monomial{1.0, 0.0}}); }
Weight two_segment() { return Weight({1.0}, {Monomial{1.0, 0.0}, Monomial{1.0, -2.0}}); }

double squared_norm(const TestFunction& f, const Weight& w) {
  return PrefixIntegral(f.fn.times(f.fn).times(w.density_fn())).total();
}

} // namespace

TEST_CASE("test function evaluation and algebra") {
  TestFunction lin(PiecewiseFn::power(1.0, 1.0));
  CHECK(lin(2.0) == 2.0);
  TestFunction chi(PiecewiseFn({0.0, 1.0, kInf}, {{Monomial{1.0, 0.0}}, {}}));
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(0.5) == 1.0);
  TestFunction inv(PiecewiseFn::power(1.0, -1.0));
  CHECK(inv(0.5) == 2.0);

  CHECK(lin.pow(2.0)(3.0) == 9.0);
  CHECK(TestFunction(PiecewiseFn::constant(4.0)).reciprocal()(7.0) == 0.25);
  TestFunction one(PiecewiseFn::constant(1.0));
  TestFunction tr = one.truncate(1.0);
  CHECK(tr(0.5) == 1.0);
  CHECK(tr(2.0) == 0.0);
  CHECK(lin.add_const(3.0)(2.0) == 5.0);
  CHECK(lin.scale(0.5)(8.0) == 4.0);

  // reciprocal of a vanishing segment is infinite-valued (still in M_+)
  CHECK(std::isinf(chi.reciprocal()(2.0)));

  TestFunction f(PiecewiseFn({0.0, 2.0, kInf}, {{Monomial{2.5, 1.3}}, {Monomial{0.7, -2.0}}}));
  TestFunction lhs = f.pow(2.0).pow(-0.7);
  TestFunction rhs = f.pow(-1.4);
  TestFunction rr = f.reciprocal().reciprocal();
  for (double t : {0.1, 0.9, 2.0, 3.7, 55.0}) {
    CHECK(lhs(t) == doctest::Approx(rhs(t)).epsilon(1e-12));
    CHECK(rr(t) == doctest::Approx(f(t)).epsilon(1e-12));
  }
}

TEST_CASE("random test functions are deterministic in the seed") {
  GeneratorProfile pr;
  pr.seed = 777;
  TestFunction a = random_testfn(pr);
  TestFunction b = random_testfn(pr);
  REQUIRE(a.edges() == b.edges());
  bool differs_somewhere = false;
  pr.seed = 778;
  TestFunction c = random_testfn(pr);
  for (int k = 0; k <= 40; ++k) {
    double t = 0.01 * std::pow(10.0, 4.0 * k / 40.0);
    CHECK(a(t) == b(t));
    if (a(t) != c(t)) differs_somewhere = true;
  }
  CHECK(differs_somewhere);
}

TEST_CASE("truncated draws always have finite squared norm") {
  Weight leb = lebesgue();
  GeneratorProfile pr;
  int finite = 0;
  for (int k = 0; k < 1000; ++k) {
    pr.seed = 10'000 + static_cast<std::uint64_t>(k);
    TestFunction f = random_testfn(pr).truncate(50.0);
    double n2 = squared_norm(f, leb);
    if (std::isfinite(n2) && n2 >= 0.0) ++finite;
  }
  CHECK(finite == 1000);
}

namespace {

// ratio of the averaging inequality sides for the L2 problem against Lebesgue
double hardy_ratio(const TestFunction& f) {
  Weight leb = lebesgue();
  auto H = hardy_avg(f, leb);
  std::vector<double> hints(f.edges().begin() + 1, f.edges().end() - 1);
  double lhs2 = integrate([&](double t) { double h = H(t); return h * h; }, 0.0, kInf,
                          1e-11, hints)
                    .value;
  return std::sqrt(lhs2 / squared_norm(f, leb));
}

} // namespace

TEST_CASE("extremal family reproduces the analytic near-extremizer") {
  Params pr;
  pr.p = 2.0;
  Weight leb = lebesgue();
  TestFunction f = extremal_family(StatementId::T1_i, pr, leb, 0.05);
  CHECK(f(0.25) == doctest::Approx(std::pow(0.25, -0.45)).epsilon(1e-12));
  CHECK(f(0.9) == doctest::Approx(std::pow(0.9, -0.45)).epsilon(1e-12));
  CHECK(f(2.0) == 0.0);

  // analytic value of the ratio for f = t^{sigma+eps} chi_{(0,1)}
  auto analytic = [](double eps) { return std::sqrt(1.0 + 2.0 * eps) / (0.5 + eps); };
  CHECK(hardy_ratio(f) == doctest::Approx(analytic(0.05)).epsilon(1e-6));
  CHECK(hardy_ratio(f) == doctest::Approx(1.9069).epsilon(1e-3));

  double prev = 0.0;
  for (double eps : {0.4, 0.2, 0.1, 0.05, 0.02}) {
    double ratio = hardy_ratio(extremal_family(StatementId::T1_i, pr, leb, eps));
    CHECK(ratio == doctest::Approx(analytic(eps)).epsilon(1e-6));
    CHECK(ratio >= prev - 1e-12);
    prev = ratio;
  }
  CHECK(prev > 1.94);  // approaching the sharp constant 2

  CHECK_THROWS_AS(extremal_family(StatementId::T3_ii, pr, leb, 0.05), UnsupportedStatement);
  CHECK_THROWS_AS(extremal_family(StatementId::T1_i, pr, leb, 0.7), std::invalid_argument);
}

TEST_CASE("extremal family tracks V on multi-segment weights") {
  Params pr;
  pr.p = 2.0;
  Weight w = two_segment();
  TestFunction f = extremal_family(StatementId::T1_i, pr, w, 0.05);
  // vcap = min(1, V(inf)/2) = 1, and V(t) = t below that level
  for (double t : {0.2, 0.5, 0.9})
    CHECK(f(t) == doctest::Approx(std::pow(w.primitive(t), -0.45)).epsilon(1e-3));
  CHECK(f(2.0) == 0.0);
}

TEST_CASE("geometric-mean ratio never exceeds the averaging ratio") {
  Params pr;
  pr.p = 2.0;
  Weight leb = lebesgue();
  TestFunction f = extremal_family(StatementId::T1_vi, pr, leb, 0.05);
  TestFunction fp = positivize(f, 1.0, 0.01, leb, 2.0);
  auto G = geo_mean(fp, leb);
  auto H = hardy_avg(fp, leb);
  std::vector<double> hints(fp.edges().begin() + 1, fp.edges().end() - 1);
  // the integrand itself carries ~1e-11 quadrature noise, so keep the outer
  // tolerance comfortably above it
  double geo2 = integrate([&](double t) { double g = G(t); return g * g; }, 0.0, kInf,
                          1e-8, hints)
                    .value;
  double hardy2 = integrate([&](double t) { double h = H(t); return h * h; }, 0.0, kInf,
                            1e-8, hints)
                      .value;
  CHECK(geo2 <= hardy2 * (1.0 + 1e-9));
  CHECK(geo2 > 0.0);
}

TEST_CASE("positivize respects the norm budget") {
  Weight w = two_segment();
  TestFunction chi(PiecewiseFn({0.0, 1.0, kInf}, {{Monomial{1.0, 0.0}}, {}}));

  TestFunction fp = positivize(chi, 1.0, 0.1, w, 2.0);
  CHECK(fp.strictly_positive);
  for (double t : {0.2, 1.0, 4.0, 300.0}) CHECK(fp(t) >= chi(t));
  CHECK(fp(4.0) > 0.0);
  double base2 = squared_norm(chi, w);
  CHECK(base2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::sqrt(squared_norm(fp, w)) <= 1.1 * std::sqrt(base2) + 1e-9);

  // smaller budget -> smaller bump
  TestFunction fp_small = positivize(chi, 1.0, 0.01, w, 2.0);
  CHECK(std::sqrt(squared_norm(fp_small, w)) <= 1.01 * std::sqrt(base2) + 1e-9);
  CHECK(fp_small(4.0) < fp(4.0));
  CHECK(fp_small(4.0) > 0.0);

  // strictly positive input comes back unchanged
  TestFunction lin(PiecewiseFn::power(2.0, 1.0));
  TestFunction same = positivize(lin, 1.0, 0.1, w, 2.0);
  for (double t : {0.2, 1.0, 4.0}) CHECK(same(t) == lin(t));

  // vanishing inside (0, A) is rejected
  TestFunction gap(PiecewiseFn({0.0, 1.0, 2.0, kInf}, {{}, {Monomial{1.0, 0.0}}, {}}));
  CHECK_THROWS_AS(positivize(gap, 2.0, 0.1, w, 2.0), NotPositiveOnPrefix);
}
