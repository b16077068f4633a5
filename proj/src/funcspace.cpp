#include "submono/funcspace.hpp"

#include <algorithm>
#include <cmath>

namespace submono {

namespace {

const char* id_names[] = {"T1.i", "T1.ii", "T1.iii", "T1.iv",  "T1.v",
                          "T1.vi", "T1.vii", "T1.viii", "T1.ix", "T3.i",
                          "T3.ii", "T3.iii", "T4.i", "T4.ii", "T4.iii"};

} // namespace

const char* to_string(StatementId id) { return id_names[static_cast<int>(id)]; }

std::optional<StatementId> statement_from_string(const std::string& s) {
  for (int i = 0; i < 15; ++i)
    if (s == id_names[i]) return static_cast<StatementId>(i);
  return std::nullopt;
}

TestFunction random_testfn(const GeneratorProfile& pr) {
  if (pr.min_segments < 1 || pr.max_segments < pr.min_segments)
    throw std::invalid_argument("random_testfn: bad segment-count range");
  Rng rng(pr.seed);
  int nseg = pr.min_segments +
             static_cast<int>(rng.integer(static_cast<std::uint64_t>(pr.max_segments - pr.min_segments + 1)));
  // the decay guard applies to the unbounded tail segment; a lone segment
  // would have to satisfy it while also touching zero, so always split
  if (nseg < 2) nseg = 2;
  std::vector<double> cuts;
  for (int i = 0; i + 1 < nseg; ++i) cuts.push_back(rng.log_uniform(pr.break_lo, pr.break_hi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  nseg = static_cast<int>(cuts.size()) + 1;

  std::vector<std::vector<Monomial>> segs(nseg);
  int nonzero = 0;
  for (int i = 0; i < nseg; ++i) {
    bool zero = pr.zero_prob > 0.0 && rng.unit() < pr.zero_prob;
    if (zero && !(i == nseg - 1 && nonzero == 0)) {
      continue;  // leave segment empty, but never make the whole function zero
    }
    double expo;
    if (i == nseg - 1)
      expo = rng.uniform(-pr.decay_min - 1.5, -pr.decay_min);
    else
      expo = rng.uniform(pr.expo_lo, pr.expo_hi);
    segs[i] = {Monomial{rng.log_uniform(pr.coef_lo, pr.coef_hi), expo}};
    ++nonzero;
  }
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(kInf);
  return TestFunction(PiecewiseFn(std::move(edges), std::move(segs)));
}

std::optional<double> extremal_sigma(StatementId id, const Params& pr) {
  switch (id) {
    case StatementId::T1_i:
    case StatementId::T1_vi:
    case StatementId::T1_ix:
      return -1.0 / pr.p;
    case StatementId::T1_ii:
    case StatementId::T1_iii:
      return -(1.0 + pr.alpha * pr.p) / pr.r;
    case StatementId::T1_iv:
    case StatementId::T1_v:
      return -(1.0 + pr.alpha * pr.p - pr.beta * pr.r) / pr.r;
    case StatementId::T1_vii:
    case StatementId::T1_viii:
      return -1.0 / (pr.r * pr.p);
    default:
      return std::nullopt;
  }
}

PowerFit fit_piecewise_power(const std::function<double(double)>& g, double t_lo, double t_hi,
                             int points_per_decade, std::vector<double> cuts) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || std::isinf(t_hi))
    throw std::invalid_argument("fit_piecewise_power: bad range");
  std::vector<double> nodes;
  double decades = std::log10(t_hi / t_lo);
  int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)));
  for (int i = 0; i <= n; ++i) nodes.push_back(t_lo * std::pow(t_hi / t_lo, double(i) / n));
  for (double c : cuts)
    if (c > t_lo && c < t_hi) nodes.push_back(c);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<double> vals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    vals[i] = g(nodes[i]);
    if (!(vals[i] > 0.0) || std::isinf(vals[i]))
      throw std::invalid_argument("fit_piecewise_power: function must be positive finite");
  }

  // The first fitted exponent extends down to 0 and the last one up to inf;
  // callers wanting compact support truncate the result.
  std::vector<double> edges{0.0};
  std::vector<std::vector<Monomial>> segs;
  double residual = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double gamma = std::log(vals[i + 1] / vals[i]) / std::log(nodes[i + 1] / nodes[i]);
    double coef = vals[i] / std::pow(nodes[i], gamma);
    segs.push_back({Monomial{coef, gamma}});
    edges.push_back(i + 2 == nodes.size() ? kInf : nodes[i + 1]);
    double mid = std::sqrt(nodes[i] * nodes[i + 1]);
    double ref = g(mid);
    if (ref > 0.0)
      residual = std::max(residual, std::abs(coef * std::pow(mid, gamma) - ref) / ref);
  }
  return PowerFit{PiecewiseFn(std::move(edges), std::move(segs)), residual};
}

TestFunction extremal_family(StatementId id, const Params& pr, const Weight& w, double eps) {
  auto sigma = extremal_sigma(id, pr);
  if (!sigma)
    throw UnsupportedStatement("extremal_family: no closed critical exponent for this statement");
  if (!(eps > 0.0) || eps >= std::abs(*sigma))
    throw std::invalid_argument("extremal_family: eps must lie in (0, |sigma|)");
  const double e = *sigma + eps;
  const double vcap = std::isinf(w.total()) ? 1.0 : std::min(1.0, 0.5 * w.total());
  const double t1 = w.primitive_inverse(vcap);
  // single global power: exact
  if (w.segment_count() == 1) {
    const Monomial& m = w.segment(0);
    double k = m.expo + 1.0;
    double coef = std::pow(m.coef / k, e);
    return TestFunction(PiecewiseFn::power(coef, k * e).truncated(t1));
  }
  double t_lo = w.primitive_inverse(vcap * 1e-10);
  std::vector<double> cuts(w.edges().begin() + 1, w.edges().end() - 1);
  auto fit = fit_piecewise_power([&](double t) { return std::pow(w.primitive(t), e); },
                                 t_lo, t1, 48, cuts);
  return TestFunction(fit.fn.truncated(t1));
}

namespace {

double lp_norm(const std::function<double(double)>& g, const Weight& w, double p,
               const std::vector<double>& hints) {
  auto r = integrate([&](double s) { return std::pow(g(s), p) * w.density(s); }, 0.0, kInf,
                     1e-11, hints);
  return std::pow(r.value, 1.0 / p);
}

} // namespace

TestFunction positivize(const TestFunction& f, double A, double eps, const Weight& w, double p) {
  if (!(A > 0.0)) throw std::invalid_argument("positivize: A must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("positivize: eps must be positive");
  // check strict positivity on (0, A)
  const auto& edges = f.fn.edges();
  for (std::size_t i = 0; i + 1 < edges.size() && edges[i] < A; ++i)
    if (f.fn.terms(i).empty())
      throw NotPositiveOnPrefix("positivize: f vanishes on a positive-measure subset of (0, A)");
  if (f.strictly_positive) return f;

  std::vector<double> hints(edges.begin() + 1, edges.end() - 1);
  for (std::size_t i = 1; i + 1 < w.edges().size(); ++i) hints.push_back(w.edges()[i]);
  double base = lp_norm([&](double s) { return f(s); }, w, p, hints);
  if (!(base > 0.0) || std::isinf(base))
    throw std::invalid_argument("positivize: ∫ f^p v must be finite and positive");

  double gamma_tail = w.segment(w.segment_count() - 1).expo;
  double d = std::max(1.0, (gamma_tail + 1.6) / p + 0.1);
  PiecewiseFn g = PiecewiseFn({0.0, 1.0, kInf}, {{Monomial{1.0, 0.0}}, {Monomial{1.0, -d}}});
  double gnorm = lp_norm([&](double s) { return g(s); }, w, p, {1.0});
  const double budget = (1.0 + eps) * base;

  auto total = [&](double delta) {
    return lp_norm([&](double s) { return f(s) + delta * g(s); }, w, p, hints);
  };

  double lo = 0.0, hi = 2.0 * eps * base / gnorm;
  if (total(hi) <= budget) {
    lo = hi;
  } else {
    for (int it = 0; it < 45 && (hi - lo) > 1e-14 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      (total(mid) <= budget ? lo : hi) = mid;
    }
  }
  if (!(lo > 0.0)) lo = std::min(1e-12, eps * base / gnorm);  // degenerate fallback
  return TestFunction(f.fn.plus(g.scaled(lo)));
}

} // namespace submono
