#include "submono/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace submono {

double mono_integral(const Monomial& m, double x0, double x1) {
  if (x0 >= x1) return 0.0;
  if (m.coef == 0.0) return 0.0;
  if (std::isinf(m.coef)) return kInf;
  const double e = m.expo;
  if (e == -1.0) {
    if (x0 == 0.0 || std::isinf(x1)) return kInf;
    return m.coef * std::log(x1 / x0);
  }
  const double p = e + 1.0;
  const double hi = ext::pow(x1, p);  // inf^p handled, 0^p handled
  const double lo = ext::pow(x0, p);
  if (p > 0.0) {
    if (std::isinf(hi)) return kInf;
    return m.coef * (hi - lo) / p;
  }
  // p < 0: integrand blows up at 0
  if (std::isinf(lo)) return kInf;  // x0 == 0
  return m.coef * (lo - hi) / (-p);
}

double mono_log_integral(const Monomial& m, double x0, double x1) {
  // ∫ c s^e ln s ds; antiderivative c [ s^{e+1} ln s / (e+1) - s^{e+1}/(e+1)^2 ]
  // (e != -1) or c (ln s)^2 / 2 (e == -1).  Endpoint limits: s^{e+1} ln s -> 0
  // as s -> 0 when e+1 > 0.
  if (x0 >= x1) return 0.0;
  if (m.coef == 0.0) return 0.0;
  const double e = m.expo;
  if (std::isinf(x1) || (x0 == 0.0 && e <= -1.0))
    throw std::domain_error("mono_log_integral: divergent range");
  auto anti = [&](double s) {
    if (e == -1.0) {
      double l = std::log(s);
      return 0.5 * l * l;
    }
    const double p = e + 1.0;
    if (s == 0.0) return p > 0.0 ? 0.0 : -kInf;
    const double sp = std::pow(s, p);
    return sp * (std::log(s) / p - 1.0 / (p * p));
  };
  return m.coef * (anti(x1) - anti(x0));
}

static double eval_terms(const std::vector<Monomial>& terms, double t) {
  double s = 0.0;
  for (const auto& m : terms) {
    if (m.coef == 0.0) continue;
    if (std::isinf(m.coef)) return kInf;
    double v = m.coef * ext::pow(t, m.expo);
    if (std::isinf(v)) return kInf;
    s += v;
  }
  return s;
}

PiecewiseFn::PiecewiseFn() : edges_{0.0, kInf}, segs_{{}} {}

PiecewiseFn::PiecewiseFn(std::vector<double> edges, std::vector<std::vector<Monomial>> segments)
    : edges_(std::move(edges)), segs_(std::move(segments)) {
  if (edges_.size() < 2 || edges_.front() != 0.0 || !std::isinf(edges_.back()))
    throw std::invalid_argument("piecewise: edges must run 0 .. inf");
  if (segs_.size() + 1 != edges_.size())
    throw std::invalid_argument("piecewise: segment/edge count mismatch");
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
    if (!(edges_[i] < edges_[i + 1]))
      throw std::invalid_argument("piecewise: edges must be strictly increasing");
  for (const auto& seg : segs_)
    for (const auto& m : seg)
      if (m.coef < 0.0 || std::isnan(m.coef) || std::isnan(m.expo))
        throw std::invalid_argument("piecewise: coefficients must be in [0, inf]");
  normalize();
}

PiecewiseFn PiecewiseFn::constant(double c) { return power(c, 0.0); }

PiecewiseFn PiecewiseFn::power(double coef, double expo) {
  return PiecewiseFn({0.0, kInf}, {{Monomial{coef, expo}}});
}

PiecewiseFn PiecewiseFn::single(const std::vector<double>& interior_edges,
                                const std::vector<Monomial>& terms) {
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), interior_edges.begin(), interior_edges.end());
  edges.push_back(kInf);
  std::vector<std::vector<Monomial>> segs;
  segs.reserve(terms.size());
  for (const auto& m : terms) segs.push_back({m});
  return PiecewiseFn(std::move(edges), std::move(segs));
}

void PiecewiseFn::normalize() {
  for (auto& seg : segs_) {
    std::erase_if(seg, [](const Monomial& m) { return m.coef == 0.0; });
    std::sort(seg.begin(), seg.end(),
              [](const Monomial& a, const Monomial& b) { return a.expo < b.expo; });
    std::vector<Monomial> out;
    for (const auto& m : seg) {
      if (!out.empty() && out.back().expo == m.expo)
        out.back().coef += m.coef;
      else
        out.push_back(m);
    }
    seg = std::move(out);
  }
  // merge adjacent segments with identical term lists
  std::vector<double> edges{0.0};
  std::vector<std::vector<Monomial>> segs;
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    if (!segs.empty() && segs.back() == segs_[i]) {
      // extend previous segment
    } else {
      if (!segs.empty()) edges.push_back(edges_[i]);
      segs.push_back(segs_[i]);
    }
  }
  edges.push_back(kInf);
  edges_ = std::move(edges);
  segs_ = std::move(segs);
}

std::size_t PiecewiseFn::segment_index(double t) const {
  // segment i covers (edges[i], edges[i+1]]
  if (t <= edges_[1]) return 0;
  auto it = std::lower_bound(edges_.begin(), edges_.end(), t);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

double PiecewiseFn::operator()(double t) const {
  if (std::isnan(t) || t < 0.0) throw std::domain_error("piecewise: t must be >= 0");
  if (t == 0.0) {
    // right limit at 0
    return eval_terms(segs_.front(), 0.0);
  }
  if (std::isinf(t)) return eval_terms(segs_.back(), kInf);
  return eval_terms(segs_[segment_index(t)], t);
}

bool PiecewiseFn::is_zero() const {
  for (const auto& s : segs_)
    if (!s.empty()) return false;
  return true;
}

bool PiecewiseFn::single_term() const {
  for (const auto& s : segs_)
    if (s.size() > 1) return false;
  return true;
}

bool PiecewiseFn::strictly_positive() const {
  for (const auto& s : segs_)
    if (s.empty()) return false;  // zero on a segment
  return true;
}

PiecewiseFn PiecewiseFn::scaled(double lambda) const {
  if (lambda < 0.0 || std::isnan(lambda))
    throw std::invalid_argument("scale: lambda must be >= 0");
  auto segs = segs_;
  for (auto& seg : segs)
    for (auto& m : seg) m.coef = ext::mul(m.coef, lambda);
  return PiecewiseFn(edges_, std::move(segs));
}

std::vector<double> merge_edges(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseFn PiecewiseFn::plus(const PiecewiseFn& g) const {
  auto edges = merge_edges(edges_, g.edges_);
  std::vector<std::vector<Monomial>> segs(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = std::isinf(edges[i + 1]) ? edges[i] * 2.0 + 1.0
                                          : 0.5 * (edges[i] + edges[i + 1]);
    const auto& sa = segs_[segment_index(mid)];
    const auto& sb = g.segs_[g.segment_index(mid)];
    segs[i] = sa;
    segs[i].insert(segs[i].end(), sb.begin(), sb.end());
  }
  return PiecewiseFn(std::move(edges), std::move(segs));
}

PiecewiseFn PiecewiseFn::plus_const(double c) const {
  if (c < 0.0 || std::isnan(c)) throw std::invalid_argument("add_const: c must be >= 0");
  if (c == 0.0) return *this;
  return plus(constant(c));
}

PiecewiseFn PiecewiseFn::times(const PiecewiseFn& g) const {
  auto edges = merge_edges(edges_, g.edges_);
  std::vector<std::vector<Monomial>> segs(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = std::isinf(edges[i + 1]) ? edges[i] * 2.0 + 1.0
                                          : 0.5 * (edges[i] + edges[i + 1]);
    const auto& sa = segs_[segment_index(mid)];
    const auto& sb = g.segs_[g.segment_index(mid)];
    for (const auto& ma : sa)
      for (const auto& mb : sb)
        segs[i].push_back(Monomial{ext::mul(ma.coef, mb.coef), ma.expo + mb.expo});
  }
  return PiecewiseFn(std::move(edges), std::move(segs));
}

PiecewiseFn PiecewiseFn::powed(double theta) const {
  if (!single_term())
    throw std::domain_error("pow: exact power needs single-monomial segments");
  auto segs = segs_;
  for (auto& seg : segs) {
    if (seg.empty()) {
      if (theta > 0.0) continue;                        // 0^theta = 0
      seg = {Monomial{theta == 0.0 ? 1.0 : kInf, 0.0}}; // 0^0 = 1, 0^neg = inf
      continue;
    }
    seg[0] = Monomial{ext::pow(seg[0].coef, theta), seg[0].expo * theta};
  }
  return PiecewiseFn(edges_, std::move(segs));
}

PiecewiseFn PiecewiseFn::reciprocal() const { return powed(-1.0); }

PiecewiseFn PiecewiseFn::truncated(double A) const {
  if (A <= 0.0) return PiecewiseFn();
  if (std::isinf(A)) return *this;
  std::vector<double> edges;
  std::vector<std::vector<Monomial>> segs;
  edges.push_back(0.0);
  for (std::size_t i = 0; i + 1 < edges_.size() && edges_[i] < A; ++i) {
    double hi = std::min(edges_[i + 1], A);
    segs.push_back(segs_[i]);
    edges.push_back(hi);
  }
  if (std::isinf(edges.back())) {
    // A beyond all finite edges was handled above; nothing to do
  } else {
    segs.push_back({});
    edges.push_back(kInf);
  }
  return PiecewiseFn(std::move(edges), std::move(segs));
}

bool PiecewiseFn::operator==(const PiecewiseFn& o) const {
  if (edges_ != o.edges_ || segs_.size() != o.segs_.size()) return false;
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    if (segs_[i].size() != o.segs_[i].size()) return false;
    for (std::size_t j = 0; j < segs_[i].size(); ++j)
      if (segs_[i][j].coef != o.segs_[i][j].coef || segs_[i][j].expo != o.segs_[i][j].expo)
        return false;
  }
  return true;
}

PrefixIntegral::PrefixIntegral(const PiecewiseFn& f) : f_(f) {
  const auto& e = f_.edges();
  cum_.assign(e.size(), 0.0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    double piece = 0.0;
    for (const auto& m : f_.terms(i)) piece += mono_integral(m, e[i], e[i + 1]);
    cum_[i + 1] = cum_[i] + piece;  // inf propagates
  }
}

double PrefixIntegral::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (std::isinf(t)) return cum_.back();
  const auto& e = f_.edges();
  std::size_t i = f_.segment_index(t);
  if (std::isinf(cum_[i])) return kInf;
  double piece = 0.0;
  for (const auto& m : f_.terms(i)) piece += mono_integral(m, e[i], t);
  return cum_[i] + piece;
}

double PrefixIntegral::between(double a, double b) const {
  if (b <= a) return 0.0;
  double hi = (*this)(b), lo = (*this)(a);
  if (std::isinf(hi)) return std::isinf(lo) ? 0.0 : kInf;
  return hi - lo;
}

} // namespace submono
