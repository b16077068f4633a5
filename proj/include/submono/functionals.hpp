#pragma once
#include <memory>
#include <optional>

#include "submono/operators.hpp"

namespace submono {

// A sub-monotone functional rho on M_+(0,inf): monotone under pointwise
// domination, weakly subadditive against constants, and weakly
// subhomogeneous, each up to a declared constant K >= 1.
struct Functional {
  enum class Kind { WeightedLq, SupForm, Iterated, DerivedT3, DerivedT4 };

  Kind kind = Kind::WeightedLq;
  double K = 1.0;      // declared axiom constant, validated empirically
  double q = 2.0;      // outer exponent; kInf means a weighted sup
  PiecewiseFn outer;   // outer weight (WeightedLq/Iterated) or multiplier (SupForm)
  double r = 1.0;      // inner exponent (Iterated)
  PiecewiseFn inner;   // inner weight (Iterated)
  double m = 1.0;      // power used by the derived transforms
  std::shared_ptr<const Functional> base;  // derived transforms wrap another rho
  PointwiseFn factor;      // DerivedT3: w;  DerivedT4: U * Utilde^{-1}
  std::string label;

  bool is_derived() const { return kind == Kind::DerivedT3 || kind == Kind::DerivedT4; }
};

// rho(g) = (∫ g^q outer)^{1/q}; q = kInf gives sup_t g(t)·outer(t)
Functional make_weighted_lq(double q, PiecewiseFn outer_weight);
// rho(g) = ||outer · g||_q with Lebesgue measure; q defaults to the sup form
Functional make_sup_form(PiecewiseFn multiplier, double q = kInf);
// rho(g) = || t -> (∫_0^t g^r inner)^{1/r} ||_{Lq(outer)}
Functional make_iterated(double r, PiecewiseFn inner_weight, double q, PiecewiseFn outer_weight);
// rho_{m,w}(f) = rho(f^m w)^{1/m}
Functional derived_t3(Functional base, double m, PointwiseFn w);
// rho_m(g) = rho(g^m U Utilde^{-1})^{1/m}
Functional derived_t4(Functional base, double m, PointwiseFn U, PointwiseFn Utilde);

// evaluate rho(g); infinite values are legal, NonConvergence propagates
double apply(const Functional& rho, const PointwiseFn& g, double tol = 1e-9);
double apply(const Functional& rho, const TestFunction& f, double tol = 1e-9);

// rho(1), exact (closed form) for the weighted-Lq and sup families
double rho_one(const Functional& rho);

struct AxiomReport {
  int lattice_violations = 0;
  double K_quasi = 1.0;   // smallest K validating rho(f+1) <= K(rho(f)+rho(1))
  double K_weak = 1.0;    // smallest K validating rho(lambda f) <= K lambda rho(f)
  int n = 0;
  std::uint64_t seed = 0;
};

AxiomReport check_axioms(const Functional& rho, const GeneratorProfile& profile, int n);

// K^3 c rho(f) + K^2 lambda rho(1) - rho(c f + lambda); claimed nonnegative
double general_lambda_check(const Functional& rho, double K, const TestFunction& f, double c,
                            double lambda);

const char* kind_name(Functional::Kind k);

} // namespace submono
