#pragma once
#include <optional>
#include <string>
#include <vector>

#include "submono/functionals.hpp"

namespace submono {

// Statements come in pairs that share an evaluator and differ only in how the
// parameters are quantified (for-every vs there-exist).
enum class Quantifier { None, ForAllParams, ExistsParams };
Quantifier quantifier(StatementId id);

struct StatementInstance {
  StatementId id = StatementId::T1_i;
  Params params;
  Weight v = Weight::one();
  std::optional<Weight> u;  // second weight of the two-weight families
  Functional rho;
};

struct Violation {
  std::string field;
  std::string constraint;
};

// every violated parameter constraint, with human-readable constraint text;
// an empty list means the instance is admissible
std::vector<Violation> validate(const StatementInstance& inst);

struct EvalRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0/0, x/inf and inf/inf all collapse to 0
};

// the function the outer functional is applied to on the left-hand side
PointwiseFn statement_argument(const StatementInstance& inst, const TestFunction& f);

double lhs(const StatementInstance& inst, const TestFunction& f, double tol = 1e-9);
double rhs(const StatementInstance& inst, const TestFunction& f);
EvalRecord evaluate(const StatementInstance& inst, const TestFunction& f, double tol = 1e-9);

// rho(1) / (∫_0^∞ v)^{1/p}; x/inf = 0, so the check passes trivially whenever
// V(inf) = inf
double constant_term_check(const StatementInstance& inst);

// w(t) = exp( (1/(p U(t))) ∫_0^t log(u/v) u ds ), evaluated by exact
// per-segment antiderivatives (log of a power is linear in log s)
PointwiseFn t3_derived_weight(const Weight& u, const Weight& v, double p);

// u~ = u^{p/(p+1)} v^{1/(p+1)}, again a piecewise power weight
Weight t4_derived_weight(const Weight& u, const Weight& v, double p);

// ∫_0^∞ f(t)^rf V(t)^eta v(t) dt with rf > 0.  Cells are exact wherever f is
// a single monomial and V a pure power there; divergence at either endpoint
// is classified analytically, so +inf is returned rather than thrown.
double weighted_moment(const TestFunction& f, double rf, const Weight& w, double eta);

} // namespace submono
