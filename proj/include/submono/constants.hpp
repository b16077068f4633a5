#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "submono/statements.hpp"

namespace submono {

struct ParameterOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct HypothesisUnsatisfied : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedFunctional : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// max{1, 2^{gamma-1}}: the price of splitting (a+b)^gamma termwise
double d_gamma(double gamma);

// [(beta - alpha p/r) r' + 1]^{-(r-1)/p} for r > 1 and 1 at r = 1: the
// Hoelder residue picked up when a prefix mass is traded for a moment
double kappa(double r, double p, double alpha, double beta);

// A_{p,alpha} = p/(p - 1 - alpha): prefix-average constant, alpha < p - 1
double hardy_const(double p, double alpha);
// B_{p,alpha} = p/(1 + alpha): tail-average constant, alpha > -1
double copson_const(double p, double alpha);

// The implication web between the averaging statements.  Each edge turns
// upper bounds for the source statement's constants into an upper bound for
// the target's, by the explicit formula recorded in `formula`.
enum class ChainEdgeId {
  I_to_VI,
  VI_to_II,
  II_to_III,
  II_to_IV,
  IV_to_V,
  V_to_III,
  VI_to_VII,
  VII_to_VIII,
  VIII_to_III,
  I_to_IX,
  IX_to_III,
  III_to_I,
};

const char* to_string(ChainEdgeId e);
std::optional<ChainEdgeId> chain_edge_from_string(const std::string& s);
const std::vector<ChainEdgeId>& all_chain_edges();

struct ChainEdge {
  ChainEdgeId id;
  StatementId source;
  StatementId target;
  std::vector<std::string> inputs;   // named constants consumed
  std::vector<std::string> outputs;  // named constants produced; first = main
  std::string formula;               // human-readable bound formula
  std::string note;                  // caveats (pinned parameters, labels)
};

const ChainEdge& edge_info(ChainEdgeId e);

struct ChainBoundOptions {
  // the derivation of the geometric-to-Copson edge only ever needs
  // alpha > -1/p; set to accept alpha at or below -1/p' as well
  bool relax_alpha_on_vi_to_ii = false;
};

// every constant the edge yields; throws MissingInput for an absent or
// non-finite input and ParameterOutOfRange for inadmissible parameters
std::map<std::string, double> chain_outputs(ChainEdgeId e,
                                            const std::map<std::string, double>& inputs,
                                            const Params& par, const ChainBoundOptions& opt = {});

// the main produced constant (the first name in edge_info(e).outputs);
// monotone nondecreasing in every input
double chain_bound(ChainEdgeId e, const std::map<std::string, double>& inputs, const Params& par,
                   const ChainBoundOptions& opt = {});

// One randomized check of a displayed inequality from the equivalence
// proof.  The inequality is normalized to lhs <= rhs; margin = rhs - lhs and
// a pass means margin >= -tol * scale with scale = max(|lhs|, |rhs|).  The
// Fubini step (16) is an equality and checks |margin| <= tol * scale.
struct StepCheckRecord {
  int step = 0;
  std::uint64_t seed = 0;
  std::string inputs;  // digest of the sampled configuration
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double scale = 0.0;
  double tol = 0.0;
  bool equality = false;
  bool pass = false;
};

int proof_step_count();  // 16
const char* proof_step_label(int step);

// draw a configuration from `seed` satisfying the step's hypotheses and
// evaluate both sides; steps whose sides are pure closed forms use
// tol_closed, anything routed through quadrature uses tol_quad
StepCheckRecord proof_step_check(int step, std::uint64_t seed, double tol_closed = 1e-9,
                                 double tol_quad = 1e-6);

// `trials` seeded checks of every step, in deterministic order
std::vector<StepCheckRecord> proof_step_suite(int trials, std::uint64_t seed0,
                                              double tol_closed = 1e-9, double tol_quad = 1e-6);

// Upper oracle for the best constant of the prefix-averaging statement with
// rho a weighted Lq, q >= p >= 1:
//   sup_t (∫_t^∞ outer V^{-q})^{1/q} V(t)^{1/p'} * (1+q/p')^{1/q} (1+p'/q)^{1/p'}
// with the sup taken over a fixed grid (16 points per decade on [1e-8, 1e8]
// plus every breakpoint).  An infinite value is a legal outcome and means the
// inequality cannot hold with any finite constant.
double muckenhoupt_upper(const Weight& v, const Functional& rho, double p);

}  // namespace submono
