#pragma once
#include <optional>
#include <string>

namespace submono {

enum class StatementId {
  T1_i, T1_ii, T1_iii, T1_iv, T1_v, T1_vi, T1_vii, T1_viii, T1_ix,
  T3_i, T3_ii, T3_iii,
  T4_i, T4_ii, T4_iii,
};

const char* to_string(StatementId id);
std::optional<StatementId> statement_from_string(const std::string& s);

// the phi catalogue for the phi-mean operator
struct Phi {
  enum class Kind { Ln, Reciprocal, Power } kind = Kind::Ln;
  double theta = 0.5;  // only for Kind::Power, must lie in (0,1)
};

struct Params {
  double p = 2.0;
  double r = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double m = 1.0;
  Phi phi{};
  double pconj() const { return p / (p - 1.0); }
};

} // namespace submono
