#pragma once
#include <algorithm>
#include <vector>

#include "submono/measure.hpp"
#include "submono/rng.hpp"

namespace testutil {

using namespace submono;

// random piecewise power-law weight, 1-4 segments
inline Weight random_weight(Rng& rng) {
  std::size_t nseg = 1 + rng.integer(4);
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < nseg; ++i) cuts.push_back(rng.log_uniform(0.1, 10.0));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Monomial> segs;
  for (std::size_t i = 0; i + 1 < cuts.size() + 2; ++i) {
    double gamma = (i == 0) ? rng.uniform(-0.9, 2.0) : rng.uniform(-2.5, 2.0);
    segs.push_back(Monomial{rng.log_uniform(0.3, 3.0), gamma});
  }
  return Weight(cuts, segs);
}

} // namespace testutil
