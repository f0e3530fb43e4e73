#ifndef QMT_LP_HPP
#define QMT_LP_HPP

#include <optional>
#include <vector>

#include "qmt/rational.hpp"

namespace qmt {

/// Result of an exact LP solve: optimal value and a primal optimum.
struct LpSolution {
  Rat objective;
  std::vector<Rat> x;
};

/**
 * Minimize c.x subject to A x = b, x >= 0, in exact rational arithmetic.
 * Two-phase simplex with Bland's rule (no cycling). Redundant equality rows
 * are tolerated. Returns nullopt when infeasible; throws on unbounded
 * problems (cannot happen over a transportation polytope).
 */
std::optional<LpSolution> lp_solve_exact(const std::vector<std::vector<Rat>>& A,
                                         const std::vector<Rat>& b, const std::vector<Rat>& c);

}  // namespace qmt

#endif
