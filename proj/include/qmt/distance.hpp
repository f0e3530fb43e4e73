#ifndef QMT_DISTANCE_HPP
#define QMT_DISTANCE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "qmt/quantale.hpp"
#include "qmt/semantics.hpp"

namespace qmt {

/// Entrywise preorder A <= B in the semiring order; Boolean-quantale distance.
bool entrywise_leq(const Mat& A, const Mat& B, const SemiringSpec& R);

enum class TvMethod { sum, sup, coupling };

/**
 * Total variation distance, three independent routes:
 *   sum      — (1/2) Σ |mu(x) - nu(x)|
 *   sup      — max over subsets S of |mu(S) - nu(S)| (support <= 12)
 *   coupling — exact LP minimum of the off-diagonal coupling mass (support <= 6)
 */
Rat tv(const Distribution& mu, const Distribution& nu, TvMethod method = TvMethod::sum);

/// Joint weights over pairs (i,j) with prescribed marginals.
struct Coupling {
  std::size_t m = 0;
  std::vector<Rat> w;  // m*m, row-major: w[i*m+j]

  const Rat& at(std::size_t i, std::size_t j) const { return w[i * m + j]; }
  Distribution left_marginal() const;
  Distribution right_marginal() const;
  Rat off_diagonal_mass() const;
};

/// Minimizer of the off-diagonal mass; witnesses tv via the coupling route.
Coupling optimal_coupling(const Distribution& mu, const Distribution& nu);

/// Column-wise maximum of tv; n = 0 yields 0 (empty max) — flagged by callers.
Rat tvmax(const StochMat& A, const StochMat& B, TvMethod method = TvMethod::sum);
Rat tvmax(const Mat& A, const Mat& B, TvMethod method = TvMethod::sum);

/**
 * Splitting of a pair of distributions along their total variation:
 * lambda = tv(mu,nu) and mu = mu' +_lambda tau, nu = nu' +_lambda tau as
 * exact identities (the minimum-overlap construction).
 */
struct SplitResult {
  Rat lambda;
  Distribution mu_prime;
  Distribution nu_prime;
  Distribution tau;
};
SplitResult split(const Distribution& mu, const Distribution& nu);

/// Semantic distance between two equally-typed terms under the theory's model.
QVal semantic_distance(const Term& f, const Term& g, const QuantTheory& theory);

/// Is qe true in the model: eps ⊑ d(eval lhs, eval rhs)?
bool truth_check(const QuantEq& qe, const QuantTheory& model_theory);

/// Law-check report for the enrichment bounds over random stochastic samples.
struct LawReport {
  std::size_t samples = 0;
  std::size_t seq_bound_violations = 0;   // tvmax(A;A',B;B') <= tvmax(A,B)+tvmax(A',B')
  std::size_t dsum_equality_failures = 0; // tvmax(A⊕A',B⊕B') == max of the two
  bool witness_violates_meet = false;  // the 3/4 > 1/2 counterexample
  std::string first_counterexample;

  bool ok() const {
    return seq_bound_violations == 0 && dsum_equality_failures == 0 &&
           witness_violates_meet;
  }
};
LawReport law_checks(std::uint64_t seed, std::size_t samples);

/// Random rational distribution / stochastic matrix samplers (deterministic).
Distribution random_distribution(std::mt19937_64& rng, std::size_t support);
Mat random_stochastic(std::mt19937_64& rng, int rows, int cols);

/// Quadruple (A, B, C, C') witnessing that sequential composition is not
/// nonexpansive for the max product: tvmax(C;A, C';B) = 3/4 > 1/2.
struct MeetCounterexample {
  Mat A, B, C, Cp;
};
MeetCounterexample meet_violation_witness();

}  // namespace qmt

#endif
