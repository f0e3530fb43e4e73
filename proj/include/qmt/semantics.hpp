#ifndef QMT_SEMANTICS_HPP
#define QMT_SEMANTICS_HPP

#include <string>
#include <vector>

#include "qmt/diagram.hpp"
#include "qmt/semiring.hpp"
#include "qmt/theory.hpp"

namespace qmt {

/**
 * Dense exact-rational matrix. A diagram n → m evaluates to an m×n matrix;
 * the unique empty m×0 and 0×n matrices are first-class.
 */
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<Rat> a;  // row-major, rows*cols entries

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rat(0)) {}
  Rat& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Mat identity(int n);
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  std::string str() const;  // [[...],[...]] row-major
};

/// Diagrammatic composite A ; B (matrix product B*A); inner objects must agree.
Mat mat_compose(const Mat& A, const Mat& B, const SemiringSpec& R);
/// Direct sum, block diagonal.
Mat mat_dsum(const Mat& A, const Mat& B);
/// Plain rational instances (the [0,1]-entries case used by FStoch).
Mat mat_compose(const Mat& A, const Mat& B);

/// Column-stochastic validation: entries in [0,1], every column sums to 1.
bool is_stochastic(const Mat& m);

/// m×n stochastic matrix; FStoch has no morphisms n→0 for n >= 1.
class StochMat {
 public:
  explicit StochMat(Mat m);
  const Mat& mat() const { return m_; }
  int rows() const { return m_.rows; }
  int cols() const { return m_.cols; }

 private:
  Mat m_;
};

/// Finitely supported probability distribution with exact weights.
struct Distribution {
  std::vector<Rat> w;

  explicit Distribution(std::vector<Rat> weights);
  std::size_t size() const { return w.size(); }
  bool operator==(const Distribution& o) const { return w == o.w; }
};

Distribution column(const Mat& m, int j);
/// Convex combination mu +_p nu (weight p on mu).
Distribution convex_comb(const Distribution& mu, const Distribution& nu, const Rat& p);

/// Evaluation functor for the HA_R signature into Mat_R.
Mat eval_ha(const Term& t, const SemiringSpec& R);
/// Evaluation functor for the CA signature into FStoch.
StochMat eval_ca(const Term& t);

enum class ModelFamily { ha_matrix, ca_stoch };
/// Which faithful built-in model a theory evaluates under, if any.
ModelFamily model_family(const QuantTheory& t);

/// Evaluate a term under the theory's model (HA-family or CA-family).
Mat eval_in_theory(const Term& t, const QuantTheory& theory);

/**
 * Equality modulo (E + SMC axioms), decided by evaluating under the theory's
 * faithful model; sound and complete for the built-in theories. Structural
 * equality short-circuits; theories without a model raise UnsupportedError.
 */
bool equal_in_theory(const Term& s, const Term& t, const QuantTheory& theory);

/// HA-term in canonical form b ; (⊗ scalars) ; w evaluating to exactly m.
Term matrix_to_ha_term(const Mat& m);
/// CA-term (⊗ column-distribution terms) ; p^n_m evaluating to exactly s.
Term stoch_to_ca_term(const StochMat& s);

/// One axiom's machine-check record.
struct AxiomCheck {
  std::string label;
  bool ok = false;
};

/// Evaluates every equation of the theory (schemas over the scalar grid) under
/// its model; an entry fails iff the two sides evaluate to different matrices.
std::vector<AxiomCheck> check_theory_equations(const QuantTheory& theory);

// JSON encoding with string rationals ("3/4"); round-trip stable.
std::string mat_json(const Mat& m);
Mat mat_from_json(const std::string& json_text);

}  // namespace qmt

#endif
