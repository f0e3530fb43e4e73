#ifndef QMT_CERTIFY_HPP
#define QMT_CERTIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qmt/distance.hpp"
#include "qmt/theory.hpp"

namespace qmt {

enum class Rule {
  refl,
  bot,
  mon,
  join,
  triang,
  symm,
  seq_sum,
  seq_meet,
  par_sum,
  par_meet,
  axiom,
};

std::string rule_name(Rule r);
Rule rule_from_name(std::string_view name);

/**
 * One derivation node. Every node carries the judgment it concludes
 * (lhs =_eps rhs); the checker recomputes eps from the rule and children and
 * demands an exact match (MON is the only weakening rule).
 *
 * AXIOM leaves name either a registered schema (schema_id + scalar args) or a
 * concrete member of the theory's E_q ("q<i>").
 */
struct CertNode {
  Rule rule = Rule::refl;
  Term lhs;
  Term rhs;
  QVal eps = QVal::lawvere(Rat(0));
  std::string schema_id;      // AXIOM only
  std::vector<Rat> args;      // AXIOM only
  std::vector<CertNode> children;
};

using Certificate = CertNode;

struct CheckOptions {
  /// Accept REFL leaves on trust when the theory has no faithful model.
  bool assume_refl = false;
};

struct CheckResult {
  QVal eps;
  /// Judgments accepted on trust ("lhs == rhs"), empty unless assume_refl hit.
  std::vector<std::string> trusted_refl;
};

/// Validates the tree against the theory and its closure; returns the root ε.
/// Throws CheckError naming the first failing node path.
CheckResult check(const Certificate& cert, const QuantTheory& theory,
                  const CheckOptions& opts = {});

/**
 * Constructive completeness for the matrix preorder: from F(f) <= F(g)
 * entrywise, build a checker-accepted certificate of f =_top g via the
 * canonical decomposition and one scalar-order axiom per entry.
 * Throws Error (with the violating entry) when the order fails.
 */
Certificate prove_matrix_order(const Term& f, const Term& g, const QuantTheory& theory);

/// Distance certificate for columns f, g : 1 -> m over BA; root ε = tv exactly.
Certificate prove_tv_column(const Term& f, const Term& g, const QuantTheory& theory);

/// Distance certificate for f, g : n -> m (n >= 1) over BA; root ε = tvmax exactly.
Certificate prove_tv_general(const Term& f, const Term& g, const QuantTheory& theory);

// Text format: nested s-expressions, one node per line, indentation by depth:
//   (RULE eps "lhs" "rhs" [schema args...] children...)
std::string cert_text(const Certificate& cert);
Certificate parse_cert(std::string_view text, const Signature& sig, QuantaleKind quantale);

std::string cert_json(const Certificate& cert);
Certificate cert_from_json(const std::string& json_text, const Signature& sig,
                           QuantaleKind quantale);

}  // namespace qmt

#endif
