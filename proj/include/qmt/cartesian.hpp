#ifndef QMT_CARTESIAN_HPP
#define QMT_CARTESIAN_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmt/certify.hpp"
#include "qmt/quantale.hpp"

namespace qmt {

struct CTermNode;
using CTerm = std::shared_ptr<const CTermNode>;

/// Cartesian term: de Bruijn-style variable into a declared context, or an
/// operation (coarity 1) applied to arguments.
struct CTermNode {
  bool is_var = false;
  int var = 0;        // is_var
  std::string op;     // !is_var
  std::vector<CTerm> args;
};

CTerm cvar(int index);
CTerm cop(std::string op, std::vector<CTerm> args);
bool cterm_equal(const CTerm& a, const CTerm& b);
std::string print_cterm(const CTerm& t);

/// Grammar: t := xN | IDENT | IDENT "(" t ("," t)* ")". Variables are x1, x2, ...
CTerm parse_cterm(std::string_view text, const std::map<std::string, int>& ops);

/// Largest variable index + 1 (minimum context size).
int cterm_min_context(const CTerm& t);

/// Simultaneous substitution; sigma[i] replaces variable i. Unbound variable -> error.
CTerm substitute(const CTerm& t, std::span<const CTerm> sigma);

struct CartAxiom {
  CTerm lhs;
  CTerm rhs;
  int ctx = 0;
};

struct CartQuantAxiom {
  CTerm lhs;
  CTerm rhs;
  QVal eps = QVal::lawvere(Rat(0));
  int ctx = 0;
};

/// Unconditional quantitative algebraic theory (all operations coarity 1).
struct CartTheory {
  std::map<std::string, int> ops;  // name -> arity
  std::vector<CartAxiom> equations;
  std::vector<CartQuantAxiom> quant_axioms;
  QuantaleKind quantale = QuantaleKind::lawvere;
  bool symm = true;
};

/// Σ' = Σ ⊎ {copy, del} as a monoidal signature.
Signature phi_signature(const CartTheory& theory);

/// Φ-translation of a term in a context: a diagram ctx -> 1 over Σ'.
Term phi_translate(const CTerm& t, int ctx);
/// Φ of a tuple ⟨s_1..s_k⟩ : ctx -> k (context copied k times, terms in parallel).
Term phi_tuple(std::span<const CTerm> terms, int ctx);

// --- unconditional quantitative equational logic ---------------------------------

enum class QelRule { bot, mon, cont, refl, symm, triang, subq, nexp, axiom };
std::string qel_rule_name(QelRule r);
QelRule qel_rule_from_name(std::string_view name);

/// One whole-term rewrite step justifying a Refl' leaf: an axiom instance
/// (lhs[sigma] -> rhs[sigma], or reversed).
struct ReflStep {
  std::size_t axiom_index = 0;
  bool reversed = false;
  std::vector<CTerm> subst;
};

struct QelNode {
  QelRule rule = QelRule::refl;
  CTerm lhs;
  CTerm rhs;
  QVal eps = QVal::lawvere(Rat(0));
  int ctx = 0;
  std::vector<QelNode> children;
  std::vector<CTerm> subst;        // SubQ: sigma over the child's context
  std::string op;                  // NExp
  std::size_t axiom_index = 0;     // Axiom
  std::vector<ReflStep> witness;   // Refl': chain of axiom instances lhs -> rhs
};

using QelCertificate = QelNode;

/// Validates the QEL proof tree; returns the root ε. Refl' leaves accept
/// syntactic equality or the supplied witness chain (whole-term axiom
/// instances closed under substitution).
QVal check_qel(const QelCertificate& cert, const CartTheory& theory);

struct SimulationResult {
  Certificate cert;
  QuantTheory uprime;  // Σ', translated E_q, closure (SEQ_SUM, PAR_MEET, symm)
};

/**
 * Certificate-level rule simulation: produces a monoidal certificate over U'
 * whose root judgment is (Φ lhs, Φ rhs) with the same ε. E-equality leaves of
 * user theories need CheckOptions::assume_refl when re-checking.
 */
SimulationResult simulate_qel_in_monoidal(const QelCertificate& cert, const CartTheory& theory);

std::string qel_cert_text(const QelCertificate& cert);
QelCertificate parse_qel_cert(std::string_view text, const CartTheory& theory);

}  // namespace qmt

#endif
