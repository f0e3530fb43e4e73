#ifndef QMT_DIAGRAM_HPP
#define QMT_DIAGRAM_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmt/rational.hpp"

namespace qmt {

/// Declaration of a generator (or scalar-indexed generator family) in a signature.
struct GenDecl {
  std::string name;
  int arity = 0;
  int coarity = 0;
  bool takes_scalar = false;

  bool operator==(const GenDecl& o) const {
    return name == o.name && arity == o.arity && coarity == o.coarity &&
           takes_scalar == o.takes_scalar;
  }
};

struct Signature {
  std::map<std::string, GenDecl> gens;

  const GenDecl* find(const std::string& name) const {
    auto it = gens.find(name);
    return it == gens.end() ? nullptr : &it->second;
  }
  void add(GenDecl g) { gens[g.name] = std::move(g); }
  bool operator==(const Signature& o) const { return gens == o.gens; }
};

/// A concrete generator occurrence; scalar present iff the family is scalar-indexed.
struct Generator {
  std::string name;
  int arity = 0;
  int coarity = 0;
  std::optional<Rat> scalar;

  bool operator==(const Generator& o) const {
    return name == o.name && arity == o.arity && coarity == o.coarity && scalar == o.scalar;
  }
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

/**
 * Raw Σ-term: generators, id : 1→1, the empty diagram 0→0, the basic
 * symmetry 2→2, and the two compositions. Types are cached on construction;
 * seq() throws TypeError on a coarity/arity mismatch. Trees are immutable
 * and shared.
 */
struct TermNode {
  enum class Kind { gen, id1, empty, sym, seq, par };
  Kind kind;
  Generator generator;  // kind == gen
  Term left, right;     // kind == seq | par
  int arity = 0;
  int coarity = 0;
};

Term gen(Generator g);
Term gen(const GenDecl& d, std::optional<Rat> scalar = std::nullopt);
Term id1();
Term empty_diag();
Term basic_sym();
/// Sequential composition s ; t. Drops exact identity factors.
Term seq(const Term& s, const Term& t);
/// Parallel composition s ⊗ t. Drops empty factors.
Term par(const Term& s, const Term& t);
Term seq_fold(std::span<const Term> ts);  // left fold; empty list is invalid
Term par_fold(std::span<const Term> ts);  // left fold; empty list -> empty diagram

Term id_n(int n);
/// True iff t is id_n for some n (structurally, as produced by id_n).
bool is_identity(const Term& t);

/// σ_{m,n} : m+n → n+m.
Term sym_mn(int m, int n);
/// Wire permutation sending input i to output perm[i], built from adjacent swaps.
Term perm_term(std::span<const int> perm);

bool structural_equal(const Term& a, const Term& b);

/// Validates generators against sig and returns (arity, coarity).
std::pair<int, int> typecheck(const Term& t, const Signature& sig);

// --- signatures of the two case studies -------------------------------------

/// delete 1→0, copy 1→2, add 2→1, zero 0→1, scalar(k) 1→1.
const Signature& ha_signature();
/// del 0→1, cop 2→1, cc(λ) 1→2.
const Signature& ca_signature();

// --- structural combinators used by the matrix decompositions ----------------

/// m-fold copy 1→m over HA (copy_0 = del, copy_1 = id).
Term ha_copy_m(int m);
/// n-fold add n→1 over HA (add_0 = zero, add_1 = id).
Term ha_add_n(int n);
/// n-fold cop n→1 over CA (cop_0 = del, cop_1 = id).
Term ca_cop_n(int n);

/**
 * Canonical-form wires: b : n → nm from copy/delete only and w : nm → m from
 * zero/add/sym only, with F(w) = [I_m ... I_m] and F(b) the block diagonal of
 * n all-ones columns of height m. Results are memoized and shared.
 */
struct CanonicalWires {
  Term b;
  Term w;
};
CanonicalWires canonical_wires(int n, int m);

/// Merge p^n_m : nm → m over CA with F(p) = [I_m ... I_m]; m >= 1 required.
Term fritz_merge(int n, int m);

/// Thick-wire cop on an m-wire bundle (2m → m); equals p^2_m.
Term ca_thick_cop(int m);
/// Thick-wire del on an m-wire bundle (0 → m).
Term ca_thick_del(int m);

/// CA-term 1→m evaluating to exactly the given distribution weights (sum 1, m >= 1).
Term ca_dist_term(std::span<const Rat> weights);

/// Thick copy on bundles: c → k*c duplicating the whole c-wire bundle k times
/// (over HA's copy/delete); F is k stacked copies of I_c.
Term ha_copy_bundle(int c, int k);

/// Replace generator occurrences via name lookup; used to push Φ-images into a model.
Term substitute_generators(const Term& t, const std::function<Term(const Generator&)>& fn);

// --- parsing / printing ------------------------------------------------------

/**
 * Grammar: term := atom | term ";" term | term "*" term | "(" term ")"
 *          atom := IDENT | IDENT "(" RATIONAL ")" | "id" | "sym" | "empty"
 *                | "id_" NAT | "sym_" NAT "_" NAT
 * ';' binds looser than '*'; both left-associative.
 */
Term parse_term(std::string_view text, const Signature& sig);
std::string print_term(const Term& t);

}  // namespace qmt

#endif
