#ifndef QMT_THEORY_HPP
#define QMT_THEORY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmt/diagram.hpp"
#include "qmt/quantale.hpp"
#include "qmt/semiring.hpp"

namespace qmt {

/// Plain equation between Σ-terms of equal type.
struct Equation {
  std::string name;
  Term lhs;
  Term rhs;
};

/// Quantitative equation lhs =_ε rhs.
struct QuantEq {
  Term lhs;
  Term rhs;
  QVal eps = QVal::lawvere(Rat(0));
};

enum class SeqRule { sum, meet };
enum class ParRule { sum, meet };

/**
 * Which inference rules close E_q: the sequential and parallel composition
 * flavours plus the optional symmetry rule.
 * Meet-flavoured rules require the quantale to pass the sampled IJD check.
 */
struct ClosureConfig {
  SeqRule seq_rule = SeqRule::sum;
  ParRule par_rule = ParRule::sum;
  bool symm = false;

  static ClosureConfig make(SeqRule s, ParRule p, bool symm, QuantaleKind quantale);
  /// Same gate with externally supplied IJD evidence (e.g. for added quantales).
  static ClosureConfig make(SeqRule s, ParRule p, bool symm, bool ijd_passed);
  bool operator==(const ClosureConfig& o) const {
    return seq_rule == o.seq_rule && par_rule == o.par_rule && symm == o.symm;
  }
};

/**
 * Scalar-indexed equation family. Instantiation may depend on the theory's
 * semiring (e.g. composing scalar generators multiplies their parameters).
 */
struct EqSchema {
  std::string id;
  int num_params = 0;
  bool (*in_domain)(const SemiringSpec*, std::span<const Rat>) = nullptr;
  Equation (*make)(const SemiringSpec*, std::span<const Rat>) = nullptr;
};

/// Scalar-indexed quantitative-equation family.
struct QuantSchema {
  std::string id;
  int num_params = 0;
  QuantaleKind quantale = QuantaleKind::lawvere;
  bool (*in_domain)(const SemiringSpec*, std::span<const Rat>) = nullptr;
  QuantEq (*make)(const SemiringSpec*, std::span<const Rat>) = nullptr;
};

const EqSchema& eq_schema(const std::string& id);
const QuantSchema& quant_schema(const std::string& id);

struct QuantTheory {
  std::string name;
  Signature signature;
  QuantaleKind quantale = QuantaleKind::lawvere;
  std::optional<SemiringSpec> semiring;  // HA-family theories carry one
  std::vector<Equation> equations;             // concrete members of E
  std::vector<std::string> eq_schemas;         // schema ids contributing to E
  std::vector<QuantEq> quant_eqs;              // concrete members of E_q
  std::vector<std::string> quant_schemas;      // schema ids contributing to E_q
  ClosureConfig closure;

  const SemiringSpec* semiring_ptr() const { return semiring ? &*semiring : nullptr; }
};

bool theory_equal(const QuantTheory& a, const QuantTheory& b);

enum class BuiltinTheory { ha, preord, ca, ba };
BuiltinTheory builtin_from_name(std::string_view name);

/**
 * Built-in theories. HA_R / PreOrd_R take the ordered semiring (validated on
 * construction); CA / BA ignore it.
 */
QuantTheory builtin_theory(BuiltinTheory which, const SemiringSpec& semiring = boolean_semiring());

/// Resolves "ha_bool", "preord_rat", "ca", "ba", ... or a file path.
QuantTheory resolve_theory(const std::string& name_or_path);

QuantEq instantiate_quant_schema(const QuantSchema& schema, const SemiringSpec* r,
                                 std::span<const Rat> args);
Equation instantiate_eq_schema(const EqSchema& schema, const SemiringSpec* r,
                               std::span<const Rat> args);

/// All grid instantiations of a schema whose arguments lie in its domain.
std::vector<Equation> eq_schema_grid(const EqSchema& schema, const SemiringSpec* r,
                                     std::span<const Rat> grid);
std::vector<QuantEq> quant_schema_grid(const QuantSchema& schema, const SemiringSpec* r,
                                       std::span<const Rat> grid);

/// The scalar grid used by the soundness checks: {0, 1/4, 1/3, 1/2, 2/3, 1}.
std::span<const Rat> scalar_grid();

// Line-oriented theory file format; see README. Round-trip stable.
QuantTheory load_theory(const std::string& path);
void save_theory(const QuantTheory& t, const std::string& path);
QuantTheory parse_theory_text(const std::string& text, const std::string& origin = "<string>");
std::string theory_text(const QuantTheory& t);

}  // namespace qmt

#endif
