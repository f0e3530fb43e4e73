#ifndef QMT_QUANTALE_HPP
#define QMT_QUANTALE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmt/rational.hpp"

namespace qmt {

enum class QuantaleKind : std::uint8_t { boolean, lawvere };

std::string quantale_name(QuantaleKind k);
QuantaleKind quantale_from_name(std::string_view name);

/**
 * Element of one of the two built-in quantales.
 *
 * Boolean: {bot, top} ordered bot ⊑ top, monoid (⊓, top).
 * Lawvere: [0, ∞] with the numerically *reversed* order (a ⊑ b iff a ≥ b),
 * monoid (+, 0). So top = 0, bot = ∞, join = numeric min, meet = numeric max.
 */
class QVal {
 public:
  static QVal boolean(bool v) { return QVal(QuantaleKind::boolean, v, false, Rat(0)); }
  static QVal lawvere(Rat v);
  static QVal lawvere_inf() { return QVal(QuantaleKind::lawvere, false, true, Rat(0)); }
  static QVal top(QuantaleKind k);
  static QVal bottom(QuantaleKind k);

  QuantaleKind kind() const { return kind_; }
  bool as_bool() const;
  bool is_inf() const { return kind_ == QuantaleKind::lawvere && inf_; }
  /// Finite Lawvere value; throws on Boolean or ∞.
  const Rat& finite() const;

  bool operator==(const QVal& o) const;
  bool operator!=(const QVal& o) const { return !(*this == o); }

  std::string str() const;

 private:
  QVal(QuantaleKind k, bool b, bool inf, Rat r) : kind_(k), b_(b), inf_(inf), r_(std::move(r)) {}
  QuantaleKind kind_;
  bool b_;
  bool inf_;
  Rat r_;
};

QVal parse_qval(QuantaleKind k, std::string_view text);

// Quantale operations. All binary ops require matching kinds (VariantError otherwise).
bool q_leq(const QVal& a, const QVal& b);
QVal q_tensor(const QVal& a, const QVal& b);  // ⊕: Boolean meet / Lawvere addition
QVal q_join(QuantaleKind k, std::span<const QVal> xs);
QVal q_meet(QuantaleKind k, std::span<const QVal> xs);
QVal q_join2(const QVal& a, const QVal& b);
QVal q_meet2(const QVal& a, const QVal& b);
inline QVal q_unit(QuantaleKind k) { return QVal::top(k); }  // integral: k = top

/// Prop: in an integral quantale a ⊕ b ⊑ a ⊓ b. Must hold for every pair.
bool integrality_check(const QVal& a, const QVal& b);

/**
 * Sampled check of infinite join distributivity x ⊓ ⊔S = ⊔{x ⊓ s}, restricted
 * to the finite subsets the engine ever forms. Ops must provide:
 *   value_type, meet2(a,b), join(span) and a list of sample elements.
 */
template <class Ops>
bool check_ijd_sampled(const Ops& ops, std::span<const typename Ops::value_type> elems,
                       std::size_t max_subset = 3) {
  const std::size_t n = elems.size();
  std::vector<typename Ops::value_type> subset;
  // All subsets up to max_subset elements, indices strictly increasing.
  std::vector<std::size_t> idx;
  auto run = [&](auto&& self, std::size_t start) -> bool {
    if (!idx.empty()) {
      subset.clear();
      for (std::size_t i : idx) subset.push_back(elems[i]);
      auto joined = ops.join(std::span<const typename Ops::value_type>(subset));
      for (const auto& x : elems) {
        auto lhs = ops.meet2(x, joined);
        std::vector<typename Ops::value_type> met;
        met.reserve(subset.size());
        for (const auto& s : subset) met.push_back(ops.meet2(x, s));
        auto rhs = ops.join(std::span<const typename Ops::value_type>(met));
        if (!(lhs == rhs)) return false;
      }
    }
    if (idx.size() == max_subset) return true;
    for (std::size_t i = start; i < n; ++i) {
      idx.push_back(i);
      if (!self(self, i + 1)) return false;
      idx.pop_back();
    }
    return true;
  };
  return run(run, 0);
}

struct BuiltinQuantaleOps {
  using value_type = QVal;
  QuantaleKind kind;
  QVal meet2(const QVal& a, const QVal& b) const { return q_meet2(a, b); }
  QVal join(std::span<const QVal> xs) const { return q_join(kind, xs); }
};

/// IJD gate used before admitting ⊓-flavoured closure rules or max products.
bool builtin_ijd_ok(QuantaleKind k);

/// Deterministic sample values (used by law suites and the IJD gate).
std::vector<QVal> quantale_samples(QuantaleKind k, std::uint64_t seed, std::size_t count);

enum class ProductMode { sum, max };

/**
 * Finite V-hemimetric space: points 0..size-1, distance matrix row-major.
 * `pseudometric` additionally asserts symmetry.
 */
struct HemiSpace {
  QuantaleKind kind = QuantaleKind::lawvere;
  bool pseudometric = false;
  std::size_t size = 0;
  std::vector<QVal> d;  // size*size entries

  const QVal& dist(std::size_t i, std::size_t j) const { return d[i * size + j]; }
  /// Throws Error describing the first violated law (reflexivity, triangle, symmetry).
  void validate() const;
};

HemiSpace product_space(const HemiSpace& x, const HemiSpace& y, ProductMode mode);

}  // namespace qmt

#endif
