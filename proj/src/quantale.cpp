#include "qmt/quantale.hpp"

#include <random>

namespace qmt {

std::string quantale_name(QuantaleKind k) {
  return k == QuantaleKind::boolean ? "boolean" : "lawvere";
}

QuantaleKind quantale_from_name(std::string_view name) {
  if (name == "boolean") return QuantaleKind::boolean;
  if (name == "lawvere") return QuantaleKind::lawvere;
  throw ParseError("unknown quantale '" + std::string(name) + "'");
}

QVal QVal::lawvere(Rat v) {
  if (v < 0) throw DomainError("Lawvere values must be >= 0, got " + rat_string(v));
  return QVal(QuantaleKind::lawvere, false, false, std::move(v));
}

QVal QVal::top(QuantaleKind k) {
  return k == QuantaleKind::boolean ? boolean(true) : lawvere(Rat(0));
}

QVal QVal::bottom(QuantaleKind k) {
  return k == QuantaleKind::boolean ? boolean(false) : lawvere_inf();
}

bool QVal::as_bool() const {
  if (kind_ != QuantaleKind::boolean) throw VariantError("as_bool on non-Boolean value");
  return b_;
}

const Rat& QVal::finite() const {
  if (kind_ != QuantaleKind::lawvere || inf_) throw VariantError("finite() on non-finite value");
  return r_;
}

bool QVal::operator==(const QVal& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == QuantaleKind::boolean) return b_ == o.b_;
  if (inf_ || o.inf_) return inf_ == o.inf_;
  return r_ == o.r_;
}

std::string QVal::str() const {
  if (kind_ == QuantaleKind::boolean) return b_ ? "top" : "bot";
  if (inf_) return "inf";
  return rat_string(r_);
}

QVal parse_qval(QuantaleKind k, std::string_view text) {
  if (k == QuantaleKind::boolean) {
    if (text == "top") return QVal::boolean(true);
    if (text == "bot") return QVal::boolean(false);
    throw ParseError("Boolean quantale value must be 'top' or 'bot', got '" + std::string(text) + "'");
  }
  if (text == "inf") return QVal::lawvere_inf();
  if (text == "top") return QVal::top(k);
  if (text == "bot") return QVal::bottom(k);
  return QVal::lawvere(parse_rat(text));
}

static void same_kind(const QVal& a, const QVal& b) {
  if (a.kind() != b.kind())
    throw VariantError("mixed quantale variants: " + quantale_name(a.kind()) + " vs " + quantale_name(b.kind()));
}

bool q_leq(const QVal& a, const QVal& b) {
  same_kind(a, b);
  if (a.kind() == QuantaleKind::boolean) return !a.as_bool() || b.as_bool();
  // reversed numeric order: a ⊑ b iff a >= b, with inf the numeric maximum
  if (a.is_inf()) return true;
  if (b.is_inf()) return false;
  return a.finite() >= b.finite();
}

QVal q_tensor(const QVal& a, const QVal& b) {
  same_kind(a, b);
  if (a.kind() == QuantaleKind::boolean) return QVal::boolean(a.as_bool() && b.as_bool());
  if (a.is_inf() || b.is_inf()) return QVal::lawvere_inf();
  return QVal::lawvere(a.finite() + b.finite());
}

QVal q_join2(const QVal& a, const QVal& b) {
  same_kind(a, b);
  if (a.kind() == QuantaleKind::boolean) return QVal::boolean(a.as_bool() || b.as_bool());
  if (a.is_inf()) return b;
  if (b.is_inf()) return a;
  return QVal::lawvere(a.finite() < b.finite() ? a.finite() : b.finite());
}

QVal q_meet2(const QVal& a, const QVal& b) {
  same_kind(a, b);
  if (a.kind() == QuantaleKind::boolean) return QVal::boolean(a.as_bool() && b.as_bool());
  if (a.is_inf() || b.is_inf()) return QVal::lawvere_inf();
  return QVal::lawvere(a.finite() > b.finite() ? a.finite() : b.finite());
}

QVal q_join(QuantaleKind k, std::span<const QVal> xs) {
  QVal acc = QVal::bottom(k);
  for (const auto& x : xs) acc = q_join2(acc, x);
  return acc;
}

QVal q_meet(QuantaleKind k, std::span<const QVal> xs) {
  QVal acc = QVal::top(k);
  for (const auto& x : xs) acc = q_meet2(acc, x);
  return acc;
}

bool integrality_check(const QVal& a, const QVal& b) {
  return q_leq(q_tensor(a, b), q_meet2(a, b));
}

std::vector<QVal> quantale_samples(QuantaleKind k, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<QVal> out;
  out.reserve(count);
  if (k == QuantaleKind::boolean) {
    out.push_back(QVal::boolean(false));
    out.push_back(QVal::boolean(true));
    while (out.size() < count) out.push_back(QVal::boolean(rng() & 1));
    return out;
  }
  out.push_back(QVal::top(k));
  out.push_back(QVal::bottom(k));
  std::uniform_int_distribution<int> num(0, 24), den(1, 8);
  while (out.size() < count) out.push_back(QVal::lawvere(Rat(num(rng), den(rng))));
  return out;
}

bool builtin_ijd_ok(QuantaleKind k) {
  BuiltinQuantaleOps ops{k};
  auto samples = quantale_samples(k, 0x51D5u, 10);
  return check_ijd_sampled(ops, std::span<const QVal>(samples));
}

void HemiSpace::validate() const {
  if (d.size() != size * size) throw Error("hemimetric space: distance table has wrong shape");
  const QVal unit = q_unit(kind);
  for (std::size_t i = 0; i < size; ++i) {
    if (!q_leq(unit, dist(i, i)))
      throw Error("hemimetric space: reflexivity fails at point " + std::to_string(i));
  }
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      for (std::size_t l = 0; l < size; ++l) {
        if (!q_leq(q_tensor(dist(i, j), dist(j, l)), dist(i, l)))
          throw Error("hemimetric space: triangle fails at (" + std::to_string(i) + "," +
                      std::to_string(j) + "," + std::to_string(l) + ")");
      }
  if (pseudometric) {
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        if (!(dist(i, j) == dist(j, i)))
          throw Error("pseudometric space: symmetry fails at (" + std::to_string(i) + "," +
                      std::to_string(j) + ")");
  }
}

HemiSpace product_space(const HemiSpace& x, const HemiSpace& y, ProductMode mode) {
  if (x.kind != y.kind) throw VariantError("product of spaces over different quantales");
  if (mode == ProductMode::max && !builtin_ijd_ok(x.kind))
    throw DomainError("max product requires the quantale to pass the IJD check");
  HemiSpace p;
  p.kind = x.kind;
  p.pseudometric = x.pseudometric && y.pseudometric;
  p.size = x.size * y.size;
  p.d.reserve(p.size * p.size);
  // point (i, j) has index i * y.size + j
  for (std::size_t i = 0; i < x.size; ++i)
    for (std::size_t j = 0; j < y.size; ++j)
      for (std::size_t i2 = 0; i2 < x.size; ++i2)
        for (std::size_t j2 = 0; j2 < y.size; ++j2) {
          const QVal& dx = x.dist(i, i2);
          const QVal& dy = y.dist(j, j2);
          p.d.push_back(mode == ProductMode::sum ? q_tensor(dx, dy) : q_meet2(dx, dy));
        }
  return p;
}

}  // namespace qmt
