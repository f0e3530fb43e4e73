#ifndef QMT_SEMIRING_HPP
#define QMT_SEMIRING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmt/rational.hpp"

namespace qmt {

/**
 * Ordered semiring over exact rational carriers. The two built-ins are the
 * Boolean semiring {0,1} (add = or, mul = and) and the nonnegative rationals.
 * Both satisfy the monotonicity assumption: a<=a', b<=b' implies a+b<=a'+b'
 * and ab<=a'b'.
 */
struct SemiringSpec {
  std::string name;
  Rat (*add)(const Rat&, const Rat&) = nullptr;
  Rat (*mul)(const Rat&, const Rat&) = nullptr;
  Rat zero;
  Rat one;
  bool (*leq)(const Rat&, const Rat&) = nullptr;
  bool (*valid)(const Rat&) = nullptr;  // carrier membership

  bool operator==(const SemiringSpec& o) const { return name == o.name; }
};

const SemiringSpec& boolean_semiring();
const SemiringSpec& nonneg_rational_semiring();
const SemiringSpec& semiring_from_name(std::string_view name);

std::vector<Rat> semiring_samples(const SemiringSpec& r, std::uint64_t seed, std::size_t count);

/// Semiring laws + Assumption-style monotonicity on sampled tuples; throws on violation.
void check_semiring_laws(const SemiringSpec& r, std::uint64_t seed, std::size_t samples);

}  // namespace qmt

#endif
