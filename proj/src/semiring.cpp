#include "qmt/semiring.hpp"

#include <random>

#include "qmt/errors.hpp"

namespace qmt {

namespace {

Rat bool_add(const Rat& a, const Rat& b) { return (a != 0 || b != 0) ? Rat(1) : Rat(0); }
Rat bool_mul(const Rat& a, const Rat& b) { return (a != 0 && b != 0) ? Rat(1) : Rat(0); }
bool bool_valid(const Rat& a) { return a == 0 || a == 1; }

Rat rat_add(const Rat& a, const Rat& b) { return a + b; }
Rat rat_mul(const Rat& a, const Rat& b) { return a * b; }
bool num_leq(const Rat& a, const Rat& b) { return a <= b; }
bool nonneg_valid(const Rat& a) { return a >= 0; }

}  // namespace

const SemiringSpec& boolean_semiring() {
  static const SemiringSpec r{"boolean", bool_add, bool_mul, Rat(0), Rat(1), num_leq, bool_valid};
  return r;
}

const SemiringSpec& nonneg_rational_semiring() {
  static const SemiringSpec r{"nonneg_rational", rat_add,   rat_mul, Rat(0),
                              Rat(1),            num_leq,   nonneg_valid};
  return r;
}

const SemiringSpec& semiring_from_name(std::string_view name) {
  if (name == "boolean") return boolean_semiring();
  if (name == "nonneg_rational") return nonneg_rational_semiring();
  throw ParseError("unknown semiring '" + std::string(name) + "'");
}

std::vector<Rat> semiring_samples(const SemiringSpec& r, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Rat> out;
  out.push_back(r.zero);
  out.push_back(r.one);
  if (r.name == "boolean") {
    while (out.size() < count) out.push_back(Rat(rng() & 1));
    return out;
  }
  std::uniform_int_distribution<int> num(0, 20), den(1, 6);
  while (out.size() < count) out.push_back(Rat(num(rng), den(rng)));
  return out;
}

void check_semiring_laws(const SemiringSpec& r, std::uint64_t seed, std::size_t samples) {
  auto xs = semiring_samples(r, seed, samples);
  auto fail = [&](const std::string& law) {
    throw Error("semiring '" + r.name + "' violates " + law);
  };
  for (const auto& a : xs)
    for (const auto& b : xs) {
      if (r.add(a, b) != r.add(b, a)) fail("add commutativity");
      if (r.mul(a, b) != r.mul(b, a)) fail("mul commutativity");
      if (r.add(a, r.zero) != a) fail("additive unit");
      if (r.mul(a, r.one) != a) fail("multiplicative unit");
      if (r.mul(a, r.zero) != r.zero) fail("zero absorption");
    }
  for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
    const Rat &a = xs[i], &b = xs[i + 1], &c = xs[i + 2];
    if (r.add(r.add(a, b), c) != r.add(a, r.add(b, c))) fail("add associativity");
    if (r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c))) fail("mul associativity");
    if (r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c))) fail("distributivity");
  }
  // Monotonicity of + and * in both arguments.
  for (const auto& a : xs)
    for (const auto& a2 : xs)
      for (const auto& b : xs)
        for (const auto& b2 : xs) {
          if (!r.leq(a, a2) || !r.leq(b, b2)) continue;
          if (!r.leq(r.add(a, b), r.add(a2, b2))) fail("add monotonicity");
          if (!r.leq(r.mul(a, b), r.mul(a2, b2))) fail("mul monotonicity");
        }
}

}  // namespace qmt
