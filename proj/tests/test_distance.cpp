#include "doctest.h"

#include <random>

#include "qmt/distance.hpp"
#include "qmt/errors.hpp"
#include "qmt/sampling.hpp"

using namespace qmt;

namespace {
Distribution dist(std::vector<Rat> w) { return Distribution(std::move(w)); }
}  // namespace

TEST_CASE("entrywise order") {
  const SemiringSpec& B = boolean_semiring();
  Mat a(2, 2), b(2, 2);
  a.at(0, 1) = 1;
  b.at(0, 0) = 1;
  b.at(0, 1) = 1;
  b.at(1, 1) = 1;
  CHECK(entrywise_leq(a, a, B));
  CHECK(entrywise_leq(a, b, B));
  CHECK_FALSE(entrywise_leq(b, a, B));
  Mat r1(1, 2), r2(1, 2);
  r1.at(0, 0) = 1;
  r2.at(0, 1) = 1;
  CHECK_FALSE(entrywise_leq(r1, r2, B));
  CHECK_FALSE(entrywise_leq(r2, r1, B));
  CHECK_THROWS_AS(entrywise_leq(a, r1, B), TypeError);
}

TEST_CASE("tv on the worked vectors") {
  Rat l(3, 10);
  Distribution mu = dist({l, 1 - l, Rat(0)});
  Distribution nu = dist({Rat(0), 1 - l, l});
  for (TvMethod m : {TvMethod::sum, TvMethod::sup, TvMethod::coupling}) CHECK(tv(mu, nu, m) == l);
  CHECK(tv(mu, mu) == 0);
  CHECK(tv(dist({Rat(1), Rat(0)}), dist({Rat(0), Rat(1)})) == 1);
  CHECK_THROWS_AS(tv(mu, dist({Rat(1)})), TypeError);
}

TEST_CASE("tv method limits") {
  std::vector<Rat> big(13, Rat(0));
  big[0] = 1;
  CHECK_THROWS_AS(tv(dist(big), dist(big), TvMethod::sup), UnsupportedError);
  std::vector<Rat> seven(7, Rat(0));
  seven[0] = 1;
  CHECK_THROWS_AS(tv(dist(seven), dist(seven), TvMethod::coupling), UnsupportedError);
  CHECK(tv(dist(big), dist(big), TvMethod::sum) == 0);
}

TEST_CASE("optimal couplings have the prescribed marginals") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 60; ++i) {
    std::size_t m = 1 + rng() % 6;
    Distribution mu = random_distribution(rng, m);
    Distribution nu = random_distribution(rng, m);
    Coupling w = optimal_coupling(mu, nu);
    CHECK(w.left_marginal() == mu);
    CHECK(w.right_marginal() == nu);
    CHECK(w.off_diagonal_mass() == tv(mu, nu, TvMethod::sum));
    for (const auto& x : w.w) CHECK(x >= 0);
  }
}

TEST_CASE("tvmax on the counterexample quadruple") {
  MeetCounterexample w = meet_violation_witness();
  CHECK(tvmax(w.C, w.Cp) == Rat(1, 2));
  CHECK(tvmax(w.A, w.B) == Rat(1, 2));
  Mat ca = mat_compose(w.C, w.A);
  Mat cb = mat_compose(w.Cp, w.B);
  CHECK(tvmax(ca, cb) == Rat(3, 4));
  // the sum bound still holds: 3/4 <= 1/2 + 1/2
  CHECK(tvmax(ca, cb) <= tvmax(w.C, w.Cp) + tvmax(w.A, w.B));
  CHECK(tvmax(w.A, w.A) == 0);
  CHECK_THROWS_AS(tvmax(w.A, w.C), TypeError);
  // empty-column convention
  CHECK(tvmax(Mat(2, 0), Mat(2, 0)) == 0);
}

TEST_CASE("split reproduces the worked decomposition exactly") {
  Distribution mu = dist({Rat(1, 2), Rat(1, 2)});
  Distribution nu = dist({Rat(4, 5), Rat(1, 5)});
  SplitResult s = split(mu, nu);
  CHECK(s.lambda == Rat(3, 10));
  CHECK(s.tau == dist({Rat(5, 7), Rat(2, 7)}));
  CHECK(s.mu_prime == dist({Rat(0), Rat(1)}));
  CHECK(s.nu_prime == dist({Rat(1), Rat(0)}));
  CHECK(convex_comb(s.mu_prime, s.tau, s.lambda) == mu);
  CHECK(convex_comb(s.nu_prime, s.tau, s.lambda) == nu);

  SplitResult zero = split(mu, mu);
  CHECK(zero.lambda == 0);
  CHECK(zero.tau == mu);

  SplitResult one = split(dist({Rat(1), Rat(0)}), dist({Rat(0), Rat(1)}));
  CHECK(one.lambda == 1);
  CHECK(one.mu_prime == dist({Rat(1), Rat(0)}));
  CHECK(one.nu_prime == dist({Rat(0), Rat(1)}));
  CHECK(convex_comb(one.mu_prime, one.tau, one.lambda) == dist({Rat(1), Rat(0)}));
}

TEST_CASE("tv is convex under k-ary convex combinations") {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 100; ++it) {
    std::size_t support = 1 + rng() % 5;
    std::size_t k = 2 + rng() % 4;
    Distribution weights = random_distribution(rng, k);
    std::vector<Distribution> mus, nus;
    for (std::size_t j = 0; j < k; ++j) {
      mus.push_back(random_distribution(rng, support));
      nus.push_back(random_distribution(rng, support));
    }
    std::vector<Rat> mixed_mu(support, Rat(0)), mixed_nu(support, Rat(0));
    Rat bound(0);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t x = 0; x < support; ++x) {
        mixed_mu[x] += weights.w[j] * mus[j].w[x];
        mixed_nu[x] += weights.w[j] * nus[j].w[x];
      }
      bound += weights.w[j] * tv(mus[j], nus[j]);
    }
    CHECK(tv(Distribution(mixed_mu), Distribution(mixed_nu)) <= bound);
  }
}

TEST_CASE("law checks pass and flag the meet violation") {
  LawReport rep = law_checks(99, 200);
  CHECK(rep.samples == 200);
  CHECK(rep.seq_bound_violations == 0);
  CHECK(rep.dsum_equality_failures == 0);
  CHECK(rep.witness_violates_meet);
  CHECK(rep.ok());
}

TEST_CASE("truth check compares epsilon against the model distance") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  const GenDecl& cc = *ca_signature().find("cc");
  // actual distance between cc(1/2) and cc(0) is 1/2
  QuantEq loose{gen(cc, Rat(1, 2)), gen(cc, Rat(0)), QVal::lawvere(Rat(9, 10))};
  CHECK(truth_check(loose, ba));
  QuantEq tight{gen(cc, Rat(1, 2)), gen(cc, Rat(0)), QVal::lawvere(Rat(1, 4))};
  CHECK_FALSE(truth_check(tight, ba));

  std::vector<Rat> half{Rat(1, 2)};
  CHECK(truth_check(instantiate_quant_schema(quant_schema("ba.tv"), nullptr, half), ba));

  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  std::vector<Rat> k01{Rat(0), Rat(1)};
  CHECK(truth_check(
      instantiate_quant_schema(quant_schema("preord.scalar_order"), &boolean_semiring(), k01),
      preord));

  QuantEq wrong_kind{gen(cc, Rat(0)), gen(cc, Rat(0)), QVal::boolean(true)};
  CHECK_THROWS_AS(truth_check(wrong_kind, ba), VariantError);
}

TEST_CASE("semantic distance is the hemimetric on the right quantale") {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  const GenDecl& sc = *ha_signature().find("scalar");
  CHECK(semantic_distance(gen(sc, Rat(0)), gen(sc, Rat(1)), preord) == QVal::boolean(true));
  CHECK(semantic_distance(gen(sc, Rat(1)), gen(sc, Rat(0)), preord) == QVal::boolean(false));
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  const GenDecl& cc = *ca_signature().find("cc");
  CHECK(semantic_distance(gen(cc, Rat(1)), gen(cc, Rat(1, 2)), ba) == QVal::lawvere(Rat(1, 2)));
}
