#include "doctest.h"

#include <random>

#include "qmt/errors.hpp"
#include "qmt/sampling.hpp"
#include "qmt/semantics.hpp"

using namespace qmt;

namespace {
Term hg(const char* n) { return gen(*ha_signature().find(n)); }
Term hs(const Rat& k) { return gen(*ha_signature().find("scalar"), k); }
Term cg(const char* n) { return gen(*ca_signature().find(n)); }
Term ccg(const Rat& l) { return gen(*ca_signature().find("cc"), l); }
}  // namespace

TEST_CASE("matrix composition and direct sum") {
  Mat id2 = Mat::identity(2);
  Mat a(2, 2);
  a.at(0, 0) = Rat(1, 3);
  a.at(1, 0) = Rat(2, 3);
  a.at(0, 1) = Rat(1, 2);
  a.at(1, 1) = Rat(1, 2);
  CHECK(mat_compose(id2, a) == a);
  CHECK(mat_compose(a, id2) == a);

  Mat col(2, 1);
  col.at(0, 0) = Rat(1, 2);
  col.at(1, 0) = Rat(1, 2);
  Mat one(1, 1);
  one.at(0, 0) = 1;
  Mat ds = mat_dsum(col, one);
  CHECK(ds.rows == 3);
  CHECK(ds.cols == 2);
  CHECK(ds.at(0, 0) == Rat(1, 2));
  CHECK(ds.at(1, 0) == Rat(1, 2));
  CHECK(ds.at(2, 1) == 1);
  CHECK(ds.at(2, 0) == 0);

  // composite against a point-mass column: A(C) with C = [1,0]^T
  Mat A(2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = Rat(1, 2);
  A.at(1, 1) = Rat(1, 2);
  Mat C(2, 1);
  C.at(0, 0) = 1;
  Mat AC = mat_compose(C, A);
  CHECK(AC.at(0, 0) == 1);
  CHECK(AC.at(1, 0) == 0);

  CHECK_THROWS_AS(mat_compose(A, C), TypeError);
}

TEST_CASE("empty matrices compose categorically") {
  // 1 -> 0 -> 1 style composite yields the zero matrix
  Mat m01(0, 1);
  Mat m10(1, 0);
  Mat z = mat_compose(m01, m10, nonneg_rational_semiring());
  CHECK(z.rows == 1);
  CHECK(z.cols == 1);
  CHECK(z.at(0, 0) == 0);
  Mat e = mat_compose(m10, m01, nonneg_rational_semiring());
  CHECK(e.rows == 0);
  CHECK(e.cols == 0);
}

TEST_CASE("matrix model generator clauses") {
  const SemiringSpec& R = nonneg_rational_semiring();
  Mat copy = eval_ha(hg("copy"), R);
  CHECK(copy.rows == 2);
  CHECK(copy.cols == 1);
  CHECK(copy.at(0, 0) == 1);
  CHECK(copy.at(1, 0) == 1);
  CHECK(eval_ha(hg("del"), R).rows == 0);
  CHECK(eval_ha(hg("del"), R).cols == 1);
  CHECK(eval_ha(hg("zero"), R).rows == 1);
  CHECK(eval_ha(hg("zero"), R).cols == 0);
  Mat add = eval_ha(hg("add"), R);
  CHECK(add.rows == 1);
  CHECK(add.cols == 2);
  Mat empty = eval_ha(empty_diag(), R);
  CHECK(empty.rows == 0);
  CHECK(empty.cols == 0);
  CHECK(eval_ha(hs(Rat(3, 7)), R).at(0, 0) == Rat(3, 7));
  CHECK_THROWS_AS(eval_ha(hs(Rat(1, 2)), boolean_semiring()), DomainError);
}

TEST_CASE("the worked 2x2 decomposition recovers the entries") {
  const SemiringSpec& R = nonneg_rational_semiring();
  Rat a(1, 2), b(2), c(0), d(5, 3);
  Mat m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  CHECK(eval_ha(matrix_to_ha_term(m), R) == m);

  // spelled out: b^2_2 ; (a ⊗ c ⊗ b ⊗ d) ; w^2_2 (column-major scalar order)
  auto [bw, ww] = canonical_wires(2, 2);
  Term scalars = par(par(par(hs(a), hs(c)), hs(b)), hs(d));
  CHECK(eval_ha(seq(bw, seq(scalars, ww)), R) == m);
}

TEST_CASE("stochastic model generator clauses") {
  Mat del = eval_ca(cg("del")).mat();
  CHECK(del.rows == 1);
  CHECK(del.cols == 0);
  Mat cop = eval_ca(cg("cop")).mat();
  CHECK(cop.rows == 1);
  CHECK(cop.cols == 2);
  CHECK(cop.at(0, 0) == 1);
  CHECK(cop.at(0, 1) == 1);
  Mat cc = eval_ca(ccg(Rat(3, 10))).mat();
  CHECK(cc.at(0, 0) == Rat(3, 10));
  CHECK(cc.at(1, 0) == Rat(7, 10));

  // (TV) shapes from the worked proof
  Mat lhs = eval_ca(par(ccg(Rat(3, 10)), cg("del"))).mat();
  CHECK(lhs.rows == 3);
  CHECK(lhs.cols == 1);
  CHECK(lhs.at(0, 0) == Rat(3, 10));
  CHECK(lhs.at(1, 0) == Rat(7, 10));
  CHECK(lhs.at(2, 0) == 0);
  Mat rhs = eval_ca(par(cg("del"), ccg(Rat(7, 10)))).mat();
  CHECK(rhs.at(0, 0) == 0);
  CHECK(rhs.at(1, 0) == Rat(7, 10));
  CHECK(rhs.at(2, 0) == Rat(3, 10));

  CHECK_THROWS_AS(eval_ca(ccg(Rat(3, 2))), DomainError);
}

TEST_CASE("no morphisms n -> 0 in FStoch") {
  CHECK_THROWS_AS(StochMat(Mat(0, 2)), TypeError);
  Mat bad(2, 1);
  bad.at(0, 0) = Rat(1, 2);
  bad.at(1, 0) = Rat(1, 3);
  CHECK_THROWS_AS((void)StochMat(bad), TypeError);
  CHECK_NOTHROW((void)StochMat(Mat(0, 0)));  // identity on the empty object
}

TEST_CASE("equality in theory is decided by the faithful model") {
  QuantTheory ha = builtin_theory(BuiltinTheory::ha, nonneg_rational_semiring());
  QuantTheory ca = builtin_theory(BuiltinTheory::ca);
  CHECK(equal_in_theory(seq(hg("copy"), basic_sym()), hg("copy"), ha));
  CHECK_FALSE(equal_in_theory(ccg(Rat(1, 2)), ccg(Rat(1, 3)), ca));
  Term t = seq(ccg(Rat(1, 4)), cg("cop"));
  CHECK(equal_in_theory(t, t, ca));
  CHECK(equal_in_theory(t, id1(), ca));  // idempotence axiom, semantically

  QuantTheory opaque;
  opaque.name = "opaque";
  opaque.signature.add({"mystery", 1, 1, false});
  opaque.quantale = QuantaleKind::lawvere;
  Term m1 = gen(*opaque.signature.find("mystery"));
  CHECK(equal_in_theory(m1, m1, opaque));  // structural short-circuit
  CHECK_THROWS_AS(equal_in_theory(seq(m1, m1), m1, opaque), UnsupportedError);
}

TEST_CASE("matrix/term round trips via the decompositions") {
  std::mt19937_64 rng(77);
  const SemiringSpec& R = nonneg_rational_semiring();
  for (int i = 0; i < 50; ++i) {
    int rows = 1 + static_cast<int>(rng() % 3), cols = 1 + static_cast<int>(rng() % 3);
    Mat m(rows, cols);
    for (auto& v : m.a) v = random_rat(rng, 5, 3);
    CHECK(eval_ha(matrix_to_ha_term(m), R) == m);
    Mat s = random_stochastic(rng, rows, cols);
    CHECK(eval_ca(stoch_to_ca_term(StochMat(s))).mat() == s);
  }
}

TEST_CASE("matrix json round trips exactly") {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 30; ++i) {
    Mat m(static_cast<int>(rng() % 4), static_cast<int>(rng() % 4));
    for (auto& v : m.a) v = random_rat(rng, 9, 7);
    CHECK(mat_from_json(mat_json(m)) == m);
  }
}

TEST_CASE("boolean semiring uses saturating addition") {
  const SemiringSpec& B = boolean_semiring();
  // add ; (two unit inputs) stays 1: evaluate copy ; add at the matrix level
  Term t = seq(hg("copy"), hg("add"));
  Mat m = eval_ha(t, B);
  CHECK(m.at(0, 0) == 1);  // 1 OR 1
  Mat q = eval_ha(t, nonneg_rational_semiring());
  CHECK(q.at(0, 0) == 2);  // genuine addition
}
