#include "doctest.h"

#include <random>

#include "qmt/certify.hpp"
#include "qmt/errors.hpp"
#include "qmt/sampling.hpp"

using namespace qmt;

namespace {

Term hg(const char* n) { return gen(*ha_signature().find(n)); }
Term hs(const Rat& k) { return gen(*ha_signature().find("scalar"), k); }
Term ccg(const Rat& l) { return gen(*ca_signature().find("cc"), l); }

CertNode axiom_tv(const Rat& l) {
  std::vector<Rat> args{l};
  QuantEq qe = instantiate_quant_schema(quant_schema("ba.tv"), nullptr, args);
  return CertNode{Rule::axiom, qe.lhs, qe.rhs, qe.eps, "ba.tv", args, {}};
}

int height(const CertNode& n) {
  int h = 0;
  for (const auto& c : n.children) h = std::max(h, height(c));
  return h + 1;
}

int count_axiom_leaves(const CertNode& n) {
  int k = n.rule == Rule::axiom ? 1 : 0;
  for (const auto& c : n.children) k += count_axiom_leaves(c);
  return k;
}

}  // namespace

TEST_CASE("checker accepts the canonical single-node certificates") {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  CertNode refl{Rule::refl, seq(hg("copy"), basic_sym()), hg("copy"),
                QVal::top(QuantaleKind::boolean), "", {}, {}};
  CHECK(check(refl, preord).eps == QVal::top(QuantaleKind::boolean));

  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CHECK(check(axiom_tv(Rat(3, 10)), ba).eps == QVal::lawvere(Rat(3, 10)));
}

TEST_CASE("TRIANG composes epsilons by tensor") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CertNode a = axiom_tv(Rat(1, 4));
  CertNode flip_src = a;
  Term fl = flip_src.lhs, fr = flip_src.rhs;
  CertNode sy{Rule::symm, fr, fl, flip_src.eps, "", {}, {std::move(flip_src)}};
  Term l = a.lhs, r = sy.rhs;
  CertNode tri{Rule::triang, l, r, QVal::lawvere(Rat(1, 2)), "", {}, {std::move(a), std::move(sy)}};
  CHECK(check(tri, ba).eps == QVal::lawvere(Rat(1, 2)));
}

TEST_CASE("closure gating rejects foreign rules") {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  // SYMM is not part of the preorder closure
  CertNode base{Rule::refl, hg("copy"), hg("copy"), QVal::top(QuantaleKind::boolean), "", {}, {}};
  Term l = base.lhs, r = base.rhs;
  QVal eps = base.eps;
  CertNode sy{Rule::symm, l, r, eps, "", {}, {std::move(base)}};
  CHECK_THROWS_AS(check(sy, preord), CheckError);

  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CertNode ax1 = axiom_tv(Rat(1, 4));
  CertNode ax2 = axiom_tv(Rat(1, 4));
  Term pl = par(ax1.lhs, ax2.lhs), pr = par(ax1.rhs, ax2.rhs);
  // PAR_SUM is not admitted by BA's (SEQ_SUM, PAR_MEET) closure
  CertNode ps{Rule::par_sum, pl, pr, QVal::lawvere(Rat(1, 2)), "", {},
              {std::move(ax1), std::move(ax2)}};
  CHECK_THROWS_AS(check(ps, ba), CheckError);
}

TEST_CASE("axiom nodes must match their schema instantiation") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CertNode ok = axiom_tv(Rat(1, 3));
  CHECK(check(ok, ba).eps == QVal::lawvere(Rat(1, 3)));
  CertNode wrong_eps = axiom_tv(Rat(1, 3));
  wrong_eps.eps = QVal::lawvere(Rat(1, 4));
  CHECK_THROWS_AS(check(wrong_eps, ba), CheckError);
  CertNode out_of_domain = axiom_tv(Rat(1, 3));
  out_of_domain.args = {Rat(5)};
  CHECK_THROWS_AS(check(out_of_domain, ba), CheckError);
  CertNode not_in_theory = axiom_tv(Rat(1, 3));
  not_in_theory.schema_id = "preord.scalar_order";
  CHECK_THROWS_AS(check(not_in_theory, ba), CheckError);
}

TEST_CASE("REFL requires equality in the theory") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CertNode bad{Rule::refl, ccg(Rat(1, 2)), ccg(Rat(1, 3)), QVal::top(QuantaleKind::lawvere),
               "", {}, {}};
  CHECK_THROWS_AS(check(bad, ba), CheckError);
}

TEST_CASE("prove_matrix_order: worked cases") {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  Certificate one_axiom = prove_matrix_order(hs(Rat(0)), hs(Rat(1)), preord);
  CHECK(height(one_axiom) == 1);
  CHECK(one_axiom.rule == Rule::axiom);
  CHECK(check(one_axiom, preord).eps == QVal::top(QuantaleKind::boolean));

  Term t = seq(hg("copy"), seq(par(hs(Rat(1)), hs(Rat(0))), hg("add")));
  Certificate refl = prove_matrix_order(t, t, preord);
  CHECK(refl.rule == Rule::refl);

  Mat a(2, 2), b(2, 2);
  a.at(0, 1) = 1;
  b.at(0, 0) = 1;
  b.at(0, 1) = 1;
  b.at(1, 1) = 1;
  Certificate c = prove_matrix_order(matrix_to_ha_term(a), matrix_to_ha_term(b), preord);
  CHECK(count_axiom_leaves(c) == 4);
  CHECK(check(c, preord).eps == QVal::top(QuantaleKind::boolean));

  // violating entry reported
  try {
    prove_matrix_order(matrix_to_ha_term(b), matrix_to_ha_term(a), preord);
    FAIL("expected a derivability error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("entry (0,0)") != std::string::npos);
  }
}

TEST_CASE("prove_matrix_order over the rational semiring") {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, nonneg_rational_semiring());
  std::mt19937_64 rng(15);
  for (int i = 0; i < 30; ++i) {
    int rows = 1 + static_cast<int>(rng() % 3), cols = 1 + static_cast<int>(rng() % 3);
    Mat a(rows, cols), b(rows, cols);
    for (int k = 0; k < rows * cols; ++k) {
      a.a[static_cast<std::size_t>(k)] = random_rat(rng, 5, 3);
      b.a[static_cast<std::size_t>(k)] = a.a[static_cast<std::size_t>(k)] + random_rat(rng, 3, 2);
    }
    Certificate c = prove_matrix_order(matrix_to_ha_term(a), matrix_to_ha_term(b), preord);
    CHECK(check(c, preord).eps == QVal::top(QuantaleKind::boolean));
  }
}

TEST_CASE("prove_tv_column: worked cases") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  Term f = ca_dist_term(std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
  Term g = ca_dist_term(std::vector<Rat>{Rat(4, 5), Rat(1, 5)});
  Certificate c = prove_tv_column(f, g, ba);
  CHECK(check(c, ba).eps == QVal::lawvere(Rat(3, 10)));

  Certificate refl = prove_tv_column(f, f, ba);
  CHECK(refl.rule == Rule::refl);
  CHECK(check(refl, ba).eps == QVal::top(QuantaleKind::lawvere));

  // the shifted three-point vectors at lambda = 1/2
  Rat l(1, 2);
  Term u = ca_dist_term(std::vector<Rat>{l, 1 - l, Rat(0)});
  Term v = ca_dist_term(std::vector<Rat>{Rat(0), 1 - l, l});
  CHECK(check(prove_tv_column(u, v, ba), ba).eps == QVal::lawvere(l));
}

TEST_CASE("prove_tv_general matches tvmax exactly") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  std::mt19937_64 rng(21);
  // equal terms first
  Term same = stoch_to_ca_term(StochMat(random_stochastic(rng, 2, 2)));
  CHECK(check(prove_tv_general(same, same, ba), ba).eps == QVal::top(QuantaleKind::lawvere));

  // the counterexample columns C and C'
  MeetCounterexample w = meet_violation_witness();
  Term tc = stoch_to_ca_term(StochMat(w.C));
  Term tcp = stoch_to_ca_term(StochMat(w.Cp));
  CHECK(check(prove_tv_general(tc, tcp, ba), ba).eps == QVal::lawvere(Rat(1, 2)));

  for (int i = 0; i < 40; ++i) {
    int n = 1 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 4);
    Term f = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Term g = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Rat expect = tvmax(eval_ca(f), eval_ca(g));
    CHECK(check(prove_tv_general(f, g, ba), ba).eps == QVal::lawvere(expect));
    // soundness: the root bound dominates the semantic distance in ⊑
    CHECK(q_leq(QVal::lawvere(expect), semantic_distance(f, g, ba)));
  }
  CHECK_THROWS_AS(prove_tv_general(empty_diag(), empty_diag(), ba), DomainError);
}

TEST_CASE("mutating any epsilon is rejected; MON weakening is accepted") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  std::mt19937_64 rng(33);
  int mutations = 0;
  for (int i = 0; i < 40; ++i) {
    int n = 1 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 3);
    Term f = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Term g = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Certificate c = prove_tv_general(f, g, ba);
    Certificate m1 = c;
    if (mutate_certificate_eps(rng, m1)) {
      ++mutations;
      CHECK_THROWS_AS(check(m1, ba), CheckError);
    }
    // explicit MON weakening of the root stays accepted
    QVal root = check(c, ba).eps;
    QVal weaker = root.is_inf() ? root : QVal::lawvere(root.finite() + Rat(2, 5));
    Term l = c.lhs, r = c.rhs;
    Certificate mon{Rule::mon, l, r, weaker, "", {}, {std::move(c)}};
    CHECK(check(mon, ba).eps == weaker);
  }
  CHECK(mutations > 20);
}

TEST_CASE("certificates serialize to text and json and back") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  std::mt19937_64 rng(55);
  Certificate c = random_ba_certificate(rng, ba, 3);
  QVal eps = check(c, ba).eps;
  Certificate t_back = parse_cert(cert_text(c), ba.signature, ba.quantale);
  CHECK(check(t_back, ba).eps == eps);
  CHECK(cert_text(t_back) == cert_text(c));
  Certificate j_back = cert_from_json(cert_json(c), ba.signature, ba.quantale);
  CHECK(check(j_back, ba).eps == eps);
  CHECK(cert_json(j_back) == cert_json(c));
}

TEST_CASE("checker reports the failing node path") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  CertNode a = axiom_tv(Rat(1, 4));
  CertNode b = axiom_tv(Rat(1, 2));
  b.eps = QVal::lawvere(Rat(1, 5));  // corrupt the second leaf
  Term l = par(a.lhs, b.lhs), r = par(a.rhs, b.rhs);
  CertNode n{Rule::par_meet, l, r, QVal::lawvere(Rat(1, 4)), "", {}, {std::move(a), std::move(b)}};
  try {
    check(n, ba);
    FAIL("expected rejection");
  } catch (const CheckError& e) {
    CHECK(e.path == std::vector<int>{1});
  }
}

TEST_CASE("certificate parser turns malformed input into errors") {
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  for (const char* text :
       {"", "(", "(REFL", "(REFL 0", "(REFL 0 \"cc(1)\"", "(NOPE 0 \"cc(1)\" \"cc(1)\")",
        "(REFL zero \"cc(1)\" \"cc(1)\")", "(REFL 0 \"cc(1)\" \"cc(1)\") junk",
        "(AXIOM 1/2 \"cc(1)\" \"cc(1)\""}) {
    CHECK_THROWS_AS((void)parse_cert(text, ba.signature, ba.quantale), ParseError);
  }
}

TEST_CASE("prove dispatch guards") {
  QuantTheory ha = builtin_theory(BuiltinTheory::ha, boolean_semiring());
  CHECK_THROWS_AS(prove_matrix_order(hs(Rat(0)), hs(Rat(1)), ha), UnsupportedError);
  QuantTheory ca = builtin_theory(BuiltinTheory::ca);
  CHECK_THROWS_AS(prove_tv_general(ccg(Rat(1, 2)), ccg(Rat(1, 2)), ca), UnsupportedError);
}
