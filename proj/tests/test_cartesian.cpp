#include "doctest.h"

#include <random>

#include "qmt/cartesian.hpp"
#include "qmt/errors.hpp"
#include "qmt/sampling.hpp"

using namespace qmt;

namespace {

CartTheory demo_theory() {
  CartTheory t;
  t.ops = {{"f", 2}, {"g", 1}};
  t.quantale = QuantaleKind::lawvere;
  t.symm = true;
  CTerm x1 = cvar(0), x2 = cvar(1);
  t.equations.push_back({cop("f", {x1, x2}), cop("f", {x2, x1}), 2});
  t.quant_axioms.push_back({cop("g", {x1}), x1, QVal::lawvere(Rat(1, 4)), 1});
  t.quant_axioms.push_back({cop("f", {x1, x2}), cop("f", {x2, x1}), QVal::lawvere(Rat(1, 2)), 2});
  return t;
}

QelNode qel_axiom(const CartTheory& t, std::size_t i) {
  const CartQuantAxiom& ax = t.quant_axioms[i];
  return QelNode{QelRule::axiom, ax.lhs, ax.rhs, ax.eps, ax.ctx, {}, {}, "", i, {}};
}

}  // namespace

TEST_CASE("substitution") {
  CartTheory t = demo_theory();
  CTerm x1 = cvar(0), x2 = cvar(1);
  std::vector<CTerm> sigma{cop("f", {x2, x2})};
  CHECK(cterm_equal(substitute(x1, sigma), cop("f", {x2, x2})));
  std::vector<CTerm> sigma2{cop("g", {x2})};
  CTerm dup = substitute(cop("f", {x1, x1}), sigma2);
  CHECK(cterm_equal(dup, cop("f", {cop("g", {x2}), cop("g", {x2})})));
  CTerm closed = parse_cterm("f(g(x1), x1)", t.ops);
  std::vector<CTerm> sigma3{x1, x2};
  CHECK(cterm_equal(substitute(closed, sigma3), closed));
  CHECK_THROWS_AS(substitute(x2, std::span<const CTerm>(sigma3.data(), 1)), TypeError);
}

TEST_CASE("cartesian term parsing and printing") {
  CartTheory t = demo_theory();
  CTerm term = parse_cterm("f(x1, g(x2))", t.ops);
  CHECK(print_cterm(term) == "f(x1, g(x2))");
  CHECK(cterm_min_context(term) == 2);
  CHECK_THROWS_AS(parse_cterm("h(x1)", t.ops), ParseError);
  CHECK_THROWS_AS(parse_cterm("f(x1)", t.ops), TypeError);
  CHECK_THROWS_AS(parse_cterm("x0", t.ops), ParseError);
}

TEST_CASE("phi translation of the worked examples") {
  CartTheory t = demo_theory();
  Signature sig = phi_signature(t);
  CHECK(structural_equal(phi_translate(cvar(0), 1), id_n(1)));
  CHECK(structural_equal(phi_translate(cvar(0), 2), par(id1(), gen(*sig.find("del")))));
  Term expected = seq(gen(*sig.find("copy")), gen(Generator{"f", 2, 1, std::nullopt}));
  CHECK(structural_equal(phi_translate(cop("f", {cvar(0), cvar(0)}), 1), expected));
  CHECK_THROWS_AS(phi_translate(cvar(1), 1), TypeError);
}

TEST_CASE("phi output always has coarity 1 and arity ctx") {
  CartTheory t = demo_theory();
  std::mt19937_64 rng(3);
  std::function<CTerm(int, int)> rnd = [&](int ctx, int depth) -> CTerm {
    if (depth == 0 || rng() % 3 == 0) return cvar(static_cast<int>(rng() % ctx));
    if (rng() & 1) return cop("g", {rnd(ctx, depth - 1)});
    return cop("f", {rnd(ctx, depth - 1), rnd(ctx, depth - 1)});
  };
  for (int i = 0; i < 100; ++i) {
    int ctx = 1 + static_cast<int>(rng() % 4);
    Term d = phi_translate(rnd(ctx, 3), ctx);
    CHECK(d->arity == ctx);
    CHECK(d->coarity == 1);
    typecheck(d, phi_signature(t));
  }
}

TEST_CASE("check_qel validates the quantitative equational rules") {
  CartTheory t = demo_theory();
  // AXIOM yields its epsilon
  CHECK(check_qel(qel_axiom(t, 0), t) == QVal::lawvere(Rat(1, 4)));

  // NExp on f with children 1/4 and 1/2 concludes the meet (numeric max) 1/2
  QelNode a = qel_axiom(t, 0);                   // g(x1) = x1, ctx 1
  std::vector<CTerm> lift{cvar(0)};
  QelNode a1{QelRule::subq, a.lhs, a.rhs, a.eps, 1, {a}, lift, "", 0, {}};  // same ctx via x1
  QelNode b{QelRule::mon, a.lhs, a.rhs, QVal::lawvere(Rat(1, 2)), 1, {qel_axiom(t, 0)}, {}, "", 0, {}};
  CTerm l = cop("f", {a1.lhs, b.lhs});
  CTerm r = cop("f", {a1.rhs, b.rhs});
  QelNode nexp{QelRule::nexp, l, r, QVal::lawvere(Rat(1, 2)), 1, {a1, b}, {}, "f", 0, {}};
  CHECK(check_qel(nexp, t) == QVal::lawvere(Rat(1, 2)));

  // Triang chains 1/4 and 1/4 into 1/2
  QelNode left = qel_axiom(t, 0);
  QelNode sy{QelRule::symm, left.rhs, left.lhs, left.eps, 1, {left}, {}, "", 0, {}};
  QelNode tri{QelRule::triang, left.lhs, left.lhs, QVal::lawvere(Rat(1, 2)), 1, {left, sy},
              {}, "", 0, {}};
  CHECK(check_qel(tri, t) == QVal::lawvere(Rat(1, 2)));

  // malformed NExp premise count
  QelNode wrong{QelRule::nexp, l, r, QVal::lawvere(Rat(1, 4)), 1, {a1}, {}, "f", 0, {}};
  CHECK_THROWS_AS(check_qel(wrong, t), CheckError);
}

TEST_CASE("Refl' accepts syntactic equality and verified witness chains only") {
  CartTheory t = demo_theory();
  CTerm s1 = cop("g", {cvar(0)});
  CTerm s2 = cvar(1);
  CTerm lhs = cop("f", {s1, s2});
  CTerm rhs = cop("f", {s2, s1});
  QelNode plain{QelRule::refl, lhs, lhs, QVal::top(t.quantale), 2, {}, {}, "", 0, {}};
  CHECK(check_qel(plain, t) == QVal::top(t.quantale));

  QelNode witnessed{QelRule::refl, lhs, rhs, QVal::top(t.quantale), 2, {}, {}, "", 0, {}};
  witnessed.witness.push_back(ReflStep{0, false, {s1, s2}});
  CHECK(check_qel(witnessed, t) == QVal::top(t.quantale));

  QelNode unjustified{QelRule::refl, lhs, rhs, QVal::top(t.quantale), 2, {}, {}, "", 0, {}};
  CHECK_THROWS_AS(check_qel(unjustified, t), CheckError);

  QelNode bad_witness = witnessed;
  bad_witness.witness[0].subst = {s2, s2};
  CHECK_THROWS_AS(check_qel(bad_witness, t), CheckError);
}

TEST_CASE("simulation maps rules to their monoidal namesakes with the same epsilon") {
  CartTheory t = demo_theory();

  // AXIOM-only certificate
  SimulationResult ax = simulate_qel_in_monoidal(qel_axiom(t, 1), t);
  CHECK(ax.cert.rule == Rule::axiom);
  CHECK(ax.cert.schema_id == "q1");
  CHECK(check(ax.cert, ax.uprime).eps == QVal::lawvere(Rat(1, 2)));

  // NExp certificate on f with children 1/4 and 1/2
  QelNode a = qel_axiom(t, 0);
  QelNode weak{QelRule::mon, a.lhs, a.rhs, QVal::lawvere(Rat(1, 2)), 1, {a}, {}, "", 0, {}};
  CTerm l = cop("f", {a.lhs, weak.lhs});
  CTerm r = cop("f", {a.rhs, weak.rhs});
  QelNode nexp{QelRule::nexp, l, r, QVal::lawvere(Rat(1, 2)), 1, {a, weak}, {}, "f", 0, {}};
  SimulationResult sim = simulate_qel_in_monoidal(nexp, t);
  CHECK(sim.cert.rule == Rule::seq_sum);  // copy-bundle ; (block ; f)
  CheckOptions opts;
  opts.assume_refl = true;
  CHECK(check(sim.cert, sim.uprime, opts).eps == QVal::lawvere(Rat(1, 2)));
  CHECK(structural_equal(sim.cert.lhs, phi_translate(l, 1)));
  CHECK(structural_equal(sim.cert.rhs, phi_translate(r, 1)));

  // SubQ becomes REFL + SEQ_SUM bridged by TRIANG, same epsilon; substituting
  // into the binary axiom keeps Φ(t[σ]) structurally distinct from Φσ;Φt
  std::vector<CTerm> sigma{cop("g", {cvar(1)}), cvar(0)};
  QelNode sub{QelRule::subq,
              substitute(qel_axiom(t, 1).lhs, sigma),
              substitute(qel_axiom(t, 1).rhs, sigma),
              QVal::lawvere(Rat(1, 2)),
              2,
              {qel_axiom(t, 1)},
              sigma,
              "",
              0,
              {}};
  SimulationResult sub_sim = simulate_qel_in_monoidal(sub, t);
  CHECK(sub_sim.cert.rule == Rule::triang);
  CHECK(check(sub_sim.cert, sub_sim.uprime, opts).eps == QVal::lawvere(Rat(1, 2)));
  CHECK(structural_equal(sub_sim.cert.lhs, phi_translate(sub.lhs, 2)));
  CHECK_FALSE(check(sub_sim.cert, sub_sim.uprime, opts).trusted_refl.empty());

  // without assume_refl the E-equality leaves are not accepted on trust
  CHECK_THROWS_AS(check(sub_sim.cert, sub_sim.uprime), CheckError);
}

TEST_CASE("qel certificates serialize and re-check") {
  CartTheory t = demo_theory();
  QelNode a = qel_axiom(t, 0);
  std::vector<CTerm> sigma{cop("f", {cvar(0), cvar(1)})};
  QelNode sub{QelRule::subq,
              substitute(a.lhs, sigma),
              substitute(a.rhs, sigma),
              a.eps,
              2,
              {a},
              sigma,
              "",
              0,
              {}};
  QelNode sy{QelRule::symm, sub.rhs, sub.lhs, sub.eps, 2, {sub}, {}, "", 0, {}};
  QVal eps = check_qel(sy, t);
  QelCertificate back = parse_qel_cert(qel_cert_text(sy), t);
  CHECK(check_qel(back, t) == eps);
  CHECK(qel_cert_text(back) == qel_cert_text(sy));
}

TEST_CASE("symm-free theories reject Symm'") {
  CartTheory t = demo_theory();
  t.symm = false;
  QelNode a = qel_axiom(t, 0);
  QelNode sy{QelRule::symm, a.rhs, a.lhs, a.eps, 1, {a}, {}, "", 0, {}};
  CHECK_THROWS_AS(check_qel(sy, t), CheckError);
}
