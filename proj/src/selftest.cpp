#include "qmt/selftest.hpp"

#include <functional>
#include <random>
#include <sstream>

#include "qmt/cartesian.hpp"
#include "qmt/certify.hpp"
#include "qmt/distance.hpp"
#include "qmt/errors.hpp"
#include "qmt/sampling.hpp"

namespace qmt {

namespace {

struct Suite {
  std::vector<SuiteResult> results;

  void run(const std::string& name, const std::function<std::string()>& body) {
    SuiteResult r;
    r.name = name;
    try {
      r.detail = body();
      r.passed = true;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

[[noreturn]] void fail(const std::string& msg) { throw Error(msg); }

// --- quantale ------------------------------------------------------------------

std::string quantale_laws(QuantaleKind k, std::uint64_t seed) {
  auto xs = quantale_samples(k, seed, 24);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  for (int i = 0; i < 200; ++i) {
    const QVal &a = xs[pick(rng)], &b = xs[pick(rng)], &c = xs[pick(rng)];
    if (!(q_tensor(q_tensor(a, b), c) == q_tensor(a, q_tensor(b, c)))) fail("tensor associativity");
    if (!(q_tensor(a, b) == q_tensor(b, a))) fail("tensor commutativity");
    if (!(q_tensor(a, q_unit(k)) == a)) fail("tensor unit");
    if (q_leq(a, b)) {
      if (!q_leq(q_tensor(a, c), q_tensor(b, c))) fail("tensor monotonicity");
    }
    if (!integrality_check(a, b)) fail("integrality a+b <= a meet b");
    // join-continuity on subsets of size <= 5
    std::vector<QVal> s;
    std::uniform_int_distribution<int> sz(0, 5);
    int n = sz(rng);
    for (int j = 0; j < n; ++j) s.push_back(xs[pick(rng)]);
    QVal lhs = q_tensor(a, q_join(k, s));
    std::vector<QVal> mapped;
    for (const auto& x : s) mapped.push_back(q_tensor(a, x));
    QVal rhs = q_join(k, mapped);
    // a ⊕ ⊥ = ⊥ needs the empty-join case: both sides are a ⊕ ⊥ vs ⊥
    if (n == 0) {
      if (!(lhs == q_tensor(a, QVal::bottom(k))) || !(rhs == QVal::bottom(k))) fail("empty join");
      if (!(lhs == rhs)) fail("join continuity at the empty set (bottom absorbing)");
    } else if (!(lhs == rhs)) {
      fail("join continuity");
    }
  }
  return "200 sampled law instances";
}

HemiSpace random_hemi(QuantaleKind k, std::mt19937_64& rng, std::size_t n, bool pseudo) {
  HemiSpace h;
  h.kind = k;
  h.pseudometric = pseudo;
  h.size = n;
  if (k == QuantaleKind::lawvere) {
    std::vector<Rat> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_rat(rng, 10, 3));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rat diff = pts[i] - pts[j];
        if (pseudo) {
          h.d.push_back(QVal::lawvere(diff < 0 ? -diff : diff));
        } else {
          h.d.push_back(QVal::lawvere(diff > 0 ? diff : Rat(0)));
        }
      }
    return h;
  }
  std::vector<int> level;
  for (std::size_t i = 0; i < n; ++i) level.push_back(static_cast<int>(rng() % 3));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h.d.push_back(QVal::boolean(pseudo ? level[i] == level[j] : level[i] <= level[j]));
  return h;
}

std::string product_space_laws(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (QuantaleKind k : {QuantaleKind::boolean, QuantaleKind::lawvere}) {
    for (bool pseudo : {false, true}) {
      for (std::size_t nx = 1; nx <= 3; ++nx)
        for (std::size_t ny = 1; ny <= 3; ++ny) {
          HemiSpace x = random_hemi(k, rng, nx, pseudo);
          HemiSpace y = random_hemi(k, rng, ny, pseudo);
          x.validate();
          y.validate();
          product_space(x, y, ProductMode::sum).validate();
          product_space(x, y, ProductMode::max).validate();
        }
    }
  }
  // one-point unit object: distances stay top
  HemiSpace one{QuantaleKind::lawvere, true, 1, {QVal::top(QuantaleKind::lawvere)}};
  HemiSpace p = product_space(one, one, ProductMode::sum);
  if (!(p.dist(0, 0) == QVal::top(QuantaleKind::lawvere))) fail("unit object distance");
  return "sum/max products on spaces up to 3x3 points";
}

// --- semantics -----------------------------------------------------------------

std::string functoriality(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ha = builtin_theory(BuiltinTheory::ha, nonneg_rational_semiring());
  QuantTheory ca = builtin_theory(BuiltinTheory::ca);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const bool use_ca = i & 1;
    const QuantTheory& th = use_ca ? ca : ha;
    Term s = random_term(rng, th), t = random_term(rng, th);
    auto eval1 = [&](const Term& x) {
      return use_ca ? eval_ca(x).mat() : eval_ha(x, *ha.semiring);
    };
    if (s->coarity == t->arity) {
      Mat lhs = eval1(seq(s, t));
      Mat rhs = use_ca ? mat_compose(eval1(s), eval1(t))
                       : mat_compose(eval1(s), eval1(t), *ha.semiring);
      if (!(lhs == rhs)) fail("eval(s;t) != eval(t)*eval(s)");
      ++checked;
    }
    if (s->arity + t->arity <= 6) {
      if (!(eval1(par(s, t)) == mat_dsum(eval1(s), eval1(t)))) fail("eval(s⊗t) != dsum");
      ++checked;
    }
  }
  return std::to_string(checked) + " functoriality instances";
}

std::string smc_axioms(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ha = builtin_theory(BuiltinTheory::ha, nonneg_rational_semiring());
  QuantTheory ca = builtin_theory(BuiltinTheory::ca);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const bool use_ca = i & 1;
    const QuantTheory& th = use_ca ? ca : ha;
    auto ev = [&](const Term& x) { return use_ca ? eval_ca(x).mat() : eval_ha(x, *ha.semiring); };
    Term f = random_term(rng, th), g = random_term(rng, th), h = random_term(rng, th);
    // associativity / unitality of ⊗ and ; hold structurally through eval
    if (!(ev(par(par(f, g), h)) == ev(par(f, par(g, h))))) fail("par associativity");
    if (!(ev(par(f, empty_diag())) == ev(f))) fail("par unit");
    if (f->coarity == g->arity && g->coarity == h->arity) {
      if (!(ev(seq(seq(f, g), h)) == ev(seq(f, seq(g, h))))) fail("seq associativity");
    }
    if (f->coarity == g->arity) {
      if (!(ev(seq(seq(id_n(f->arity), f), g)) == ev(seq(f, g)))) fail("seq unit");
      // interchange (f;g)⊗(h;h2) = (f⊗h);(g⊗h2)
      Term h2 = random_term(rng, th);
      if (h->coarity == h2->arity) {
        Mat lhs = ev(par(seq(f, g), seq(h, h2)));
        Mat rhs = ev(seq(par(f, h), par(g, h2)));
        if (!(lhs == rhs)) fail("interchange law");
        ++checked;
      }
    }
    // naturality of sym: (f⊗g);sym_{m,m'} = sym_{n,n'};(g⊗f)
    Mat lhs = ev(seq(par(f, g), sym_mn(f->coarity, g->coarity)));
    Mat rhs = ev(seq(sym_mn(f->arity, g->arity), par(g, f)));
    if (!(lhs == rhs)) fail("sym naturality");
    if (!(ev(seq(basic_sym(), basic_sym())) == ev(id_n(2)))) fail("sym involution");
    ++checked;
  }
  return std::to_string(checked) + " SMC axiom instances";
}

std::string stochastic_closure(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(1, 4);
  for (int i = 0; i < 200; ++i) {
    int n = d(rng), m = d(rng), l = d(rng);
    Mat a = random_stochastic(rng, m, n);
    Mat b = random_stochastic(rng, l, m);
    if (!is_stochastic(mat_compose(a, b))) fail("compose breaks stochasticity");
    Mat c = random_stochastic(rng, d(rng), d(rng));
    if (!is_stochastic(mat_dsum(a, c))) fail("dsum breaks stochasticity");
  }
  return "200 closure samples";
}

std::string theory_axioms_sound() {
  for (const auto& name : {"ha_bool", "ha_rat", "ca", "preord_bool", "preord_rat", "ba"}) {
    QuantTheory t = resolve_theory(name);
    for (const auto& chk : check_theory_equations(t))
      if (!chk.ok) fail(std::string(name) + ": equation " + chk.label + " fails in the model");
    const SemiringSpec* r = t.semiring_ptr();
    for (const auto& id : t.quant_schemas) {
      for (const auto& qe : quant_schema_grid(quant_schema(id), r, scalar_grid()))
        if (!truth_check(qe, t)) fail(std::string(name) + ": " + id + " instance untrue in model");
    }
  }
  return "all shipped axioms true in their models";
}

// --- distance ------------------------------------------------------------------

std::string tv_method_agreement(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> sup(1, 6);
  for (int i = 0; i < 300; ++i) {
    std::size_t m = sup(rng);
    Distribution mu = random_distribution(rng, m);
    Distribution nu = random_distribution(rng, m);
    Rat a = tv(mu, nu, TvMethod::sum);
    Rat b = tv(mu, nu, TvMethod::sup);
    Rat c = tv(mu, nu, TvMethod::coupling);
    if (a != b || b != c)
      fail("tv methods disagree: sum=" + rat_string(a) + " sup=" + rat_string(b) +
           " coupling=" + rat_string(c));
    Coupling omega = optimal_coupling(mu, nu);
    if (!(omega.left_marginal() == mu) || !(omega.right_marginal() == nu))
      fail("optimal coupling has wrong marginals");
  }
  return "300 pairs, three routes agree exactly";
}

std::string tv_is_pseudometric(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> sup(1, 6);
  for (int i = 0; i < 200; ++i) {
    std::size_t m = sup(rng);
    Distribution a = random_distribution(rng, m);
    Distribution b = random_distribution(rng, m);
    Distribution c = random_distribution(rng, m);
    if (tv(a, a) != 0) fail("tv(a,a) != 0");
    if (tv(a, b) != tv(b, a)) fail("tv symmetry");
    if (tv(a, c) > tv(a, b) + tv(b, c)) fail("tv triangle");
    // convexity
    Rat p = random_unit_rat(rng);
    Distribution l = convex_comb(a, b, p);
    Distribution r = convex_comb(c, b, p);
    if (tv(l, r) > p * tv(a, c) + (1 - p) * tv(b, b)) fail("tv convexity");
  }
  return "200 triples";
}

std::string split_laws(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> sup(1, 6);
  auto check_pair = [&](const Distribution& mu, const Distribution& nu) {
    SplitResult s = split(mu, nu);
    if (s.lambda != tv(mu, nu)) fail("split lambda != tv");
    if (!(convex_comb(s.mu_prime, s.tau, s.lambda) == mu)) fail("mu recombination");
    if (!(convex_comb(s.nu_prime, s.tau, s.lambda) == nu)) fail("nu recombination");
  };
  for (int i = 0; i < 300; ++i) {
    std::size_t m = sup(rng);
    check_pair(random_distribution(rng, m), random_distribution(rng, m));
  }
  Distribution same({Rat(1, 2), Rat(1, 2)});
  check_pair(same, same);  // lambda = 0
  check_pair(Distribution({Rat(1), Rat(0)}), Distribution({Rat(0), Rat(1)}));  // lambda = 1
  return "300 random pairs + boundary cases";
}

std::string enrichment_laws(std::uint64_t seed) {
  LawReport rep = law_checks(seed, 200);
  if (rep.seq_bound_violations) fail("sequential sum bound violated: " + rep.first_counterexample);
  if (rep.dsum_equality_failures) fail("dsum max equality violated: " + rep.first_counterexample);
  if (!rep.witness_violates_meet) fail("meet-composition counterexample did not violate");
  return "200 samples; witness violates the meet bound as required";
}

std::string entrywise_order_laws(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (const SemiringSpec* R : {&boolean_semiring(), &nonneg_rational_semiring()}) {
    std::uniform_int_distribution<int> d(1, 3);
    for (int i = 0; i < 150; ++i) {
      int n = d(rng), m = d(rng), l = d(rng);
      auto rnd = [&](int rr, int cc) {
        Mat x(rr, cc);
        for (auto& v : x.a)
          v = R->name == "boolean" ? Rat(static_cast<int>(rng() & 1)) : random_rat(rng, 6, 3);
        return x;
      };
      auto bump = [&](const Mat& x) {
        Mat y = x;
        for (auto& v : y.a) {
          Rat inc = R->name == "boolean" ? Rat(static_cast<int>(rng() & 1)) : random_rat(rng, 3, 2);
          v = R->add(v, inc);
        }
        return y;
      };
      Mat A = rnd(m, n), B = rnd(l, m);
      Mat A2 = bump(A), B2 = bump(B);
      if (!entrywise_leq(A, A, *R)) fail("entrywise reflexivity");
      if (!entrywise_leq(A, A2, *R)) fail("bump not increasing");
      if (!entrywise_leq(mat_compose(A, B, *R), mat_compose(A2, B2, *R), *R))
        fail("compose not monotone");
      if (!entrywise_leq(mat_dsum(A, B), mat_dsum(A2, B2), *R)) fail("dsum not monotone");
      Mat A3 = bump(A2);
      if (!entrywise_leq(A, A3, *R)) fail("entrywise transitivity");
    }
  }
  return "monotone composition/dsum under both semirings";
}

// --- certify ---------------------------------------------------------------------

std::string matrix_order_completeness_small(std::uint64_t) {
  QuantTheory preord = builtin_theory(BuiltinTheory::preord, boolean_semiring());
  int proved = 0, rejected = 0;
  for (int dims = 1; dims <= 2; ++dims) {
    int cells = dims * dims;
    for (int a = 0; a < (1 << cells); ++a)
      for (int b = 0; b < (1 << cells); ++b) {
        Mat A(dims, dims), B(dims, dims);
        for (int i = 0; i < cells; ++i) {
          A.a[static_cast<std::size_t>(i)] = Rat((a >> i) & 1);
          B.a[static_cast<std::size_t>(i)] = Rat((b >> i) & 1);
        }
        Term f = matrix_to_ha_term(A), g = matrix_to_ha_term(B);
        bool le = entrywise_leq(A, B, boolean_semiring());
        try {
          Certificate c = prove_matrix_order(f, g, preord);
          if (!le) fail("prove succeeded on a non-dominated pair");
          if (!(check(c, preord).eps == QVal::top(QuantaleKind::boolean)))
            fail("matrix-order certificate rejected");
          ++proved;
        } catch (const Error&) {
          if (le) fail("prove failed on a dominated pair");
          ++rejected;
        }
      }
  }
  return std::to_string(proved) + " proved / " + std::to_string(rejected) + " rejected, iff holds";
}

std::string tv_certificates_exact(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  std::uniform_int_distribution<int> d(1, 4);
  for (int i = 0; i < 60; ++i) {
    int n = d(rng), m = d(rng);
    Term f = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Term g = stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
    Certificate c = prove_tv_general(f, g, ba);
    Rat expect = tvmax(eval_ca(f), eval_ca(g));
    QVal got = check(c, ba).eps;
    if (!(got == QVal::lawvere(expect)))
      fail("certificate root " + got.str() + " != tvmax " + rat_string(expect));
  }
  return "60 random pairs, root epsilon equals tvmax exactly";
}

std::string certificate_soundness(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  for (int i = 0; i < 100; ++i) {
    Certificate c = random_ba_certificate(rng, ba, 3);
    QVal eps = check(c, ba).eps;
    QVal d = semantic_distance(c.lhs, c.rhs, ba);
    if (!q_leq(eps, d)) fail("accepted certificate with eps above the semantic distance");
  }
  return "100 random valid certificates sound";
}

std::string certificate_mutation_rejected(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  std::uniform_int_distribution<int> d(1, 3);
  int rejected = 0;
  for (int i = 0; i < 60; ++i) {
    Term f = stoch_to_ca_term(StochMat(random_stochastic(rng, d(rng), d(rng))));
    Term g = stoch_to_ca_term(StochMat(random_stochastic(rng, f->coarity, f->arity)));
    Certificate c = prove_tv_general(f, g, ba);
    if (!mutate_certificate_eps(rng, c)) continue;
    try {
      check(c, ba);
      fail("mutated certificate accepted");
    } catch (const CheckError&) {
      ++rejected;
    }
  }
  if (rejected == 0) fail("no mutations exercised");
  return std::to_string(rejected) + " mutations rejected";
}

std::string mon_weakening_accepted(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  for (int i = 0; i < 40; ++i) {
    Certificate c = random_ba_certificate(rng, ba, 2);
    QVal root = check(c, ba).eps;
    QVal weaker = root.is_inf() ? root : QVal::lawvere(root.finite() + Rat(1, 3));
    Term l = c.lhs, r = c.rhs;
    Certificate m{Rule::mon, l, r, weaker, "", {}, {std::move(c)}};
    if (!(check(m, ba).eps == weaker)) fail("MON weakening rejected");
  }
  return "40 weakenings accepted";
}

std::string certificate_serialization(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  for (int i = 0; i < 25; ++i) {
    Certificate c = random_ba_certificate(rng, ba, 2);
    Certificate back = parse_cert(cert_text(c), ba.signature, ba.quantale);
    if (!(check(back, ba).eps == c.eps)) fail("text round-trip changed the certificate");
    Certificate jback = cert_from_json(cert_json(c), ba.signature, ba.quantale);
    if (!(check(jback, ba).eps == c.eps)) fail("json round-trip changed the certificate");
  }
  return "25 certificates round-tripped (text + json)";
}

// --- cartesian -------------------------------------------------------------------

CartTheory demo_cart_theory() {
  CartTheory t;
  t.ops = {{"f", 2}, {"g", 1}};
  t.quantale = QuantaleKind::lawvere;
  t.symm = true;
  CTerm x1 = cvar(0), x2 = cvar(1);
  t.equations.push_back({cop("f", {x1, x2}), cop("f", {x2, x1}), 2});
  t.quant_axioms.push_back({cop("g", {x1}), x1, QVal::lawvere(Rat(1, 4)), 1});
  t.quant_axioms.push_back(
      {cop("f", {x1, x2}), cop("f", {x2, x1}), QVal::lawvere(Rat(1, 2)), 2});
  return t;
}

CTerm random_cterm(std::mt19937_64& rng, int ctx, int depth) {
  if (depth <= 0 || rng() % 3 == 0) return cvar(static_cast<int>(rng() % ctx));
  if (rng() & 1) return cop("g", {random_cterm(rng, ctx, depth - 1)});
  return cop("f", {random_cterm(rng, ctx, depth - 1), random_cterm(rng, ctx, depth - 1)});
}

QelNode qel_axiom_in_ctx2(const CartTheory& t, std::mt19937_64& rng) {
  if (rng() & 1) {
    const CartQuantAxiom& ax = t.quant_axioms[1];
    return QelNode{QelRule::axiom, ax.lhs, ax.rhs, ax.eps, ax.ctx, {}, {}, "", 1, {}};
  }
  // lift the ctx-1 axiom into ctx 2 through SubQ
  const CartQuantAxiom& ax = t.quant_axioms[0];
  QelNode leaf{QelRule::axiom, ax.lhs, ax.rhs, ax.eps, ax.ctx, {}, {}, "", 0, {}};
  std::vector<CTerm> sigma{random_cterm(rng, 2, 1)};
  CTerm l = substitute(ax.lhs, sigma), r = substitute(ax.rhs, sigma);
  return QelNode{QelRule::subq, l, r, ax.eps, 2, {std::move(leaf)}, sigma, "", 0, {}};
}

QelNode random_qel(const CartTheory& t, std::mt19937_64& rng, int depth) {
  if (depth <= 0) {
    switch (rng() % 3) {
      case 0:
        return qel_axiom_in_ctx2(t, rng);
      case 1: {
        CTerm a = random_cterm(rng, 2, 2);
        return QelNode{QelRule::refl, a, a, QVal::top(t.quantale), 2, {}, {}, "", 0, {}};
      }
      default: {
        // commutativity witness: f(s1,s2) -> f(s2,s1) by the E axiom
        CTerm s1 = random_cterm(rng, 2, 1), s2 = random_cterm(rng, 2, 1);
        CTerm l = cop("f", {s1, s2}), r = cop("f", {s2, s1});
        QelNode n{QelRule::refl, l, r, QVal::top(t.quantale), 2, {}, {}, "", 0, {}};
        n.witness.push_back(ReflStep{0, false, {s1, s2}});
        return n;
      }
    }
  }
  switch (rng() % 6) {
    case 0: {  // Mon'
      QelNode c = random_qel(t, rng, depth - 1);
      QVal weaker = c.eps.is_inf() ? c.eps : QVal::lawvere(c.eps.finite() + Rat(1, 5));
      CTerm l = c.lhs, r = c.rhs;
      int ctx = c.ctx;
      return QelNode{QelRule::mon, l, r, weaker, ctx, {std::move(c)}, {}, "", 0, {}};
    }
    case 1: {  // Cont'
      QelNode c1 = random_qel(t, rng, depth - 1);
      QelNode c2 = c1;
      QVal weaker = c2.eps.is_inf() ? c2.eps : QVal::lawvere(c2.eps.finite() + Rat(1, 3));
      CTerm l = c1.lhs, r = c1.rhs;
      int ctx = c1.ctx;
      QelNode m{QelRule::mon, l, r, weaker, ctx, {std::move(c2)}, {}, "", 0, {}};
      std::vector<QVal> eps{c1.eps, m.eps};
      QVal joined = q_join(t.quantale, eps);
      return QelNode{QelRule::cont, l, r, joined, ctx, {std::move(c1), std::move(m)}, {}, "", 0, {}};
    }
    case 2: {  // Symm'
      QelNode c = random_qel(t, rng, depth - 1);
      CTerm l = c.rhs, r = c.lhs;
      QVal eps = c.eps;
      int ctx = c.ctx;
      return QelNode{QelRule::symm, l, r, eps, ctx, {std::move(c)}, {}, "", 0, {}};
    }
    case 3: {  // Triang via the Symm' flip
      QelNode c = random_qel(t, rng, depth - 1);
      QelNode dup = c;
      CTerm dl = dup.lhs, dr = dup.rhs;
      QVal de = dup.eps;
      int ctx = dup.ctx;
      QelNode sy{QelRule::symm, dr, dl, de, ctx, {std::move(dup)}, {}, "", 0, {}};
      QVal eps = q_tensor(c.eps, sy.eps);
      CTerm l = c.lhs, r = sy.rhs;
      return QelNode{QelRule::triang, l, r, eps, ctx, {std::move(c), std::move(sy)}, {}, "", 0, {}};
    }
    case 4: {  // SubQ into ctx 2
      QelNode c = random_qel(t, rng, depth - 1);
      std::vector<CTerm> sigma;
      for (int i = 0; i < c.ctx; ++i) sigma.push_back(random_cterm(rng, 2, 1));
      CTerm l = substitute(c.lhs, sigma), r = substitute(c.rhs, sigma);
      QVal eps = c.eps;
      return QelNode{QelRule::subq, l, r, eps, 2, {std::move(c)}, sigma, "", 0, {}};
    }
    default: {  // NExp on f
      QelNode a = random_qel(t, rng, depth - 1);
      QelNode b = random_qel(t, rng, depth - 1);
      if (a.ctx != b.ctx) return a;
      CTerm l = cop("f", {a.lhs, b.lhs});
      CTerm r = cop("f", {a.rhs, b.rhs});
      QVal eps = q_meet2(a.eps, b.eps);
      int ctx = a.ctx;
      return QelNode{QelRule::nexp, l, r, eps, ctx, {std::move(a), std::move(b)}, {}, "f", 0, {}};
    }
  }
}

std::string phi_translation_basics() {
  CartTheory t = demo_cart_theory();
  if (!structural_equal(phi_translate(cvar(0), 1), id1())) fail("phi(x1) in ctx 1");
  Term del = gen(*phi_signature(t).find("del"));
  if (!structural_equal(phi_translate(cvar(0), 2), par(id1(), del))) fail("phi(x1) in ctx 2");
  Term copy = gen(*phi_signature(t).find("copy"));
  Term expected = seq(copy, gen(Generator{"f", 2, 1, std::nullopt}));
  CTerm fxx = cop("f", {cvar(0), cvar(0)});
  if (!structural_equal(phi_translate(fxx, 1), expected)) fail("phi(f(x1,x1)) in ctx 1");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    CTerm s = random_cterm(rng, 3, 3);
    Term d = phi_translate(s, 3);
    if (d->arity != 3 || d->coarity != 1) fail("phi output type");
    typecheck(d, phi_signature(t));
  }
  return "wire bookkeeping and types hold";
}

std::string phi_substitution_functorial(std::uint64_t seed) {
  // Interpret f as add and g as scalar(1/2); copy/del are HA generators, so
  // the comonoid naturality needed by the translation holds in the model.
  std::mt19937_64 rng(seed);
  const SemiringSpec& R = nonneg_rational_semiring();
  auto to_ha = [&](const Term& d) {
    return substitute_generators(d, [&](const Generator& g0) -> Term {
      if (g0.name == "f") return gen(*ha_signature().find("add"));
      if (g0.name == "g") return gen(*ha_signature().find("scalar"), Rat(1, 2));
      return gen(g0);
    });
  };
  for (int i = 0; i < 120; ++i) {
    int n = 1 + static_cast<int>(rng() % 3);
    int c = 1 + static_cast<int>(rng() % 3);
    CTerm body = random_cterm(rng, n, 3);
    std::vector<CTerm> sigma;
    for (int j = 0; j < n; ++j) sigma.push_back(random_cterm(rng, c, 2));
    Term direct = phi_translate(substitute(body, sigma), c);
    Term composed = seq(phi_tuple(sigma, c), phi_translate(body, n));
    if (!(eval_ha(to_ha(direct), R) == eval_ha(to_ha(composed), R)))
      fail("phi(t[sigma]) != phi(sigma);phi(t) in the model");
  }
  return "120 substitution instances agree in the matrix model";
}

std::string qel_simulation_eps_preserved(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CartTheory t = demo_cart_theory();
  int done = 0;
  std::uniform_int_distribution<int> depth(0, 4);
  while (done < 50) {
    QelNode cert = random_qel(t, rng, depth(rng));
    QVal eps = check_qel(cert, t);
    SimulationResult sim = simulate_qel_in_monoidal(cert, t);
    CheckOptions opts;
    opts.assume_refl = true;
    QVal got = check(sim.cert, sim.uprime, opts).eps;
    if (!(got == eps)) fail("simulation changed the root epsilon: " + got.str() + " vs " + eps.str());
    ++done;
  }
  return "50 certificates simulated with identical root epsilon";
}

}  // namespace

std::vector<SuiteResult> selftest_quantale(std::uint64_t seed) {
  Suite s;
  s.run("quantale.laws.boolean", [&] { return quantale_laws(QuantaleKind::boolean, seed); });
  s.run("quantale.laws.lawvere", [&] { return quantale_laws(QuantaleKind::lawvere, seed + 1); });
  s.run("quantale.ijd.builtins", [&] {
    if (!builtin_ijd_ok(QuantaleKind::boolean) || !builtin_ijd_ok(QuantaleKind::lawvere))
      fail("builtin quantale failed the IJD sample check");
    return std::string("both built-ins pass");
  });
  s.run("quantale.product_spaces", [&] { return product_space_laws(seed + 2); });
  return s.results;
}

std::vector<SuiteResult> selftest_semantics(std::uint64_t seed) {
  Suite s;
  s.run("semantics.functoriality", [&] { return functoriality(seed); });
  s.run("semantics.smc_axioms", [&] { return smc_axioms(seed + 1); });
  s.run("semantics.stochastic_closure", [&] { return stochastic_closure(seed + 2); });
  s.run("semantics.theory_axioms", [&] { return theory_axioms_sound(); });
  return s.results;
}

std::vector<SuiteResult> selftest_distance(std::uint64_t seed) {
  Suite s;
  s.run("distance.tv_method_agreement", [&] { return tv_method_agreement(seed); });
  s.run("distance.tv_pseudometric", [&] { return tv_is_pseudometric(seed + 1); });
  s.run("distance.split", [&] { return split_laws(seed + 2); });
  s.run("distance.enrichment_laws", [&] { return enrichment_laws(seed + 3); });
  s.run("distance.entrywise_order", [&] { return entrywise_order_laws(seed + 4); });
  return s.results;
}

std::vector<SuiteResult> selftest_certify(std::uint64_t seed) {
  Suite s;
  s.run("certify.matrix_order_small", [&] { return matrix_order_completeness_small(seed); });
  s.run("certify.tv_exact", [&] { return tv_certificates_exact(seed + 1); });
  s.run("certify.soundness", [&] { return certificate_soundness(seed + 2); });
  s.run("certify.mutation_rejected", [&] { return certificate_mutation_rejected(seed + 3); });
  s.run("certify.mon_weakening", [&] { return mon_weakening_accepted(seed + 4); });
  s.run("certify.serialization", [&] { return certificate_serialization(seed + 5); });
  return s.results;
}

std::vector<SuiteResult> selftest_cartesian(std::uint64_t seed) {
  Suite s;
  s.run("cartesian.phi_basics", [] { return phi_translation_basics(); });
  s.run("cartesian.phi_substitution", [&] { return phi_substitution_functorial(seed); });
  s.run("cartesian.qel_simulation", [&] { return qel_simulation_eps_preserved(seed + 1); });
  return s.results;
}

std::vector<SuiteResult> selftest_all(std::uint64_t seed) {
  std::vector<SuiteResult> all;
  for (auto f : {selftest_quantale, selftest_semantics, selftest_distance, selftest_certify,
                 selftest_cartesian}) {
    auto part = f(seed);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::vector<SuiteResult> run_selftest(const std::string& scope, std::uint64_t seed) {
  if (scope == "quantale") return selftest_quantale(seed);
  if (scope == "semantics") return selftest_semantics(seed);
  if (scope == "distance") return selftest_distance(seed);
  if (scope == "certify") return selftest_certify(seed);
  if (scope == "cartesian") return selftest_cartesian(seed);
  if (scope == "all") return selftest_all(seed);
  throw ParseError("unknown selftest scope '" + scope +
                   "' (quantale|semantics|distance|certify|cartesian|all)");
}

}  // namespace qmt
