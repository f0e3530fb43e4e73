#include "qmt/sampling.hpp"

#include "qmt/errors.hpp"

namespace qmt {

Rat random_rat(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(0, max_num), den(1, max_den);
  return Rat(num(rng), den(rng));
}

Rat random_unit_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(1, 12);
  int d = den(rng);
  std::uniform_int_distribution<int> num(0, d);
  return Rat(num(rng), d);
}

QVal random_qval(QuantaleKind k, std::mt19937_64& rng) {
  if (k == QuantaleKind::boolean) return QVal::boolean(rng() & 1);
  if (rng() % 16 == 0) return QVal::lawvere_inf();
  return QVal::lawvere(random_rat(rng, 8, 4));
}

namespace {

Term random_atom(std::mt19937_64& rng, const QuantTheory& theory) {
  std::vector<const GenDecl*> decls;
  for (const auto& [name, d] : theory.signature.gens) decls.push_back(&d);
  std::uniform_int_distribution<std::size_t> pick(0, decls.size() + 1);
  std::size_t i = pick(rng);
  if (i == decls.size()) return id1();
  if (i == decls.size() + 1) return basic_sym();
  const GenDecl* d = decls[i];
  if (!d->takes_scalar) return gen(*d);
  if (theory.signature == ca_signature()) return gen(*d, random_unit_rat(rng));
  const SemiringSpec& R = *theory.semiring;
  Rat s = R.name == "boolean" ? Rat(static_cast<int>(rng() & 1)) : random_rat(rng, 6, 3);
  return gen(*d, s);
}

}  // namespace

Term random_term(std::mt19937_64& rng, const QuantTheory& theory, int grow_steps) {
  std::vector<Term> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(random_atom(rng, theory));
  for (int step = 0; step < grow_steps; ++step) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const Term& a = pool[pick(rng)];
    if (rng() & 1) {
      const Term& b = pool[pick(rng)];
      if (a->arity + b->arity <= 4 && a->coarity + b->coarity <= 4) pool.push_back(par(a, b));
    } else {
      // find a composable partner
      std::vector<Term> matches;
      for (const auto& b : pool)
        if (b->arity == a->coarity) matches.push_back(b);
      if (!matches.empty()) {
        std::uniform_int_distribution<std::size_t> mp(0, matches.size() - 1);
        pool.push_back(seq(a, matches[mp(rng)]));
      }
    }
  }
  return pool.back();
}

namespace {

struct BaCertGen {
  std::mt19937_64& rng;
  const QuantTheory& ba;
  QuantaleKind k;

  Term random_stoch_term(int n, int m) {
    return stoch_to_ca_term(StochMat(random_stochastic(rng, m, n)));
  }

  CertNode leaf() {
    switch (rng() % 3) {
      case 0: {
        Rat lambda = random_unit_rat(rng);
        std::vector<Rat> args{lambda};
        QuantEq qe = instantiate_quant_schema(quant_schema("ba.tv"), nullptr, args);
        return CertNode{Rule::axiom, qe.lhs, qe.rhs, qe.eps, "ba.tv", args, {}};
      }
      case 1: {
        std::uniform_int_distribution<int> d(1, 3);
        Term t = random_stoch_term(d(rng), d(rng));
        return CertNode{Rule::refl, t, t, QVal::top(k), "", {}, {}};
      }
      default: {
        std::uniform_int_distribution<int> d(1, 3);
        int n = d(rng), m = d(rng);
        Term a = random_stoch_term(n, m);
        Term b = random_stoch_term(n, m);
        return CertNode{Rule::bot, a, b, QVal::bottom(k), "", {}, {}};
      }
    }
  }

  CertNode build(int depth) {
    if (depth <= 0) return leaf();
    switch (rng() % 6) {
      case 0: {  // MON: weaken
        CertNode c = build(depth - 1);
        QVal weaker = c.eps.is_inf()
                          ? c.eps
                          : QVal::lawvere(c.eps.finite() + random_rat(rng, 3, 2));
        Term l = c.lhs, r = c.rhs;
        return CertNode{Rule::mon, l, r, weaker, "", {}, {std::move(c)}};
      }
      case 1: {  // JOIN of the premise and a weakened duplicate
        CertNode c1 = build(depth - 1);
        CertNode dup = c1;
        QVal weaker = dup.eps.is_inf()
                          ? dup.eps
                          : QVal::lawvere(dup.eps.finite() + random_rat(rng, 3, 2));
        Term l = c1.lhs, r = c1.rhs;
        CertNode c2{Rule::mon, l, r, weaker, "", {}, {std::move(dup)}};
        std::vector<QVal> eps{c1.eps, c2.eps};
        QVal joined = q_join(k, eps);
        return CertNode{Rule::join, l, r, joined, "", {}, {std::move(c1), std::move(c2)}};
      }
      case 2: {  // TRIANG with the SYMM flip (closure is symmetric)
        CertNode c = build(depth - 1);
        CertNode flip = c;
        Term fl = flip.lhs, fr = flip.rhs;
        QVal fe = flip.eps;
        CertNode sy{Rule::symm, fr, fl, fe, "", {}, {std::move(flip)}};
        QVal eps = q_tensor(c.eps, sy.eps);
        Term l = c.lhs;
        Term r = sy.rhs;
        return CertNode{Rule::triang, l, r, eps, "", {}, {std::move(c), std::move(sy)}};
      }
      case 3: {  // SEQ_SUM with a REFL right factor of matching arity
        CertNode c = build(depth - 1);
        int m = c.lhs->coarity;
        if (m == 0) return c;
        std::uniform_int_distribution<int> d(1, 3);
        Term t = random_stoch_term(m, d(rng));
        CertNode rf{Rule::refl, t, t, QVal::top(k), "", {}, {}};
        QVal eps = q_tensor(c.eps, rf.eps);
        Term l = seq(c.lhs, t), r = seq(c.rhs, t);
        return CertNode{Rule::seq_sum, l, r, eps, "", {}, {std::move(c), std::move(rf)}};
      }
      case 4: {  // PAR_MEET of two subproofs
        CertNode a = build(depth - 1);
        CertNode b = build(depth - 1);
        QVal eps = q_meet2(a.eps, b.eps);
        Term l = par(a.lhs, b.lhs), r = par(a.rhs, b.rhs);
        return CertNode{Rule::par_meet, l, r, eps, "", {}, {std::move(a), std::move(b)}};
      }
      default: {  // SYMM
        CertNode c = build(depth - 1);
        Term l = c.rhs, r = c.lhs;
        QVal eps = c.eps;
        return CertNode{Rule::symm, l, r, eps, "", {}, {std::move(c)}};
      }
    }
  }
};

void collect_mutable(Certificate& n, std::vector<CertNode*>& out) {
  if (n.rule != Rule::mon) out.push_back(&n);
  for (auto& c : n.children) collect_mutable(c, out);
}

}  // namespace

Certificate random_ba_certificate(std::mt19937_64& rng, const QuantTheory& ba, int depth) {
  BaCertGen g{rng, ba, ba.quantale};
  return g.build(depth);
}

bool mutate_certificate_eps(std::mt19937_64& rng, Certificate& cert) {
  std::vector<CertNode*> nodes;
  collect_mutable(cert, nodes);
  if (nodes.empty()) return false;
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  CertNode* n = nodes[pick(rng)];
  if (n->eps.kind() == QuantaleKind::boolean) {
    n->eps = QVal::boolean(!n->eps.as_bool());
    return true;
  }
  if (n->eps.is_inf()) {
    n->eps = QVal::lawvere(random_rat(rng, 4, 2));
    return true;
  }
  // prefer a strictly below-the-conclusion (numerically larger) epsilon
  Rat bump = random_rat(rng, 3, 2) + Rat(1, 7);
  n->eps = QVal::lawvere(n->eps.finite() + bump);
  return true;
}

}  // namespace qmt
