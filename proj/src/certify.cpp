#include "qmt/certify.hpp"

#include <sstream>

#include "qmt/errors.hpp"

#include "json.hpp"

namespace qmt {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::refl: return "REFL";
    case Rule::bot: return "BOT";
    case Rule::mon: return "MON";
    case Rule::join: return "JOIN";
    case Rule::triang: return "TRIANG";
    case Rule::symm: return "SYMM";
    case Rule::seq_sum: return "SEQ_SUM";
    case Rule::seq_meet: return "SEQ_MEET";
    case Rule::par_sum: return "PAR_SUM";
    case Rule::par_meet: return "PAR_MEET";
    case Rule::axiom: return "AXIOM";
  }
  return "?";
}

Rule rule_from_name(std::string_view name) {
  if (name == "REFL") return Rule::refl;
  if (name == "BOT") return Rule::bot;
  if (name == "MON") return Rule::mon;
  if (name == "JOIN") return Rule::join;
  if (name == "TRIANG") return Rule::triang;
  if (name == "SYMM") return Rule::symm;
  if (name == "SEQ_SUM") return Rule::seq_sum;
  if (name == "SEQ_MEET") return Rule::seq_meet;
  if (name == "PAR_SUM") return Rule::par_sum;
  if (name == "PAR_MEET") return Rule::par_meet;
  if (name == "AXIOM") return Rule::axiom;
  throw ParseError("unknown certificate rule '" + std::string(name) + "'");
}

namespace {

struct Checker {
  const QuantTheory& theory;
  const CheckOptions& opts;
  std::vector<std::string> trusted;
  std::vector<int> path;

  [[noreturn]] void fail(const std::string& msg) { throw CheckError(msg, path); }

  void expect_types(const CertNode& n) {
    auto [ln, lm] = typecheck(n.lhs, theory.signature);
    auto [rn, rm] = typecheck(n.rhs, theory.signature);
    if (ln != rn || lm != rm) fail("judgment sides have different types");
    if (n.eps.kind() != theory.quantale) fail("epsilon over the wrong quantale");
  }

  void expect_children(const CertNode& n, std::size_t k) {
    if (n.children.size() != k)
      fail(rule_name(n.rule) + " expects " + std::to_string(k) + " premise(s), got " +
           std::to_string(n.children.size()));
  }

  const CertNode& child(const CertNode& n, int i) { return n.children[static_cast<std::size_t>(i)]; }

  void validate(const CertNode& n) {
    expect_types(n);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      validate(n.children[i]);
      path.pop_back();
    }
    switch (n.rule) {
      case Rule::refl: {
        expect_children(n, 0);
        if (!(n.eps == QVal::top(theory.quantale))) fail("REFL must conclude top");
        bool decided;
        try {
          decided = equal_in_theory(n.lhs, n.rhs, theory);
        } catch (const UnsupportedError&) {
          if (!opts.assume_refl) fail("REFL undecidable for this theory (use assume_refl)");
          trusted.push_back(print_term(n.lhs) + " == " + print_term(n.rhs));
          return;
        }
        if (!decided) fail("REFL on terms not equal in the theory");
        return;
      }
      case Rule::bot:
        expect_children(n, 0);
        if (!(n.eps == QVal::bottom(theory.quantale))) fail("BOT must conclude bottom");
        return;
      case Rule::mon: {
        expect_children(n, 1);
        const CertNode& c = child(n, 0);
        if (!structural_equal(n.lhs, c.lhs) || !structural_equal(n.rhs, c.rhs))
          fail("MON must keep the judgment sides");
        if (!q_leq(n.eps, c.eps)) fail("MON may only weaken epsilon");
        return;
      }
      case Rule::join: {
        if (n.children.empty()) fail("JOIN needs at least one premise (finite joins only)");
        std::vector<QVal> eps;
        for (const auto& c : n.children) {
          if (!structural_equal(n.lhs, c.lhs) || !structural_equal(n.rhs, c.rhs))
            fail("JOIN premises must share the judgment sides");
          eps.push_back(c.eps);
        }
        if (!(n.eps == q_join(theory.quantale, eps))) fail("JOIN epsilon is not the finite join");
        return;
      }
      case Rule::triang: {
        expect_children(n, 2);
        const CertNode& a = child(n, 0);
        const CertNode& b = child(n, 1);
        if (!structural_equal(a.rhs, b.lhs)) fail("TRIANG premises do not chain");
        if (!structural_equal(n.lhs, a.lhs) || !structural_equal(n.rhs, b.rhs))
          fail("TRIANG conclusion sides do not match premises");
        if (!(n.eps == q_tensor(a.eps, b.eps))) fail("TRIANG epsilon must be the tensor");
        return;
      }
      case Rule::symm: {
        if (!theory.closure.symm) fail("SYMM not permitted by this closure");
        expect_children(n, 1);
        const CertNode& c = child(n, 0);
        if (!structural_equal(n.lhs, c.rhs) || !structural_equal(n.rhs, c.lhs))
          fail("SYMM must swap the judgment sides");
        if (!(n.eps == c.eps)) fail("SYMM must keep epsilon");
        return;
      }
      case Rule::seq_sum:
      case Rule::seq_meet: {
        bool want_meet = n.rule == Rule::seq_meet;
        if ((theory.closure.seq_rule == SeqRule::meet) != want_meet)
          fail(rule_name(n.rule) + " not permitted by this closure");
        expect_children(n, 2);
        const CertNode& f = child(n, 0);
        const CertNode& g = child(n, 1);
        if (f.lhs->coarity != g.lhs->arity) fail("sequential premises not composable");
        if (!structural_equal(n.lhs, seq(f.lhs, g.lhs)) ||
            !structural_equal(n.rhs, seq(f.rhs, g.rhs)))
          fail("sequential conclusion must compose the premises");
        QVal combined = want_meet ? q_meet2(f.eps, g.eps) : q_tensor(f.eps, g.eps);
        if (!(n.eps == combined)) fail("sequential epsilon must combine the premises");
        return;
      }
      case Rule::par_sum:
      case Rule::par_meet: {
        bool want_meet = n.rule == Rule::par_meet;
        if ((theory.closure.par_rule == ParRule::meet) != want_meet)
          fail(rule_name(n.rule) + " not permitted by this closure");
        expect_children(n, 2);
        const CertNode& f = child(n, 0);
        const CertNode& g = child(n, 1);
        if (!structural_equal(n.lhs, par(f.lhs, g.lhs)) ||
            !structural_equal(n.rhs, par(f.rhs, g.rhs)))
          fail("parallel conclusion must tensor the premises");
        QVal combined = want_meet ? q_meet2(f.eps, g.eps) : q_tensor(f.eps, g.eps);
        if (!(n.eps == combined)) fail("parallel epsilon must combine the premises");
        return;
      }
      case Rule::axiom: {
        expect_children(n, 0);
        QuantEq instance{n.lhs, n.rhs, n.eps};
        if (n.schema_id.rfind("q", 0) == 0 && n.schema_id.size() > 1 &&
            std::isdigit(static_cast<unsigned char>(n.schema_id[1]))) {
          std::size_t idx = std::stoul(n.schema_id.substr(1));
          if (idx >= theory.quant_eqs.size()) fail("axiom index out of range");
          const QuantEq& ax = theory.quant_eqs[idx];
          if (!structural_equal(n.lhs, ax.lhs) || !structural_equal(n.rhs, ax.rhs) ||
              !(n.eps == ax.eps))
            fail("axiom node does not match E_q[" + std::to_string(idx) + "]");
          return;
        }
        bool registered = false;
        for (const auto& id : theory.quant_schemas) registered = registered || id == n.schema_id;
        if (!registered) fail("schema '" + n.schema_id + "' is not part of this theory");
        QuantEq made;
        try {
          made = instantiate_quant_schema(quant_schema(n.schema_id), theory.semiring_ptr(),
                                          n.args);
        } catch (const DomainError& e) {
          fail(e.what());
        }
        if (!structural_equal(instance.lhs, made.lhs) || !structural_equal(instance.rhs, made.rhs) ||
            !(instance.eps == made.eps))
          fail("axiom node does not match its schema instantiation");
        return;
      }
    }
    fail("corrupt rule tag");
  }
};

}  // namespace

CheckResult check(const Certificate& cert, const QuantTheory& theory, const CheckOptions& opts) {
  Checker ck{theory, opts, {}, {}};
  ck.validate(cert);
  return CheckResult{cert.eps, std::move(ck.trusted)};
}

// --- generators ----------------------------------------------------------------

namespace {

CertNode refl_node(const Term& a, const Term& b, QuantaleKind k) {
  return CertNode{Rule::refl, a, b, QVal::top(k), "", {}, {}};
}

CertNode axiom_node(const std::string& schema, std::vector<Rat> args, const QuantEq& qe) {
  return CertNode{Rule::axiom, qe.lhs, qe.rhs, qe.eps, schema, std::move(args), {}};
}

CertNode triang_node(CertNode a, CertNode b) {
  QVal eps = q_tensor(a.eps, b.eps);
  Term lhs = a.lhs, rhs = b.rhs;
  return CertNode{Rule::triang, lhs, rhs, eps, "", {}, {std::move(a), std::move(b)}};
}

CertNode seq_sum_node(CertNode f, CertNode g) {
  QVal eps = q_tensor(f.eps, g.eps);
  Term lhs = seq(f.lhs, g.lhs), rhs = seq(f.rhs, g.rhs);
  return CertNode{Rule::seq_sum, lhs, rhs, eps, "", {}, {std::move(f), std::move(g)}};
}

CertNode par_sum_node(CertNode f, CertNode g) {
  QVal eps = q_tensor(f.eps, g.eps);
  Term lhs = par(f.lhs, g.lhs), rhs = par(f.rhs, g.rhs);
  return CertNode{Rule::par_sum, lhs, rhs, eps, "", {}, {std::move(f), std::move(g)}};
}

CertNode par_meet_node(CertNode f, CertNode g) {
  QVal eps = q_meet2(f.eps, g.eps);
  Term lhs = par(f.lhs, g.lhs), rhs = par(f.rhs, g.rhs);
  return CertNode{Rule::par_meet, lhs, rhs, eps, "", {}, {std::move(f), std::move(g)}};
}

}  // namespace

Certificate prove_matrix_order(const Term& f, const Term& g, const QuantTheory& theory) {
  if (model_family(theory) != ModelFamily::ha_matrix)
    throw UnsupportedError("prove_matrix_order needs an HA-family theory");
  bool has_order_schema = false;
  for (const auto& id : theory.quant_schemas)
    has_order_schema = has_order_schema || id == "preord.scalar_order";
  if (!has_order_schema)
    throw UnsupportedError("theory has no scalar-order axioms; nothing to prove");
  const SemiringSpec& R = *theory.semiring;
  if (f->arity != g->arity || f->coarity != g->coarity)
    throw TypeError("terms have different types");
  Mat F = eval_ha(f, R), G = eval_ha(g, R);
  for (int i = 0; i < F.rows; ++i)
    for (int j = 0; j < F.cols; ++j)
      if (!R.leq(F.at(i, j), G.at(i, j)))
        throw Error("not derivable: entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") violates the order: " + rat_string(F.at(i, j)) + " > " +
                    rat_string(G.at(i, j)));

  const QuantaleKind k = theory.quantale;
  if (F == G) return refl_node(f, g, k);

  const int n = F.cols, m = F.rows;
  auto [b, w] = canonical_wires(n, m);
  const QuantSchema& order = quant_schema("preord.scalar_order");

  // Pairwise scalar axioms, tensored in the canonical column-major order.
  CertNode scalar_block;
  bool first = true;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) {
      std::vector<Rat> args{F.at(i, j), G.at(i, j)};
      CertNode leaf =
          axiom_node("preord.scalar_order", args,
                     instantiate_quant_schema(order, &R, args));
      scalar_block = first ? std::move(leaf) : par_sum_node(std::move(scalar_block), std::move(leaf));
      first = false;
    }

  // associate as b ; ((⊗ scalars) ; w) to match matrix_to_ha_term; identity
  // wires (the 1x1 case) need no composition nodes at all
  CertNode middle = std::move(scalar_block);
  if (!is_identity(w)) middle = seq_sum_node(std::move(middle), refl_node(w, w, k));
  if (!is_identity(b)) middle = seq_sum_node(refl_node(b, b, k), std::move(middle));

  if (!structural_equal(f, middle.lhs))
    middle = triang_node(refl_node(f, middle.lhs, k), std::move(middle));
  if (!structural_equal(g, middle.rhs))
    middle = triang_node(std::move(middle), refl_node(middle.rhs, g, k));
  return middle;
}

namespace {

/// Terms of the (TV) axiom at lambda, as the schema instantiates them.
QuantEq tv_axiom(const QuantTheory& theory, const Rat& lambda) {
  std::vector<Rat> args{lambda};
  return instantiate_quant_schema(quant_schema("ba.tv"), theory.semiring_ptr(), args);
}

void require_ba(const QuantTheory& theory, const char* who) {
  if (model_family(theory) != ModelFamily::ca_stoch)
    throw UnsupportedError(std::string(who) + " needs a CA-family theory");
  bool has_tv = false;
  for (const auto& id : theory.quant_schemas) has_tv = has_tv || id == "ba.tv";
  if (!has_tv) throw UnsupportedError("theory has no (TV) axioms; nothing to prove");
}

}  // namespace

Certificate prove_tv_column(const Term& f, const Term& g, const QuantTheory& theory) {
  require_ba(theory, "prove_tv_column");
  if (f->arity != 1 || g->arity != 1 || f->coarity != g->coarity)
    throw TypeError("prove_tv_column expects two terms 1 -> m");
  const QuantaleKind k = theory.quantale;
  Distribution mu = column(eval_ca(f).mat(), 0);
  Distribution nu = column(eval_ca(g).mat(), 0);
  if (mu == nu) return refl_node(f, g, k);

  SplitResult sp = split(mu, nu);
  const int m = static_cast<int>(mu.size());

  // f  =_0  (cc_l ⊗ del) ; (mu' ⊗ tau ⊗ nu') ; p^3_m
  // g  =_0  (del ⊗ cc_{1-l}) ; (mu' ⊗ tau ⊗ nu') ; p^3_m
  QuantEq tv = tv_axiom(theory, sp.lambda);
  std::vector<Term> parts{ca_dist_term(sp.mu_prime.w), ca_dist_term(sp.tau.w),
                          ca_dist_term(sp.nu_prime.w)};
  Term shared = seq(par_fold(parts), fritz_merge(3, m));
  Term A = seq(tv.lhs, shared);
  Term B = seq(tv.rhs, shared);

  CertNode mid = seq_sum_node(axiom_node("ba.tv", {sp.lambda}, tv), refl_node(shared, shared, k));
  CertNode left = refl_node(f, A, k);
  CertNode right = refl_node(B, g, k);
  return triang_node(triang_node(std::move(left), std::move(mid)), std::move(right));
}

Certificate prove_tv_general(const Term& f, const Term& g, const QuantTheory& theory) {
  require_ba(theory, "prove_tv_general");
  if (f->arity != g->arity || f->coarity != g->coarity)
    throw TypeError("terms have different types");
  if (f->arity < 1) throw DomainError("prove_tv_general requires arity n >= 1");
  const QuantaleKind k = theory.quantale;
  const int n = f->arity;
  Mat F = eval_ca(f).mat(), G = eval_ca(g).mat();
  if (F == G) return refl_node(f, g, k);
  const int m = F.rows;

  std::vector<Term> fcols, gcols;
  for (int j = 0; j < n; ++j) {
    fcols.push_back(ca_dist_term(column(F, j).w));
    gcols.push_back(ca_dist_term(column(G, j).w));
  }
  CertNode tensor_block;
  Term facc, gacc;
  for (int j = 0; j < n; ++j) {
    CertNode cj = prove_tv_column(fcols[j], gcols[j], theory);
    if (j == 0) {
      tensor_block = std::move(cj);
      facc = fcols[0];
      gacc = gcols[0];
    } else {
      tensor_block = par_meet_node(std::move(tensor_block), std::move(cj));
      facc = par(facc, fcols[j]);
      gacc = par(gacc, gcols[j]);
    }
  }
  Term p = fritz_merge(n, m);
  CertNode composed = seq_sum_node(std::move(tensor_block), refl_node(p, p, k));
  CertNode left = refl_node(f, seq(facc, p), k);
  CertNode right = refl_node(seq(gacc, p), g, k);
  return triang_node(triang_node(std::move(left), std::move(composed)), std::move(right));
}

// --- serialization ---------------------------------------------------------------

namespace {

void write_node(std::ostream& out, const CertNode& n, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
  out << "(" << rule_name(n.rule) << " " << n.eps.str() << " \"" << print_term(n.lhs) << "\" \""
      << print_term(n.rhs) << "\"";
  if (n.rule == Rule::axiom) {
    out << " " << n.schema_id;
    for (const auto& a : n.args) out << " " << rat_string(a);
  }
  if (n.children.empty()) {
    out << ")";
    return;
  }
  for (const auto& c : n.children) {
    out << "\n";
    write_node(out, c, depth + 1);
  }
  out << ")";
}

struct SexpLexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("certificate: expected '") + c + "'", pos);
    ++pos;
  }
  std::string string_lit() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '"')
      throw ParseError("certificate: string literal expected", pos);
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '"') ++pos;
    if (pos >= text.size()) throw ParseError("certificate: unterminated string", start);
    std::string s(text.substr(start, pos - start));
    ++pos;
    return s;
  }
  std::string atom() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '"')
      ++pos;
    if (start == pos) throw ParseError("certificate: atom expected", pos);
    return std::string(text.substr(start, pos - start));
  }
};

CertNode parse_node(SexpLexer& lex, const Signature& sig, QuantaleKind quantale) {
  lex.expect('(');
  CertNode n;
  n.rule = rule_from_name(lex.atom());
  n.eps = parse_qval(quantale, lex.atom());
  n.lhs = parse_term(lex.string_lit(), sig);
  n.rhs = parse_term(lex.string_lit(), sig);
  if (n.rule == Rule::axiom) {
    n.schema_id = lex.atom();
    while (lex.peek() != ')' && lex.peek() != '(') n.args.push_back(parse_rat(lex.atom()));
  }
  while (lex.peek() == '(') n.children.push_back(parse_node(lex, sig, quantale));
  lex.expect(')');
  return n;
}

using nlohmann::json;

json node_to_json(const CertNode& n) {
  json j;
  j["rule"] = rule_name(n.rule);
  j["eps"] = n.eps.str();
  j["lhs"] = print_term(n.lhs);
  j["rhs"] = print_term(n.rhs);
  if (n.rule == Rule::axiom) {
    j["schema"] = n.schema_id;
    j["args"] = json::array();
    for (const auto& a : n.args) j["args"].push_back(rat_string(a));
  }
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(node_to_json(c));
  return j;
}

CertNode node_from_json(const json& j, const Signature& sig, QuantaleKind quantale) {
  CertNode n;
  n.rule = rule_from_name(j.at("rule").get<std::string>());
  n.eps = parse_qval(quantale, j.at("eps").get<std::string>());
  n.lhs = parse_term(j.at("lhs").get<std::string>(), sig);
  n.rhs = parse_term(j.at("rhs").get<std::string>(), sig);
  if (n.rule == Rule::axiom) {
    n.schema_id = j.at("schema").get<std::string>();
    for (const auto& a : j.at("args")) n.args.push_back(parse_rat(a.get<std::string>()));
  }
  for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c, sig, quantale));
  return n;
}

}  // namespace

std::string cert_text(const Certificate& cert) {
  std::ostringstream out;
  write_node(out, cert, 0);
  out << "\n";
  return out.str();
}

Certificate parse_cert(std::string_view text, const Signature& sig, QuantaleKind quantale) {
  SexpLexer lex{text, 0};
  CertNode n = parse_node(lex, sig, quantale);
  lex.skip_ws();
  if (lex.pos != text.size()) throw ParseError("certificate: trailing input", lex.pos);
  return n;
}

std::string cert_json(const Certificate& cert) { return node_to_json(cert).dump(2); }

Certificate cert_from_json(const std::string& json_text, const Signature& sig,
                           QuantaleKind quantale) {
  json j = json::parse(json_text);
  return node_from_json(j, sig, quantale);
}

}  // namespace qmt
