#include "qmt/cartesian.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qmt/errors.hpp"

namespace qmt {

CTerm cvar(int index) {
  if (index < 0) throw TypeError("negative variable index");
  return std::make_shared<const CTermNode>(CTermNode{true, index, "", {}});
}

CTerm cop(std::string op, std::vector<CTerm> args) {
  return std::make_shared<const CTermNode>(CTermNode{false, 0, std::move(op), std::move(args)});
}

bool cterm_equal(const CTerm& a, const CTerm& b) {
  if (a.get() == b.get()) return true;
  if (a->is_var != b->is_var) return false;
  if (a->is_var) return a->var == b->var;
  if (a->op != b->op || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!cterm_equal(a->args[i], b->args[i])) return false;
  return true;
}

std::string print_cterm(const CTerm& t) {
  if (t->is_var) return "x" + std::to_string(t->var + 1);
  if (t->args.empty()) return t->op;
  std::string out = t->op + "(";
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (i) out += ", ";
    out += print_cterm(t->args[i]);
  }
  return out + ")";
}

namespace {

struct CTermParser {
  std::string_view text;
  std::size_t pos = 0;
  const std::map<std::string, int>& ops;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) throw ParseError("cartesian term: identifier expected", pos);
    return std::string(text.substr(start, pos - start));
  }

  CTerm term() {
    std::size_t here = pos;
    std::string name = ident();
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      int idx = std::stoi(name.substr(1));
      if (idx < 1) throw ParseError("variables are numbered from x1", here);
      return cvar(idx - 1);
    }
    auto it = ops.find(name);
    if (it == ops.end()) throw ParseError("unknown operation '" + name + "'", here);
    std::vector<CTerm> args;
    if (accept('(')) {
      if (!accept(')')) {
        args.push_back(term());
        while (accept(',')) args.push_back(term());
        if (!accept(')')) throw ParseError("cartesian term: expected ')'", pos);
      }
    }
    if (static_cast<int>(args.size()) != it->second)
      throw TypeError("operation '" + name + "' expects " + std::to_string(it->second) +
                      " argument(s), got " + std::to_string(args.size()));
    return cop(name, std::move(args));
  }

  CTerm parse() {
    CTerm t = term();
    skip_ws();
    if (pos != text.size()) throw ParseError("cartesian term: trailing input", pos);
    return t;
  }
};

}  // namespace

CTerm parse_cterm(std::string_view text, const std::map<std::string, int>& ops) {
  CTermParser p{text, 0, ops};
  return p.parse();
}

int cterm_min_context(const CTerm& t) {
  if (t->is_var) return t->var + 1;
  int m = 0;
  for (const auto& a : t->args) m = std::max(m, cterm_min_context(a));
  return m;
}

CTerm substitute(const CTerm& t, std::span<const CTerm> sigma) {
  if (t->is_var) {
    if (static_cast<std::size_t>(t->var) >= sigma.size())
      throw TypeError("unbound variable x" + std::to_string(t->var + 1));
    return sigma[static_cast<std::size_t>(t->var)];
  }
  std::vector<CTerm> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(substitute(a, sigma));
  return cop(t->op, std::move(args));
}

Signature phi_signature(const CartTheory& theory) {
  Signature sig;
  for (const auto& [name, arity] : theory.ops) {
    if (name == "copy" || name == "del")
      throw TypeError("operation name '" + name + "' collides with the comonoid generators");
    sig.add({name, arity, 1, false});
  }
  sig.add({"copy", 1, 2, false});
  sig.add({"del", 1, 0, false});
  return sig;
}

namespace {

Term phi_op_diagram(const std::string& op, std::span<const Term> translated_args, int ctx) {
  const int n = static_cast<int>(translated_args.size());
  Term copyb = ha_copy_bundle(ctx, n);
  Term block = par_fold(translated_args);
  Term o = gen(Generator{op, n, 1, std::nullopt});
  return seq(copyb, seq(block, o));
}

}  // namespace

Term phi_translate(const CTerm& t, int ctx) {
  if (cterm_min_context(t) > ctx) throw TypeError("context too small for term " + print_cterm(t));
  if (t->is_var) {
    // delete every context wire except the chosen one
    Term acc = empty_diag();
    Term del = gen(*ha_signature().find("del"));
    for (int i = 0; i < ctx; ++i) acc = par(acc, i == t->var ? id1() : del);
    return acc;
  }
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(phi_translate(a, ctx));
  return phi_op_diagram(t->op, args, ctx);
}

Term phi_tuple(std::span<const CTerm> terms, int ctx) {
  const int k = static_cast<int>(terms.size());
  std::vector<Term> parts;
  parts.reserve(terms.size());
  for (const auto& t : terms) parts.push_back(phi_translate(t, ctx));
  return seq(ha_copy_bundle(ctx, k), par_fold(parts));
}

std::string qel_rule_name(QelRule r) {
  switch (r) {
    case QelRule::bot: return "BOT'";
    case QelRule::mon: return "MON'";
    case QelRule::cont: return "CONT'";
    case QelRule::refl: return "REFL'";
    case QelRule::symm: return "SYMM'";
    case QelRule::triang: return "TRIANG";
    case QelRule::subq: return "SUBQ";
    case QelRule::nexp: return "NEXP";
    case QelRule::axiom: return "AXIOM";
  }
  return "?";
}

QelRule qel_rule_from_name(std::string_view name) {
  if (name == "BOT'") return QelRule::bot;
  if (name == "MON'") return QelRule::mon;
  if (name == "CONT'") return QelRule::cont;
  if (name == "REFL'") return QelRule::refl;
  if (name == "SYMM'") return QelRule::symm;
  if (name == "TRIANG") return QelRule::triang;
  if (name == "SUBQ") return QelRule::subq;
  if (name == "NEXP") return QelRule::nexp;
  if (name == "AXIOM") return QelRule::axiom;
  throw ParseError("unknown QEL rule '" + std::string(name) + "'");
}

namespace {

struct QelChecker {
  const CartTheory& theory;
  std::vector<int> path;

  [[noreturn]] void fail(const std::string& msg) { throw CheckError(msg, path); }

  void check_term(const CTerm& t, int ctx) {
    if (cterm_min_context(t) > ctx) fail("term exceeds the declared context");
    if (!t->is_var) {
      auto it = theory.ops.find(t->op);
      if (it == theory.ops.end()) fail("unknown operation '" + t->op + "'");
      if (static_cast<std::size_t>(it->second) != t->args.size())
        fail("operation '" + t->op + "' arity mismatch");
      for (const auto& a : t->args) check_term(a, ctx);
    }
  }

  /// Whole-term rewrite chain: lhs -> ... -> rhs through axiom instances.
  void check_refl_witness(const QelNode& n) {
    CTerm cur = n.lhs;
    for (const auto& step : n.witness) {
      if (step.axiom_index >= theory.equations.size()) fail("Refl' witness: bad axiom index");
      const CartAxiom& ax = theory.equations[step.axiom_index];
      if (static_cast<int>(step.subst.size()) != ax.ctx)
        fail("Refl' witness: substitution must cover exactly the axiom context");
      for (const auto& s : step.subst) check_term(s, n.ctx);
      CTerm from = substitute(step.reversed ? ax.rhs : ax.lhs, step.subst);
      CTerm to = substitute(step.reversed ? ax.lhs : ax.rhs, step.subst);
      if (!cterm_equal(cur, from)) fail("Refl' witness: step does not match the current term");
      cur = to;
    }
    if (!cterm_equal(cur, n.rhs)) fail("Refl' witness: chain does not reach the right-hand side");
  }

  void validate(const QelNode& n) {
    check_term(n.lhs, n.ctx);
    check_term(n.rhs, n.ctx);
    if (n.eps.kind() != theory.quantale) fail("epsilon over the wrong quantale");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      validate(n.children[i]);
      path.pop_back();
    }
    auto expect_children = [&](std::size_t k) {
      if (n.children.size() != k)
        fail(qel_rule_name(n.rule) + " expects " + std::to_string(k) + " premise(s)");
    };
    switch (n.rule) {
      case QelRule::bot:
        expect_children(0);
        if (!(n.eps == QVal::bottom(theory.quantale))) fail("Bot' must conclude bottom");
        return;
      case QelRule::mon: {
        expect_children(1);
        const QelNode& c = n.children[0];
        if (!cterm_equal(n.lhs, c.lhs) || !cterm_equal(n.rhs, c.rhs) || n.ctx != c.ctx)
          fail("Mon' must keep the judgment");
        if (!q_leq(n.eps, c.eps)) fail("Mon' may only weaken epsilon");
        return;
      }
      case QelRule::cont: {
        if (n.children.empty()) fail("Cont' needs at least one premise (finite joins only)");
        std::vector<QVal> eps;
        for (const auto& c : n.children) {
          if (!cterm_equal(n.lhs, c.lhs) || !cterm_equal(n.rhs, c.rhs) || n.ctx != c.ctx)
            fail("Cont' premises must share the judgment");
          eps.push_back(c.eps);
        }
        if (!(n.eps == q_join(theory.quantale, eps))) fail("Cont' epsilon is not the join");
        return;
      }
      case QelRule::refl:
        expect_children(0);
        if (!(n.eps == QVal::top(theory.quantale))) fail("Refl' must conclude top");
        if (n.witness.empty()) {
          if (!cterm_equal(n.lhs, n.rhs)) fail("Refl' without witness requires syntactic equality");
        } else {
          check_refl_witness(n);
        }
        return;
      case QelRule::symm: {
        if (!theory.symm) fail("Symm' not permitted (theory is hemimetric-only)");
        expect_children(1);
        const QelNode& c = n.children[0];
        if (!cterm_equal(n.lhs, c.rhs) || !cterm_equal(n.rhs, c.lhs) || n.ctx != c.ctx ||
            !(n.eps == c.eps))
          fail("Symm' must swap the judgment");
        return;
      }
      case QelRule::triang: {
        expect_children(2);
        const QelNode& a = n.children[0];
        const QelNode& b = n.children[1];
        if (!cterm_equal(a.rhs, b.lhs) || a.ctx != n.ctx || b.ctx != n.ctx)
          fail("Triang premises do not chain");
        if (!cterm_equal(n.lhs, a.lhs) || !cterm_equal(n.rhs, b.rhs))
          fail("Triang conclusion does not match premises");
        if (!(n.eps == q_tensor(a.eps, b.eps))) fail("Triang epsilon must be the tensor");
        return;
      }
      case QelRule::subq: {
        expect_children(1);
        const QelNode& c = n.children[0];
        if (static_cast<int>(n.subst.size()) != c.ctx)
          fail("SubQ substitution must cover exactly the premise context");
        for (const auto& s : n.subst) check_term(s, n.ctx);
        if (!cterm_equal(n.lhs, substitute(c.lhs, n.subst)) ||
            !cterm_equal(n.rhs, substitute(c.rhs, n.subst)))
          fail("SubQ conclusion is not the substituted premise");
        if (!(n.eps == c.eps)) fail("SubQ must keep epsilon");
        return;
      }
      case QelRule::nexp: {
        auto it = theory.ops.find(n.op);
        if (it == theory.ops.end()) fail("NExp on unknown operation '" + n.op + "'");
        if (n.children.size() != static_cast<std::size_t>(it->second))
          fail("NExp premise count must equal the operation arity");
        std::vector<CTerm> ls, rs;
        std::vector<QVal> eps;
        for (const auto& c : n.children) {
          if (c.ctx != n.ctx) fail("NExp premises must share the context");
          ls.push_back(c.lhs);
          rs.push_back(c.rhs);
          eps.push_back(c.eps);
        }
        if (!cterm_equal(n.lhs, cop(n.op, ls)) || !cterm_equal(n.rhs, cop(n.op, rs)))
          fail("NExp conclusion must apply the operation to the premises");
        if (!(n.eps == q_meet(theory.quantale, eps))) fail("NExp epsilon must be the meet");
        return;
      }
      case QelRule::axiom: {
        expect_children(0);
        if (n.axiom_index >= theory.quant_axioms.size()) fail("axiom index out of range");
        const CartQuantAxiom& ax = theory.quant_axioms[n.axiom_index];
        if (!cterm_equal(n.lhs, ax.lhs) || !cterm_equal(n.rhs, ax.rhs) || !(n.eps == ax.eps) ||
            n.ctx != ax.ctx)
          fail("axiom node does not match E_q[" + std::to_string(n.axiom_index) + "]");
        return;
      }
    }
    fail("corrupt QEL rule tag");
  }
};

struct Simulator {
  const CartTheory& theory;
  QuantaleKind k;

  CertNode refl(const Term& a, const Term& b) const {
    return CertNode{Rule::refl, a, b, QVal::top(k), "", {}, {}};
  }

  CertNode map(const QelNode& n) const {
    switch (n.rule) {
      case QelRule::bot:
        return CertNode{Rule::bot, phi_translate(n.lhs, n.ctx), phi_translate(n.rhs, n.ctx),
                        QVal::bottom(k), "", {}, {}};
      case QelRule::mon: {
        CertNode c = map(n.children[0]);
        Term l = c.lhs, r = c.rhs;
        return CertNode{Rule::mon, l, r, n.eps, "", {}, {std::move(c)}};
      }
      case QelRule::cont: {
        std::vector<CertNode> cs;
        for (const auto& c : n.children) cs.push_back(map(c));
        Term l = cs[0].lhs, r = cs[0].rhs;
        return CertNode{Rule::join, l, r, n.eps, "", {}, std::move(cs)};
      }
      case QelRule::refl:
        return refl(phi_translate(n.lhs, n.ctx), phi_translate(n.rhs, n.ctx));
      case QelRule::symm: {
        CertNode c = map(n.children[0]);
        Term l = c.rhs, r = c.lhs;
        return CertNode{Rule::symm, l, r, n.eps, "", {}, {std::move(c)}};
      }
      case QelRule::triang: {
        CertNode a = map(n.children[0]);
        CertNode b = map(n.children[1]);
        Term l = a.lhs, r = b.rhs;
        QVal eps = q_tensor(a.eps, b.eps);
        return CertNode{Rule::triang, l, r, eps, "", {}, {std::move(a), std::move(b)}};
      }
      case QelRule::subq: {
        // t[sigma] corresponds to Φ(sigma) ; Φ(t); bridge both ends with REFL.
        CertNode c = map(n.children[0]);
        Term sig_term = phi_tuple(n.subst, n.ctx);
        CertNode left_factor = refl(sig_term, sig_term);
        Term composed_l = seq(sig_term, c.lhs);
        Term composed_r = seq(sig_term, c.rhs);
        QVal eps = c.eps;
        CertNode seqn{Rule::seq_sum, composed_l, composed_r, eps, "", {},
                      {std::move(left_factor), std::move(c)}};
        Term node_l = phi_translate(n.lhs, n.ctx);
        Term node_r = phi_translate(n.rhs, n.ctx);
        CertNode tri1{Rule::triang, node_l, composed_r, eps, "", {},
                      {refl(node_l, composed_l), std::move(seqn)}};
        return CertNode{Rule::triang, node_l, node_r, eps, "", {},
                        {std::move(tri1), refl(composed_r, node_r)}};
      }
      case QelRule::nexp: {
        if (n.children.empty()) {
          // constant operation: both sides are the same diagram
          return refl(phi_translate(n.lhs, n.ctx), phi_translate(n.rhs, n.ctx));
        }
        CertNode block = map(n.children[0]);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          CertNode next = map(n.children[i]);
          Term l = par(block.lhs, next.lhs);
          Term r = par(block.rhs, next.rhs);
          QVal eps = q_meet2(block.eps, next.eps);
          block = CertNode{Rule::par_meet, l, r, eps, "", {}, {std::move(block), std::move(next)}};
        }
        const int arity = static_cast<int>(n.children.size());
        Term copyb = ha_copy_bundle(n.ctx, arity);
        Term o = gen(Generator{n.op, arity, 1, std::nullopt});
        // copyb ; (block ; o), matching phi_op_diagram's shape
        CertNode inner{Rule::seq_sum, seq(block.lhs, o), seq(block.rhs, o), block.eps, "", {},
                       {std::move(block), refl(o, o)}};
        Term l = seq(copyb, inner.lhs);
        Term r = seq(copyb, inner.rhs);
        QVal eps = inner.eps;
        return CertNode{Rule::seq_sum, l, r, eps, "", {},
                        {refl(copyb, copyb), std::move(inner)}};
      }
      case QelRule::axiom: {
        const CartQuantAxiom& ax = theory.quant_axioms[n.axiom_index];
        return CertNode{Rule::axiom,
                        phi_translate(ax.lhs, ax.ctx),
                        phi_translate(ax.rhs, ax.ctx),
                        ax.eps,
                        "q" + std::to_string(n.axiom_index),
                        {},
                        {}};
      }
    }
    throw Error("corrupt QEL rule tag");
  }
};

}  // namespace

QVal check_qel(const QelCertificate& cert, const CartTheory& theory) {
  QelChecker ck{theory, {}};
  ck.validate(cert);
  return cert.eps;
}

SimulationResult simulate_qel_in_monoidal(const QelCertificate& cert, const CartTheory& theory) {
  check_qel(cert, theory);
  SimulationResult out;
  out.uprime.name = "uprime";
  out.uprime.signature = phi_signature(theory);
  out.uprime.quantale = theory.quantale;
  out.uprime.closure = ClosureConfig::make(SeqRule::sum, ParRule::meet, theory.symm,
                                           theory.quantale);
  for (const auto& ax : theory.quant_axioms)
    out.uprime.quant_eqs.push_back(
        QuantEq{phi_translate(ax.lhs, ax.ctx), phi_translate(ax.rhs, ax.ctx), ax.eps});
  Simulator sim{theory, theory.quantale};
  out.cert = sim.map(cert);
  return out;
}

// --- serialization ----------------------------------------------------------------

namespace {

void write_qel(std::ostream& out, const QelNode& n, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
  out << "(" << qel_rule_name(n.rule) << " " << n.eps.str() << " " << n.ctx << " \""
      << print_cterm(n.lhs) << "\" \"" << print_cterm(n.rhs) << "\"";
  if (n.rule == QelRule::axiom) out << " " << n.axiom_index;
  if (n.rule == QelRule::nexp) out << " " << n.op;
  if (n.rule == QelRule::subq) {
    out << " (subst";
    for (const auto& s : n.subst) out << " \"" << print_cterm(s) << "\"";
    out << ")";
  }
  if (n.rule == QelRule::refl) {
    for (const auto& st : n.witness) {
      out << " (step " << st.axiom_index << " " << (st.reversed ? "rev" : "fwd");
      for (const auto& s : st.subst) out << " \"" << print_cterm(s) << "\"";
      out << ")";
    }
  }
  for (const auto& c : n.children) {
    out << "\n";
    write_qel(out, c, depth + 1);
  }
  out << ")";
}

struct QelLexer {
  std::string_view text;
  std::size_t pos = 0;
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  char peek2() {
    skip_ws();
    return pos + 1 < text.size() ? text[pos + 1] : '\0';
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("QEL certificate: expected '") + c + "'", pos);
    ++pos;
  }
  std::string atom() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '"')
      ++pos;
    if (start == pos) throw ParseError("QEL certificate: atom expected", pos);
    return std::string(text.substr(start, pos - start));
  }
  std::string string_lit() {
    skip_ws();
    expect('"');
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '"') ++pos;
    if (pos >= text.size()) throw ParseError("QEL certificate: unterminated string", start);
    std::string s(text.substr(start, pos - start));
    ++pos;
    return s;
  }
};

QelNode parse_qel_node(QelLexer& lex, const CartTheory& theory) {
  lex.expect('(');
  QelNode n;
  n.rule = qel_rule_from_name(lex.atom());
  n.eps = parse_qval(theory.quantale, lex.atom());
  n.ctx = std::stoi(lex.atom());
  n.lhs = parse_cterm(lex.string_lit(), theory.ops);
  n.rhs = parse_cterm(lex.string_lit(), theory.ops);
  if (n.rule == QelRule::axiom) n.axiom_index = std::stoul(lex.atom());
  if (n.rule == QelRule::nexp) n.op = lex.atom();
  while (lex.peek() == '(') {
    // sublists starting with a keyword atom are node attributes
    std::size_t save = lex.pos;
    lex.expect('(');
    if (std::isalpha(static_cast<unsigned char>(lex.peek()))) {
      std::string kw = lex.atom();
      if (kw == "subst") {
        while (lex.peek() == '"') n.subst.push_back(parse_cterm(lex.string_lit(), theory.ops));
        lex.expect(')');
        continue;
      }
      if (kw == "step") {
        ReflStep st;
        st.axiom_index = std::stoul(lex.atom());
        st.reversed = lex.atom() == "rev";
        while (lex.peek() == '"') st.subst.push_back(parse_cterm(lex.string_lit(), theory.ops));
        lex.expect(')');
        n.witness.push_back(std::move(st));
        continue;
      }
      // a child node: rewind and parse as node
      lex.pos = save;
      n.children.push_back(parse_qel_node(lex, theory));
      continue;
    }
    lex.pos = save;
    n.children.push_back(parse_qel_node(lex, theory));
  }
  lex.expect(')');
  return n;
}

}  // namespace

std::string qel_cert_text(const QelCertificate& cert) {
  std::ostringstream out;
  write_qel(out, cert, 0);
  out << "\n";
  return out.str();
}

QelCertificate parse_qel_cert(std::string_view text, const CartTheory& theory) {
  QelLexer lex{text, 0};
  QelNode n = parse_qel_node(lex, theory);
  lex.skip_ws();
  if (lex.pos != text.size()) throw ParseError("QEL certificate: trailing input", lex.pos);
  return n;
}

}  // namespace qmt
