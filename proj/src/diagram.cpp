#include "qmt/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "qmt/errors.hpp"

namespace qmt {

namespace {

Term make_node(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

const Term& id1_singleton() {
  static const Term t = make_node({TermNode::Kind::id1, {}, nullptr, nullptr, 1, 1});
  return t;
}
const Term& empty_singleton() {
  static const Term t = make_node({TermNode::Kind::empty, {}, nullptr, nullptr, 0, 0});
  return t;
}
const Term& sym_singleton() {
  static const Term t = make_node({TermNode::Kind::sym, {}, nullptr, nullptr, 2, 2});
  return t;
}

}  // namespace

Term gen(Generator g) {
  TermNode n{TermNode::Kind::gen, std::move(g), nullptr, nullptr, 0, 0};
  n.arity = n.generator.arity;
  n.coarity = n.generator.coarity;
  return make_node(std::move(n));
}

Term gen(const GenDecl& d, std::optional<Rat> scalar) {
  if (d.takes_scalar != scalar.has_value())
    throw TypeError("generator '" + d.name + "' " +
                    (d.takes_scalar ? "requires a scalar parameter" : "takes no scalar parameter"));
  return gen(Generator{d.name, d.arity, d.coarity, std::move(scalar)});
}

Term id1() { return id1_singleton(); }
Term empty_diag() { return empty_singleton(); }
Term basic_sym() { return sym_singleton(); }

bool is_identity(const Term& t) {
  if (t->kind == TermNode::Kind::id1 || t->kind == TermNode::Kind::empty) return true;
  if (t->kind == TermNode::Kind::par) return is_identity(t->left) && is_identity(t->right);
  return false;
}

Term seq(const Term& s, const Term& t) {
  if (s->coarity != t->arity)
    throw TypeError("composition mismatch: coarity " + std::to_string(s->coarity) +
                    " != arity " + std::to_string(t->arity));
  if (is_identity(s)) return t;
  if (is_identity(t)) return s;
  return make_node({TermNode::Kind::seq, {}, s, t, s->arity, t->coarity});
}

Term par(const Term& s, const Term& t) {
  if (s->kind == TermNode::Kind::empty) return t;
  if (t->kind == TermNode::Kind::empty) return s;
  return make_node(
      {TermNode::Kind::par, {}, s, t, s->arity + t->arity, s->coarity + t->coarity});
}

Term seq_fold(std::span<const Term> ts) {
  if (ts.empty()) throw TypeError("seq_fold of empty list");
  Term acc = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) acc = seq(acc, ts[i]);
  return acc;
}

Term par_fold(std::span<const Term> ts) {
  Term acc = empty_diag();
  for (const auto& t : ts) acc = par(acc, t);
  return acc;
}

Term id_n(int n) {
  if (n < 0) throw TypeError("id_n with negative n");
  Term acc = empty_diag();
  for (int i = 0; i < n; ++i) acc = par(acc, id1());
  return acc;
}

Term perm_term(std::span<const int> perm) {
  const int w = static_cast<int>(perm.size());
  std::vector<bool> seen(w, false);
  for (int p : perm) {
    if (p < 0 || p >= w || seen[p]) throw TypeError("perm_term: not a permutation");
    seen[p] = true;
  }
  // cur[pos] = input wire currently at that position; sort positions until
  // input i sits at perm[i], emitting one parallel layer per bubble pass.
  std::vector<int> target_at(w);  // target_at[pos] = input that must end at pos
  for (int i = 0; i < w; ++i) target_at[perm[i]] = i;
  std::vector<int> cur(w);
  for (int i = 0; i < w; ++i) cur[i] = i;
  std::vector<int> rank(w);  // rank[input] = desired position
  for (int i = 0; i < w; ++i) rank[target_at[i]] = i;

  Term acc = id_n(w);
  bool moved = true;
  while (moved) {
    moved = false;
    std::vector<Term> layer;
    int pos = 0;
    while (pos + 1 < w) {
      if (rank[cur[pos]] > rank[cur[pos + 1]]) {
        layer.push_back(basic_sym());
        std::swap(cur[pos], cur[pos + 1]);
        moved = true;
        pos += 2;
      } else {
        layer.push_back(id1());
        pos += 1;
      }
    }
    if (pos < w) layer.push_back(id1());
    if (moved) acc = seq(acc, par_fold(layer));
  }
  return acc;
}

Term sym_mn(int m, int n) {
  if (m < 0 || n < 0) throw TypeError("sym_mn with negative block size");
  if (m == 1 && n == 1) return basic_sym();
  std::vector<int> perm(m + n);
  for (int i = 0; i < m; ++i) perm[i] = n + i;
  for (int j = 0; j < n; ++j) perm[m + j] = j;
  return perm_term(perm);
}

bool structural_equal(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->arity != b->arity || a->coarity != b->coarity) return false;
  switch (a->kind) {
    case TermNode::Kind::gen:
      return a->generator == b->generator;
    case TermNode::Kind::id1:
    case TermNode::Kind::empty:
    case TermNode::Kind::sym:
      return true;
    case TermNode::Kind::seq:
    case TermNode::Kind::par:
      return structural_equal(a->left, b->left) && structural_equal(a->right, b->right);
  }
  return false;
}

std::pair<int, int> typecheck(const Term& t, const Signature& sig) {
  switch (t->kind) {
    case TermNode::Kind::gen: {
      const GenDecl* d = sig.find(t->generator.name);
      if (!d) throw TypeError("unknown generator '" + t->generator.name + "'");
      if (d->arity != t->generator.arity || d->coarity != t->generator.coarity)
        throw TypeError("generator '" + t->generator.name + "' has wrong type");
      if (d->takes_scalar != t->generator.scalar.has_value())
        throw TypeError("generator '" + t->generator.name + "' scalar parameter mismatch");
      return {t->arity, t->coarity};
    }
    case TermNode::Kind::id1:
      return {1, 1};
    case TermNode::Kind::empty:
      return {0, 0};
    case TermNode::Kind::sym:
      return {2, 2};
    case TermNode::Kind::seq: {
      auto [ln, lm] = typecheck(t->left, sig);
      auto [rn, rm] = typecheck(t->right, sig);
      if (lm != rn)
        throw TypeError("composition mismatch: " + std::to_string(lm) + " != " + std::to_string(rn));
      return {ln, rm};
    }
    case TermNode::Kind::par: {
      auto [ln, lm] = typecheck(t->left, sig);
      auto [rn, rm] = typecheck(t->right, sig);
      return {ln + rn, lm + rm};
    }
  }
  throw TypeError("corrupt term");
}

const Signature& ha_signature() {
  static const Signature sig = [] {
    Signature s;
    s.add({"del", 1, 0, false});
    s.add({"copy", 1, 2, false});
    s.add({"add", 2, 1, false});
    s.add({"zero", 0, 1, false});
    s.add({"scalar", 1, 1, true});
    return s;
  }();
  return sig;
}

const Signature& ca_signature() {
  static const Signature sig = [] {
    Signature s;
    s.add({"del", 0, 1, false});
    s.add({"cop", 2, 1, false});
    s.add({"cc", 1, 2, true});
    return s;
  }();
  return sig;
}

namespace {

Term ha_gen(const char* name, std::optional<Rat> scalar = std::nullopt) {
  return gen(*ha_signature().find(name), std::move(scalar));
}
Term ca_gen(const char* name, std::optional<Rat> scalar = std::nullopt) {
  return gen(*ca_signature().find(name), std::move(scalar));
}

/// Transposition permutation regrouping n blocks of m into m blocks of n.
std::vector<int> transpose_perm(int n, int m) {
  std::vector<int> perm(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) perm[j * m + i] = i * n + j;
  return perm;
}

}  // namespace

Term ha_copy_m(int m) {
  if (m < 0) throw TypeError("ha_copy_m with negative m");
  if (m == 0) return ha_gen("del");
  if (m == 1) return id1();
  return seq(ha_gen("copy"), par(id1(), ha_copy_m(m - 1)));
}

Term ha_add_n(int n) {
  if (n < 0) throw TypeError("ha_add_n with negative n");
  if (n == 0) return ha_gen("zero");
  if (n == 1) return id1();
  return seq(par(ha_add_n(n - 1), id1()), ha_gen("add"));
}

Term ca_cop_n(int n) {
  if (n < 0) throw TypeError("ca_cop_n with negative n");
  if (n == 0) return ca_gen("del");
  if (n == 1) return id1();
  return seq(par(ca_cop_n(n - 1), id1()), ca_gen("cop"));
}

CanonicalWires canonical_wires(int n, int m) {
  if (n < 0 || m < 0) throw TypeError("canonical_wires with negative dimensions");
  static std::map<std::pair<int, int>, CanonicalWires> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, m});
  if (it != cache.end()) return it->second;

  std::vector<Term> copies(static_cast<std::size_t>(n), ha_copy_m(m));
  Term b = n == 0 ? empty_diag() : par_fold(copies);

  std::vector<Term> adds(static_cast<std::size_t>(m), ha_add_n(n));
  Term w = seq(perm_term(transpose_perm(n, m)), par_fold(adds));

  CanonicalWires cw{b, w};
  cache.emplace(std::make_pair(n, m), cw);
  return cw;
}

Term fritz_merge(int n, int m) {
  if (m < 1) throw DomainError("fritz_merge requires m >= 1");
  if (n < 0) throw TypeError("fritz_merge with negative n");
  static std::map<std::pair<int, int>, Term> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, m});
  if (it != cache.end()) return it->second;

  std::vector<Term> cops(static_cast<std::size_t>(m), ca_cop_n(n));
  Term p = seq(perm_term(transpose_perm(n, m)), par_fold(cops));
  cache.emplace(std::make_pair(n, m), p);
  return p;
}

Term ca_thick_cop(int m) { return fritz_merge(2, m); }

Term ca_thick_del(int m) {
  if (m < 0) throw TypeError("ca_thick_del with negative m");
  std::vector<Term> dels(static_cast<std::size_t>(m), ca_gen("del"));
  return par_fold(dels);
}

Term ca_dist_term(std::span<const Rat> weights) {
  const std::size_t m = weights.size();
  if (m == 0) throw DomainError("distribution term needs support size >= 1");
  Rat sum(0);
  for (const auto& w : weights) {
    if (w < 0 || w > 1) throw DomainError("distribution weight out of [0,1]");
    sum += w;
  }
  if (sum != 1) throw DomainError("distribution weights must sum to 1");
  if (m == 1) return id1();
  const Rat& p = weights[0];
  if (p == 1) {
    // all remaining mass is zero; any valid tail works, take point mass at first
    std::vector<Rat> rest(m - 1, Rat(0));
    rest[0] = Rat(1);
    return seq(ca_gen("cc", p), par(id1(), ca_dist_term(rest)));
  }
  std::vector<Rat> rest;
  rest.reserve(m - 1);
  for (std::size_t i = 1; i < m; ++i) rest.push_back(weights[i] / (Rat(1) - p));
  return seq(ca_gen("cc", p), par(id1(), ca_dist_term(rest)));
}

Term ha_copy_bundle(int c, int k) {
  if (c < 0 || k < 0) throw TypeError("ha_copy_bundle with negative size");
  std::vector<Term> copies(static_cast<std::size_t>(c), ha_copy_m(k));
  Term spread = c == 0 ? empty_diag() : par_fold(copies);
  return seq(spread, perm_term(transpose_perm(c, k)));
}

Term substitute_generators(const Term& t, const std::function<Term(const Generator&)>& fn) {
  switch (t->kind) {
    case TermNode::Kind::gen: {
      Term r = fn(t->generator);
      if (r->arity != t->arity || r->coarity != t->coarity)
        throw TypeError("generator substitution changes the type of '" + t->generator.name + "'");
      return r;
    }
    case TermNode::Kind::seq:
      return seq(substitute_generators(t->left, fn), substitute_generators(t->right, fn));
    case TermNode::Kind::par:
      return par(substitute_generators(t->left, fn), substitute_generators(t->right, fn));
    default:
      return t;
  }
}

// --- parser ------------------------------------------------------------------

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r'))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) throw ParseError("identifier expected", pos);
    return std::string(text.substr(start, pos - start));
  }
  std::string number_token() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '/' || text[pos] == '.'))
      ++pos;
    if (start == pos) throw ParseError("number expected", pos);
    return std::string(text.substr(start, pos - start));
  }
};

struct TermParser {
  Lexer lex;
  const Signature& sig;

  Term parse() {
    Term t = expr();
    if (!lex.eof()) throw ParseError("unexpected trailing input", lex.pos);
    return t;
  }

  Term expr() {
    Term t = par_expr();
    while (lex.peek() == ';') {
      lex.expect(';');
      std::size_t here = lex.pos;
      Term rhs = par_expr();
      if (t->coarity != rhs->arity)
        throw ParseError("type error: " + std::to_string(t->coarity) +
                             " != " + std::to_string(rhs->arity) + " across ';'",
                         here);
      t = seq(t, rhs);
    }
    return t;
  }

  Term par_expr() {
    Term t = primary();
    while (lex.peek() == '*') {
      lex.expect('*');
      t = par(t, primary());
    }
    return t;
  }

  Term primary() {
    if (lex.accept('(')) {
      Term t = expr();
      lex.expect(')');
      return t;
    }
    std::size_t here = lex.pos;
    std::string name = lex.ident();
    if (name == "id") return id1();
    if (name == "sym") return basic_sym();
    if (name == "empty") return empty_diag();
    if (name.rfind("id_", 0) == 0) return id_n(parse_nat(name.substr(3), here));
    if (name.rfind("sym_", 0) == 0) {
      auto rest = name.substr(4);
      auto us = rest.find('_');
      if (us == std::string::npos) throw ParseError("expected sym_M_N", here);
      return sym_mn(parse_nat(rest.substr(0, us), here), parse_nat(rest.substr(us + 1), here));
    }
    const GenDecl* d = sig.find(name);
    if (!d) throw ParseError("unknown generator '" + name + "'", here);
    std::optional<Rat> scalar;
    if (lex.peek() == '(') {
      lex.expect('(');
      scalar = parse_rat(lex.number_token());
      lex.expect(')');
    }
    if (d->takes_scalar && !scalar)
      throw ParseError("generator '" + name + "' requires a scalar argument", here);
    if (!d->takes_scalar && scalar)
      throw ParseError("generator '" + name + "' takes no scalar argument", here);
    return gen(*d, std::move(scalar));
  }

  static int parse_nat(const std::string& s, std::size_t at) {
    if (s.empty()) throw ParseError("natural number expected", at);
    int v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("natural number expected", at);
      v = v * 10 + (c - '0');
      if (v > 1000000) throw ParseError("number too large", at);
    }
    return v;
  }
};

enum class Prec { top, seq, par, atom };

void print_rec(const Term& t, std::string& out, Prec parent) {
  switch (t->kind) {
    case TermNode::Kind::gen:
      out += t->generator.name;
      if (t->generator.scalar) {
        out += '(';
        out += rat_string(*t->generator.scalar);
        out += ')';
      }
      return;
    case TermNode::Kind::id1:
      out += "id";
      return;
    case TermNode::Kind::empty:
      out += "empty";
      return;
    case TermNode::Kind::sym:
      out += "sym";
      return;
    case TermNode::Kind::seq: {
      bool parens = parent == Prec::par || parent == Prec::atom;
      if (parens) out += '(';
      print_rec(t->left, out, Prec::seq);
      out += " ; ";
      // right-nested seq gets parens so the printout re-parses left-associated
      print_rec(t->right, out,
                t->right->kind == TermNode::Kind::seq ? Prec::par : Prec::seq);
      if (parens) out += ')';
      return;
    }
    case TermNode::Kind::par: {
      bool parens = parent == Prec::atom;
      if (parens) out += '(';
      print_rec(t->left, out, Prec::par);
      out += " * ";
      print_rec(t->right, out,
                t->right->kind == TermNode::Kind::par ? Prec::atom : Prec::par);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  TermParser p{Lexer{text, 0}, sig};
  return p.parse();
}

std::string print_term(const Term& t) {
  std::string out;
  print_rec(t, out, Prec::top);
  return out;
}

}  // namespace qmt
