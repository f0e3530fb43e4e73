#include "qmt/theory.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qmt/errors.hpp"

namespace qmt {

ClosureConfig ClosureConfig::make(SeqRule s, ParRule p, bool symm, QuantaleKind quantale) {
  return make(s, p, symm, builtin_ijd_ok(quantale));
}

ClosureConfig ClosureConfig::make(SeqRule s, ParRule p, bool symm, bool ijd_passed) {
  if ((s == SeqRule::meet || p == ParRule::meet) && !ijd_passed)
    throw DomainError("meet-flavoured closure rules require an IJD quantale");
  return ClosureConfig{s, p, symm};
}

namespace {

Term hg(const char* name) { return gen(*ha_signature().find(name)); }
Term hs(const Rat& k) { return gen(*ha_signature().find("scalar"), k); }
Term cg(const char* name) { return gen(*ca_signature().find(name)); }
Term ccg(const Rat& l) { return gen(*ca_signature().find("cc"), l); }

/// id ⊗ sym ⊗ id on four wires (middle swap of the bialgebra laws).
Term mid_swap4() { return par(par(id1(), basic_sym()), id1()); }

bool dom_any(const SemiringSpec*, std::span<const Rat>) { return true; }
bool dom_semiring1(const SemiringSpec* r, std::span<const Rat> a) {
  return r && r->valid(a[0]);
}
bool dom_semiring2(const SemiringSpec* r, std::span<const Rat> a) {
  return r && r->valid(a[0]) && r->valid(a[1]);
}
bool dom_unit1(const SemiringSpec*, std::span<const Rat> a) { return a[0] >= 0 && a[0] <= 1; }
bool dom_unit2(const SemiringSpec*, std::span<const Rat> a) {
  return a[0] >= 0 && a[0] <= 1 && a[1] >= 0 && a[1] <= 1;
}
bool dom_scalar_order(const SemiringSpec* r, std::span<const Rat> a) {
  return r && r->valid(a[0]) && r->valid(a[1]) && r->leq(a[0], a[1]);
}

// ---- HA_R: commutative monoid + cocommutative comonoid + bialgebra + scalars

Equation mk_addassoc(const SemiringSpec*, std::span<const Rat>) {
  return {"addassoc", seq(par(hg("add"), id1()), hg("add")), seq(par(id1(), hg("add")), hg("add"))};
}
Equation mk_addcomm(const SemiringSpec*, std::span<const Rat>) {
  return {"addcomm", seq(basic_sym(), hg("add")), hg("add")};
}
Equation mk_addunit(const SemiringSpec*, std::span<const Rat>) {
  return {"addunit", seq(par(hg("zero"), id1()), hg("add")), id1()};
}
Equation mk_copassoc(const SemiringSpec*, std::span<const Rat>) {
  return {"copassoc", seq(hg("copy"), par(hg("copy"), id1())), seq(hg("copy"), par(id1(), hg("copy")))};
}
Equation mk_copcomm(const SemiringSpec*, std::span<const Rat>) {
  return {"copcomm", seq(hg("copy"), basic_sym()), hg("copy")};
}
Equation mk_copunit(const SemiringSpec*, std::span<const Rat>) {
  return {"copunit", seq(hg("copy"), par(hg("del"), id1())), id1()};
}
Equation mk_deladd(const SemiringSpec*, std::span<const Rat>) {
  return {"deladd", seq(hg("add"), hg("del")), par(hg("del"), hg("del"))};
}
Equation mk_copadd(const SemiringSpec*, std::span<const Rat>) {
  Term rhs = seq(par(hg("copy"), hg("copy")), seq(mid_swap4(), par(hg("add"), hg("add"))));
  return {"copadd", seq(hg("add"), hg("copy")), rhs};
}
Equation mk_zercop(const SemiringSpec*, std::span<const Rat>) {
  return {"zercop", seq(hg("zero"), hg("copy")), par(hg("zero"), hg("zero"))};
}
Equation mk_delzer(const SemiringSpec*, std::span<const Rat>) {
  return {"delzer", seq(hg("zero"), hg("del")), empty_diag()};
}
Equation mk_scalid(const SemiringSpec* r, std::span<const Rat>) {
  return {"scalid", hs(r->one), id1()};
}
Equation mk_scalscal(const SemiringSpec* r, std::span<const Rat> a) {
  return {"scalscal", seq(hs(a[0]), hs(a[1])), hs(r->mul(a[1], a[0]))};
}
Equation mk_addscal(const SemiringSpec*, std::span<const Rat> a) {
  return {"addscal", seq(hg("add"), hs(a[0])), seq(par(hs(a[0]), hs(a[0])), hg("add"))};
}
Equation mk_zerscal(const SemiringSpec*, std::span<const Rat> a) {
  return {"zerscal", seq(hg("zero"), hs(a[0])), hg("zero")};
}
Equation mk_scalcop(const SemiringSpec*, std::span<const Rat> a) {
  return {"scalcop", seq(hs(a[0]), hg("copy")), seq(hg("copy"), par(hs(a[0]), hs(a[0])))};
}
Equation mk_scaldel(const SemiringSpec*, std::span<const Rat> a) {
  return {"scaldel", seq(hs(a[0]), hg("del")), hg("del")};
}
Equation mk_zeroscal(const SemiringSpec* r, std::span<const Rat>) {
  return {"zeroscal", hs(r->zero), seq(hg("del"), hg("zero"))};
}
Equation mk_addingscalars(const SemiringSpec* r, std::span<const Rat> a) {
  Term lhs = seq(hg("copy"), seq(par(hs(a[0]), hs(a[1])), hg("add")));
  return {"addingscalars", lhs, hs(r->add(a[0], a[1]))};
}

// ---- CA: convex algebras (Fig. 1)

Equation mk_ca_assoc(const SemiringSpec*, std::span<const Rat>) {
  return {"assoc", seq(par(cg("cop"), id1()), cg("cop")), seq(par(id1(), cg("cop")), cg("cop"))};
}
Equation mk_ca_comm(const SemiringSpec*, std::span<const Rat>) {
  return {"comm", seq(basic_sym(), cg("cop")), cg("cop")};
}
Equation mk_ca_unit(const SemiringSpec*, std::span<const Rat>) {
  return {"unit", seq(par(cg("del"), id1()), cg("cop")), id1()};
}
Equation mk_ca_idemp(const SemiringSpec*, std::span<const Rat> a) {
  return {"idemp", seq(ccg(a[0]), cg("cop")), id1()};
}
Equation mk_ca_convassoc(const SemiringSpec*, std::span<const Rat> a) {
  const Rat& l = a[0];
  const Rat& m = a[1];
  Rat lt = l * m;                                      // λ̃ = λμ
  Rat mt = lt == 1 ? Rat(1) : (l - l * m) / (1 - lt);  // μ̃, with 0/0 = 1
  Term lhs = seq(ccg(l), par(ccg(m), id1()));
  Term rhs = seq(ccg(lt), par(id1(), ccg(mt)));
  return {"convassoc", lhs, rhs};
}
Equation mk_ca_convcomm(const SemiringSpec*, std::span<const Rat> a) {
  return {"convcomm", seq(ccg(a[0]), basic_sym()), ccg(Rat(1) - a[0])};
}
Equation mk_ca_natdel(const SemiringSpec*, std::span<const Rat> a) {
  return {"natdel", seq(cg("del"), ccg(a[0])), par(cg("del"), cg("del"))};
}
Equation mk_ca_zprob(const SemiringSpec*, std::span<const Rat>) {
  return {"zprob", ccg(Rat(0)), par(cg("del"), id1())};
}
Equation mk_ca_cccop(const SemiringSpec*, std::span<const Rat> a) {
  Term rhs = seq(par(ccg(a[0]), ccg(a[0])), seq(mid_swap4(), par(cg("cop"), cg("cop"))));
  return {"cccop", seq(cg("cop"), ccg(a[0])), rhs};
}

// ---- quantitative schemas

QuantEq mk_scalar_order(const SemiringSpec*, std::span<const Rat> a) {
  return {hs(a[0]), hs(a[1]), QVal::top(QuantaleKind::boolean)};
}
QuantEq mk_tv(const SemiringSpec*, std::span<const Rat> a) {
  const Rat& l = a[0];
  return {par(ccg(l), cg("del")), par(cg("del"), ccg(Rat(1) - l)), QVal::lawvere(l)};
}

const std::map<std::string, EqSchema>& eq_schema_registry() {
  static const std::map<std::string, EqSchema> reg = [] {
    std::map<std::string, EqSchema> m;
    auto put = [&](const char* id, int np, auto dom, auto make) {
      m[id] = EqSchema{id, np, dom, make};
    };
    put("ha.addassoc", 0, dom_any, mk_addassoc);
    put("ha.addcomm", 0, dom_any, mk_addcomm);
    put("ha.addunit", 0, dom_any, mk_addunit);
    put("ha.copassoc", 0, dom_any, mk_copassoc);
    put("ha.copcomm", 0, dom_any, mk_copcomm);
    put("ha.copunit", 0, dom_any, mk_copunit);
    put("ha.deladd", 0, dom_any, mk_deladd);
    put("ha.copadd", 0, dom_any, mk_copadd);
    put("ha.zercop", 0, dom_any, mk_zercop);
    put("ha.delzer", 0, dom_any, mk_delzer);
    put("ha.scalid", 0, dom_any, mk_scalid);
    put("ha.scalscal", 2, dom_semiring2, mk_scalscal);
    put("ha.addscal", 1, dom_semiring1, mk_addscal);
    put("ha.zerscal", 1, dom_semiring1, mk_zerscal);
    put("ha.scalcop", 1, dom_semiring1, mk_scalcop);
    put("ha.scaldel", 1, dom_semiring1, mk_scaldel);
    put("ha.zeroscal", 0, dom_any, mk_zeroscal);
    put("ha.addingscalars", 2, dom_semiring2, mk_addingscalars);
    put("ca.assoc", 0, dom_any, mk_ca_assoc);
    put("ca.comm", 0, dom_any, mk_ca_comm);
    put("ca.unit", 0, dom_any, mk_ca_unit);
    put("ca.idemp", 1, dom_unit1, mk_ca_idemp);
    put("ca.convassoc", 2, dom_unit2, mk_ca_convassoc);
    put("ca.convcomm", 1, dom_unit1, mk_ca_convcomm);
    put("ca.natdel", 1, dom_unit1, mk_ca_natdel);
    put("ca.zprob", 0, dom_any, mk_ca_zprob);
    put("ca.cccop", 1, dom_unit1, mk_ca_cccop);
    return m;
  }();
  return reg;
}

const std::map<std::string, QuantSchema>& quant_schema_registry() {
  static const std::map<std::string, QuantSchema> reg = [] {
    std::map<std::string, QuantSchema> m;
    m["preord.scalar_order"] =
        QuantSchema{"preord.scalar_order", 2, QuantaleKind::boolean, dom_scalar_order,
                    mk_scalar_order};
    m["ba.tv"] = QuantSchema{"ba.tv", 1, QuantaleKind::lawvere, dom_unit1, mk_tv};
    return m;
  }();
  return reg;
}

const std::vector<std::string>& ha_schema_ids() {
  static const std::vector<std::string> ids = {
      "ha.addassoc", "ha.addcomm", "ha.addunit",  "ha.copassoc", "ha.copcomm",
      "ha.copunit",  "ha.deladd",  "ha.copadd",   "ha.zercop",   "ha.delzer",
      "ha.scalid",   "ha.scalscal", "ha.addscal", "ha.zerscal",  "ha.scalcop",
      "ha.scaldel",  "ha.zeroscal", "ha.addingscalars"};
  return ids;
}

const std::vector<std::string>& ca_schema_ids() {
  static const std::vector<std::string> ids = {"ca.assoc",     "ca.comm",   "ca.unit",
                                               "ca.idemp",     "ca.convassoc", "ca.convcomm",
                                               "ca.natdel",    "ca.zprob",  "ca.cccop"};
  return ids;
}

}  // namespace

const EqSchema& eq_schema(const std::string& id) {
  auto it = eq_schema_registry().find(id);
  if (it == eq_schema_registry().end()) throw ParseError("unknown equation schema '" + id + "'");
  return it->second;
}

const QuantSchema& quant_schema(const std::string& id) {
  auto it = quant_schema_registry().find(id);
  if (it == quant_schema_registry().end())
    throw ParseError("unknown quantitative schema '" + id + "'");
  return it->second;
}

Equation instantiate_eq_schema(const EqSchema& schema, const SemiringSpec* r,
                               std::span<const Rat> args) {
  if (static_cast<int>(args.size()) != schema.num_params)
    throw DomainError("schema '" + schema.id + "' expects " + std::to_string(schema.num_params) +
                      " scalar(s)");
  if (!schema.in_domain(r, args)) throw DomainError("schema '" + schema.id + "' arguments out of domain");
  return schema.make(r, args);
}

QuantEq instantiate_quant_schema(const QuantSchema& schema, const SemiringSpec* r,
                                 std::span<const Rat> args) {
  if (static_cast<int>(args.size()) != schema.num_params)
    throw DomainError("schema '" + schema.id + "' expects " + std::to_string(schema.num_params) +
                      " scalar(s)");
  if (!schema.in_domain(r, args)) throw DomainError("schema '" + schema.id + "' arguments out of domain");
  return schema.make(r, args);
}

std::span<const Rat> scalar_grid() {
  static const std::vector<Rat> grid = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1)};
  return grid;
}

std::vector<Equation> eq_schema_grid(const EqSchema& schema, const SemiringSpec* r,
                                     std::span<const Rat> grid) {
  std::vector<Equation> out;
  if (schema.num_params == 0) {
    out.push_back(schema.make(r, {}));
    return out;
  }
  if (schema.num_params == 1) {
    for (const auto& a : grid) {
      std::vector<Rat> args{a};
      std::span<const Rat> sp(args);
      if (schema.in_domain(r, sp)) out.push_back(schema.make(r, sp));
    }
    return out;
  }
  for (const auto& a : grid)
    for (const auto& b : grid) {
      std::vector<Rat> args{a, b};
      std::span<const Rat> sp(args);
      if (schema.in_domain(r, sp)) out.push_back(schema.make(r, sp));
    }
  return out;
}

std::vector<QuantEq> quant_schema_grid(const QuantSchema& schema, const SemiringSpec* r,
                                       std::span<const Rat> grid) {
  std::vector<QuantEq> out;
  if (schema.num_params == 0) {
    out.push_back(schema.make(r, {}));
    return out;
  }
  if (schema.num_params == 1) {
    for (const auto& a : grid) {
      std::vector<Rat> args{a};
      std::span<const Rat> sp(args);
      if (schema.in_domain(r, sp)) out.push_back(schema.make(r, sp));
    }
    return out;
  }
  for (const auto& a : grid)
    for (const auto& b : grid) {
      std::vector<Rat> args{a, b};
      std::span<const Rat> sp(args);
      if (schema.in_domain(r, sp)) out.push_back(schema.make(r, sp));
    }
  return out;
}

BuiltinTheory builtin_from_name(std::string_view name) {
  if (name == "ha") return BuiltinTheory::ha;
  if (name == "preord") return BuiltinTheory::preord;
  if (name == "ca") return BuiltinTheory::ca;
  if (name == "ba") return BuiltinTheory::ba;
  throw ParseError("unknown builtin theory '" + std::string(name) + "'");
}

QuantTheory builtin_theory(BuiltinTheory which, const SemiringSpec& semiring) {
  QuantTheory t;
  switch (which) {
    case BuiltinTheory::ha:
    case BuiltinTheory::preord: {
      check_semiring_laws(semiring, 0xA441u, semiring.name == "boolean" ? 2 : 8);
      t.signature = ha_signature();
      t.semiring = semiring;
      t.quantale = QuantaleKind::boolean;
      t.eq_schemas = ha_schema_ids();
      t.closure = ClosureConfig::make(SeqRule::sum, ParRule::sum, false, t.quantale);
      if (which == BuiltinTheory::preord) {
        t.name = "preord_" + std::string(semiring.name == "boolean" ? "bool" : "rat");
        t.quant_schemas = {"preord.scalar_order"};
      } else {
        t.name = "ha_" + std::string(semiring.name == "boolean" ? "bool" : "rat");
      }
      return t;
    }
    case BuiltinTheory::ca:
    case BuiltinTheory::ba: {
      t.signature = ca_signature();
      t.quantale = QuantaleKind::lawvere;
      t.eq_schemas = ca_schema_ids();
      if (which == BuiltinTheory::ba) {
        t.name = "ba";
        t.quant_schemas = {"ba.tv"};
        t.closure = ClosureConfig::make(SeqRule::sum, ParRule::meet, true, t.quantale);
      } else {
        t.name = "ca";
        t.closure = ClosureConfig::make(SeqRule::sum, ParRule::sum, false, t.quantale);
      }
      return t;
    }
  }
  throw Error("unreachable");
}

bool theory_equal(const QuantTheory& a, const QuantTheory& b) {
  if (!(a.signature == b.signature) || a.quantale != b.quantale) return false;
  if (a.semiring.has_value() != b.semiring.has_value()) return false;
  if (a.semiring && !(*a.semiring == *b.semiring)) return false;
  if (!(a.closure == b.closure)) return false;
  if (a.eq_schemas != b.eq_schemas || a.quant_schemas != b.quant_schemas) return false;
  if (a.equations.size() != b.equations.size() || a.quant_eqs.size() != b.quant_eqs.size())
    return false;
  for (std::size_t i = 0; i < a.equations.size(); ++i) {
    if (!structural_equal(a.equations[i].lhs, b.equations[i].lhs) ||
        !structural_equal(a.equations[i].rhs, b.equations[i].rhs))
      return false;
  }
  for (std::size_t i = 0; i < a.quant_eqs.size(); ++i) {
    if (!structural_equal(a.quant_eqs[i].lhs, b.quant_eqs[i].lhs) ||
        !structural_equal(a.quant_eqs[i].rhs, b.quant_eqs[i].rhs) ||
        !(a.quant_eqs[i].eps == b.quant_eqs[i].eps))
      return false;
  }
  return true;
}

// --- theory files -------------------------------------------------------------

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int strict_nat(const std::string& s, int line) {
  if (s.empty()) throw ParseError("number expected (line " + std::to_string(line) + ")");
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("'" + s + "' is not a natural number (line " + std::to_string(line) + ")");
    v = v * 10 + (c - '0');
    if (v > 1000000) throw ParseError("number too large (line " + std::to_string(line) + ")");
  }
  return v;
}

void validate_equation(const QuantTheory& t, const Equation& e, int line) {
  auto [ln, lm] = typecheck(e.lhs, t.signature);
  auto [rn, rm] = typecheck(e.rhs, t.signature);
  if (ln != rn || lm != rm)
    throw ParseError("ill-typed equation '" + e.name + "' (line " + std::to_string(line) +
                     "): sides have different types");
}

}  // namespace

QuantTheory parse_theory_text(const std::string& text, const std::string& origin) {
  QuantTheory t;
  t.name = origin;
  enum class Section { none, quantale, semiring, signature, equations, quantitative, closure };
  Section sec = Section::none;
  bool quantale_seen = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  // terms and the closure are resolved after the whole file is read, so the
  // section order does not matter
  std::vector<std::pair<std::string, int>> pending_eqs, pending_qeqs;
  std::string pending_closure;
  int closure_line = 0;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trimmed(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s == "[quantale]") sec = Section::quantale;
      else if (s == "[semiring]") sec = Section::semiring;
      else if (s == "[signature]") sec = Section::signature;
      else if (s == "[equations]") sec = Section::equations;
      else if (s == "[quantitative]") sec = Section::quantitative;
      else if (s == "[closure]") sec = Section::closure;
      else throw ParseError("unknown section " + s + " (line " + std::to_string(line) + ")");
      continue;
    }
    switch (sec) {
      case Section::none:
        throw ParseError("content before first section (line " + std::to_string(line) + ")");
      case Section::quantale:
        t.quantale = quantale_from_name(s);
        quantale_seen = true;
        break;
      case Section::semiring:
        t.semiring = semiring_from_name(s);
        break;
      case Section::signature: {
        // name : arity -> coarity [@scalar]
        auto colon = s.find(':');
        auto arrow = s.find("->");
        if (colon == std::string::npos || arrow == std::string::npos)
          throw ParseError("bad signature line (line " + std::to_string(line) + "): " + s);
        GenDecl d;
        d.name = trimmed(s.substr(0, colon));
        d.arity = strict_nat(trimmed(s.substr(colon + 1, arrow - colon - 1)), line);
        std::string rest = trimmed(s.substr(arrow + 2));
        auto at = rest.find('@');
        if (at != std::string::npos) {
          if (trimmed(rest.substr(at)) != "@scalar")
            throw ParseError("bad attribute (line " + std::to_string(line) + ")");
          d.takes_scalar = true;
          rest = trimmed(rest.substr(0, at));
        }
        d.coarity = strict_nat(rest, line);
        if (d.name.empty())
          throw ParseError("bad signature line (line " + std::to_string(line) + ")");
        t.signature.add(d);
        break;
      }
      case Section::equations:
        if (s.rfind("@schema", 0) == 0) {
          t.eq_schemas.push_back(trimmed(s.substr(7)));
          eq_schema(t.eq_schemas.back());  // existence check
        } else {
          pending_eqs.emplace_back(s, line);
        }
        break;
      case Section::quantitative:
        if (s.rfind("@schema", 0) == 0) {
          t.quant_schemas.push_back(trimmed(s.substr(7)));
          quant_schema(t.quant_schemas.back());
        } else {
          pending_qeqs.emplace_back(s, line);
        }
        break;
      case Section::closure:
        pending_closure = s;
        closure_line = line;
        break;
    }
  }
  if (!quantale_seen) throw ParseError("theory file missing [quantale] section");

  if (!pending_closure.empty()) {
    SeqRule sr = SeqRule::sum;
    ParRule pr = ParRule::sum;
    bool symm = false;
    std::istringstream cs(pending_closure);
    std::string kv;
    while (cs >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ParseError("bad closure entry (line " + std::to_string(closure_line) + "): " + kv);
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "seq") sr = val == "meet" ? SeqRule::meet : SeqRule::sum;
      else if (key == "par") pr = val == "meet" ? ParRule::meet : ParRule::sum;
      else if (key == "symm") symm = (val == "true");
      else throw ParseError("bad closure key (line " + std::to_string(closure_line) + "): " + key);
    }
    t.closure = ClosureConfig::make(sr, pr, symm, t.quantale);
  }

  for (auto& [src, ln] : pending_eqs) {
    auto sep = src.find("==");
    if (sep == std::string::npos)
      throw ParseError("equation missing '==' (line " + std::to_string(ln) + ")");
    Equation e{"line" + std::to_string(ln), parse_term(trimmed(src.substr(0, sep)), t.signature),
               parse_term(trimmed(src.substr(sep + 2)), t.signature)};
    validate_equation(t, e, ln);
    t.equations.push_back(std::move(e));
  }
  for (auto& [src, ln] : pending_qeqs) {
    // lhs ==(eps) rhs
    auto sep = src.find("==(");
    if (sep == std::string::npos)
      throw ParseError("quantitative equation must use '==(eps)' (line " + std::to_string(ln) + ")");
    auto close = src.find(')', sep);
    if (close == std::string::npos)
      throw ParseError("unterminated epsilon (line " + std::to_string(ln) + ")");
    QVal eps = parse_qval(t.quantale, trimmed(src.substr(sep + 3, close - sep - 3)));
    QuantEq qe{parse_term(trimmed(src.substr(0, sep)), t.signature),
               parse_term(trimmed(src.substr(close + 1)), t.signature), eps};
    Equation probe{"qline" + std::to_string(ln), qe.lhs, qe.rhs};
    validate_equation(t, probe, ln);
    t.quant_eqs.push_back(std::move(qe));
  }
  return t;
}

QuantTheory load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open theory file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  QuantTheory t = parse_theory_text(ss.str(), path);
  // Derive a friendly name from the file stem.
  auto slash = path.find_last_of('/');
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  t.name = stem;
  return t;
}

std::string theory_text(const QuantTheory& t) {
  std::ostringstream out;
  out << "[quantale]\n" << quantale_name(t.quantale) << "\n";
  if (t.semiring) out << "[semiring]\n" << t.semiring->name << "\n";
  out << "[signature]\n";
  for (const auto& [name, d] : t.signature.gens) {
    out << d.name << " : " << d.arity << " -> " << d.coarity;
    if (d.takes_scalar) out << " @scalar";
    out << "\n";
  }
  out << "[equations]\n";
  for (const auto& id : t.eq_schemas) out << "@schema " << id << "\n";
  for (const auto& e : t.equations) out << print_term(e.lhs) << " == " << print_term(e.rhs) << "\n";
  out << "[quantitative]\n";
  for (const auto& id : t.quant_schemas) out << "@schema " << id << "\n";
  for (const auto& qe : t.quant_eqs)
    out << print_term(qe.lhs) << " ==(" << qe.eps.str() << ") " << print_term(qe.rhs) << "\n";
  out << "[closure]\n";
  out << "seq=" << (t.closure.seq_rule == SeqRule::meet ? "meet" : "sum")
      << " par=" << (t.closure.par_rule == ParRule::meet ? "meet" : "sum")
      << " symm=" << (t.closure.symm ? "true" : "false") << "\n";
  return out.str();
}

void save_theory(const QuantTheory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write theory file '" + path + "'");
  out << theory_text(t);
}

QuantTheory resolve_theory(const std::string& name_or_path) {
  if (name_or_path == "ha_bool") return builtin_theory(BuiltinTheory::ha, boolean_semiring());
  if (name_or_path == "ha_rat")
    return builtin_theory(BuiltinTheory::ha, nonneg_rational_semiring());
  if (name_or_path == "preord_bool")
    return builtin_theory(BuiltinTheory::preord, boolean_semiring());
  if (name_or_path == "preord_rat")
    return builtin_theory(BuiltinTheory::preord, nonneg_rational_semiring());
  if (name_or_path == "ca") return builtin_theory(BuiltinTheory::ca);
  if (name_or_path == "ba") return builtin_theory(BuiltinTheory::ba);
  if (name_or_path.find('/') != std::string::npos || name_or_path.find(".thy") != std::string::npos)
    return load_theory(name_or_path);
  if (const char* dir = std::getenv("QMT_THEORY_DIR")) {
    std::string candidate = std::string(dir) + "/" + name_or_path + ".thy";
    std::ifstream probe(candidate);
    if (probe) return load_theory(candidate);
  }
  throw ParseError("unknown theory '" + name_or_path +
                   "' (builtins: ha_bool, ha_rat, preord_bool, preord_rat, ca, ba; or a .thy path)");
}

}  // namespace qmt
