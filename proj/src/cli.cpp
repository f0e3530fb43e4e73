#include "qmt/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmt/cartesian.hpp"
#include "qmt/certify.hpp"
#include "qmt/distance.hpp"
#include "qmt/errors.hpp"
#include "qmt/selftest.hpp"

namespace qmt {

namespace {

using nlohmann::json;

/// Accepts "[[1,0],[1/2,1]]" or "1,0;1/2,1". Empty matrices: "[]" is 0x0.
Mat parse_matrix_literal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "[]" || s.empty()) return Mat(0, 0);
  std::vector<std::vector<Rat>> rows;
  std::string body = s;
  if (body.front() == '[') {
    if (body.size() < 2 || body.back() != ']') throw ParseError("unbalanced matrix literal");
    body = body.substr(1, body.size() - 2);
    // split on "],[":
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < body.size()) {
      if (body[pos] != '[') throw ParseError("matrix rows must be bracketed");
      auto end = body.find(']', pos);
      if (end == std::string::npos) throw ParseError("unbalanced row bracket");
      parts.push_back(body.substr(pos + 1, end - pos - 1));
      pos = end + 1;
      if (pos < body.size() && body[pos] == ',') ++pos;
    }
    for (const auto& p : parts) {
      rows.emplace_back();
      std::stringstream ss(p);
      std::string cell;
      while (std::getline(ss, cell, ','))
        if (!cell.empty()) rows.back().push_back(parse_rat(cell));
    }
  } else {
    std::stringstream ss(body);
    std::string rowtext;
    while (std::getline(ss, rowtext, ';')) {
      rows.emplace_back();
      std::stringstream rs(rowtext);
      std::string cell;
      while (std::getline(rs, cell, ','))
        if (!cell.empty()) rows.back().push_back(parse_rat(cell));
    }
  }
  Mat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols) throw ParseError("ragged matrix literal");
    for (int j = 0; j < m.cols; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
  }
  return m;
}

TvMethod method_from_name(const std::string& name) {
  if (name == "sum") return TvMethod::sum;
  if (name == "sup") return TvMethod::sup;
  if (name == "coupling") return TvMethod::coupling;
  throw ParseError("unknown method '" + name + "' (sum|sup|coupling|all)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Cmd {
  std::string theory;
  std::vector<std::string> terms;
  std::string method = "sum";
  std::string out_path;
  std::string cert_path;
  std::string matrix_a, matrix_b;
  std::string ops_decl;
  std::string csv_path;
  int context = 0;
  bool as_json = false;
  bool assume_refl = false;
  std::string scope = "all";
  std::uint64_t seed = 7;
};

int cmd_parse(const Cmd& c, std::ostream& out) {
  QuantTheory t = resolve_theory(c.theory);
  Term term = parse_term(c.terms.at(0), t.signature);
  auto [n, m] = typecheck(term, t.signature);
  if (c.as_json) {
    out << json{{"type", {n, m}}, {"term", print_term(term)}}.dump() << "\n";
  } else {
    out << print_term(term) << " : " << n << " -> " << m << "\n";
  }
  return 0;
}

int cmd_eval(const Cmd& c, std::ostream& out) {
  QuantTheory t = resolve_theory(c.theory);
  Term term = parse_term(c.terms.at(0), t.signature);
  Mat m = eval_in_theory(term, t);
  if (!c.csv_path.empty()) {
    std::ofstream csv(c.csv_path);
    if (!csv) throw Error("cannot write '" + c.csv_path + "'");
    for (int i = 0; i < m.rows; ++i) {
      for (int j = 0; j < m.cols; ++j) csv << (j ? "," : "") << rat_string(m.at(i, j));
      csv << "\n";
    }
  }
  if (c.as_json)
    out << mat_json(m) << "\n";
  else
    out << m.str() << "\n";
  return 0;
}

int cmd_dist(const Cmd& c, std::ostream& out, std::ostream& err) {
  QuantTheory t = resolve_theory(c.theory);
  Mat A, B;
  if (!c.matrix_a.empty() || !c.matrix_b.empty()) {
    if (c.matrix_a.empty() || c.matrix_b.empty())
      throw ParseError("--matrix-a and --matrix-b must be given together");
    A = parse_matrix_literal(c.matrix_a);
    B = parse_matrix_literal(c.matrix_b);
    if (A.rows != B.rows || A.cols != B.cols) throw TypeError("matrices have different shapes");
  } else {
    if (c.terms.size() != 2) throw ParseError("dist needs two terms or two matrix literals");
    Term f = parse_term(c.terms.at(0), t.signature);
    Term g = parse_term(c.terms.at(1), t.signature);
    if (f->arity != g->arity || f->coarity != g->coarity)
      throw TypeError("terms have different types");
    A = eval_in_theory(f, t);
    B = eval_in_theory(g, t);
  }
  if (t.quantale == QuantaleKind::boolean) {
    bool le = entrywise_leq(A, B, *t.semiring);
    out << (le ? "top" : "bot") << "\n";
    return 0;
  }
  if (A.cols == 0) err << "warning: no columns; empty max over the Lawvere quantale is 0\n";
  if (c.method == "all") {
    Rat s = tvmax(A, B, TvMethod::sum);
    Rat u = tvmax(A, B, TvMethod::sup);
    Rat k = tvmax(A, B, TvMethod::coupling);
    if (c.as_json) {
      out << json{{"sum", rat_string(s)}, {"sup", rat_string(u)}, {"coupling", rat_string(k)},
                  {"agree", s == u && u == k}}
                 .dump()
          << "\n";
    } else {
      out << "sum=" << rat_string(s) << " sup=" << rat_string(u) << " coupling=" << rat_string(k)
          << (s == u && u == k ? " (agree)" : " (DISAGREE)") << "\n";
    }
    return s == u && u == k ? 0 : 1;
  }
  Rat d = tvmax(A, B, method_from_name(c.method));
  if (c.as_json)
    out << json{{"distance", rat_string(d)}}.dump() << "\n";
  else
    out << rat_string(d) << "\n";
  return 0;
}

int cmd_prove(const Cmd& c, std::ostream& out) {
  QuantTheory t = resolve_theory(c.theory);
  Term f = parse_term(c.terms.at(0), t.signature);
  Term g = parse_term(c.terms.at(1), t.signature);
  Certificate cert;
  if (t.quantale == QuantaleKind::boolean)
    cert = prove_matrix_order(f, g, t);
  else
    cert = prove_tv_general(f, g, t);
  CheckResult res = check(cert, t);
  std::string text = cert_text(cert);
  if (!c.out_path.empty()) {
    std::ofstream file(c.out_path);
    if (!file) throw Error("cannot write '" + c.out_path + "'");
    file << text;
  }
  if (c.as_json)
    out << json{{"eps", res.eps.str()}, {"certificate", json::parse(cert_json(cert))}}.dump()
        << "\n";
  else {
    out << "eps: " << res.eps.str() << "\n";
    if (c.out_path.empty()) out << text;
  }
  return 0;
}

int cmd_check(const Cmd& c, std::ostream& out) {
  QuantTheory t = resolve_theory(c.theory);
  std::string text = read_file(c.cert_path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  bool looks_like_json = first != std::string::npos && text[first] == '{';
  Certificate cert = looks_like_json ? cert_from_json(text, t.signature, t.quantale)
                                     : parse_cert(text, t.signature, t.quantale);
  CheckOptions opts;
  opts.assume_refl = c.assume_refl;
  CheckResult res = check(cert, t, opts);
  if (c.as_json) {
    json trusted = json::array();
    for (const auto& s : res.trusted_refl) trusted.push_back(s);
    out << json{{"eps", res.eps.str()}, {"trusted_refl", trusted}}.dump() << "\n";
  } else {
    out << "eps: " << res.eps.str() << "\n";
    for (const auto& s : res.trusted_refl) out << "trusted: " << s << "\n";
  }
  return 0;
}

int cmd_axioms(const Cmd& c, std::ostream& out) {
  QuantTheory t = resolve_theory(c.theory);
  bool all_ok = true;
  auto print = [&](const std::string& label, bool ok) {
    all_ok = all_ok && ok;
    if (!c.as_json) out << (ok ? "[ok]   " : "[FAIL] ") << label << "\n";
  };
  json items = json::array();
  for (const auto& chk : check_theory_equations(t)) {
    print(chk.label, chk.ok);
    items.push_back({{"axiom", chk.label}, {"ok", chk.ok}});
  }
  for (const auto& id : t.quant_schemas) {
    auto instances = quant_schema_grid(quant_schema(id), t.semiring_ptr(), scalar_grid());
    int i = 0;
    for (const auto& qe : instances) {
      bool ok = truth_check(qe, t);
      print(id + "#" + std::to_string(i++), ok);
      items.push_back({{"axiom", id}, {"ok", ok}});
    }
  }
  int i = 0;
  for (const auto& qe : t.quant_eqs) {
    bool ok = truth_check(qe, t);
    print("q" + std::to_string(i++), ok);
    items.push_back({{"axiom", "q" + std::to_string(i - 1)}, {"ok", ok}});
  }
  if (c.as_json) out << json{{"ok", all_ok}, {"axioms", items}}.dump() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_translate(const Cmd& c, std::ostream& out) {
  CartTheory t;
  t.quantale = QuantaleKind::lawvere;
  std::stringstream ss(c.ops_decl);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    auto colon = entry.find(':');
    if (colon == std::string::npos) throw ParseError("ops must look like name:arity,...");
    t.ops[entry.substr(0, colon)] = std::stoi(entry.substr(colon + 1));
  }
  CTerm term = parse_cterm(c.terms.at(0), t.ops);
  int ctx = c.context > 0 ? c.context : cterm_min_context(term);
  Term d = phi_translate(term, ctx);
  if (c.as_json)
    out << json{{"context", ctx}, {"diagram", print_term(d)}}.dump() << "\n";
  else
    out << print_term(d) << " : " << ctx << " -> 1\n";
  return 0;
}

int cmd_selftest(const Cmd& c, std::ostream& out) {
  auto results = run_selftest(c.scope, c.seed);
  bool all_ok = true;
  json items = json::array();
  for (const auto& r : results) {
    all_ok = all_ok && r.passed;
    if (c.as_json)
      items.push_back({{"suite", r.name}, {"ok", r.passed}, {"detail", r.detail}});
    else
      out << (r.passed ? "[pass] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
  }
  if (c.as_json) out << json{{"ok", all_ok}, {"suites", items}}.dump() << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"quantitative string diagrams: evaluation, distances, derivation certificates"};
  app.require_subcommand(1);
  Cmd c;

  auto add_theory = [&](CLI::App* sub) {
    sub->add_option("--theory", c.theory, "builtin name or .thy path")->required();
  };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", c.as_json, "JSON output"); };

  CLI::App* parse = app.add_subcommand("parse", "parse and type a term");
  add_theory(parse);
  add_json(parse);
  parse->add_option("term", c.terms, "term text")->required()->expected(1);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a term to its matrix");
  add_theory(eval);
  add_json(eval);
  eval->add_option("term", c.terms, "term text")->required()->expected(1);
  eval->add_option("--csv", c.csv_path, "also write the matrix as CSV to this path");

  CLI::App* dist = app.add_subcommand("dist", "semantic distance between two terms");
  add_theory(dist);
  add_json(dist);
  dist->add_option("terms", c.terms, "two term texts")->expected(0, 2);
  dist->add_option("--method", c.method, "sum|sup|coupling|all (Lawvere only)");
  dist->add_option("--matrix-a", c.matrix_a, "inline matrix literal instead of a term");
  dist->add_option("--matrix-b", c.matrix_b, "inline matrix literal instead of a term");

  CLI::App* prove = app.add_subcommand("prove", "generate a distance certificate");
  add_theory(prove);
  add_json(prove);
  prove->add_option("terms", c.terms, "two term texts")->required()->expected(2);
  prove->add_option("-o,--out", c.out_path, "certificate output path");

  CLI::App* check_cmd = app.add_subcommand("check", "validate a certificate file");
  add_theory(check_cmd);
  add_json(check_cmd);
  check_cmd->add_option("certificate", c.cert_path, "certificate path")->required();
  check_cmd->add_flag("--assume-refl", c.assume_refl,
                      "trust REFL leaves when the theory has no faithful model");

  CLI::App* axioms = app.add_subcommand("axioms", "machine-check the theory's axioms");
  add_theory(axioms);
  add_json(axioms);

  CLI::App* translate = app.add_subcommand("translate", "Φ-translate a cartesian term");
  add_json(translate);
  translate->add_option("--ops", c.ops_decl, "operations, e.g. f:2,g:1")->required();
  translate->add_option("--context", c.context, "context size (default: smallest)");
  translate->add_option("term", c.terms, "cartesian term, e.g. f(x1,g(x2))")
      ->required()
      ->expected(1);

  CLI::App* selftest = app.add_subcommand("selftest", "run the property suites");
  add_json(selftest);
  selftest->add_option("scope", c.scope, "quantale|semantics|distance|certify|cartesian|all");
  selftest->add_option("--seed", c.seed, "sampler seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (parse->parsed()) return cmd_parse(c, out);
    if (eval->parsed()) return cmd_eval(c, out);
    if (dist->parsed()) return cmd_dist(c, out, err);
    if (prove->parsed()) return cmd_prove(c, out);
    if (check_cmd->parsed()) return cmd_check(c, out);
    if (axioms->parsed()) return cmd_axioms(c, out);
    if (translate->parsed()) return cmd_translate(c, out);
    if (selftest->parsed()) return cmd_selftest(c, out);
    err << "error: no subcommand\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const TypeError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const VariantError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckError& e) {
    err << "invalid certificate: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qmt
