#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "qmt/certify.hpp"
#include "qmt/cli.hpp"

using namespace qmt;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("eval prints exact rational matrices") {
  CliRun r = cli({"eval", "--theory", "ca", "cc(1/2) * del"});
  CHECK(r.code == 0);
  CHECK(r.out == "[[1/2],[1/2],[0]]\n");
  CliRun h = cli({"eval", "--theory", "ha_bool", "copy"});
  CHECK(h.code == 0);
  CHECK(h.out == "[[1],[1]]\n");
  // no floating point anywhere in the output
  CHECK(r.out.find('.') == std::string::npos);
}

TEST_CASE("malformed terms exit 2 with a diagnostic") {
  CliRun r = cli({"eval", "--theory", "ca", "cc(1/2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error") != std::string::npos);
  CliRun t = cli({"eval", "--theory", "ca", "cop ; cop"});
  CHECK(t.code == 2);
  CHECK(t.err.find("offset") != std::string::npos);
}

TEST_CASE("dist reproduces the counterexample composite") {
  CliRun r = cli({"dist", "--theory", "ba", "--matrix-a", "[[1],[0]]", "--matrix-b",
                  "[[1/4],[3/4]]"});
  CHECK(r.code == 0);
  CHECK(r.out == "3/4\n");
  CliRun all2 = cli({"dist", "--theory", "ba", "--method", "all", "--matrix-a", "[[1],[0]]",
                     "--matrix-b", "[[1/2],[1/2]]"});
  CHECK(all2.code == 0);
  CHECK(all2.out.find("sum=1/2") != std::string::npos);
  CHECK(all2.out.find("agree") != std::string::npos);
  CliRun same = cli({"dist", "--theory", "ba", "cc(1/3)", "cc(1/3)"});
  CHECK(same.out == "0\n");
  CliRun bool_same = cli({"dist", "--theory", "preord_bool", "scalar(1)", "scalar(1)"});
  CHECK(bool_same.out == "top\n");
  CliRun bool_lt = cli({"dist", "--theory", "preord_bool", "scalar(1)", "scalar(0)"});
  CHECK(bool_lt.out == "bot\n");
}

TEST_CASE("method all agrees on a support-5 pair") {
  CliRun r = cli({"dist", "--theory", "ba", "--method", "all", "--matrix-a",
                  "[[1/5],[1/5],[1/5],[1/5],[1/5]]", "--matrix-b",
                  "[[1/2],[1/2],[0],[0],[0]]"});
  CHECK(r.code == 0);
  CHECK(r.out.find("agree") != std::string::npos);
}

TEST_CASE("prove then check round trips the epsilon") {
  const char* path = "/tmp/qmt_cli_cert.txt";
  CliRun p = cli({"prove", "--theory", "ba", "cc(1) * cc(1/2)", "cc(1/2) * cc(1)", "-o", path});
  CHECK(p.code == 0);
  CHECK(p.out.find("eps: 1/2") != std::string::npos);
  CliRun c = cli({"check", "--theory", "ba", path});
  CHECK(c.code == 0);
  CHECK(c.out.find("eps: 1/2") != std::string::npos);

  // corrupt one epsilon: the checker must name a failing node and exit 1
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto pos = text.find("1/2");
  text.replace(pos, 3, "1/3");
  std::ofstream(path) << text;
  CliRun bad = cli({"check", "--theory", "ba", path});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("node") != std::string::npos);
  std::remove(path);
}

TEST_CASE("prove on an order violation exits 1 with the entry") {
  CliRun r = cli({"prove", "--theory", "preord_bool", "scalar(1)", "scalar(0)"});
  CHECK(r.code == 1);
  CHECK(r.err.find("entry (0,0)") != std::string::npos);
}

TEST_CASE("json output round trips for matrices and certificates") {
  CliRun m = cli({"eval", "--theory", "ca", "--json", "cc(1/3)"});
  CHECK(m.code == 0);
  auto j = nlohmann::json::parse(m.out);
  CHECK(j["rows"] == 2);
  CHECK(j["entries"][0][0] == "1/3");

  CliRun p = cli({"prove", "--theory", "ba", "--json", "cc(1)", "cc(0)"});
  CHECK(p.code == 0);
  auto pj = nlohmann::json::parse(p.out);
  CHECK(pj["eps"] == "1");
  QuantTheory ba = builtin_theory(BuiltinTheory::ba);
  Certificate parsed = cert_from_json(pj["certificate"].dump(), ba.signature, ba.quantale);
  CHECK(check(parsed, ba).eps == QVal::lawvere(Rat(1)));
  CHECK(nlohmann::json::parse(cert_json(parsed)) == pj["certificate"]);
}

TEST_CASE("axioms and selftest subcommands report status") {
  CliRun a = cli({"axioms", "--theory", "ba"});
  CHECK(a.code == 0);
  CHECK(a.out.find("[ok]") != std::string::npos);
  CliRun s = cli({"selftest", "quantale", "--seed", "7"});
  CHECK(s.code == 0);
  CHECK(s.out.find("[pass]") != std::string::npos);
}

TEST_CASE("fault injection: a flipped epsilon makes the axiom check fail") {
  // like the TV axiom at 1/2 but claiming half the true distance
  const char* path = "/tmp/qmt_bad_tv.thy";
  std::ofstream(path) << "[quantale]\nlawvere\n"
                         "[signature]\ncc : 1 -> 2 @scalar\ncop : 2 -> 1\ndel : 0 -> 1\n"
                         "[equations]\n"
                         "[quantitative]\ncc(1/2) * del ==(1/4) del * cc(1/2)\n"
                         "[closure]\nseq=sum par=meet symm=true\n";
  CliRun r = cli({"axioms", "--theory", path});
  CHECK(r.code == 1);
  CHECK(r.out.find("[FAIL]") != std::string::npos);
  std::remove(path);
}

TEST_CASE("translate emits the copy-naturality diagram") {
  CliRun r = cli({"translate", "--ops", "f:2", "--context", "1", "f(x1, x1)"});
  CHECK(r.code == 0);
  CHECK(r.out == "copy ; f : 1 -> 1\n");
}

TEST_CASE("dist argument pairing is validated") {
  CliRun one_term = cli({"dist", "--theory", "ba", "cc(1/2)"});
  CHECK(one_term.code == 2);
  CliRun half_matrix = cli({"dist", "--theory", "ba", "--matrix-a", "[[1],[0]]"});
  CHECK(half_matrix.code == 2);
  CliRun shape = cli({"dist", "--theory", "ba", "--matrix-a", "[[1],[0]]", "--matrix-b", "[[1]]"});
  CHECK(shape.code == 2);
}

TEST_CASE("parse subcommand reports the type") {
  CliRun r = cli({"parse", "--theory", "ha_bool", "copy ; (id * del)"});
  CHECK(r.code == 0);
  CHECK(r.out.find(": 1 -> 1") != std::string::npos);
}
