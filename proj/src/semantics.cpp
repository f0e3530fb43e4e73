#include "qmt/semantics.hpp"

#include <unordered_map>

#include "json.hpp"

#include "qmt/errors.hpp"

namespace qmt {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::string Mat::str() const {
  std::string out = "[";
  for (int i = 0; i < rows; ++i) {
    out += i ? ",[" : "[";
    for (int j = 0; j < cols; ++j) {
      if (j) out += ",";
      out += rat_string(at(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

Mat mat_compose(const Mat& A, const Mat& B, const SemiringSpec& R) {
  if (A.rows != B.cols)
    throw TypeError("composition dimension mismatch: " + std::to_string(A.rows) +
                    " != " + std::to_string(B.cols));
  Mat C(B.rows, A.cols);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      Rat acc = R.zero;
      for (int k = 0; k < A.rows; ++k) acc = R.add(acc, R.mul(B.at(i, k), A.at(k, j)));
      C.at(i, j) = acc;
    }
  return C;
}

Mat mat_compose(const Mat& A, const Mat& B) {
  return mat_compose(A, B, nonneg_rational_semiring());
}

Mat mat_dsum(const Mat& A, const Mat& B) {
  Mat C(A.rows + B.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, A.cols + j) = B.at(i, j);
  return C;
}

bool is_stochastic(const Mat& m) {
  for (const auto& x : m.a)
    if (x < 0 || x > 1) return false;
  for (int j = 0; j < m.cols; ++j) {
    Rat sum(0);
    for (int i = 0; i < m.rows; ++i) sum += m.at(i, j);
    if (sum != 1) return false;
  }
  return true;
}

StochMat::StochMat(Mat m) : m_(std::move(m)) {
  if (m_.rows == 0 && m_.cols > 0)
    throw TypeError("no morphisms n -> 0 in FStoch for n >= 1");
  if (!is_stochastic(m_)) throw TypeError("matrix is not column-stochastic");
}

Distribution::Distribution(std::vector<Rat> weights) : w(std::move(weights)) {
  Rat sum(0);
  for (const auto& x : w) {
    if (x < 0 || x > 1) throw DomainError("distribution weight out of [0,1]");
    sum += x;
  }
  if (sum != 1) throw DomainError("distribution weights must sum to 1");
}

Distribution column(const Mat& m, int j) {
  std::vector<Rat> w;
  w.reserve(m.rows);
  for (int i = 0; i < m.rows; ++i) w.push_back(m.at(i, j));
  return Distribution(std::move(w));
}

Distribution convex_comb(const Distribution& mu, const Distribution& nu, const Rat& p) {
  if (mu.size() != nu.size()) throw TypeError("convex combination of different supports");
  if (p < 0 || p > 1) throw DomainError("convex coefficient out of [0,1]");
  std::vector<Rat> w;
  w.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) w.push_back(p * mu.w[i] + (1 - p) * nu.w[i]);
  return Distribution(std::move(w));
}

namespace {

Mat eval_ha_gen(const Generator& g, const SemiringSpec& R) {
  if (g.name == "del") return Mat(0, 1);
  if (g.name == "zero") return Mat(1, 0);
  if (g.name == "copy") {
    Mat m(2, 1);
    m.at(0, 0) = R.one;
    m.at(1, 0) = R.one;
    return m;
  }
  if (g.name == "add") {
    Mat m(1, 2);
    m.at(0, 0) = R.one;
    m.at(0, 1) = R.one;
    return m;
  }
  if (g.name == "scalar") {
    if (!g.scalar || !R.valid(*g.scalar))
      throw DomainError("scalar outside semiring '" + R.name + "'");
    Mat m(1, 1);
    m.at(0, 0) = *g.scalar;
    return m;
  }
  throw TypeError("unknown generator '" + g.name + "' for the matrix model");
}

Mat eval_ca_gen(const Generator& g) {
  if (g.name == "del") return Mat(1, 0);
  if (g.name == "cop") {
    Mat m(1, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    return m;
  }
  if (g.name == "cc") {
    if (!g.scalar || *g.scalar < 0 || *g.scalar > 1)
      throw DomainError("cc parameter must lie in [0,1]");
    Mat m(2, 1);
    m.at(0, 0) = *g.scalar;
    m.at(1, 0) = 1 - *g.scalar;
    return m;
  }
  throw TypeError("unknown generator '" + g.name + "' for the stochastic model");
}

Mat sym_matrix(const SemiringSpec& R) {
  Mat m(2, 2);
  m.at(0, 1) = R.one;
  m.at(1, 0) = R.one;
  return m;
}

struct EvalCache {
  // Keyed by node identity; keeps the keyed subtree alive.
  std::unordered_map<const TermNode*, Mat> memo;
  std::vector<Term> keepalive;
};

Mat eval_rec(const Term& t, const SemiringSpec& R, bool stochastic, EvalCache& cache) {
  auto hit = cache.memo.find(t.get());
  if (hit != cache.memo.end()) return hit->second;
  Mat result;
  switch (t->kind) {
    case TermNode::Kind::gen:
      result = stochastic ? eval_ca_gen(t->generator) : eval_ha_gen(t->generator, R);
      break;
    case TermNode::Kind::id1: {
      result = Mat(1, 1);
      result.at(0, 0) = R.one;
      break;
    }
    case TermNode::Kind::empty:
      result = Mat(0, 0);
      break;
    case TermNode::Kind::sym:
      result = sym_matrix(R);
      break;
    case TermNode::Kind::seq:
      result = mat_compose(eval_rec(t->left, R, stochastic, cache),
                           eval_rec(t->right, R, stochastic, cache), R);
      break;
    case TermNode::Kind::par:
      result = mat_dsum(eval_rec(t->left, R, stochastic, cache),
                        eval_rec(t->right, R, stochastic, cache));
      break;
  }
  cache.memo.emplace(t.get(), result);
  cache.keepalive.push_back(t);
  return result;
}

EvalCache& ha_cache(const std::string& semiring_name) {
  thread_local std::unordered_map<std::string, EvalCache> caches;
  return caches[semiring_name];
}

EvalCache& ca_cache() {
  thread_local EvalCache cache;
  return cache;
}

}  // namespace

Mat eval_ha(const Term& t, const SemiringSpec& R) {
  typecheck(t, ha_signature());
  return eval_rec(t, R, false, ha_cache(R.name));
}

StochMat eval_ca(const Term& t) {
  auto [n, m] = typecheck(t, ca_signature());
  if (m == 0 && n >= 1) throw TypeError("no morphisms n -> 0 in FStoch");
  return StochMat(eval_rec(t, nonneg_rational_semiring(), true, ca_cache()));
}

ModelFamily model_family(const QuantTheory& t) {
  if (t.signature == ha_signature()) {
    if (!t.semiring) throw UnsupportedError("HA-family theory is missing its semiring");
    return ModelFamily::ha_matrix;
  }
  if (t.signature == ca_signature()) return ModelFamily::ca_stoch;
  throw UnsupportedError("theory '" + t.name +
                         "' has no faithful built-in model; equality is undecidable here");
}

Mat eval_in_theory(const Term& t, const QuantTheory& theory) {
  switch (model_family(theory)) {
    case ModelFamily::ha_matrix:
      return eval_ha(t, *theory.semiring);
    case ModelFamily::ca_stoch:
      return eval_ca(t).mat();
  }
  throw Error("unreachable");
}

bool equal_in_theory(const Term& s, const Term& t, const QuantTheory& theory) {
  if (structural_equal(s, t)) return true;
  if (s->arity != t->arity || s->coarity != t->coarity) return false;
  return eval_in_theory(s, theory) == eval_in_theory(t, theory);
}

Term matrix_to_ha_term(const Mat& m) {
  const int n = m.cols, rows = m.rows;
  auto [b, w] = canonical_wires(n, rows);
  std::vector<Term> scalars;
  scalars.reserve(static_cast<std::size_t>(n) * rows);
  // Column-major: f_11, f_21, ..., f_m1, f_12, ..., f_mn.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < rows; ++i)
      scalars.push_back(gen(*ha_signature().find("scalar"), m.at(i, j)));
  return seq(b, seq(par_fold(scalars), w));
}

Term stoch_to_ca_term(const StochMat& s) {
  const int n = s.cols();
  if (n == 0) return empty_diag();
  std::vector<Term> cols;
  cols.reserve(n);
  for (int j = 0; j < n; ++j) cols.push_back(ca_dist_term(column(s.mat(), j).w));
  return seq(par_fold(cols), fritz_merge(n, s.rows()));
}

std::string mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(rat_string(m.at(i, j)));
    rows.push_back(row);
  }
  return nlohmann::json{{"rows", m.rows}, {"cols", m.cols}, {"entries", rows}}.dump();
}

Mat mat_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Mat m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const nlohmann::json& rows = j.at("entries");
  for (int i = 0; i < m.rows; ++i)
    for (int c = 0; c < m.cols; ++c)
      m.at(i, c) = parse_rat(rows.at(i).at(c).get<std::string>());
  return m;
}

std::vector<AxiomCheck> check_theory_equations(const QuantTheory& theory) {
  std::vector<AxiomCheck> out;
  auto run_one = [&](const std::string& label, const Equation& e) {
    bool ok = false;
    try {
      ok = equal_in_theory(e.lhs, e.rhs, theory);
    } catch (const Error&) {
      ok = false;
    }
    out.push_back({label, ok});
  };
  const SemiringSpec* r = theory.semiring_ptr();
  for (const auto& id : theory.eq_schemas) {
    const EqSchema& schema = eq_schema(id);
    auto instances = eq_schema_grid(schema, r, scalar_grid());
    int k = 0;
    for (const auto& e : instances) run_one(id + "#" + std::to_string(k++), e);
  }
  int k = 0;
  for (const auto& e : theory.equations) run_one("eq#" + std::to_string(k++), e);
  return out;
}

}  // namespace qmt
