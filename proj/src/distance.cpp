#include "qmt/distance.hpp"

#include <random>

#include "qmt/errors.hpp"
#include "qmt/lp.hpp"

namespace qmt {

bool entrywise_leq(const Mat& A, const Mat& B, const SemiringSpec& R) {
  if (A.rows != B.rows || A.cols != B.cols)
    throw TypeError("entrywise comparison of different shapes");
  for (std::size_t i = 0; i < A.a.size(); ++i)
    if (!R.leq(A.a[i], B.a[i])) return false;
  return true;
}

namespace {

Rat tv_sum(const Distribution& mu, const Distribution& nu) {
  Rat acc(0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Rat d = mu.w[i] - nu.w[i];
    acc += d < 0 ? -d : d;
  }
  return acc / 2;
}

Rat tv_sup(const Distribution& mu, const Distribution& nu) {
  const std::size_t m = mu.size();
  if (m > 12) throw UnsupportedError("sup method limited to support <= 12; use method 'sum'");
  Rat best(0);
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    Rat diff(0);
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1ull << i)) diff += mu.w[i] - nu.w[i];
    if (diff < 0) diff = -diff;
    if (diff > best) best = diff;
  }
  return best;
}

}  // namespace

Distribution Coupling::left_marginal() const {
  std::vector<Rat> out(m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i] += at(i, j);
  return Distribution(std::move(out));
}

Distribution Coupling::right_marginal() const {
  std::vector<Rat> out(m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[j] += at(i, j);
  return Distribution(std::move(out));
}

Rat Coupling::off_diagonal_mass() const {
  Rat acc(0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) acc += at(i, j);
  return acc;
}

Coupling optimal_coupling(const Distribution& mu, const Distribution& nu) {
  if (mu.size() != nu.size()) throw TypeError("coupling of different supports");
  const std::size_t m = mu.size();
  if (m > 6) throw UnsupportedError("coupling method limited to support <= 6; use method 'sum'");
  // Variables w[i*m+j]; rows: row sums = mu, column sums = nu.
  std::vector<std::vector<Rat>> A(2 * m, std::vector<Rat>(m * m, Rat(0)));
  std::vector<Rat> b(2 * m);
  std::vector<Rat> c(m * m, Rat(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      A[i][i * m + j] = 1;
      A[m + j][i * m + j] = 1;
      if (i != j) c[i * m + j] = 1;
    }
    b[i] = mu.w[i];
    b[m + i] = nu.w[i];
  }
  auto sol = lp_solve_exact(A, b, c);
  if (!sol) throw Error("transportation polytope unexpectedly infeasible");
  Coupling omega{m, std::move(sol->x)};
  return omega;
}

Rat tv(const Distribution& mu, const Distribution& nu, TvMethod method) {
  if (mu.size() != nu.size()) throw TypeError("tv of different supports");
  switch (method) {
    case TvMethod::sum:
      return tv_sum(mu, nu);
    case TvMethod::sup:
      return tv_sup(mu, nu);
    case TvMethod::coupling:
      return optimal_coupling(mu, nu).off_diagonal_mass();
  }
  throw Error("unreachable");
}

Rat tvmax(const Mat& A, const Mat& B, TvMethod method) {
  if (A.rows != B.rows || A.cols != B.cols) throw TypeError("tvmax of different shapes");
  Rat best(0);
  for (int j = 0; j < A.cols; ++j) {
    Rat d = tv(column(A, j), column(B, j), method);
    if (d > best) best = d;
  }
  return best;  // empty max over no columns is 0
}

Rat tvmax(const StochMat& A, const StochMat& B, TvMethod method) {
  return tvmax(A.mat(), B.mat(), method);
}

SplitResult split(const Distribution& mu, const Distribution& nu) {
  if (mu.size() != nu.size()) throw TypeError("split of different supports");
  const std::size_t m = mu.size();
  Rat lambda = tv_sum(mu, nu);
  if (lambda == 0) return {lambda, mu, mu, mu};
  if (lambda == 1) {
    std::vector<Rat> uniform(m, Rat(1, static_cast<long>(m)));
    return {lambda, mu, nu, Distribution(std::move(uniform))};
  }
  std::vector<Rat> tau, mup, nup;
  tau.reserve(m);
  mup.reserve(m);
  nup.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rat mn = mu.w[i] < nu.w[i] ? mu.w[i] : nu.w[i];
    tau.push_back(mn / (1 - lambda));
    mup.push_back((mu.w[i] - mn) / lambda);
    nup.push_back((nu.w[i] - mn) / lambda);
  }
  return {lambda, Distribution(std::move(mup)), Distribution(std::move(nup)),
          Distribution(std::move(tau))};
}

QVal semantic_distance(const Term& f, const Term& g, const QuantTheory& theory) {
  if (f->arity != g->arity || f->coarity != g->coarity)
    throw TypeError("semantic distance between differently-typed terms");
  switch (model_family(theory)) {
    case ModelFamily::ha_matrix: {
      bool le = entrywise_leq(eval_ha(f, *theory.semiring), eval_ha(g, *theory.semiring),
                              *theory.semiring);
      return QVal::boolean(le);
    }
    case ModelFamily::ca_stoch:
      return QVal::lawvere(tvmax(eval_ca(f), eval_ca(g)));
  }
  throw Error("unreachable");
}

bool truth_check(const QuantEq& qe, const QuantTheory& model_theory) {
  typecheck(qe.lhs, model_theory.signature);
  typecheck(qe.rhs, model_theory.signature);
  if (qe.eps.kind() != model_theory.quantale)
    throw VariantError("quantitative equation over the wrong quantale for this model");
  return q_leq(qe.eps, semantic_distance(qe.lhs, qe.rhs, model_theory));
}

Distribution random_distribution(std::mt19937_64& rng, std::size_t support) {
  std::uniform_int_distribution<int> pick(0, 12);
  std::vector<Rat> raw(support);
  Rat total(0);
  for (auto& x : raw) {
    x = Rat(pick(rng));
    total += x;
  }
  if (total == 0) {
    raw[rng() % support] = 1;
    total = 1;
  }
  for (auto& x : raw) x /= total;
  return Distribution(std::move(raw));
}

Mat random_stochastic(std::mt19937_64& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    Distribution d = random_distribution(rng, static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) m.at(i, j) = d.w[i];
  }
  return m;
}

MeetCounterexample meet_violation_witness() {
  MeetCounterexample w;
  w.A = Mat(2, 2);
  w.A.at(0, 0) = 1;
  w.A.at(0, 1) = Rat(1, 2);
  w.A.at(1, 1) = Rat(1, 2);
  w.B = Mat(2, 2);
  w.B.at(0, 0) = Rat(1, 2);
  w.B.at(1, 0) = Rat(1, 2);
  w.B.at(1, 1) = 1;
  w.C = Mat(2, 1);
  w.C.at(0, 0) = 1;
  w.Cp = Mat(2, 1);
  w.Cp.at(0, 0) = Rat(1, 2);
  w.Cp.at(1, 0) = Rat(1, 2);
  return w;
}

LawReport law_checks(std::uint64_t seed, std::size_t samples) {
  std::mt19937_64 rng(seed);
  LawReport rep;
  rep.samples = samples;
  std::uniform_int_distribution<int> dim(1, 4);
  for (std::size_t s = 0; s < samples; ++s) {
    int n = dim(rng), mid = dim(rng), ell = dim(rng), n2 = dim(rng), m2 = dim(rng);
    Mat A = random_stochastic(rng, mid, n);
    Mat B = random_stochastic(rng, mid, n);
    Mat A2 = random_stochastic(rng, ell, mid);
    Mat B2 = random_stochastic(rng, ell, mid);
    // sequential: tvmax(A;A', B;B') <= tvmax(A,B) + tvmax(A',B')
    Rat lhs = tvmax(mat_compose(A, A2), mat_compose(B, B2));
    Rat rhs = tvmax(A, B) + tvmax(A2, B2);
    if (lhs > rhs) {
      ++rep.seq_bound_violations;
      if (rep.first_counterexample.empty())
        rep.first_counterexample = "seq bound: " + A.str() + " " + B.str();
    }
    // parallel: tvmax(A⊕A'', B⊕B'') == max
    Mat A3 = random_stochastic(rng, m2, n2);
    Mat B3 = random_stochastic(rng, m2, n2);
    Rat dl = tvmax(mat_dsum(A, A3), mat_dsum(B, B3));
    Rat dr = tvmax(A, B);
    Rat other = tvmax(A3, B3);
    if (other > dr) dr = other;
    if (dl != dr) {
      ++rep.dsum_equality_failures;
      if (rep.first_counterexample.empty())
        rep.first_counterexample = "dsum equality: " + A.str() + " " + A3.str();
    }
  }
  auto w = meet_violation_witness();
  Rat composite = tvmax(mat_compose(w.C, w.A), mat_compose(w.Cp, w.B));
  Rat meet_bound = tvmax(w.C, w.Cp);
  Rat ab = tvmax(w.A, w.B);
  if (ab > meet_bound) meet_bound = ab;
  rep.witness_violates_meet = composite > meet_bound;
  return rep;
}

}  // namespace qmt
