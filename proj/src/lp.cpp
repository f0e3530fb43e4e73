#include "qmt/lp.hpp"

#include "qmt/errors.hpp"

namespace qmt {

namespace {

struct Tableau {
  // rows m, structural+artificial cols n; column n is the rhs.
  std::size_t m, n;
  std::vector<std::vector<Rat>> t;  // m rows
  std::vector<Rat> z;               // reduced costs, size n+1 (last = -objective)
  std::vector<std::size_t> basis;   // basis[r] = column basic in row r

  void pivot(std::size_t pr, std::size_t pc) {
    Rat p = t[pr][pc];
    for (auto& v : t[pr]) v /= p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr) continue;
      Rat f = t[r][pc];
      if (f == 0) continue;
      for (std::size_t cidx = 0; cidx <= n; ++cidx) t[r][cidx] -= f * t[pr][cidx];
    }
    Rat fz = z[pc];
    if (fz != 0)
      for (std::size_t cidx = 0; cidx <= n; ++cidx) z[cidx] -= fz * t[pr][cidx];
    basis[pr] = pc;
  }

  /// Bland's rule: entering = lowest-index negative reduced cost; leaving =
  /// lowest-index tightest ratio. Returns false when optimal.
  bool step(std::size_t allowed_cols) {
    std::size_t pc = n;
    for (std::size_t cidx = 0; cidx < allowed_cols; ++cidx)
      if (z[cidx] < 0) {
        pc = cidx;
        break;
      }
    if (pc == n) return false;
    std::size_t pr = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][pc] <= 0) continue;
      if (pr == m) {
        pr = r;
        continue;
      }
      Rat cur = t[r][n] / t[r][pc];
      Rat best = t[pr][n] / t[pr][pc];
      if (cur < best || (cur == best && basis[r] < basis[pr])) pr = r;
    }
    if (pr == m) throw Error("LP is unbounded");
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

std::optional<LpSolution> lp_solve_exact(const std::vector<std::vector<Rat>>& A,
                                         const std::vector<Rat>& b, const std::vector<Rat>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  Tableau tab;
  tab.m = m;
  tab.n = n + m;  // structural + one artificial per row
  tab.t.assign(m, std::vector<Rat>(tab.n + 1, Rat(0)));
  tab.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (A[r].size() != n) throw Error("LP: ragged constraint matrix");
    bool flip = b[r] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.t[r][j] = flip ? -A[r][j] : A[r][j];
    tab.t[r][tab.n] = flip ? -b[r] : b[r];
    tab.t[r][n + r] = 1;
    tab.basis[r] = n + r;
  }

  // Phase 1: minimize the sum of artificials.
  tab.z.assign(tab.n + 1, Rat(0));
  for (std::size_t j = n; j < tab.n; ++j) tab.z[j] = 1;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t cidx = 0; cidx <= tab.n; ++cidx) tab.z[cidx] -= tab.t[r][cidx];
  while (tab.step(tab.n)) {
  }
  Rat phase1 = -tab.z[tab.n];
  if (phase1 != 0) return std::nullopt;
  // Drive leftover artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    std::size_t pc = n;
    for (std::size_t j = 0; j < n; ++j)
      if (tab.t[r][j] != 0) {
        pc = j;
        break;
      }
    if (pc < n) tab.pivot(r, pc);
    // else: redundant row, harmless to keep with artificial basic at 0
  }

  // Phase 2: original objective, artificials barred from entering.
  tab.z.assign(tab.n + 1, Rat(0));
  for (std::size_t j = 0; j < n; ++j) tab.z[j] = c[j];
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] >= n) continue;
    Rat f = tab.z[tab.basis[r]];
    if (f == 0) continue;
    for (std::size_t cidx = 0; cidx <= tab.n; ++cidx) tab.z[cidx] -= f * tab.t[r][cidx];
  }
  while (tab.step(n)) {
  }

  LpSolution sol;
  sol.x.assign(n, Rat(0));
  for (std::size_t r = 0; r < m; ++r)
    if (tab.basis[r] < n) sol.x[tab.basis[r]] = tab.t[r][tab.n];
  sol.objective = Rat(0);
  for (std::size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

}  // namespace qmt
