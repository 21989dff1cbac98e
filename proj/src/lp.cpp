#include "fitzkit/lp.hpp"

#include <cstddef>
#include <optional>

#include "fitzkit/errors.hpp"

namespace fitzkit::lp {

namespace {

class Tableau {
 public:
  Tableau(const std::vector<QVec>& rows, const QVec& rhs, std::size_t vars)
      : vars_(vars), cols_(vars + rows.size() + 1) {
    const std::size_t m = rows.size();
    t_.assign(m, QVec(cols_, Rational(0)));
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != vars) throw InputError("lp: ragged constraint matrix");
      const bool flip = rhs[i] < 0;
      for (std::size_t j = 0; j < vars; ++j) t_[i][j] = flip ? Rational(-rows[i][j]) : rows[i][j];
      t_[i][vars + i] = 1;
      t_[i][cols_ - 1] = flip ? Rational(-rhs[i]) : rhs[i];
      basis_[i] = vars + i;
    }
  }

  // Runs simplex iterations for `cost` (indexed by column) over columns
  // < `allowed`. Returns false when the objective is unbounded below.
  bool optimize(const QVec& cost, std::size_t allowed) {
    Rational reduced, ratio, best_ratio;
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed && !entering; ++j) {
        if (is_basic(j)) continue;
        reduced = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i)
          if (sgn(t_[i][j]) != 0) reduced -= cost[basis_[i]] * t_[i][j];
        if (sgn(reduced) < 0) entering = j;
      }
      if (!entering) return true;
      const std::size_t e = *entering;

      std::optional<std::size_t> leaving;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (sgn(t_[i][e]) <= 0) continue;
        ratio = t_[i][cols_ - 1] / t_[i][e];
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, e);
    }
  }

  Rational objective(const QVec& cost) const {
    Rational v = 0;
    for (std::size_t i = 0; i < t_.size(); ++i) v += cost[basis_[i]] * t_[i][cols_ - 1];
    return v;
  }

  // Replaces artificial basics by structural columns, dropping redundant rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < vars_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < vars_ && !col; ++j)
        if (sgn(t_[i][j]) != 0) col = j;
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  QVec solution() const {
    QVec x(vars_, Rational(0));
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (basis_[i] < vars_) x[basis_[i]] = t_[i][cols_ - 1];
    return x;
  }

  std::size_t columns() const { return cols_ - 1; }

 private:
  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    Rational f;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      f = t_[i][c];
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t vars_;
  std::size_t cols_;
  std::vector<QVec> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Result minimize(const std::vector<QVec>& rows, const QVec& rhs, const QVec& cost) {
  if (rows.size() != rhs.size()) throw InputError("lp: row count mismatch");
  const std::size_t vars = cost.size();
  Tableau tab(rows, rhs, vars);

  QVec phase1(tab.columns(), Rational(0));
  for (std::size_t j = vars; j < tab.columns(); ++j) phase1[j] = 1;
  tab.optimize(phase1, tab.columns());
  if (sgn(tab.objective(phase1)) > 0) return Result{Status::infeasible, Rational(0), {}};
  tab.expel_artificials();

  QVec phase2(tab.columns(), Rational(0));
  for (std::size_t j = 0; j < vars; ++j) phase2[j] = cost[j];
  if (!tab.optimize(phase2, vars)) return Result{Status::unbounded, Rational(0), {}};
  return Result{Status::optimal, tab.objective(phase2), tab.solution()};
}

bool feasible(const std::vector<QVec>& rows, const QVec& rhs) {
  const std::size_t vars = rows.empty() ? 0 : rows.front().size();
  return minimize(rows, rhs, QVec(vars, Rational(0))).status != Status::infeasible;
}

bool in_convex_hull(const std::vector<QVec>& points, const QVec& target) {
  if (points.empty()) return false;
  const std::size_t d = target.size();
  std::vector<QVec> rows(d + 1, QVec(points.size(), Rational(0)));
  QVec rhs(d + 1);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != d) throw InputError("in_convex_hull: dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) rows[i][k] = points[k][i];
    rows[d][k] = 1;
  }
  for (std::size_t i = 0; i < d; ++i) rhs[i] = target[i];
  rhs[d] = 1;
  return feasible(rows, rhs);
}

}  // namespace fitzkit::lp
