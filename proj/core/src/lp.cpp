#include "iorobust/error.hpp"
#include "iorobust/lp.hpp"

#include <algorithm>
#include <cmath>

namespace iorobust {

using Index = Eigen::Index;

void GeneralLP::validate() const {
  if (b.size() != A.rows() || c.size() != A.cols()) throw UsageError("GeneralLP: dimension mismatch");
  if (static_cast<Index>(var_signs.size()) != A.cols()) throw UsageError("GeneralLP: one sign marker per variable required");
  if (static_cast<Index>(row_relations.size()) != A.rows()) throw UsageError("GeneralLP: one relation marker per row required");
  if (!A.allFinite() || !b.allFinite() || !c.allFinite()) throw UsageError("GeneralLP: non-finite entry");
}

Vector ColumnMap::recover(const Vector& standard_x) const {
  Vector x(static_cast<Index>(positive.size()));
  for (std::size_t j = 0; j < positive.size(); ++j) {
    double v = standard_x[positive[j]];
    if (negative[j] >= 0) v -= standard_x[negative[j]];
    x[static_cast<Index>(j)] = v;
  }
  return x;
}

StandardForm to_standard_form(const GeneralLP& g) {
  g.validate();
  const Index m = g.num_rows();
  const Index n = g.num_cols();

  StandardForm out;
  ColumnMap& map = out.recover;
  map.positive.resize(static_cast<std::size_t>(n));
  map.negative.assign(static_cast<std::size_t>(n), -1);
  map.slack.assign(static_cast<std::size_t>(m), -1);

  Index next = n;
  for (Index j = 0; j < n; ++j) {
    map.positive[j] = j;
    if (g.var_signs[j] == VarSign::Free) map.negative[j] = next++;
  }
  for (Index i = 0; i < m; ++i) {
    if (g.row_relations[i] != RowRelation::Eq) map.slack[i] = next++;
  }

  StandardFormLP& lp = out.lp;
  lp.A = Matrix::Zero(m, next);
  lp.b = g.b;
  lp.c = Vector::Zero(next);
  lp.A.leftCols(n) = g.A;
  lp.c.head(n) = g.c;
  for (Index j = 0; j < n; ++j) {
    const Index neg = map.negative[j];
    if (neg < 0) continue;
    lp.A.col(neg) = -g.A.col(j);
    lp.c[neg] = -g.c[j];
  }
  for (Index i = 0; i < m; ++i) {
    const Index s = map.slack[i];
    if (s < 0) continue;
    lp.A(i, s) = g.row_relations[i] == RowRelation::Le ? 1.0 : -1.0;
  }
  return out;
}

GeneralSolution solve_general(const GeneralLP& g, const SimplexOptions& options) {
  const StandardForm sf = to_standard_form(g);
  const LPSolution sol = solve_lp(sf.lp, options);
  GeneralSolution out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status != LPStatus::Optimal) return out;
  out.x = sf.recover.recover(sol.x);
  out.y = sol.y;
  out.objective = g.c.dot(out.x);
  return out;
}

bool check_kkt(const StandardFormLP& lp, const Vector& x, double tol) {
  const Index m = lp.num_rows();
  const Index n = lp.num_cols();
  if (x.size() != n || lp.b.size() != m || lp.c.size() != n) throw UsageError("check_kkt: dimension mismatch");

  const double b_scale = 1.0 + (m > 0 ? lp.b.lpNorm<Eigen::Infinity>() : 0.0);
  if (m > 0 && (lp.A * x - lp.b).lpNorm<Eigen::Infinity>() > tol * b_scale) return false;
  if (n > 0 && x.minCoeff() < -tol) return false;

  // min t  s.t.  s = c - A'y >= -t everywhere, s <= t on the support of x.
  std::vector<Index> support;
  for (Index j = 0; j < n; ++j) {
    if (x[j] > tol) support.push_back(j);
  }
  const Index rows = n + static_cast<Index>(support.size());
  GeneralLP aux;
  aux.A = Matrix::Zero(rows, m + 1);
  aux.b = Vector(rows);
  aux.c = Vector::Zero(m + 1);
  aux.c[m] = 1.0;
  aux.var_signs.assign(static_cast<std::size_t>(m), VarSign::Free);
  aux.var_signs.push_back(VarSign::NonNegative);
  aux.row_relations.assign(static_cast<std::size_t>(n), RowRelation::Le);
  aux.row_relations.resize(static_cast<std::size_t>(rows), RowRelation::Ge);
  for (Index j = 0; j < n; ++j) {
    aux.A.row(j).head(m) = lp.A.col(j).transpose();
    aux.A(j, m) = -1.0;
    aux.b[j] = lp.c[j];
  }
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Index row = n + static_cast<Index>(k);
    const Index j = support[k];
    aux.A.row(row).head(m) = lp.A.col(j).transpose();
    aux.A(row, m) = 1.0;
    aux.b[row] = lp.c[j];
  }

  const GeneralSolution sol = solve_general(aux);
  if (sol.status != LPStatus::Optimal) return false;
  if (sol.x[m] > tol) return false;
  const Vector y = sol.x.head(m);
  const Vector s = lp.c - lp.A.transpose() * y;
  if (n > 0 && s.minCoeff() < -tol) return false;
  return std::abs(x.dot(s)) <= tol * (1.0 + std::abs(lp.c.dot(x)));
}

KKTResiduals kkt_residuals(const StandardFormLP& lp, const LPSolution& sol) {
  KKTResiduals r;
  if (lp.num_rows() > 0) r.primal = (lp.A * sol.x - lp.b).lpNorm<Eigen::Infinity>();
  if (lp.num_cols() > 0) {
    r.primal_sign = std::max(0.0, -sol.x.minCoeff());
    r.dual = (lp.A.transpose() * sol.y + sol.s - lp.c).lpNorm<Eigen::Infinity>();
    r.dual_sign = std::max(0.0, -sol.s.minCoeff());
  }
  r.complementarity = std::abs(sol.x.dot(sol.s));
  r.duality_gap = std::abs(lp.c.dot(sol.x) - lp.b.dot(sol.y));
  return r;
}

}  // namespace iorobust
