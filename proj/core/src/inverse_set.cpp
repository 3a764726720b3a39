#include "iorobust/inverse_set.hpp"

#include "iorobust/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iorobust {

using Index = Eigen::Index;

namespace {

void check_length(const UncertaintySet& u, const Vector& v, const char* who) {
  if (v.size() != u.obs.num_cols()) throw UsageError(std::string(who) + ": vector length does not match n");
  if (!v.allFinite()) throw UsageError(std::string(who) + ": non-finite entry");
}

// min t  s.t.  s = c - A'y,  s_j >= -t on N_k,  |s_j| <= t on B_k.
double cone_violation(const Matrix& A, const Observation& obs, const Vector& c, bool& solved) {
  const Index m = A.rows();
  const Index n = A.cols();
  const Index rows = n + static_cast<Index>(obs.basic.size());
  GeneralLP lp;
  lp.A = Matrix::Zero(rows, m + 1);
  lp.b = Vector(rows);
  lp.c = Vector::Zero(m + 1);
  lp.c[m] = 1.0;
  lp.var_signs.assign(static_cast<std::size_t>(m), VarSign::Free);
  lp.var_signs.push_back(VarSign::NonNegative);
  lp.row_relations.assign(static_cast<std::size_t>(n), RowRelation::Le);
  lp.row_relations.resize(static_cast<std::size_t>(rows), RowRelation::Ge);
  // (A'y)_j - t <= c_j for all j; on B_j additionally (A'y)_j + t >= c_j.
  for (Index j = 0; j < n; ++j) {
    lp.A.row(j).head(m) = A.col(j).transpose();
    lp.A(j, m) = -1.0;
    lp.b[j] = c[j];
  }
  for (std::size_t p = 0; p < obs.basic.size(); ++p) {
    const Index row = n + static_cast<Index>(p);
    const Index j = obs.basic[p];
    lp.A.row(row).head(m) = A.col(j).transpose();
    lp.A(row, m) = 1.0;
    lp.b[row] = c[j];
  }
  const GeneralSolution sol = solve_general(lp);
  solved = sol.status == LPStatus::Optimal;
  return solved ? std::max(sol.x[m], 0.0) : std::numeric_limits<double>::infinity();
}

}  // namespace

MembershipReport membership_report(const UncertaintySet& u, const Vector& c, double tol) {
  check_length(u, c, "membership");
  MembershipReport report;
  if (u.normalized) {
    if (std::abs(c.sum() - 1.0) > tol || c.minCoeff() < -tol) report.member = false;
  }
  const Matrix& A = u.obs.problem().A;
  const auto& observations = u.obs.observations();
  report.violation.reserve(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    bool solved = true;
    const double t = cone_violation(A, observations[k], c, solved);
    report.simplex_ok = report.simplex_ok && solved;
    report.violation.push_back(t);
    if (t > tol) {
      report.member = false;
      if (!report.first_excluding) report.first_excluding = k;
    }
  }
  return report;
}

bool membership(const UncertaintySet& u, const Vector& c, double tol) { return membership_report(u, c, tol).member; }

GeneralLP region_lp(const UncertaintySet& u, Index extra_cols, Index extra_rows, RegionLayout& layout) {
  const Matrix& A = u.obs.problem().A;
  const Index m = A.rows();
  const Index n = A.cols();
  const auto& observations = u.obs.observations();
  const Index K = static_cast<Index>(observations.size());

  layout = RegionLayout{};
  layout.c_offset = 0;
  Index col = n;
  for (const Observation& obs : observations) {
    layout.y_offset.push_back(col);
    col += m;
    layout.s_offset.push_back(col);
    col += static_cast<Index>(obs.nonbasic.size());
  }
  layout.extra_col_offset = col;
  const Index cols = col + extra_cols;

  const Index norm_rows = u.normalized ? 1 : 0;
  layout.extra_row_offset = norm_rows + K * n;
  const Index rows = layout.extra_row_offset + extra_rows;

  GeneralLP lp;
  lp.A = Matrix::Zero(rows, cols);
  lp.b = Vector::Zero(rows);
  lp.c = Vector::Zero(cols);
  lp.var_signs.assign(static_cast<std::size_t>(cols), VarSign::NonNegative);
  lp.row_relations.assign(static_cast<std::size_t>(rows), RowRelation::Eq);

  for (Index j = 0; j < n; ++j) lp.var_signs[j] = u.normalized ? VarSign::NonNegative : VarSign::Free;
  if (u.normalized) {
    lp.A.row(0).head(n).setOnes();
    lp.b[0] = 1.0;
  }
  // A'y_k + s_k - c = 0, with s_k only present on N_k.
  for (Index k = 0; k < K; ++k) {
    const Observation& obs = observations[k];
    const Index row0 = norm_rows + k * n;
    const Index y0 = layout.y_offset[k];
    for (Index i = 0; i < m; ++i) lp.var_signs[y0 + i] = VarSign::Free;
    lp.A.block(row0, y0, n, m) = A.transpose();
    for (Index j = 0; j < n; ++j) lp.A(row0 + j, j) = -1.0;
    Index s = layout.s_offset[k];
    for (Index j : obs.nonbasic) lp.A(row0 + j, s++) = 1.0;
  }
  return lp;
}

bool is_empty(const UncertaintySet& u, double tol) {
  RegionLayout layout;
  const GeneralLP lp = region_lp(u, 0, 0, layout);
  SimplexOptions options;
  options.feasibility_tol = std::min(options.feasibility_tol, tol);
  return solve_general(lp, options).status == LPStatus::Infeasible;
}

SupportValue support_value(const UncertaintySet& u, const Vector& x) {
  if (!u.normalized) throw UsageError("support_value: the unnormalized cone has an unbounded support function");
  check_length(u, x, "support_value");
  RegionLayout layout;
  GeneralLP lp = region_lp(u, 0, 0, layout);
  const Index n = u.obs.num_cols();
  lp.c.head(n) = -x;
  const GeneralSolution sol = solve_general(lp);
  if (sol.status == LPStatus::Infeasible) throw EmptyUncertaintyError("uncertainty set is empty");
  if (sol.status == LPStatus::Unbounded) throw InternalError("support_value: LP over a polytope reported unbounded");
  return SupportValue{-sol.objective, sol.x.head(n)};
}

ConeParametrization parametrize_cone(const Matrix& A, const Observation& obs) {
  const Index m = A.rows();
  const Index n = A.cols();
  const Index f = static_cast<Index>(obs.basic.size());
  const Index nn = static_cast<Index>(obs.nonbasic.size());

  Matrix AF(m, f);
  for (Index i = 0; i < f; ++i) AF.col(i) = A.col(obs.basic[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(m, f);
  Index rank = 0;
  if (f > 0) {
    qr.setThreshold(1e-10);
    qr.compute(AF);
    rank = qr.rank();
  }

  // Pivot columns F1 are solved for; the rest of B_k (F2) stays free in w.
  IndexSet eliminated, kept_free;
  for (Index i = 0; i < f; ++i) {
    const Index j = obs.basic[qr.colsPermutation().indices()[i]];
    (i < rank ? eliminated : kept_free).push_back(j);
  }
  const Index p = nn + static_cast<Index>(kept_free.size());
  Matrix W(m, p);
  for (Index i = 0; i < nn; ++i) W.col(i) = A.col(obs.nonbasic[i]);
  for (std::size_t i = 0; i < kept_free.size(); ++i) W.col(nn + static_cast<Index>(i)) = A.col(kept_free[i]);

  ConeParametrization cone;
  cone.map = Matrix::Zero(n, p);
  cone.signs.assign(static_cast<std::size_t>(p), VarSign::Free);
  for (Index i = 0; i < nn; ++i) {
    cone.map(obs.nonbasic[i], i) = 1.0;
    cone.signs[i] = VarSign::NonNegative;
  }
  for (std::size_t i = 0; i < kept_free.size(); ++i) cone.map(kept_free[i], nn + static_cast<Index>(i)) = 1.0;

  if (rank == 0) {
    cone.residual = W;
    return cone;
  }
  // Q'A xi = 0 splits into R11 xi_F1 + Q1'W w = 0 and Q2'W w = 0.
  const Matrix QtW = qr.householderQ().transpose() * W;
  const Matrix R11 = qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>();
  const Matrix solved = -R11.triangularView<Eigen::Upper>().solve(QtW.topRows(rank));
  for (Index i = 0; i < rank; ++i) cone.map.row(eliminated[i]) = solved.row(i);
  cone.residual = QtW.bottomRows(m - rank);
  return cone;
}

Vector ConeSumLP::xi(std::size_t k, const Vector& solution) const {
  const ConeParametrization& cone = cones[k];
  return cone.map * solution.segment(w_offset[k], cone.map.cols());
}

ConeSumLP build_cone_sum_lp(const ObservationSet& obs, Index lead_cols, Index tail_rows) {
  const Matrix& A = obs.problem().A;
  const Index n = A.cols();
  ConeSumLP out;
  Index cols = lead_cols;
  Index residual_rows = 0;
  out.cones.reserve(obs.size());
  for (const Observation& o : obs.observations()) {
    out.cones.push_back(parametrize_cone(A, o));
    out.w_offset.push_back(cols);
    cols += out.cones.back().map.cols();
    residual_rows += out.cones.back().residual.rows();
  }
  out.zeta = cols++;
  out.tail_row_offset = n + residual_rows;
  const Index rows = out.tail_row_offset + tail_rows;

  GeneralLP& lp = out.lp;
  lp.A = Matrix::Zero(rows, cols);
  lp.b = Vector::Zero(rows);
  lp.c = Vector::Zero(cols);
  lp.c[out.zeta] = 1.0;
  lp.var_signs.assign(static_cast<std::size_t>(cols), VarSign::NonNegative);
  lp.var_signs[out.zeta] = VarSign::Free;
  lp.row_relations.assign(static_cast<std::size_t>(rows), RowRelation::Eq);
  for (Index j = 0; j < n; ++j) {
    lp.row_relations[j] = RowRelation::Ge;
    lp.A(j, out.zeta) = 1.0;
  }
  Index row = n;
  for (std::size_t k = 0; k < out.cones.size(); ++k) {
    const ConeParametrization& cone = out.cones[k];
    const Index w0 = out.w_offset[k];
    const Index p = cone.map.cols();
    lp.A.block(0, w0, n, p) = -cone.map;
    for (Index i = 0; i < p; ++i) lp.var_signs[w0 + i] = cone.signs[i];
    lp.A.block(row, w0, cone.residual.rows(), p) = cone.residual;
    row += cone.residual.rows();
  }
  return out;
}

SupportOracle::SupportOracle(const UncertaintySet& u) : u_(&u) {
  if (!u.normalized) throw UsageError("support_value_dual: requires the normalized set");
  // min zeta  s.t.  zeta 1 - sum_k xi_k >= x,  xi_k in K_k; the zeta-row duals are c.
  sf_ = to_standard_form(build_cone_sum_lp(u.obs, 0, 0).lp);
}

SupportValue SupportOracle::operator()(const Vector& x) {
  check_length(*u_, x, "support_value_dual");
  const Index n = x.size();
  sf_.lp.b.head(n) = x;
  const LPSolution sol = solve_lp(sf_.lp);
  iterations_ += sol.iterations;
  if (sol.status == LPStatus::Unbounded) throw EmptyUncertaintyError("uncertainty set is empty");
  if (sol.status != LPStatus::Optimal) throw InternalError("support_value_dual: dual LP infeasible");
  return SupportValue{sol.objective, sol.y.head(n)};
}

SupportValue support_value_dual(const UncertaintySet& u, const Vector& x) {
  check_length(u, x, "support_value_dual");
  SupportOracle oracle(u);
  return oracle(x);
}

}  // namespace iorobust
