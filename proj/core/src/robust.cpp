#include "iorobust/robust.hpp"

#include "iorobust/error.hpp"

#include <cmath>

namespace iorobust {

using Index = Eigen::Index;

RobustCounterpart build_robust_counterpart(const ObservationSet& obs, const Vector& b) {
  const Matrix& A = obs.problem().A;
  if (b.size() != A.rows()) throw UsageError("build_robust_counterpart: b has the wrong length");
  if (!b.allFinite()) throw UsageError("build_robust_counterpart: non-finite entry in b");

  RobustCounterpart rc;
  RobustLayout& layout = rc.layout;
  layout.n = A.cols();
  layout.m = A.rows();
  layout.K = obs.size();
  const Index n = layout.n;
  const Index m = layout.m;

  GeneralLP& lp = rc.lp;
  lp.A = Matrix::Zero(layout.num_rows(), layout.num_vars());
  lp.b = Vector::Zero(layout.num_rows());
  lp.c = Vector::Zero(layout.num_vars());
  lp.c[layout.zeta()] = 1.0;
  lp.var_signs.assign(static_cast<std::size_t>(layout.num_vars()), VarSign::Free);
  lp.row_relations.assign(static_cast<std::size_t>(layout.num_rows()), RowRelation::Eq);

  // zeta - x_j - sum_k [xi_k]_j >= 0
  for (Index j = 0; j < n; ++j) {
    lp.row_relations[j] = RowRelation::Ge;
    lp.A(j, layout.zeta()) = 1.0;
    lp.A(j, layout.x_offset() + j) = -1.0;
    lp.var_signs[layout.x_offset() + j] = VarSign::NonNegative;
  }
  for (std::size_t k = 0; k < layout.K; ++k) {
    const Index col0 = layout.xi_offset(k);
    for (Index j = 0; j < n; ++j) lp.A(j, col0 + j) = -1.0;
    for (Index j : obs.observations()[k].nonbasic) lp.var_signs[col0 + j] = VarSign::NonNegative;
    lp.A.block(n + static_cast<Index>(k) * m, col0, m, n) = A;
  }
  const Index forward_row = n + static_cast<Index>(layout.K) * m;
  lp.A.block(forward_row, layout.x_offset(), m, n) = A;
  lp.b.segment(forward_row, m) = b;
  return rc;
}

namespace {

RobustSolution solve_full(const ObservationSet& obs, const Vector& b) {
  const RobustCounterpart rc = build_robust_counterpart(obs, b);
  const GeneralSolution sol = solve_general(rc.lp);
  // With a feasible forward problem the counterpart is always feasible (xi = 0, large zeta),
  // so infeasibility comes from Ax = b, x >= 0 and unboundedness means its dual (the
  // inner maximization) has no feasible c.
  if (sol.status == LPStatus::Infeasible) throw InfeasibleForwardError("forward problem Ax = b, x >= 0 is infeasible");
  if (sol.status == LPStatus::Unbounded) throw EmptyUncertaintyError("uncertainty set is empty");

  const RobustLayout& layout = rc.layout;
  RobustSolution out;
  out.x = sol.x.segment(layout.x_offset(), layout.n);
  out.zeta = sol.x[layout.zeta()];
  out.xi.reserve(layout.K);
  for (std::size_t k = 0; k < layout.K; ++k) out.xi.push_back(sol.x.segment(layout.xi_offset(k), layout.n));
  out.dual_c = sol.y.head(layout.n);
  out.iterations = sol.iterations;
  return out;
}

// Same program with the free part of each xi_k eliminated through A xi_k = 0.
RobustSolution solve_reduced(const ObservationSet& obs, const Vector& b) {
  const Matrix& A = obs.problem().A;
  const Index n = A.cols();
  const Index m = A.rows();
  ConeSumLP cs = build_cone_sum_lp(obs, n, m);
  GeneralLP& lp = cs.lp;
  lp.A.block(0, 0, n, n) = -Matrix::Identity(n, n);
  lp.A.block(cs.tail_row_offset, 0, m, n) = A;
  lp.b.segment(cs.tail_row_offset, m) = b;

  const GeneralSolution sol = solve_general(lp);
  if (sol.status == LPStatus::Infeasible) throw InfeasibleForwardError("forward problem Ax = b, x >= 0 is infeasible");
  if (sol.status == LPStatus::Unbounded) throw EmptyUncertaintyError("uncertainty set is empty");

  RobustSolution out;
  out.x = sol.x.head(n);
  out.zeta = sol.x[cs.zeta];
  out.xi.reserve(obs.size());
  for (std::size_t k = 0; k < obs.size(); ++k) out.xi.push_back(cs.xi(k, sol.x));
  out.dual_c = sol.y.head(n);
  out.iterations = sol.iterations;
  return out;
}

}  // namespace

RobustSolution solve_rlo(const ObservationSet& obs, const Vector& b, const RobustOptions& options) {
  if (b.size() != obs.problem().A.rows()) throw UsageError("solve_rlo: b has the wrong length");
  if (!b.allFinite()) throw UsageError("solve_rlo: non-finite entry in b");
  RobustSolution out = options.formulation == RobustFormulation::Full ? solve_full(obs, b) : solve_reduced(obs, b);
  if (options.certify) certify(obs, out);
  return out;
}

double certify(const ObservationSet& obs, RobustSolution& sol) {
  const SupportValue sv = support_value(UncertaintySet{obs, true}, sol.x);
  sol.worst_case_c = sv.c;
  sol.certification_gap = std::abs(sol.zeta - sv.value);
  return sol.certification_gap;
}

}  // namespace iorobust
