#pragma once

#include "iorobust/lp.hpp"
#include "iorobust/model.hpp"

#include <optional>
#include <vector>

namespace iorobust {

// Implicit description of the inverse-feasible cone
//   C = { c : for every k, c = A'y_k + s_k with s_k >= 0 on N_k and s_k = 0 on B_k }
// and, when normalized, of U = C intersected with the unit simplex.
// Nothing is ever enumerated; every query is answered by an LP over the
// lifted (c, y_k, s_k) description.
struct UncertaintySet {
  ObservationSet obs;
  bool normalized = true;
};

struct MembershipReport {
  bool member = true;
  // Smallest t such that observation k admits s_k >= -t on N_k and |s_k| <= t on B_k.
  std::vector<double> violation;
  // 0-based index of the first observation whose cone excludes c.
  std::optional<std::size_t> first_excluding;
  bool simplex_ok = true;
};

MembershipReport membership_report(const UncertaintySet& u, const Vector& c, double tol);
bool membership(const UncertaintySet& u, const Vector& c, double tol);

bool is_empty(const UncertaintySet& u, double tol = 1e-9);

struct SupportValue {
  double value = 0.0;
  Vector c;  // maximizer
};

// max { c'x : c in U } solved directly over the (c, y_k, s_k) polytope.
// Throws EmptyUncertaintyError if U is empty, UsageError if u is not normalized.
SupportValue support_value(const UncertaintySet& u, const Vector& x);

// Same optimum computed through the dual LP in (xi_k, zeta); the maximizer is read
// off the duals of the zeta rows. Its row count is n + K*m instead of K*n + 1,
// which is what makes it usable as a linear-minimization oracle at n = 150, K = 130.
SupportValue support_value_dual(const UncertaintySet& u, const Vector& x);

// Repeated support_value_dual queries against one set; the dual LP is built once
// and only its right-hand side changes between queries.
class SupportOracle {
 public:
  explicit SupportOracle(const UncertaintySet& u);
  SupportValue operator()(const Vector& x);
  std::size_t total_iterations() const { return iterations_; }

 private:
  const UncertaintySet* u_;
  StandardForm sf_;
  std::size_t iterations_ = 0;
};

// Exact parametrization of the cone K_k = { xi : A xi = 0, xi_j >= 0 for j in N_k }
// obtained by eliminating the free components on B_k through A xi = 0:
//   xi = map * w,   w_j >= 0 or free per `signs`,   residual * w = 0.
// When A restricted to B_k has rank m the residual block is empty and w is just
// xi on N_k. K_k is the dual cone of C_k.
struct ConeParametrization {
  Matrix map;       // n x p
  std::vector<VarSign> signs;
  Matrix residual;  // (m - rank) x p
};

ConeParametrization parametrize_cone(const Matrix& A, const Observation& obs);

// LP skeleton shared by the robust counterpart and the dual support function:
//   columns  [lead (caller's)] [w_1 .. w_K] [zeta]
//   rows     [n zeta rows: zeta - sum_k map_k w_k >= 0] [residual_k w_k = 0] [tail (caller's)]
// Objective is min zeta; the caller adds its own coupling to the lead columns and rhs.
struct ConeSumLP {
  GeneralLP lp;
  std::vector<ConeParametrization> cones;
  std::vector<Eigen::Index> w_offset;
  Eigen::Index zeta = 0;
  Eigen::Index tail_row_offset = 0;

  // xi_k = map_k * w_k from a solution vector of lp.
  Vector xi(std::size_t k, const Vector& solution) const;
};

ConeSumLP build_cone_sum_lp(const ObservationSet& obs, Eigen::Index lead_cols, Eigen::Index tail_rows);

// Layout of the lifted region LP built by region_lp.
struct RegionLayout {
  Eigen::Index c_offset = 0;
  std::vector<Eigen::Index> y_offset;  // start of y_k, m columns each
  std::vector<Eigen::Index> s_offset;  // start of s_k, |N_k| columns each
  Eigen::Index extra_col_offset = 0;
  Eigen::Index extra_row_offset = 0;
};

// Constraint block of the lifted description with zero objective. The caller can
// reserve extra columns and rows (placed after the block) for its own objective
// machinery, e.g. norm epigraphs.
GeneralLP region_lp(const UncertaintySet& u, Eigen::Index extra_cols, Eigen::Index extra_rows,
                    RegionLayout& layout);

}  // namespace iorobust
