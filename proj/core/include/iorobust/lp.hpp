#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

namespace iorobust {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// min c'x  s.t.  Ax = b, x >= 0
struct StandardFormLP {
  Matrix A;
  Vector b;
  Vector c;

  Eigen::Index num_rows() const { return A.rows(); }
  Eigen::Index num_cols() const { return A.cols(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector x;  // primal
  Vector y;  // row duals
  Vector s;  // reduced costs c - A'y
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;  // relative to the largest entry of the entering column
  // Consecutive degenerate pivots before lowest-index (Bland) selection takes over.
  std::size_t stall_threshold = 50;
  // Refresh primal values and reduced costs from the basis inverse this often.
  std::size_t refresh_interval = 100;
  std::size_t max_iterations = 1'000'000;
};

// Two-phase primal simplex. Throws UsageError on inconsistent dimensions or non-finite data.
// Only an Optimal solution carries meaningful x, y and s.
LPSolution solve_lp(const StandardFormLP& lp, const SimplexOptions& options = {});

enum class VarSign { NonNegative, Free };
enum class RowRelation { Eq, Le, Ge };

// min c'x  s.t.  row_i(A) x (=|<=|>=) b_i,  x_j >= 0 or free.
struct GeneralLP {
  Matrix A;
  Vector b;
  Vector c;
  std::vector<VarSign> var_signs;
  std::vector<RowRelation> row_relations;

  Eigen::Index num_rows() const { return A.rows(); }
  Eigen::Index num_cols() const { return A.cols(); }
  void validate() const;
};

// Maps standard-form columns back to the variables of the GeneralLP they came from.
// Rows are carried over one-to-one, so row duals need no mapping.
struct ColumnMap {
  std::vector<Eigen::Index> positive;  // standard-form column of x_j (or its positive part)
  std::vector<Eigen::Index> negative;  // column of the negative part, -1 when x_j >= 0
  std::vector<Eigen::Index> slack;     // slack/surplus column per row, -1 for equality rows

  Vector recover(const Vector& standard_x) const;
};

struct StandardForm {
  StandardFormLP lp;
  ColumnMap recover;
};

StandardForm to_standard_form(const GeneralLP& g);

struct GeneralSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector x;  // in the GeneralLP's variables
  Vector y;  // one dual per GeneralLP row; >= 0 on Ge rows, <= 0 on Le rows
  double objective = 0.0;
  std::size_t iterations = 0;
};

GeneralSolution solve_general(const GeneralLP& g, const SimplexOptions& options = {});

// True iff x is primal feasible for lp within tol and some (y, s) with A'y + s = c,
// s >= -tol and |x's| <= tol exists. Decided with an auxiliary LP in (y, s).
bool check_kkt(const StandardFormLP& lp, const Vector& x, double tol);

// Residual bounds of an optimal solution, all unscaled.
struct KKTResiduals {
  double primal = 0.0;         // ||Ax - b||_inf
  double primal_sign = 0.0;    // max(0, -min x)
  double dual = 0.0;           // ||A'y + s - c||_inf
  double dual_sign = 0.0;      // max(0, -min s)
  double complementarity = 0.0;  // |x's|
  double duality_gap = 0.0;    // |c'x - b'y|
};

KKTResiduals kkt_residuals(const StandardFormLP& lp, const LPSolution& sol);

}  // namespace iorobust
