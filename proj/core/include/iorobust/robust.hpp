#pragma once

#include "iorobust/inverse_set.hpp"
#include "iorobust/lp.hpp"
#include "iorobust/model.hpp"

#include <vector>

namespace iorobust {

// Column layout of the robust counterpart: x first, then xi_1..xi_K, then zeta.
// Rows: n zeta rows, then K blocks of m rows (A xi_k = 0), then m rows (A x = b).
struct RobustLayout {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::size_t K = 0;

  Eigen::Index x_offset() const { return 0; }
  Eigen::Index xi_offset(std::size_t k) const { return n + static_cast<Eigen::Index>(k) * n; }
  Eigen::Index zeta() const { return n + static_cast<Eigen::Index>(K) * n; }
  Eigen::Index num_vars() const { return zeta() + 1; }
  Eigen::Index num_rows() const { return n + static_cast<Eigen::Index>(K) * m + m; }
};

struct RobustCounterpart {
  GeneralLP lp;
  RobustLayout layout;
};

//   min zeta
//   s.t. zeta 1 >= sum_k xi_k + x,  A xi_k = 0,  [xi_k]_j >= 0 (j in N_k),  A x = b,  x >= 0
RobustCounterpart build_robust_counterpart(const ObservationSet& obs, const Vector& b);

struct RobustSolution {
  Vector x;
  double zeta = 0.0;
  std::vector<Vector> xi;
  Vector worst_case_c;  // filled by certify
  // Duals of the zeta rows: a worst-case objective at x, as seen by the counterpart itself.
  Vector dual_c;
  double certification_gap = -1.0;  // < 0 until certified
  std::size_t iterations = 0;
};

enum class RobustFormulation {
  // Free components of xi_k on B_k eliminated via A xi_k = 0; n + K*(m - rank) + m rows.
  Reduced,
  // The counterpart exactly as built by build_robust_counterpart.
  Full,
};

struct RobustOptions {
#ifdef NDEBUG
  bool certify = false;
#else
  bool certify = true;
#endif
  RobustFormulation formulation = RobustFormulation::Reduced;
};

// Throws InfeasibleForwardError when {x : Ax = b, x >= 0} is empty and
// EmptyUncertaintyError when C intersected with the simplex is empty.
RobustSolution solve_rlo(const ObservationSet& obs, const Vector& b, const RobustOptions& options = {});

// |zeta - max_{c in U} c'x| with the maximum taken by support_value; also stores the
// maximizing c into sol.worst_case_c.
double certify(const ObservationSet& obs, RobustSolution& sol);

}  // namespace iorobust
