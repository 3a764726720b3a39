#pragma once

#include "iorobust/inverse_set.hpp"
#include "iorobust/model.hpp"

#include <functional>
#include <string_view>

namespace iorobust {

enum class Norm { L1, LInf, L2 };

std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view name);  // "l1" | "linf" | "l2"; throws UsageError

enum class FrankWolfeVariant {
  // Re-optimizes the weights over all collected vertices after each oracle call
  // (Wolfe's min-norm-point scheme); typically a handful of oracle calls per face.
  FullyCorrective,
  // Plain steps of size 2/(t+2).
  OpenLoop,
};

struct IOConfig {
  Norm norm = Norm::L2;
  Vector c_hat;
  std::size_t fw_max_iters = 5000;
  double fw_tol = 1e-6;
  FrankWolfeVariant fw_variant = FrankWolfeVariant::FullyCorrective;
  // Intersect C with the unit simplex. Without it only L1 and LInf are accepted.
  bool normalize = true;

  void validate(Eigen::Index n) const;  // throws UsageError
};

enum class Certificate {
  ReferenceFeasible,  // c_hat itself lies in the region
  DualityGap,         // |primal - dual| of the epigraph LP
  FrankWolfeGap,      // (c - c_hat)'(c - v) at the returned iterate
};

std::string_view to_string(Certificate kind);

struct IOResult {
  Vector c;
  double objective = 0.0;  // ||c - c_hat|| in the configured norm
  Certificate certificate_kind = Certificate::ReferenceFeasible;
  double certificate = 0.0;
  std::size_t iterations = 0;
};

// Closest point of C (intersected with the simplex unless cfg.normalize is false) to
// cfg.c_hat. Throws EmptyUncertaintyError on an empty region and ConvergenceError
// when Frank-Wolfe exhausts fw_max_iters.
IOResult solve_io(const ObservationSet& obs, const IOConfig& cfg);

// argmin { g'c : c in region }.
using LinearOracle = std::function<Vector(const Vector& gradient)>;

// Linear-minimization oracle over U, answered through a SupportOracle. The region
// must outlive the returned function.
LinearOracle region_oracle(const UncertaintySet& u);

struct FWStep {
  Vector next;
  Vector vertex;
  double gap = 0.0;  // gradient'(current - vertex)
};

// One open-loop Frank-Wolfe step with step size 2/(t+2). A non-positive gap
// certifies optimality, in which case next == current.
FWStep fw_step(const Vector& current, const Vector& gradient, const LinearOracle& lmo, std::size_t t);

}  // namespace iorobust
