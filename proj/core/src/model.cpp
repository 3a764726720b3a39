#include "iorobust/model.hpp"

#include "iorobust/error.hpp"

#include <cmath>
#include <string>

namespace iorobust {

using Index = Eigen::Index;

void ForwardProblem::validate() const {
  if (A.rows() < 1 || A.cols() < 1) throw UsageError("ForwardProblem: A must have at least one row and one column");
  if (!A.allFinite()) throw UsageError("ForwardProblem: non-finite entry in A");
}

StandardFormLP ForwardProblem::with(const Vector& b, const Vector& c) const {
  return StandardFormLP{A, b, c};
}

SupportPartition support_partition(const Vector& x_star, double tol) {
  SupportPartition part;
  for (Index j = 0; j < x_star.size(); ++j) {
    const double v = x_star[j];
    if (!std::isfinite(v) || v < -tol) {
      throw DataError("support_partition: entry " + std::to_string(j + 1) + " of x_star is negative (" +
                      std::to_string(v) + ")");
    }
    (v > tol ? part.basic : part.nonbasic).push_back(j);
  }
  return part;
}

Observation make_observation(Vector b, Vector x_star, double support_tol) {
  SupportPartition part = support_partition(x_star, support_tol);
  Observation obs;
  obs.b = std::move(b);
  obs.x_star = std::move(x_star);
  obs.is_nonbasic.assign(static_cast<std::size_t>(obs.x_star.size()), false);
  for (Index j : part.nonbasic) obs.is_nonbasic[static_cast<std::size_t>(j)] = true;
  obs.basic = std::move(part.basic);
  obs.nonbasic = std::move(part.nonbasic);
  return obs;
}

void validate_observation(const ForwardProblem& p, const Observation& obs, double tol) {
  if (obs.b.size() != p.num_rows() || obs.x_star.size() != p.num_cols()) {
    throw DataError("observation dimensions do not match the forward problem");
  }
  for (Index j = 0; j < obs.x_star.size(); ++j) {
    if (!(obs.x_star[j] >= -tol)) {
      throw DataError("observation x_star entry " + std::to_string(j + 1) + " is negative");
    }
  }
  const Vector residual = p.A * obs.x_star - obs.b;
  const double scale = 1.0 + obs.b.lpNorm<Eigen::Infinity>();
  for (Index i = 0; i < residual.size(); ++i) {
    if (!(std::abs(residual[i]) <= tol * scale)) {
      throw DataError("observation violates A x* = b on row " + std::to_string(i + 1), i);
    }
  }
}

ObservationSet::ObservationSet(ForwardProblem problem) : problem_(std::move(problem)) { problem_.validate(); }

void ObservationSet::add(Observation obs) {
  validate_observation(problem_, obs);
  observations_.push_back(std::move(obs));
}

ObservationSet ObservationSet::prefix(std::size_t k) const {
  if (k > observations_.size()) throw UsageError("ObservationSet::prefix: not enough observations");
  ObservationSet out(problem_);
  out.observations_.assign(observations_.begin(), observations_.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

ObservationSet Dataset::training_set(std::size_t k) const {
  if (k > train.size()) {
    throw UsageError("requested " + std::to_string(k) + " training observations, dataset has " +
                     std::to_string(train.size()));
  }
  ObservationSet set(problem);
  for (std::size_t i = 0; i < k; ++i) set.add(train[i]);
  return set;
}

}  // namespace iorobust
