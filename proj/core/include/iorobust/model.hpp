#pragma once

#include "iorobust/lp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace iorobust {

inline constexpr double kSupportTol = 1e-8;
inline constexpr double kObservationTol = 1e-7;

using IndexSet = std::vector<Eigen::Index>;

// Lower-level problem  min c'x  s.t.  Ax = b, x >= 0  with c >= 0 unknown.
struct ForwardProblem {
  Matrix A;

  Eigen::Index num_rows() const { return A.rows(); }
  Eigen::Index num_cols() const { return A.cols(); }
  void validate() const;
  StandardFormLP with(const Vector& b, const Vector& c) const;
};

struct SupportPartition {
  IndexSet basic;     // x_j > tol
  IndexSet nonbasic;  // x_j <= tol
};

// Throws DataError if some entry is below -tol.
SupportPartition support_partition(const Vector& x_star, double tol = kSupportTol);

struct Observation {
  Vector b;
  Vector x_star;
  IndexSet basic;
  IndexSet nonbasic;
  // Membership mask of nonbasic, length n.
  std::vector<bool> is_nonbasic;
};

Observation make_observation(Vector b, Vector x_star, double support_tol = kSupportTol);

// Primal feasibility only: A x* = b and x* >= -tol. Throws DataError naming the violated row.
void validate_observation(const ForwardProblem& p, const Observation& obs, double tol = kObservationTol);

class ObservationSet {
 public:
  explicit ObservationSet(ForwardProblem problem);

  const ForwardProblem& problem() const { return problem_; }
  const std::vector<Observation>& observations() const { return observations_; }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }
  Eigen::Index num_rows() const { return problem_.num_rows(); }
  Eigen::Index num_cols() const { return problem_.num_cols(); }

  // Validates against the problem before appending.
  void add(Observation obs);
  // The first k observations, in insertion order.
  ObservationSet prefix(std::size_t k) const;

 private:
  ForwardProblem problem_;
  std::vector<Observation> observations_;
};

struct GroundTruth {
  Vector c_true;
};

// Entry point shared by the dataset file format and the experiment harness.
struct Dataset {
  ForwardProblem problem;
  std::vector<Observation> train;
  std::vector<Observation> validation;
  std::optional<GroundTruth> truth;
  std::optional<std::uint64_t> seed;

  ObservationSet training_set(std::size_t k) const;
  ObservationSet training_set() const { return training_set(train.size()); }
};

}  // namespace iorobust
