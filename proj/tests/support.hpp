#pragma once
// Instance generators and independent oracles shared by the test binaries.

#include <iorobust/experiments.hpp>
#include <iorobust/lp.hpp>
#include <iorobust/model.hpp>
#include <iorobust/rng.hpp>

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace testing {

using iorobust::Matrix;
using iorobust::Rng;
using iorobust::Vector;
using Index = Eigen::Index;

inline Matrix uniform_matrix(Rng& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0) {
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = rng.uniform(lo, hi);
  return A;
}

inline Vector uniform_vector(Rng& rng, Index n, double lo = 0.0, double hi = 1.0) {
  Vector v(n);
  for (Index j = 0; j < n; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

// Feasible (b = A x0, x0 >= 0) and bounded (c = A'y0 + s0, s0 >= 0).
inline iorobust::StandardFormLP bounded_lp(Rng& rng, Index m, Index n) {
  iorobust::StandardFormLP lp;
  lp.A = uniform_matrix(rng, m, n);
  lp.b = lp.A * uniform_vector(rng, n);
  lp.c = lp.A.transpose() * uniform_vector(rng, m, -1.0, 1.0) + uniform_vector(rng, n);
  return lp;
}

// Infeasible together with a Farkas certificate y: A'y <= 0 and b'y = 1.
struct InfeasibleLP {
  iorobust::StandardFormLP lp;
  Vector farkas;
};

inline InfeasibleLP infeasible_lp(Rng& rng, Index m, Index n) {
  InfeasibleLP out;
  const Vector y = uniform_vector(rng, m, -1.0, 1.0);
  Matrix A = uniform_matrix(rng, m, n);
  for (Index j = 0; j < n; ++j) {
    const double excess = A.col(j).dot(y) + rng.uniform(0.0, 0.5);
    if (excess > 0.0) A.col(j) -= excess / y.squaredNorm() * y;
  }
  Vector b = uniform_vector(rng, m, -1.0, 1.0);
  b += (1.0 - b.dot(y)) / y.squaredNorm() * y;
  out.lp.A = A;
  out.lp.b = b;
  out.lp.c = uniform_vector(rng, n, -1.0, 1.0);
  out.farkas = y;
  return out;
}

// Feasible with a ray d >= 0, A d = 0, c'd = -1.
struct UnboundedLP {
  iorobust::StandardFormLP lp;
  Vector ray;
};

inline UnboundedLP unbounded_lp(Rng& rng, Index m, Index n) {
  UnboundedLP out;
  const Vector d = uniform_vector(rng, n, 0.1, 1.0);
  Matrix A = uniform_matrix(rng, m, n);
  for (Index i = 0; i < m; ++i) A.row(i) -= A.row(i).dot(d) / d.squaredNorm() * d.transpose();
  Vector c = uniform_vector(rng, n, -1.0, 1.0);
  c -= (c.dot(d) + 1.0) / d.squaredNorm() * d;
  out.lp.A = A;
  out.lp.b = A * uniform_vector(rng, n);
  out.lp.c = c;
  out.ray = d;
  return out;
}

// Noiseless synthetic data at arbitrary size via the experiment generator.
inline iorobust::Dataset synthetic(Index m, Index n, std::size_t K, std::size_t L, std::uint64_t seed) {
  iorobust::ExperimentConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.K_values = {K};
  cfg.L = L;
  cfg.seed = seed;
  return iorobust::generate_dataset(cfg);
}

// The hand instance: A = [1 1], one observation x* = (1, 0) at b = 1.
inline iorobust::ObservationSet hand_observations(bool with_observation = true) {
  iorobust::ObservationSet obs(iorobust::ForwardProblem{Matrix::Ones(1, 2)});
  if (with_observation) obs.add(iorobust::make_observation(Vector::Ones(1), Vector::Unit(2, 0)));
  return obs;
}

// Membership decided without an LP: when A restricted to B_k is square and
// invertible, y_k is pinned down by c_B = A_B'y_k and only s_N >= 0 remains.
// Returns nullopt when some observation does not have that shape.
inline std::optional<bool> direct_membership(const iorobust::ObservationSet& obs, const Vector& c, double tol) {
  const Matrix& A = obs.problem().A;
  for (const iorobust::Observation& o : obs.observations()) {
    if (static_cast<Index>(o.basic.size()) != A.rows()) return std::nullopt;
    Matrix AB(A.rows(), A.rows());
    Vector cB(A.rows());
    for (Index i = 0; i < A.rows(); ++i) {
      AB.col(i) = A.col(o.basic[i]);
      cB[i] = c[o.basic[i]];
    }
    Eigen::FullPivLU<Matrix> lu(AB.transpose());
    if (!lu.isInvertible()) return std::nullopt;
    const Vector y = lu.solve(cB);
    for (Index j : o.nonbasic) {
      if (c[j] - A.col(j).dot(y) < -tol) return false;
    }
  }
  return true;
}

}  // namespace testing
