#include "support.hpp"

#include <iorobust/error.hpp>
#include <iorobust/inverse_set.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace iorobust;
using testing::Index;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Explicit inequality rows M c >= 0 of C_k when A restricted to B_k is square:
// s_N = c_N - A_N' A_B^{-T} c_B.
Matrix explicit_rows(const Matrix& A, const Observation& o) {
  const Index m = A.rows();
  const Index n = A.cols();
  Matrix AB(m, m);
  for (Index i = 0; i < m; ++i) AB.col(i) = A.col(o.basic[i]);
  const Matrix T = AB.lu().solve(A);  // A_B^{-1} A
  Matrix M = Matrix::Zero(static_cast<Index>(o.nonbasic.size()), n);
  for (std::size_t r = 0; r < o.nonbasic.size(); ++r) {
    const Index j = o.nonbasic[r];
    M(static_cast<Index>(r), j) = 1.0;
    for (Index i = 0; i < m; ++i) M(static_cast<Index>(r), o.basic[i]) -= T(i, j);
  }
  return M;
}

// Vertices of { c in simplex : M c >= 0 } for n = 3 by intersecting every pair of
// boundary lines inside the plane 1'c = 1.
std::vector<Vector> brute_force_vertices(const Matrix& M, double tol) {
  const Index n = 3;
  Matrix G(M.rows() + n, n);
  G << M, Matrix::Identity(n, n);
  std::vector<Vector> vertices;
  for (Index a = 0; a < G.rows(); ++a) {
    for (Index b = a + 1; b < G.rows(); ++b) {
      Matrix S(3, 3);
      S.row(0) = G.row(a);
      S.row(1) = G.row(b);
      S.row(2) = Eigen::RowVector3d::Ones();
      Eigen::FullPivLU<Matrix> lu(S);
      if (!lu.isInvertible()) continue;
      const Vector c = lu.solve(Eigen::Vector3d(0.0, 0.0, 1.0));
      if ((G * c).minCoeff() >= -tol) vertices.push_back(c);
    }
  }
  return vertices;
}

// A random vertex of {x >= 0 : A x = b} for a 2 x 3 matrix, if b admits one.
std::optional<Vector> random_vertex(testing::Rng& rng, const Matrix& A, const Vector& b) {
  std::vector<std::pair<Index, Index>> bases{{0, 1}, {0, 2}, {1, 2}};
  std::vector<Vector> feasible;
  for (const auto& [i, j] : bases) {
    Matrix AB(2, 2);
    AB << A.col(i), A.col(j);
    if (std::abs(AB.determinant()) < 1e-6) continue;
    const Vector xb = AB.lu().solve(b);
    if (xb.minCoeff() < 1e-6) continue;  // keep the vertex nondegenerate
    Vector x = Vector::Zero(3);
    x[i] = xb[0];
    x[j] = xb[1];
    feasible.push_back(x);
  }
  if (feasible.empty()) return std::nullopt;
  return feasible[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(feasible.size()) - 1))];
}

}  // namespace

TEST_CASE("membership on the hand instance") {
  const UncertaintySet u{testing::hand_observations()};
  CHECK(membership(u, vec({0.3, 0.7}), 1e-9));
  CHECK(membership(u, vec({0.5, 0.5}), 1e-9));
  CHECK_FALSE(membership(u, vec({0.7, 0.3}), 1e-9));
  const MembershipReport report = membership_report(u, vec({0.7, 0.3}), 1e-9);
  CHECK_FALSE(report.member);
  REQUIRE(report.first_excluding);
  CHECK(*report.first_excluding == 0);
  CHECK(report.violation[0] == doctest::Approx(0.2));
  // Off the simplex.
  CHECK_FALSE(membership(u, vec({0.6, 1.4}), 1e-9));
  CHECK(membership(UncertaintySet{testing::hand_observations(), false}, vec({0.6, 1.4}), 1e-9));
}

TEST_CASE("membership with no observations is the simplex") {
  const UncertaintySet u{testing::hand_observations(false)};
  CHECK(membership(u, vec({0.5, 0.5}), 1e-9));
  CHECK_FALSE(membership(u, vec({-0.5, 1.5}), 1e-9));
  CHECK_THROWS_AS(membership(u, vec({1, 0, 0}), 1e-9), UsageError);
}

TEST_CASE("is_empty") {
  SUBCASE("noiseless synthetic data") {
    const Dataset data = testing::synthetic(4, 12, 6, 1, 3);
    CHECK_FALSE(is_empty(UncertaintySet{data.training_set()}));
  }
  SUBCASE("opposite supports on two variables") {
    ObservationSet obs = testing::hand_observations();
    obs.add(make_observation(vec({1}), vec({0, 1})));
    const UncertaintySet u{obs};
    CHECK_FALSE(is_empty(u));
    CHECK(membership(u, vec({0.5, 0.5}), 1e-9));
    CHECK_FALSE(membership(u, vec({0.4, 0.6}), 1e-9));
  }
  SUBCASE("agrees with brute-force vertex enumeration on 2 x 3 instances") {
    int nonempty_seen = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      testing::Rng rng(seed, Stream::Instance);
      const Matrix A = testing::uniform_matrix(rng, 2, 3);
      ObservationSet obs(ForwardProblem{A});
      Matrix M(0, 3);
      for (int k = 0; k < 2; ++k) {
        const Vector b = A * testing::uniform_vector(rng, 3);
        const auto x = random_vertex(rng, A, b);
        if (!x) break;
        obs.add(make_observation(b, *x));
        const Matrix Mk = explicit_rows(A, obs.observations().back());
        Matrix next(M.rows() + Mk.rows(), 3);
        next << M, Mk;
        M = next;
      }
      if (obs.size() < 2) continue;
      CAPTURE(seed);
      const std::vector<Vector> vertices = brute_force_vertices(M, 1e-10);
      const UncertaintySet u{obs};
      CHECK(is_empty(u) == vertices.empty());
      if (vertices.empty()) {
        CHECK_THROWS_AS(support_value(u, vec({1, 2, 3})), EmptyUncertaintyError);
        CHECK_THROWS_AS(support_value_dual(u, vec({1, 2, 3})), EmptyUncertaintyError);
        continue;
      }
      ++nonempty_seen;
      const Vector x = testing::uniform_vector(rng, 3, -1.0, 1.0);
      double best = -1e300;
      for (const Vector& v : vertices) best = std::max(best, v.dot(x));
      CHECK(support_value(u, x).value == doctest::Approx(best).epsilon(1e-9));
      CHECK(support_value_dual(u, x).value == doctest::Approx(best).epsilon(1e-9));
    }
    CHECK(nonempty_seen > 0);
  }
}

TEST_CASE("support_value on small instances") {
  SUBCASE("no observations: largest coordinate") {
    const UncertaintySet u{testing::hand_observations(false)};
    const SupportValue sv = support_value(u, vec({0.2, 0.9}));
    CHECK(sv.value == doctest::Approx(0.9));
    CHECK(sv.c[1] == doctest::Approx(1.0));
  }
  SUBCASE("hand instance, x = (0, 1)") {
    const UncertaintySet u{testing::hand_observations()};
    const SupportValue sv = support_value(u, vec({0, 1}));
    CHECK(sv.value == doctest::Approx(1.0));
    CHECK(sv.c[0] == doctest::Approx(0.0));
    CHECK(sv.c[1] == doctest::Approx(1.0));
    CHECK(support_value_dual(u, vec({0, 1})).value == doctest::Approx(1.0));
  }
  SUBCASE("hand instance, x = (1, 0)") {
    const UncertaintySet u{testing::hand_observations()};
    const SupportValue sv = support_value(u, vec({1, 0}));
    CHECK(sv.value == doctest::Approx(0.5));
    CHECK(sv.c[0] == doctest::Approx(0.5));
    CHECK(sv.c[1] == doctest::Approx(0.5));
    const SupportValue dual = support_value_dual(u, vec({1, 0}));
    CHECK(dual.value == doctest::Approx(0.5));
    CHECK(membership(u, dual.c, 1e-8));
  }
  SUBCASE("hand instance matches a dense scan of the segment") {
    const UncertaintySet u{testing::hand_observations()};
    testing::Rng rng(4, Stream::Instance);
    for (int t = 0; t < 10; ++t) {
      const Vector x = testing::uniform_vector(rng, 2, -1.0, 1.0);
      double best = -1e300;
      for (int i = 0; i <= 1000; ++i) {
        const double c1 = 0.5 * i / 1000.0;
        best = std::max(best, c1 * x[0] + (1.0 - c1) * x[1]);
      }
      CHECK(support_value(u, x).value == doctest::Approx(best).epsilon(1e-9));
    }
  }
  SUBCASE("requires the normalized set") {
    CHECK_THROWS_AS(support_value(UncertaintySet{testing::hand_observations(), false}, vec({1, 0})), UsageError);
  }
}

TEST_CASE("support value bounds every member") {
  const Dataset data = testing::synthetic(3, 9, 4, 1, 21);
  const UncertaintySet u{data.training_set()};
  testing::Rng rng(8, Stream::Instance);
  for (int t = 0; t < 10; ++t) {
    const Vector x = testing::uniform_vector(rng, 9, -1.0, 1.0);
    const SupportValue sv = support_value(u, x);
    CHECK(membership(u, sv.c, 1e-7));
    CHECK(sv.c.dot(x) == doctest::Approx(sv.value).epsilon(1e-8));
    CHECK(sv.value >= data.truth->c_true.dot(x) - 1e-7);
    // Any other direction's maximizer is a member too.
    const SupportValue other = support_value_dual(u, testing::uniform_vector(rng, 9, -1.0, 1.0));
    CHECK(sv.value >= other.c.dot(x) - 1e-7);
  }
}

TEST_CASE("ground truth lies in the set at every prefix") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset data = testing::synthetic(5, 20, 12, 1, seed);
    for (std::size_t K = 0; K <= 12; K += 3) {
      CHECK(membership(UncertaintySet{data.training_set(K)}, data.truth->c_true, 1e-7));
    }
  }
}

TEST_CASE("membership agrees with the direct oracle") {
  const Dataset data = testing::synthetic(3, 8, 3, 1, 6);
  const ObservationSet obs = data.training_set();
  const UncertaintySet u{obs, false};
  testing::Rng rng(12, Stream::Instance);
  int members = 0;
  for (int t = 0; t < 200; ++t) {
    // Mix of points near the truth and random points.
    Vector c = data.truth->c_true + 0.02 * testing::uniform_vector(rng, 8, -1.0, 1.0);
    if (t % 2) c = testing::uniform_vector(rng, 8);
    const auto direct = testing::direct_membership(obs, c, 1e-9);
    REQUIRE(direct);
    CHECK(membership(u, c, 1e-9) == *direct);
    members += *direct ? 1 : 0;
  }
  CHECK(members > 0);
}

TEST_CASE("the unnormalized set is a cone") {
  const Dataset data = testing::synthetic(3, 8, 3, 1, 2);
  const UncertaintySet cone{data.training_set(), false};
  const Vector c = data.truth->c_true;
  REQUIRE(membership(cone, c, 1e-9));
  CHECK(membership(cone, 0.5 * c, 1e-9));
  CHECK(membership(cone, 2.0 * c, 1e-9));
  CHECK(membership(cone, Vector::Zero(8), 1e-9));
}

TEST_CASE("adding observations shrinks the set") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Dataset data = testing::synthetic(3, 10, 6, 1, seed);
    const UncertaintySet small{data.training_set(2)};
    const UncertaintySet large{data.training_set(6)};
    testing::Rng rng(seed, Stream::Instance);
    for (int t = 0; t < 5; ++t) {
      const Vector d = testing::uniform_vector(rng, 10, -1.0, 1.0);
      const SupportValue big = support_value(large, d);
      CHECK(big.value <= support_value(small, d).value + 1e-7);
      CHECK(membership(small, big.c, 1e-7));
    }
  }
}

TEST_CASE("parametrize_cone describes { xi : A xi = 0, xi >= 0 on N }") {
  testing::Rng rng(30, Stream::Instance);
  for (int t = 0; t < 20; ++t) {
    const Index m = rng.integer(1, 4);
    const Index n = m + rng.integer(1, 6);
    const StandardFormLP lp = testing::bounded_lp(rng, m, n);
    const Matrix& A = lp.A;
    Vector x = solve_lp(lp).x;
    // Every third case drops one support entry so that B_k is smaller than m.
    if (t % 3 == 0) {
      for (Index j = 0; j < n; ++j) {
        if (x[j] > 1e-8) {
          x[j] = 0.0;
          break;
        }
      }
    }
    const Observation obs = make_observation(A * x, x);
    const ConeParametrization cone = parametrize_cone(A, obs);
    CAPTURE(t);
    REQUIRE(cone.map.rows() == n);
    REQUIRE(static_cast<std::size_t>(cone.map.cols()) == cone.signs.size());
    CHECK(cone.residual.cols() == cone.map.cols());
    CHECK(cone.residual.rows() == m - std::min<Index>(m, static_cast<Index>(obs.basic.size())));
    // Nonbasic coordinates are carried through untouched and sign-constrained.
    for (std::size_t i = 0; i < obs.nonbasic.size(); ++i) {
      CHECK(cone.map(obs.nonbasic[i], static_cast<Index>(i)) == 1.0);
      CHECK(cone.signs[i] == VarSign::NonNegative);
    }
    // Every w in the residual kernel lands in the null space of A.
    Eigen::FullPivLU<Matrix> lu(cone.residual.rows() > 0 ? cone.residual : Matrix::Zero(1, cone.map.cols()));
    const Matrix kernel = lu.kernel();
    for (Index c = 0; c < kernel.cols(); ++c) CHECK((A * cone.map * kernel.col(c)).norm() <= 1e-9);
  }
}

TEST_CASE("SupportOracle repeats support_value_dual") {
  const Dataset data = testing::synthetic(4, 12, 5, 1, 17);
  const UncertaintySet u{data.training_set()};
  SupportOracle oracle(u);
  testing::Rng rng(3, Stream::Instance);
  for (int t = 0; t < 6; ++t) {
    const Vector x = testing::uniform_vector(rng, 12, -1.0, 1.0);
    CHECK(oracle(x).value == doctest::Approx(support_value(u, x).value).epsilon(1e-9));
  }
}
