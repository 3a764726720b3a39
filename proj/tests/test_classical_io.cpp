#include "support.hpp"

#include <iorobust/classical_io.hpp>
#include <iorobust/error.hpp>

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

IOConfig config(Norm norm, Vector c_hat) {
  IOConfig cfg;
  cfg.norm = norm;
  cfg.c_hat = std::move(c_hat);
  return cfg;
}

// Every training x_k* is optimal for LO(A, b_k, c) up to a relative objective error.
bool renders_observations_optimal(const ObservationSet& obs, const Vector& c, double tol) {
  for (const Observation& o : obs.observations()) {
    const LPSolution sol = solve_lp(obs.problem().with(o.b, c));
    if (sol.status != LPStatus::Optimal) return false;
    if (std::abs(c.dot(o.x_star) - sol.objective) > tol * (1.0 + std::abs(sol.objective))) return false;
  }
  return true;
}

double norm_of(Norm norm, const Vector& d) {
  switch (norm) {
    case Norm::L1:
      return d.lpNorm<1>();
    case Norm::LInf:
      return d.lpNorm<Eigen::Infinity>();
    case Norm::L2:
      return d.norm();
  }
  return 0.0;
}

}  // namespace

TEST_CASE("parse_norm") {
  CHECK(parse_norm("l1") == Norm::L1);
  CHECK(parse_norm("linf") == Norm::LInf);
  CHECK(parse_norm("l2") == Norm::L2);
  CHECK_THROWS_AS(parse_norm("l3"), UsageError);
}

TEST_CASE("reference point already in the region is returned") {
  for (Norm norm : {Norm::L1, Norm::LInf, Norm::L2}) {
    const IOResult r = solve_io(testing::hand_observations(), config(norm, vec({0.3, 0.7})));
    CHECK(r.c[0] == doctest::Approx(0.3));
    CHECK(r.c[1] == doctest::Approx(0.7));
    CHECK(r.objective == 0.0);
    CHECK(r.certificate_kind == Certificate::ReferenceFeasible);
  }
}

TEST_CASE("projection onto the hand segment") {
  // Region {(t, 1 - t) : t in [0, 0.5]}; (0.8, 0.2) projects to the endpoint t = 0.5.
  for (Norm norm : {Norm::L2, Norm::L1, Norm::LInf}) {
    const IOResult r = solve_io(testing::hand_observations(), config(norm, vec({0.8, 0.2})));
    CAPTURE(to_string(norm));
    CHECK(r.c[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.c[1] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.objective == doctest::Approx(norm_of(norm, vec({0.3, -0.3}))).epsilon(1e-5));
  }
}

TEST_CASE("L2 matches a dense search on two-variable instances") {
  testing::Rng rng(9, Stream::Instance);
  for (int t = 0; t < 10; ++t) {
    // A = [1 a], one observation that pins c into a segment of the simplex.
    Matrix A(1, 2);
    A << 1.0, rng.uniform(0.2, 3.0);
    ObservationSet obs(ForwardProblem{A});
    obs.add(make_observation(Vector::Ones(1), vec({1, 0})));
    const Vector c_hat = testing::uniform_vector(rng, 2);
    const IOResult r = solve_io(obs, config(Norm::L2, c_hat));
    double best = 1e300;
    for (int i = 0; i <= 20000; ++i) {
      const Vector c = vec({i / 20000.0, 1.0 - i / 20000.0});
      if (c[1] >= A(0, 1) * c[0] - 1e-12) best = std::min(best, (c - c_hat).norm());
    }
    CHECK(r.objective <= best + 1e-6);
    CHECK(r.objective >= best - 1e-4);
  }
}

TEST_CASE("estimates render every observation optimal") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Dataset data = testing::synthetic(4, 15, 6, 1, seed);
    const ObservationSet obs = data.training_set();
    for (Norm norm : {Norm::L1, Norm::LInf, Norm::L2}) {
      const IOResult r = solve_io(obs, config(norm, Vector::Constant(15, 1.0 / 15.0)));
      CAPTURE(seed);
      CAPTURE(to_string(norm));
      CHECK(renders_observations_optimal(obs, r.c, 1e-6));
      CHECK(membership(UncertaintySet{obs}, r.c, 1e-7));
      if (norm == Norm::L2) {
        CHECK(r.certificate_kind == Certificate::FrankWolfeGap);
        CHECK(r.certificate <= 1e-6);
      } else {
        CHECK(r.certificate_kind == Certificate::DualityGap);
        CHECK(r.certificate <= 1e-8);
      }
      CHECK(r.objective == doctest::Approx(norm_of(norm, r.c - Vector::Constant(15, 1.0 / 15.0))));
    }
  }
}

TEST_CASE("the L2 gap certificate bounds the suboptimality") {
  const Dataset data = testing::synthetic(3, 10, 4, 1, 5);
  const ObservationSet obs = data.training_set();
  const Vector c_hat = Vector::Constant(10, 0.1);
  IOConfig loose = config(Norm::L2, c_hat);
  loose.fw_variant = FrankWolfeVariant::OpenLoop;
  loose.fw_tol = 1e-3;
  const IOResult rough = solve_io(obs, loose);
  const IOResult exact = solve_io(obs, config(Norm::L2, c_hat));
  const double f_rough = 0.5 * rough.objective * rough.objective;
  const double f_star = 0.5 * exact.objective * exact.objective;
  CHECK(f_rough - f_star <= rough.certificate + 1e-9);
  CHECK(exact.objective <= rough.objective + 1e-9);
}

TEST_CASE("Frank-Wolfe variants agree") {
  const Dataset data = testing::synthetic(3, 8, 3, 1, 7);
  IOConfig fc = config(Norm::L2, Vector::Constant(8, 0.125));
  IOConfig ol = fc;
  ol.fw_variant = FrankWolfeVariant::OpenLoop;
  ol.fw_tol = 1e-5;
  ol.fw_max_iters = 200000;
  const IOResult a = solve_io(data.training_set(), fc);
  const IOResult b = solve_io(data.training_set(), ol);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-3));
  CHECK(a.iterations < b.iterations);
}

TEST_CASE("fw_step") {
  const UncertaintySet u{testing::hand_observations()};
  const LinearOracle lmo = region_oracle(u);
  SUBCASE("zero gradient keeps the point") {
    const Vector c = vec({0.2, 0.8});
    const FWStep step = fw_step(c, Vector::Zero(2), lmo, 0);
    CHECK(step.next == c);
    CHECK(step.gap == 0.0);
  }
  SUBCASE("objective decreases monotonically on the segment") {
    const Vector target = vec({0.9, 0.1});
    Vector c = vec({0.0, 1.0});
    double previous = (c - target).squaredNorm();
    for (std::size_t t = 1; t < 50; ++t) {
      const FWStep step = fw_step(c, c - target, lmo, t);
      const double f_now = 0.5 * (c - target).squaredNorm();
      CHECK(f_now - 0.5 * 0.32 <= step.gap + 1e-12);  // optimum at (0.5, 0.5)
      c = step.next;
      const double value = (c - target).squaredNorm();
      CHECK(value <= previous + 1e-12);
      previous = value;
    }
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-2));
  }
}

TEST_CASE("solve_io errors") {
  CHECK_THROWS_AS(solve_io(testing::hand_observations(), config(Norm::L2, vec({1, 0, 0}))), UsageError);
  CHECK_THROWS_AS(solve_io(testing::hand_observations(), config(Norm::L2, vec({-1, 2}))), UsageError);
  IOConfig unnormalized = config(Norm::L2, vec({0.8, 0.2}));
  unnormalized.normalize = false;
  CHECK_THROWS_AS(solve_io(testing::hand_observations(), unnormalized), UsageError);

  IOConfig starved = config(Norm::L2, Vector::Constant(10, 0.1));
  starved.fw_variant = FrankWolfeVariant::OpenLoop;
  starved.fw_max_iters = 2;
  starved.fw_tol = 1e-12;
  const Dataset data = testing::synthetic(3, 10, 4, 1, 5);
  CHECK_THROWS_AS(solve_io(data.training_set(), starved), ConvergenceError);

  Matrix A(1, 2);
  A << 1, -1;
  ObservationSet empty(ForwardProblem{A});
  empty.add(make_observation(vec({1}), vec({2, 1})));
  CHECK_THROWS_AS(solve_io(empty, config(Norm::L1, vec({0.5, 0.5}))), EmptyUncertaintyError);
  CHECK_THROWS_AS(solve_io(empty, config(Norm::L2, vec({0.5, 0.5}))), EmptyUncertaintyError);
}

TEST_CASE("unnormalized L1 projection onto the cone") {
  IOConfig cfg = config(Norm::L1, vec({0.8, 0.2}));
  cfg.normalize = false;
  const IOResult r = solve_io(testing::hand_observations(), cfg);
  // Cone {c : c2 >= c1}; L1 distance from (0.8, 0.2) is 0.6.
  CHECK(r.objective == doctest::Approx(0.6));
  CHECK(r.c[1] >= r.c[0] - 1e-9);
}
