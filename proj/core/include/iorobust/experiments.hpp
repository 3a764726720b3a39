#pragma once

#include "iorobust/classical_io.hpp"
#include "iorobust/model.hpp"
#include "iorobust/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace iorobust {

enum class Method { IO_RO, ClassicalIO_c1, ClassicalIO_c2 };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);  // throws UsageError

struct ExperimentConfig {
  Eigen::Index m = 10;
  Eigen::Index n = 150;
  std::vector<std::size_t> K_values{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130};
  std::size_t L = 20;
  std::uint64_t seed = 1;
  double epsilon_hi = 1e-3;
  std::vector<Method> methods{Method::IO_RO, Method::ClassicalIO_c1, Method::ClassicalIO_c2};
  Norm io_norm = Norm::L2;
  std::size_t fw_max_iters = 5000;
  double fw_tol = 1e-6;
  // Worker threads for the evaluation fan-out; results do not depend on it.
  std::size_t jobs = 1;

  void validate() const;  // throws UsageError
  std::size_t max_K() const;
};

// Builds c_true ~ Dirichlet(1,...,1), A ~ U[-1,1], and max_K training plus L validation
// observations with b = A xbar (xbar ~ U[0,1]) and x* solving LO(A, b, c_true).
Dataset generate_dataset(const ExperimentConfig& cfg);

// Draws from the (GroundTruth, 0) stream: normalized standard exponentials.
Vector sample_dirichlet_ones(Rng& rng, Eigen::Index n);

struct ReferencePoints {
  Vector c_hat_1;  // (c + eps) / ||c + eps||_1, eps_j ~ U[0, epsilon_hi]
  Vector c_hat_2;  // (1/n) 1
};

ReferencePoints reference_points(const Vector& c_true, std::uint64_t seed, double epsilon_hi = 1e-3);

// (c'x_hat - c'x*) / c'x*; throws DataError when c'x* <= tol.
double relative_gap(const Vector& x_hat, const Vector& x_star, const Vector& c_true, double tol = 1e-12);

struct ResultRow {
  std::uint64_t seed = 0;
  std::size_t K = 0;
  Method method = Method::IO_RO;
  std::size_t l = 0;  // 1-based validation index
  double gap = 0.0;
  double solve_ms = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  // Failures that did not stop the sweep, tagged with (K, method, l).
  std::vector<std::string> failures;
};

// Runs every configured method on every validation pair, for each K in cfg.K_values,
// training on the first K observations. Rows are ordered by (K, method, l).
ExperimentResult run_sweep(const ExperimentConfig& cfg);
ExperimentResult run_sweep(const ExperimentConfig& cfg, const Dataset& data);

inline constexpr std::string_view kResultsHeader = "seed,K,method,l,gap,solve_ms";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header = true);

// Descriptive statistics used by reports and acceptance checks.
struct GapSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double worst = 0.0;
  double iqr() const { return q3 - q1; }
};

// Linear-interpolation quantiles (the "type 7" rule).
double quantile(std::vector<double> values, double p);
GapSummary summarize(const std::vector<double>& gaps);

}  // namespace iorobust
