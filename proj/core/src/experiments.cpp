#include "iorobust/experiments.hpp"

#include "iorobust/error.hpp"
#include "iorobust/robust.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

namespace iorobust {

using Index = Eigen::Index;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::IO_RO:
      return "IO_RO";
    case Method::ClassicalIO_c1:
      return "ClassicalIO_c1";
    case Method::ClassicalIO_c2:
      return "ClassicalIO_c2";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::IO_RO, Method::ClassicalIO_c1, Method::ClassicalIO_c2}) {
    if (name == to_string(m)) return m;
  }
  throw UsageError("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (m < 1 || n <= m) throw UsageError("experiment: need n > m >= 1");
  if (L < 1) throw UsageError("experiment: L must be at least 1");
  if (K_values.empty()) throw UsageError("experiment: K_values must be nonempty");
  for (std::size_t i = 1; i < K_values.size(); ++i) {
    if (K_values[i] <= K_values[i - 1]) throw UsageError("experiment: K_values must be strictly ascending");
  }
  if (methods.empty()) throw UsageError("experiment: no methods selected");
  if (!(epsilon_hi >= 0.0) || !std::isfinite(epsilon_hi)) throw UsageError("experiment: epsilon_hi must be >= 0");
  if (jobs < 1) throw UsageError("experiment: jobs must be at least 1");
}

std::size_t ExperimentConfig::max_K() const { return K_values.empty() ? 0 : K_values.back(); }

Vector sample_dirichlet_ones(Rng& rng, Index n) {
  Vector c(n);
  for (Index j = 0; j < n; ++j) c[j] = rng.exponential();
  return c / c.sum();
}

namespace {

constexpr int kMaxRegenerations = 5;

Observation draw_observation(const Matrix& A, const Vector& c_true, Rng rng) {
  const Index n = A.cols();
  for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
    Vector xbar(n);
    for (Index j = 0; j < n; ++j) xbar[j] = rng.uniform();
    Vector b = A * xbar;
    const LPSolution sol = solve_lp(StandardFormLP{A, b, c_true});
    if (sol.status == LPStatus::Optimal) return make_observation(std::move(b), sol.x);
  }
  throw DataError("forward LP failed on every regenerated right-hand side");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void run_tasks(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (std::thread& t : workers) t.join();
}

}  // namespace

Dataset generate_dataset(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset data;
  data.seed = cfg.seed;

  Rng matrix_rng(cfg.seed, Stream::ConstraintMatrix);
  Matrix A(cfg.m, cfg.n);
  for (Index i = 0; i < cfg.m; ++i) {
    for (Index j = 0; j < cfg.n; ++j) A(i, j) = matrix_rng.uniform(-1.0, 1.0);
  }
  data.problem.A = A;

  Rng truth_rng(cfg.seed, Stream::GroundTruth);
  const Vector c_true = sample_dirichlet_ones(truth_rng, cfg.n);
  data.truth = GroundTruth{c_true};

  const std::size_t K = cfg.max_K();
  data.train.reserve(K);
  for (std::size_t k = 0; k < K; ++k) data.train.push_back(draw_observation(A, c_true, Rng(cfg.seed, Stream::TrainPoint, k)));
  data.validation.reserve(cfg.L);
  for (std::size_t l = 0; l < cfg.L; ++l) {
    data.validation.push_back(draw_observation(A, c_true, Rng(cfg.seed, Stream::ValidationPoint, l)));
  }
  return data;
}

ReferencePoints reference_points(const Vector& c_true, std::uint64_t seed, double epsilon_hi) {
  const Index n = c_true.size();
  Rng rng(seed, Stream::ReferenceNoise);
  Vector perturbed(n);
  for (Index j = 0; j < n; ++j) perturbed[j] = c_true[j] + rng.uniform(0.0, epsilon_hi);
  ReferencePoints out;
  out.c_hat_1 = perturbed / perturbed.lpNorm<1>();
  out.c_hat_2 = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return out;
}

double relative_gap(const Vector& x_hat, const Vector& x_star, const Vector& c_true, double tol) {
  const double optimal = c_true.dot(x_star);
  if (!(optimal > tol)) throw DataError("relative_gap: c'x* is not positive (" + std::to_string(optimal) + ")");
  return (c_true.dot(x_hat) - optimal) / optimal;
}

ExperimentResult run_sweep(const ExperimentConfig& cfg) { return run_sweep(cfg, generate_dataset(cfg)); }

ExperimentResult run_sweep(const ExperimentConfig& cfg, const Dataset& data) {
  cfg.validate();
  if (!data.truth) throw UsageError("run_sweep: dataset has no ground truth");
  if (data.train.size() < cfg.max_K()) throw UsageError("run_sweep: dataset has fewer training observations than max K");
  if (data.validation.size() < cfg.L) throw UsageError("run_sweep: dataset has fewer validation pairs than L");

  const Vector& c_true = data.truth->c_true;
  const ReferencePoints refs = reference_points(c_true, cfg.seed, cfg.epsilon_hi);
  const std::size_t L = cfg.L;
  const std::size_t M = cfg.methods.size();

  // One task per (K, method); each fills L consecutive row slots.
  const std::size_t tasks = cfg.K_values.size() * M;
  std::vector<ResultRow> rows(tasks * L);
  std::vector<std::vector<std::string>> failures(tasks);

  run_tasks(tasks, cfg.jobs, [&](std::size_t task) {
    const std::size_t K = cfg.K_values[task / M];
    const Method method = cfg.methods[task % M];
    const ObservationSet train = data.training_set(K);
    auto tag = [&](std::size_t l) {
      return "K=" + std::to_string(K) + " method=" + std::string(to_string(method)) +
             (l > 0 ? " l=" + std::to_string(l) : std::string());
    };
    auto slot = [&](std::size_t l) -> ResultRow& { return rows[task * L + l]; };
    for (std::size_t l = 0; l < L; ++l) slot(l) = ResultRow{cfg.seed, K, method, l + 1, std::nan(""), 0.0};

    if (method == Method::IO_RO) {
      for (std::size_t l = 0; l < L; ++l) {
        const Observation& val = data.validation[l];
        try {
          const auto start = std::chrono::steady_clock::now();
          const RobustSolution sol = solve_rlo(train, val.b, RobustOptions{false});
          slot(l).solve_ms = elapsed_ms(start);
          slot(l).gap = relative_gap(sol.x, val.x_star, c_true);
        } catch (const Error& e) {
          failures[task].push_back(tag(l + 1) + ": " + e.what());
        }
      }
      return;
    }

    IOConfig io;
    io.norm = cfg.io_norm;
    io.c_hat = method == Method::ClassicalIO_c1 ? refs.c_hat_1 : refs.c_hat_2;
    io.fw_max_iters = cfg.fw_max_iters;
    io.fw_tol = cfg.fw_tol;
    Vector c_io;
    double estimate_ms = 0.0;
    try {
      const auto start = std::chrono::steady_clock::now();
      c_io = solve_io(train, io).c;
      estimate_ms = elapsed_ms(start);
    } catch (const Error& e) {
      failures[task].push_back(tag(0) + ": " + e.what());
      return;
    }
    // The one-off estimation time is spread evenly over the L rows it serves.
    for (std::size_t l = 0; l < L; ++l) {
      const Observation& val = data.validation[l];
      try {
        const auto start = std::chrono::steady_clock::now();
        const LPSolution sol = solve_lp(data.problem.with(val.b, c_io));
        slot(l).solve_ms = elapsed_ms(start) + estimate_ms / static_cast<double>(L);
        if (sol.status != LPStatus::Optimal) {
          throw InternalError("forward LP with c_IO is " + std::string(to_string(sol.status)));
        }
        slot(l).gap = relative_gap(sol.x, val.x_star, c_true);
      } catch (const Error& e) {
        failures[task].push_back(tag(l + 1) + ": " + e.what());
      }
    }
  });

  ExperimentResult result;
  for (std::size_t task = 0; task < tasks; ++task) {
    for (std::size_t l = 0; l < L; ++l) {
      const ResultRow& row = rows[task * L + l];
      if (!std::isnan(row.gap)) result.rows.push_back(row);
    }
    for (std::string& f : failures[task]) result.failures.push_back(std::move(f));
  }
  return result;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header) {
  if (header) out << kResultsHeader << '\n';
  char buffer[128];
  for (const ResultRow& r : rows) {
    std::snprintf(buffer, sizeof buffer, "%.17g,%.3f", r.gap, r.solve_ms);
    out << r.seed << ',' << r.K << ',' << to_string(r.method) << ',' << r.l << ',' << buffer << '\n';
  }
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw UsageError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

GapSummary summarize(const std::vector<double>& gaps) {
  GapSummary s;
  s.median = quantile(gaps, 0.5);
  s.q1 = quantile(gaps, 0.25);
  s.q3 = quantile(gaps, 0.75);
  s.worst = *std::max_element(gaps.begin(), gaps.end());
  return s;
}

}  // namespace iorobust
