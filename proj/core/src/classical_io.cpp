#include "iorobust/classical_io.hpp"

#include "iorobust/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace iorobust {

using Index = Eigen::Index;

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::L1:
      return "l1";
    case Norm::LInf:
      return "linf";
    case Norm::L2:
      return "l2";
  }
  return "?";
}

Norm parse_norm(std::string_view name) {
  if (name == "l1") return Norm::L1;
  if (name == "linf") return Norm::LInf;
  if (name == "l2") return Norm::L2;
  throw UsageError("unknown norm '" + std::string(name) + "' (expected l1, l2 or linf)");
}

std::string_view to_string(Certificate kind) {
  switch (kind) {
    case Certificate::ReferenceFeasible:
      return "reference_feasible";
    case Certificate::DualityGap:
      return "duality_gap";
    case Certificate::FrankWolfeGap:
      return "fw_gap";
  }
  return "?";
}

void IOConfig::validate(Index n) const {
  if (c_hat.size() != n) throw UsageError("IOConfig: reference point has length " + std::to_string(c_hat.size()) +
                                          ", expected " + std::to_string(n));
  if (!c_hat.allFinite() || (n > 0 && c_hat.minCoeff() < 0.0)) {
    throw UsageError("IOConfig: reference point must be finite and nonnegative");
  }
  if (!(fw_tol > 0.0)) throw UsageError("IOConfig: fw_tol must be positive");
  if (fw_max_iters == 0) throw UsageError("IOConfig: fw_max_iters must be positive");
  if (!normalize && norm == Norm::L2) {
    throw UsageError("IOConfig: L2 over the unnormalized cone has an unbounded oracle; enable normalization");
  }
}

namespace {

double distance(Norm norm, const Vector& d) {
  switch (norm) {
    case Norm::L1:
      return d.lpNorm<1>();
    case Norm::LInf:
      return d.size() > 0 ? d.lpNorm<Eigen::Infinity>() : 0.0;
    case Norm::L2:
      return d.norm();
  }
  return 0.0;
}

IOResult solve_epigraph(const UncertaintySet& u, const IOConfig& cfg) {
  const Index n = u.obs.num_cols();
  const bool l1 = cfg.norm == Norm::L1;
  RegionLayout layout;
  // L1: c - p + q = c_hat, min 1'(p + q).  LInf: c - t <= c_hat, c + t >= c_hat, min t.
  GeneralLP lp = region_lp(u, l1 ? 2 * n : 1, l1 ? n : 2 * n, layout);
  const Index col0 = layout.extra_col_offset;
  const Index row0 = layout.extra_row_offset;
  if (l1) {
    for (Index j = 0; j < n; ++j) {
      lp.A(row0 + j, j) = 1.0;
      lp.A(row0 + j, col0 + j) = -1.0;
      lp.A(row0 + j, col0 + n + j) = 1.0;
      lp.b[row0 + j] = cfg.c_hat[j];
    }
    lp.c.segment(col0, 2 * n).setOnes();
  } else {
    for (Index j = 0; j < n; ++j) {
      lp.A(row0 + j, j) = 1.0;
      lp.A(row0 + j, col0) = -1.0;
      lp.row_relations[row0 + j] = RowRelation::Le;
      lp.b[row0 + j] = cfg.c_hat[j];
      lp.A(row0 + n + j, j) = 1.0;
      lp.A(row0 + n + j, col0) = 1.0;
      lp.row_relations[row0 + n + j] = RowRelation::Ge;
      lp.b[row0 + n + j] = cfg.c_hat[j];
    }
    lp.c[col0] = 1.0;
  }

  const StandardForm sf = to_standard_form(lp);
  const LPSolution sol = solve_lp(sf.lp);
  if (sol.status == LPStatus::Infeasible) throw EmptyUncertaintyError("inverse-feasible region is empty");
  if (sol.status != LPStatus::Optimal) throw InternalError("norm epigraph LP is bounded below by zero yet reported unbounded");

  IOResult out;
  out.c = sf.recover.recover(sol.x).head(n);
  out.objective = distance(cfg.norm, out.c - cfg.c_hat);
  out.certificate_kind = Certificate::DualityGap;
  out.certificate = kkt_residuals(sf.lp, sol).duality_gap;
  out.iterations = sol.iterations;
  return out;
}

// Affine minimizer of ||V a - target|| subject to sum(a) = 1, V holding the active vertices.
Vector affine_minimizer(const std::vector<Vector>& vertices, const Vector& target) {
  const Index p = static_cast<Index>(vertices.size());
  Vector weights(p);
  if (p == 1) {
    weights[0] = 1.0;
    return weights;
  }
  const Index n = vertices[0].size();
  Matrix D(n, p - 1);
  for (Index i = 1; i < p; ++i) D.col(i - 1) = vertices[i] - vertices[0];
  const Vector beta = D.completeOrthogonalDecomposition().solve(target - vertices[0]);
  weights[0] = 1.0 - beta.sum();
  weights.tail(p - 1) = beta;
  return weights;
}

Vector combine(const std::vector<Vector>& vertices, const std::vector<double>& weights) {
  Vector x = Vector::Zero(vertices[0].size());
  for (std::size_t i = 0; i < vertices.size(); ++i) x += weights[i] * vertices[i];
  return x;
}

IOResult frank_wolfe_fully_corrective(const LinearOracle& lmo, const IOConfig& cfg) {
  const Vector& target = cfg.c_hat;
  std::vector<Vector> active{lmo(-target)};
  std::vector<double> lambda{1.0};
  Vector x = active[0];
  double gap = 0.0;
  constexpr double kDrop = 1e-13;

  for (std::size_t t = 0; t < cfg.fw_max_iters; ++t) {
    const Vector grad = x - target;
    Vector v = lmo(grad);
    gap = grad.dot(x - v);
    if (gap <= cfg.fw_tol) return IOResult{x, (x - target).norm(), Certificate::FrankWolfeGap, std::max(gap, 0.0), t + 1};

    const auto duplicate = std::find_if(active.begin(), active.end(), [&](const Vector& a) {
      return (a - v).lpNorm<Eigen::Infinity>() <= 1e-12;
    });
    if (duplicate != active.end()) {
      // The affine correction already used v; fall back to an exact line-search step.
      const Vector d = v - x;
      const double gamma = std::clamp(-grad.dot(d) / std::max(d.squaredNorm(), 1e-300), 0.0, 1.0);
      for (double& w : lambda) w *= 1.0 - gamma;
      lambda[static_cast<std::size_t>(duplicate - active.begin())] += gamma;
      x = combine(active, lambda);
      continue;
    }
    active.push_back(std::move(v));
    lambda.push_back(0.0);

    // Minor cycles: walk toward the affine minimizer, dropping vertices whose weight hits zero.
    for (std::size_t guard = 0; guard <= active.size() + 1; ++guard) {
      const Vector alpha = affine_minimizer(active, target);
      bool interior = true;
      for (Index i = 0; i < alpha.size(); ++i) interior = interior && alpha[i] > kDrop;
      if (interior) {
        for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = alpha[static_cast<Index>(i)];
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double a = alpha[static_cast<Index>(i)];
        if (a <= kDrop && lambda[i] - a > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[static_cast<Index>(i)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > kDrop) {
          if (keep != i) active[keep] = std::move(active[i]);
          lambda[keep] = lambda[i];
          ++keep;
        }
      }
      active.resize(keep);
      lambda.resize(keep);
      const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      for (double& w : lambda) w /= total;
    }
    x = combine(active, lambda);
  }
  throw ConvergenceError("Frank-Wolfe did not reach fw_tol within fw_max_iters (gap " + std::to_string(gap) + ")", gap);
}

IOResult frank_wolfe_open_loop(const LinearOracle& lmo, const IOConfig& cfg) {
  const Vector& target = cfg.c_hat;
  Vector x = lmo(-target);
  double gap = 0.0;
  for (std::size_t t = 0; t < cfg.fw_max_iters; ++t) {
    const FWStep step = fw_step(x, x - target, lmo, t);
    gap = step.gap;
    if (gap <= cfg.fw_tol) return IOResult{x, (x - target).norm(), Certificate::FrankWolfeGap, std::max(gap, 0.0), t + 1};
    x = step.next;
  }
  throw ConvergenceError("Frank-Wolfe did not reach fw_tol within fw_max_iters (gap " + std::to_string(gap) + ")", gap);
}

}  // namespace

LinearOracle region_oracle(const UncertaintySet& u) {
  auto oracle = std::make_shared<SupportOracle>(u);
  return [oracle](const Vector& gradient) -> Vector { return (*oracle)(-gradient).c; };
}

FWStep fw_step(const Vector& current, const Vector& gradient, const LinearOracle& lmo, std::size_t t) {
  FWStep step;
  step.vertex = lmo(gradient);
  step.gap = gradient.dot(current - step.vertex);
  if (step.gap <= 0.0) {
    step.next = current;
    return step;
  }
  const double gamma = 2.0 / (static_cast<double>(t) + 2.0);
  step.next = current + gamma * (step.vertex - current);
  return step;
}

IOResult solve_io(const ObservationSet& obs, const IOConfig& cfg) {
  cfg.validate(obs.num_cols());
  const UncertaintySet region{obs, cfg.normalize};

  if (membership(region, cfg.c_hat, 1e-9)) {
    return IOResult{cfg.c_hat, 0.0, Certificate::ReferenceFeasible, 0.0, 0};
  }
  if (cfg.norm != Norm::L2) return solve_epigraph(region, cfg);

  const LinearOracle lmo = region_oracle(region);
  IOResult out = cfg.fw_variant == FrankWolfeVariant::FullyCorrective ? frank_wolfe_fully_corrective(lmo, cfg)
                                                                      : frank_wolfe_open_loop(lmo, cfg);
  return out;
}

}  // namespace iorobust
