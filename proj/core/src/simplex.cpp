// Two-phase primal simplex on dense problem data.
//
// The basis inverse is kept explicitly (dense, row-major) and updated in
// product form after every pivot; constraint columns are packed once into
// compressed-column form so pricing and FTRAN only touch nonzeros.

#include "iorobust/error.hpp"
#include "iorobust/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iorobust {

std::string_view to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal:
      return "optimal";
    case LPStatus::Infeasible:
      return "infeasible";
    case LPStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

using Index = Eigen::Index;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr Index kNone = -1;

struct PackedColumns {
  std::vector<Index> start;
  std::vector<Index> row;
  std::vector<double> value;

  Index size() const { return static_cast<Index>(start.size()) - 1; }

  double dot(Index j, const double* v) const {
    double sum = 0.0;
    for (Index p = start[j]; p < start[j + 1]; ++p) sum += value[p] * v[row[p]];
    return sum;
  }
};

// Row-wise copy of the structural columns, used to form pivot rows.
struct PackedRows {
  std::vector<Index> start;
  std::vector<Index> col;
  std::vector<double> value;
};

void validate(const StandardFormLP& lp) {
  if (lp.b.size() != lp.A.rows() || lp.c.size() != lp.A.cols()) {
    throw UsageError("solve_lp: dimension mismatch (A is " + std::to_string(lp.A.rows()) + "x" +
                     std::to_string(lp.A.cols()) + ", b has " + std::to_string(lp.b.size()) +
                     ", c has " + std::to_string(lp.c.size()) + ")");
  }
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw UsageError("solve_lp: non-finite entry in problem data");
  }
}

class Simplex {
 public:
  Simplex(const StandardFormLP& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options), m_(lp.num_rows()), n_(lp.num_cols()) {}

  LPSolution run();

 private:
  enum class PhaseResult { Optimal, Unbounded };

  void setup();
  PhaseResult iterate(bool phase_one);
  void drive_out_artificials();
  Index choose_entering() const;
  Index ratio_test(const Vector& alpha, bool phase_one, double& theta) const;
  void pivot(Index r, Index q, const Vector& alpha, double theta, bool update_prices);
  void ftran(Index q, Vector& alpha) const;
  void compute_primal();
  void compute_duals();
  void compute_reduced_costs();
  void refresh();
  double basis_residual() const;
  void reinvert();
  void refine();
  LPSolution extract(LPStatus status) const;

  bool is_artificial(Index j) const { return j >= n_; }

  const StandardFormLP& lp_;
  SimplexOptions opt_;
  Index m_;
  Index n_;

  std::vector<double> row_sign_;
  Vector rhs_;
  PackedColumns cols_;
  PackedRows rows_;
  Vector row_alpha_;
  Vector cost_;
  std::vector<Index> basis_;
  std::vector<Index> position_;
  RowMajorMatrix binv_;
  Vector x_basic_;
  Vector y_;
  Vector reduced_;
  bool bland_ = false;
  std::size_t degenerate_run_ = 0;
  std::size_t iterations_ = 0;
  double rhs_scale_ = 1.0;
};

void Simplex::setup() {
  row_sign_.assign(static_cast<std::size_t>(m_), 1.0);
  rhs_ = lp_.b;
  for (Index i = 0; i < m_; ++i) {
    if (rhs_[i] < 0.0) {
      row_sign_[i] = -1.0;
      rhs_[i] = -rhs_[i];
    }
  }
  rhs_scale_ = 1.0 + (m_ > 0 ? rhs_.lpNorm<Eigen::Infinity>() : 0.0);

  cols_.start.assign(1, 0);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = 0; i < m_; ++i) {
      const double a = lp_.A(i, j);
      if (a != 0.0) {
        cols_.row.push_back(i);
        cols_.value.push_back(row_sign_[i] * a);
      }
    }
    cols_.start.push_back(static_cast<Index>(cols_.row.size()));
  }

  std::vector<Index> row_count(static_cast<std::size_t>(m_) + 1, 0);
  for (Index p = 0; p < static_cast<Index>(cols_.row.size()); ++p) ++row_count[cols_.row[p] + 1];
  for (Index i = 0; i < m_; ++i) row_count[i + 1] += row_count[i];
  rows_.start = row_count;
  rows_.col.resize(cols_.row.size());
  rows_.value.resize(cols_.row.size());
  for (Index j = 0; j < n_; ++j) {
    for (Index p = cols_.start[j]; p < cols_.start[j + 1]; ++p) {
      const Index slot = row_count[cols_.row[p]]++;
      rows_.col[slot] = j;
      rows_.value[slot] = cols_.value[p];
    }
  }
  row_alpha_ = Vector::Zero(n_);

  // Crash: a column with a single positive entry in row i can start basic in row i.
  basis_.assign(static_cast<std::size_t>(m_), kNone);
  std::vector<double> pivot_value(static_cast<std::size_t>(m_), 1.0);
  for (Index j = 0; j < n_; ++j) {
    if (cols_.start[j + 1] - cols_.start[j] != 1) continue;
    const Index p = cols_.start[j];
    const Index i = cols_.row[p];
    if (cols_.value[p] > 0.0 && basis_[i] == kNone) {
      basis_[i] = j;
      pivot_value[i] = cols_.value[p];
    }
  }
  Index next = n_;
  for (Index i = 0; i < m_; ++i) {
    if (basis_[i] != kNone) continue;
    cols_.row.push_back(i);
    cols_.value.push_back(1.0);
    cols_.start.push_back(static_cast<Index>(cols_.row.size()));
    basis_[i] = next++;
  }

  const Index total = cols_.size();
  position_.assign(static_cast<std::size_t>(total), kNone);
  for (Index i = 0; i < m_; ++i) position_[basis_[i]] = i;

  binv_ = RowMajorMatrix::Zero(m_, m_);
  for (Index i = 0; i < m_; ++i) binv_(i, i) = 1.0 / pivot_value[i];
  compute_primal();
}

void Simplex::compute_primal() { x_basic_ = binv_ * rhs_; }

void Simplex::compute_duals() {
  y_ = Vector::Zero(m_);
  for (Index i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb != 0.0) y_ += cb * binv_.row(i).transpose();
  }
}

void Simplex::compute_reduced_costs() {
  const Index total = cols_.size();
  reduced_ = Vector::Zero(total);
  for (Index j = 0; j < total; ++j) {
    if (position_[j] != kNone) continue;
    reduced_[j] = cost_[j] - cols_.dot(j, y_.data());
  }
}

double Simplex::basis_residual() const {
  Vector r = rhs_;
  for (Index i = 0; i < m_; ++i) {
    const Index j = basis_[i];
    for (Index p = cols_.start[j]; p < cols_.start[j + 1]; ++p) r[cols_.row[p]] -= cols_.value[p] * x_basic_[i];
  }
  return m_ > 0 ? r.lpNorm<Eigen::Infinity>() : 0.0;
}

void Simplex::reinvert() {
  if (m_ == 0) return;
  Matrix basis_matrix = Matrix::Zero(m_, m_);
  for (Index i = 0; i < m_; ++i) {
    const Index j = basis_[i];
    for (Index p = cols_.start[j]; p < cols_.start[j + 1]; ++p) basis_matrix(cols_.row[p], i) = cols_.value[p];
  }
  binv_ = basis_matrix.partialPivLu().inverse();
}

void Simplex::refresh() {
  compute_primal();
  if (basis_residual() > 1e-10 * rhs_scale_) {
    reinvert();
    compute_primal();
  }
  compute_duals();
  compute_reduced_costs();
}

// One round of iterative refinement against the packed basis columns.
void Simplex::refine() {
  if (m_ == 0) return;
  for (int round = 0; round < 2; ++round) {
    Vector r = rhs_;
    for (Index i = 0; i < m_; ++i) {
      const Index j = basis_[i];
      for (Index p = cols_.start[j]; p < cols_.start[j + 1]; ++p) r[cols_.row[p]] -= cols_.value[p] * x_basic_[i];
    }
    x_basic_ += binv_ * r;

    Vector ry(m_);
    for (Index i = 0; i < m_; ++i) ry[i] = cost_[basis_[i]] - cols_.dot(basis_[i], y_.data());
    y_ += binv_.transpose() * ry;
  }
}

void Simplex::ftran(Index q, Vector& alpha) const {
  alpha = Vector::Zero(m_);
  for (Index p = cols_.start[q]; p < cols_.start[q + 1]; ++p) alpha += cols_.value[p] * binv_.col(cols_.row[p]);
}

Index Simplex::choose_entering() const {
  Index best = kNone;
  double best_value = -opt_.optimality_tol;
  for (Index j = 0; j < n_; ++j) {
    if (position_[j] != kNone) continue;
    const double d = reduced_[j];
    if (d < best_value) {
      best = j;
      if (bland_) return best;
      best_value = d;
    }
  }
  return best;
}

Index Simplex::ratio_test(const Vector& alpha, bool phase_one, double& theta) const {
  const double ptol = opt_.pivot_tol * std::max(1.0, alpha.lpNorm<Eigen::Infinity>());
  const double ftol = opt_.feasibility_tol;
  auto bounded_both_ways = [&](Index i) { return !phase_one && is_artificial(basis_[i]); };

  if (bland_) {
    // Smallest ratio first; among the tied rows, the lowest basis index whose pivot is
    // not tiny relative to the largest tied pivot.
    double min_ratio = std::numeric_limits<double>::infinity();
    auto row_ratio = [&](Index i) -> double {
      if (bounded_both_ways(i)) return std::abs(alpha[i]) > ptol ? 0.0 : -1.0;
      return alpha[i] > ptol ? std::max(x_basic_[i], 0.0) / alpha[i] : -1.0;
    };
    for (Index i = 0; i < m_; ++i) {
      const double r = row_ratio(i);
      if (r >= 0.0) min_ratio = std::min(min_ratio, r);
    }
    if (!std::isfinite(min_ratio)) return kNone;
    double tied_max = 0.0;
    for (Index i = 0; i < m_; ++i) {
      const double r = row_ratio(i);
      if (r >= 0.0 && r <= min_ratio + ftol) tied_max = std::max(tied_max, std::abs(alpha[i]));
    }
    Index best = kNone;
    for (Index i = 0; i < m_; ++i) {
      const double r = row_ratio(i);
      if (r < 0.0 || r > min_ratio + ftol || std::abs(alpha[i]) < 1e-3 * tied_max) continue;
      if (best == kNone || basis_[i] < basis_[best]) best = i;
    }
    theta = bounded_both_ways(best) ? 0.0 : std::max(x_basic_[best] / alpha[best], 0.0);
    return best;
  }

  // Harris two-pass: relax bounds by ftol to find the step limit, then take the
  // largest pivot among rows that block within that limit.
  double limit = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m_; ++i) {
    const double a = alpha[i];
    if (bounded_both_ways(i)) {
      if (std::abs(a) > ptol) limit = std::min(limit, (std::abs(x_basic_[i]) + ftol) / std::abs(a));
    } else if (a > ptol) {
      limit = std::min(limit, (x_basic_[i] + ftol) / a);
    }
  }
  if (!std::isfinite(limit)) return kNone;

  Index best = kNone;
  double best_pivot = 0.0;
  for (Index i = 0; i < m_; ++i) {
    const double a = alpha[i];
    double ratio;
    if (bounded_both_ways(i)) {
      if (std::abs(a) <= ptol) continue;
      ratio = 0.0;
    } else if (a > ptol) {
      ratio = x_basic_[i] / a;
    } else {
      continue;
    }
    if (ratio <= limit && std::abs(a) > best_pivot) {
      best = i;
      best_pivot = std::abs(a);
    }
  }
  if (best == kNone) return kNone;
  theta = bounded_both_ways(best) ? 0.0 : std::max(x_basic_[best] / alpha[best], 0.0);
  return best;
}

void Simplex::pivot(Index r, Index q, const Vector& alpha, double theta, bool update_prices) {
  const double pivot_element = alpha[r];

  if (theta != 0.0) x_basic_ -= theta * alpha;
  x_basic_[r] = theta;

  if (update_prices) {
    const double dq = reduced_[q];
    const Vector rho = binv_.row(r).transpose();
    const double scale = dq / pivot_element;
    // Pivot row rho'A accumulated row by row, skipping the zeros of rho.
    row_alpha_.setZero();
    for (Index i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (ri == 0.0) continue;
      for (Index p = rows_.start[i]; p < rows_.start[i + 1]; ++p) row_alpha_[rows_.col[p]] += ri * rows_.value[p];
    }
    for (Index j = 0; j < n_; ++j) {
      if (position_[j] != kNone || j == q) continue;
      if (row_alpha_[j] != 0.0) reduced_[j] -= scale * row_alpha_[j];
    }
    reduced_[basis_[r]] = -scale;
    reduced_[q] = 0.0;
    y_ += scale * rho;
  }

  binv_.row(r) /= pivot_element;
  for (Index i = 0; i < m_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    binv_.row(i) -= alpha[i] * binv_.row(r);
  }

  position_[basis_[r]] = kNone;
  basis_[r] = q;
  position_[q] = r;
}

Simplex::PhaseResult Simplex::iterate(bool phase_one) {
  Vector alpha;
  bland_ = false;
  degenerate_run_ = 0;
  std::size_t since_refresh = 0;
  bool fresh = false;
  for (;;) {
    if (since_refresh >= opt_.refresh_interval) {
      refresh();
      since_refresh = 0;
    }
    const Index q = choose_entering();
    if (q == kNone) {
      // Confirm against freshly computed prices before declaring optimality.
      if (since_refresh == 0) return PhaseResult::Optimal;
      refresh();
      since_refresh = 0;
      if (choose_entering() == kNone) return PhaseResult::Optimal;
      continue;
    }
    ftran(q, alpha);
    double theta = 0.0;
    const Index r = ratio_test(alpha, phase_one, theta);
    if (r == kNone) {
      // Only trust a ray found with a fresh factorization and fresh prices.
      if (since_refresh == 0 && fresh) return PhaseResult::Unbounded;
      reinvert();
      refresh();
      since_refresh = 0;
      fresh = true;
      continue;
    }
    fresh = false;

    const bool degenerate = theta * std::abs(reduced_[q]) <= 1e-14 * (1.0 + std::abs(reduced_[q]));
    pivot(r, q, alpha, theta, true);
    ++iterations_;
    ++since_refresh;
    if (iterations_ >= opt_.max_iterations) throw InternalError("solve_lp: iteration limit reached");

    if (degenerate) {
      if (++degenerate_run_ >= opt_.stall_threshold) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }
  }
}

void Simplex::drive_out_artificials() {
  Vector alpha;
  for (Index r = 0; r < m_; ++r) {
    if (!is_artificial(basis_[r])) continue;
    const Vector rho = binv_.row(r).transpose();
    Index best = kNone;
    double best_value = 1e-7;
    for (Index j = 0; j < n_; ++j) {
      if (position_[j] != kNone) continue;
      const double v = std::abs(cols_.dot(j, rho.data()));
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    if (best == kNone) continue;  // redundant row; the artificial stays basic at zero
    ftran(best, alpha);
    pivot(r, best, alpha, x_basic_[r] / alpha[r], false);
  }
}

LPSolution Simplex::extract(LPStatus status) const {
  LPSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  if (status != LPStatus::Optimal) return sol;
  sol.x = Vector::Zero(n_);
  for (Index i = 0; i < m_; ++i) {
    if (!is_artificial(basis_[i])) sol.x[basis_[i]] = x_basic_[i];
  }
  sol.y = Vector(m_);
  for (Index i = 0; i < m_; ++i) sol.y[i] = row_sign_[i] * y_[i];
  sol.s = lp_.c - lp_.A.transpose() * sol.y;
  sol.objective = lp_.c.dot(sol.x);
  return sol;
}

LPSolution Simplex::run() {
  validate(lp_);
  setup();
  const Index total = cols_.size();

  if (total > n_) {
    cost_ = Vector::Zero(total);
    cost_.tail(total - n_).setOnes();
    compute_duals();
    compute_reduced_costs();
    iterate(true);
    compute_primal();
    double infeasibility = 0.0;
    for (Index i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) infeasibility += std::abs(x_basic_[i]);
    }
    if (infeasibility > 1e-8 * rhs_scale_) return extract(LPStatus::Infeasible);
    drive_out_artificials();
    compute_primal();
  }

  cost_ = Vector::Zero(total);
  cost_.head(n_) = lp_.c;
  compute_duals();
  compute_reduced_costs();
  if (iterate(false) == PhaseResult::Unbounded) return extract(LPStatus::Unbounded);
  compute_primal();
  compute_duals();
  refine();
  return extract(LPStatus::Optimal);
}

}  // namespace

LPSolution solve_lp(const StandardFormLP& lp, const SimplexOptions& options) {
  Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace iorobust
