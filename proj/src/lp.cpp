#include "polyvol/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polyvol {

namespace {

double nonbasic_start(double lo, double hi) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(hi)) return hi;
  return 0.0;
}

}  // namespace

void LpProblem::validate() const {
  const auto n = objective.size();
  if (a_eq.cols() != n || lower.size() != n || upper.size() != n || b_eq.size() != a_eq.rows())
    throw std::invalid_argument("LpProblem: inconsistent dimensions");
  if (!b_eq.allFinite()) throw std::invalid_argument("LpProblem: b_eq must be finite");
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(lower[j] <= upper[j])) throw std::invalid_argument("LpProblem: lower bound exceeds upper bound");
}

void SimplexSolver::load(const LpProblem& problem) {
  problem.validate();
  m_ = problem.num_rows();
  n_ = problem.num_vars();
  total_ = n_ + m_;

  tableau_.resize(m_, total_);
  tableau_.leftCols(n_) = problem.a_eq;
  tableau_.rightCols(m_).setIdentity();
  beta_ = problem.b_eq;

  lo_.resize(total_);
  hi_.resize(total_);
  x_.resize(total_);
  lo_.head(n_) = problem.lower;
  hi_.head(n_) = problem.upper;
  lo_.tail(m_).setZero();
  hi_.tail(m_).setConstant(kInf);
  for (Eigen::Index j = 0; j < n_; ++j) x_[j] = nonbasic_start(lo_[j], hi_[j]);
  x_.tail(m_).setZero();

  basis_.assign(static_cast<size_t>(m_), -1);
  row_of_.assign(static_cast<size_t>(total_), -1);
}

void SimplexSolver::pivot(Eigen::Index row, Eigen::Index col) {
  const double piv = tableau_(row, col);
  tableau_.row(row) /= piv;
  beta_[row] /= piv;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (i == row) continue;
    const double f = tableau_(i, col);
    if (f == 0.0) continue;
    tableau_.row(i) -= f * tableau_.row(row);
    beta_[i] -= f * beta_[row];
    tableau_(i, col) = 0.0;
  }
  tableau_(row, col) = 1.0;
  const int leaving = basis_[static_cast<size_t>(row)];
  if (leaving >= 0) row_of_[static_cast<size_t>(leaving)] = -1;
  basis_[static_cast<size_t>(row)] = static_cast<int>(col);
  row_of_[static_cast<size_t>(col)] = static_cast<int>(row);
}

void SimplexSolver::refresh_basic_values() {
  Vector nonbasic = x_;
  for (int b : basis_)
    if (b >= 0) nonbasic[b] = 0.0;
  const Vector implied = beta_ - tableau_ * nonbasic;
  for (Eigen::Index i = 0; i < m_; ++i) {
    const int b = basis_[static_cast<size_t>(i)];
    if (b >= 0) x_[b] = implied[i];
  }
}

bool SimplexSolver::basic_values_feasible() const {
  for (int b : basis_) {
    if (b < 0) return false;
    if (x_[b] < lo_[b] - kFeasibilityTol || x_[b] > hi_[b] + kFeasibilityTol) return false;
  }
  return true;
}

LpStatus SimplexSolver::iterate(const Vector& cost, int& iterations) {
  const long dantzig_budget = 5L * static_cast<long>(m_ + n_);
  const long cap = 200L * static_cast<long>(m_ + total_) + 2000L;
  long local = 0;
  Vector basic_cost(m_);

  for (;;) {
    if (local > cap) {
      std::ostringstream msg;
      msg << "simplex: iteration cap " << cap << " exceeded";
      throw NumericError(msg.str());
    }
    const Pricing pricing = local < dantzig_budget ? Pricing::dantzig : Pricing::bland;
    if (local > 0 && local % 64 == 0) refresh_basic_values();

    for (Eigen::Index i = 0; i < m_; ++i) basic_cost[i] = cost[basis_[static_cast<size_t>(i)]];
    const Vector reduced = cost - tableau_.transpose() * basic_cost;

    Eigen::Index entering = -1;
    int direction = 0;
    double best = 0.0;
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (row_of_[static_cast<size_t>(j)] >= 0 || !(lo_[j] < hi_[j])) continue;
      const double d = reduced[j];
      int dir = 0;
      if (d < -kOptimalityTol && x_[j] < hi_[j] - kFeasibilityTol) dir = 1;
      else if (d > kOptimalityTol && x_[j] > lo_[j] + kFeasibilityTol) dir = -1;
      if (dir == 0) continue;
      if (pricing == Pricing::bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        direction = dir;
      }
    }
    if (entering < 0) {
      refresh_basic_values();
      return LpStatus::optimal;
    }

    Eigen::Index leave_row = -1;
    double theta = kInf;
    double leave_mag = 0.0;
    bool leave_to_upper = false;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double a = tableau_(i, entering);
      if (std::abs(a) <= kPivotTol) continue;
      const int b = basis_[static_cast<size_t>(i)];
      const double rate = -direction * a;
      double limit = kInf;
      bool to_upper = false;
      if (rate < 0.0) {
        if (std::isfinite(lo_[b])) limit = (x_[b] - lo_[b]) / -rate;
      } else {
        if (std::isfinite(hi_[b])) {
          limit = (hi_[b] - x_[b]) / rate;
          to_upper = true;
        }
      }
      if (!std::isfinite(limit)) continue;
      limit = std::max(limit, 0.0);
      bool take = false;
      if (limit < theta - 1e-12) {
        take = true;
      } else if (limit <= theta + 1e-12 && leave_row >= 0) {
        if (pricing == Pricing::bland)
          take = b < basis_[static_cast<size_t>(leave_row)];
        else
          take = std::abs(a) > leave_mag;
      }
      if (take) {
        theta = limit;
        leave_row = i;
        leave_mag = std::abs(a);
        leave_to_upper = to_upper;
      }
    }

    const double flip = hi_[entering] - lo_[entering];
    ++local;
    ++iterations;
    if (std::isfinite(flip) && flip <= theta) {
      for (Eigen::Index i = 0; i < m_; ++i)
        x_[basis_[static_cast<size_t>(i)]] -= direction * flip * tableau_(i, entering);
      x_[entering] = direction > 0 ? hi_[entering] : lo_[entering];
      continue;
    }
    if (leave_row < 0) return LpStatus::unbounded;

    for (Eigen::Index i = 0; i < m_; ++i)
      x_[basis_[static_cast<size_t>(i)]] -= direction * theta * tableau_(i, entering);
    x_[entering] += direction * theta;
    const int leaving = basis_[static_cast<size_t>(leave_row)];
    x_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
    pivot(leave_row, entering);
  }
}

LpSolution SimplexSolver::finish(LpStatus status, const Vector& cost, int iterations) const {
  LpSolution out;
  out.status = status;
  out.iterations = iterations;
  out.point = x_.head(n_);
  out.objective_value = cost.head(n_).dot(out.point);
  out.basis = basis_;
  return out;
}

LpSolution SimplexSolver::solve(const LpProblem& problem) {
  load(problem);

  // Residual left for the rows once every structural variable sits at its
  // starting bound.
  Vector residual = beta_ - problem.a_eq * x_.head(n_);

  // Crash basis: a column with a single nonzero can absorb its row's residual
  // without an artificial (slack columns of inequality rows, typically).
  std::vector<int> nnz(static_cast<size_t>(n_), 0);
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index i = 0; i < m_; ++i)
      if (problem.a_eq(i, j) != 0.0) ++nnz[static_cast<size_t>(j)];

  for (Eigen::Index i = 0; i < m_; ++i) {
    Eigen::Index chosen = -1;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (nnz[static_cast<size_t>(j)] != 1 || row_of_[static_cast<size_t>(j)] >= 0) continue;
      const double a = problem.a_eq(i, j);
      if (std::abs(a) <= kPivotTol) continue;
      const double value = x_[j] + residual[i] / a;
      if (value >= lo_[j] - kFeasibilityTol && value <= hi_[j] + kFeasibilityTol) {
        chosen = j;
        break;
      }
    }
    const Eigen::Index art = n_ + i;
    if (chosen >= 0) {
      x_[chosen] = std::clamp(x_[chosen] + residual[i] / problem.a_eq(i, chosen), lo_[chosen], hi_[chosen]);
      hi_[art] = 0.0;
      pivot(i, chosen);
    } else {
      if (residual[i] < 0.0) {
        tableau_.row(i).head(n_) *= -1.0;
        beta_[i] = -beta_[i];
      }
      basis_[static_cast<size_t>(i)] = static_cast<int>(art);
      row_of_[static_cast<size_t>(art)] = static_cast<int>(i);
      x_[art] = std::abs(residual[i]);
    }
  }
  refresh_basic_values();

  int iterations = 0;
  phase_cost_ = Vector::Zero(total_);
  bool needs_phase_one = false;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (basis_[static_cast<size_t>(i)] >= n_) {
      needs_phase_one = true;
    }
  }
  if (needs_phase_one) {
    phase_cost_.tail(m_).setOnes();
    iterate(phase_cost_, iterations);
    const double infeasibility = x_.tail(m_).sum();
    const double scale = std::max(1.0, problem.b_eq.lpNorm<Eigen::Infinity>());
    if (infeasibility > kFeasibilityTol * scale) {
      Vector c = Vector::Zero(total_);
      c.head(n_) = problem.objective;
      return finish(LpStatus::infeasible, c, iterations);
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<size_t>(i)] < n_) continue;
      Eigen::Index best = -1;
      double mag = 1e-9;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (row_of_[static_cast<size_t>(j)] >= 0) continue;
        if (std::abs(tableau_(i, j)) > mag) {
          mag = std::abs(tableau_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        x_[basis_[static_cast<size_t>(i)]] = 0.0;
        pivot(i, best);
      }
    }
    for (Eigen::Index j = n_; j < total_; ++j) {
      hi_[j] = 0.0;
      if (row_of_[static_cast<size_t>(j)] < 0) x_[j] = 0.0;
    }
    refresh_basic_values();
  }

  Vector cost = Vector::Zero(total_);
  cost.head(n_) = problem.objective;
  const LpStatus status = iterate(cost, iterations);
  return finish(status, cost, iterations);
}

bool SimplexSolver::install_basis(const std::vector<int>& basis, const Vector& point) {
  if (static_cast<Eigen::Index>(basis.size()) != m_ || point.size() != n_) return false;
  for (Eigen::Index j = n_; j < total_; ++j) hi_[j] = 0.0;

  std::vector<char> listed(static_cast<size_t>(total_), 0);
  for (int b : basis) {
    if (b < 0 || b >= total_ || listed[static_cast<size_t>(b)]) return false;
    listed[static_cast<size_t>(b)] = 1;
  }
  for (Eigen::Index j = 0; j < n_; ++j) {
    if (listed[static_cast<size_t>(j)]) continue;
    const double v = point[j];
    const bool lo_ok = std::isfinite(lo_[j]);
    const bool hi_ok = std::isfinite(hi_[j]);
    if (lo_ok && (!hi_ok || std::abs(v - lo_[j]) <= std::abs(v - hi_[j])))
      x_[j] = lo_[j];
    else if (hi_ok)
      x_[j] = hi_[j];
    else
      x_[j] = v;
  }

  std::vector<char> row_taken(static_cast<size_t>(m_), 0);
  for (int b : basis) {
    Eigen::Index row = -1;
    double mag = 1e-9;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (row_taken[static_cast<size_t>(i)]) continue;
      if (std::abs(tableau_(i, b)) > mag) {
        mag = std::abs(tableau_(i, b));
        row = i;
      }
    }
    if (row < 0) return false;
    row_taken[static_cast<size_t>(row)] = 1;
    basis_[static_cast<size_t>(row)] = -1;
    pivot(row, b);
  }
  refresh_basic_values();
  return basic_values_feasible();
}

LpSolution SimplexSolver::resolve_negated(const LpProblem& problem, const LpSolution& warm) {
  load(problem);
  Vector cost = Vector::Zero(total_);
  cost.head(n_) = -problem.objective;

  if (warm.status == LpStatus::optimal && install_basis(warm.basis, warm.point)) {
    int iterations = 0;
    const LpStatus status = iterate(cost, iterations);
    LpSolution out = finish(status, cost, iterations);
    out.warm_started = true;
    return out;
  }

  LpProblem negated = problem;
  negated.objective = -problem.objective;
  LpSolution out = solve(negated);
  out.warm_fallback = true;
  return out;
}

LpSolution solve(const LpProblem& problem) {
  SimplexSolver solver;
  return solver.solve(problem);
}

LpSolution resolve_negated(const LpProblem& problem, const LpSolution& warm) {
  SimplexSolver solver;
  return solver.resolve_negated(problem, warm);
}

}  // namespace polyvol
