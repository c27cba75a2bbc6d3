#pragma once

#include <limits>
#include <vector>

#include "polyvol/linalg.hpp"

namespace polyvol {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize c^T x  s.t.  A x = b,  lower <= x <= upper  (infinite bounds allowed)
struct LpProblem {
  Vector objective;
  Matrix a_eq;
  Vector b_eq;
  Vector lower;
  Vector upper;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return a_eq.rows(); }
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective_value = 0.0;
  Vector point;
  // Basic variables, one per row. Indices >= num_vars() name the artificial
  // of row (index - num_vars()), kept basic only on redundant rows.
  std::vector<int> basis;
  int iterations = 0;
  bool warm_started = false;
  // Set when resolve_negated was handed a basis that was not feasible for the
  // problem and fell back to a cold solve.
  bool warm_fallback = false;
};

// Bounded-variable primal simplex on a dense tableau. Dantzig pricing for the
// first 5 * (rows + cols) pivots, Bland's rule afterwards. The instance keeps
// its buffers between calls; use one instance per thread.
class SimplexSolver {
 public:
  static constexpr double kFeasibilityTol = 1e-8;
  static constexpr double kPivotTol = 1e-10;
  static constexpr double kOptimalityTol = 1e-9;

  LpSolution solve(const LpProblem& problem);

  /// Minimizes -c^T x over the feasible set of `problem`, starting from the
  /// basis of `warm` (a solution of `problem`).
  LpSolution resolve_negated(const LpProblem& problem, const LpSolution& warm);

 private:
  enum class Pricing { dantzig, bland };

  void load(const LpProblem& problem);
  bool install_basis(const std::vector<int>& basis, const Vector& point);
  LpStatus iterate(const Vector& cost, int& iterations);
  void pivot(Eigen::Index row, Eigen::Index col);
  void refresh_basic_values();
  bool basic_values_feasible() const;
  LpSolution finish(LpStatus status, const Vector& cost, int iterations) const;

  Eigen::Index m_ = 0;      // rows
  Eigen::Index n_ = 0;      // structural variables
  Eigen::Index total_ = 0;  // structural + one artificial per row
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tableau_;  // B^-1 [A | I]
  Vector beta_;             // B^-1 b
  Vector x_;
  Vector lo_;
  Vector hi_;
  std::vector<int> basis_;
  std::vector<int> row_of_;  // -1 for nonbasic
  Vector phase_cost_;
};

LpSolution solve(const LpProblem& problem);
LpSolution resolve_negated(const LpProblem& problem, const LpSolution& warm);

}  // namespace polyvol
