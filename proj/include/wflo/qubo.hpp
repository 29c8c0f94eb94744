#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wflo/farm.hpp"

namespace wflo {

/// Dense symmetric QUBO matrix with a scalar offset: f(x) = x^T Q x + offset.
class QuboMatrix {
 public:
  QuboMatrix() = default;
  explicit QuboMatrix(int n) : q_(Eigen::MatrixXd::Zero(n, n)) {}
  /// Throws std::invalid_argument if `q` is not square, symmetric within
  /// 1e-12, or has non-finite entries.
  QuboMatrix(Eigen::MatrixXd q, double offset);

  int size() const { return static_cast<int>(q_.rows()); }
  const Eigen::MatrixXd& matrix() const { return q_; }
  double offset() const { return offset_; }
  double operator()(int i, int j) const { return q_(i, j); }

  /// Adds v to (i,j) and (j,i); on the diagonal adds v once.
  void add_symmetric(int i, int j, double v);
  void add_offset(double v) { offset_ += v; }

  QuboMatrix& operator+=(const QuboMatrix& other);
  friend QuboMatrix operator+(QuboMatrix a, const QuboMatrix& b) { return a += b; }
  friend QuboMatrix operator*(double s, QuboMatrix a);

 private:
  Eigen::MatrixXd q_;
  double offset_ = 0.0;
};

/// Spin form: f(s) = s^T H s + h.s + offset with zero-diagonal symmetric H.
struct IsingModel {
  Eigen::MatrixXd couplings;
  Eigen::VectorXd fields;
  double offset = 0.0;

  int size() const { return static_cast<int>(fields.size()); }
  /// Largest absolute coupling or field; 0 for the zero model.
  double scale() const;
};

/// Spins in [-1,1]; +1 means an occupied site.
using SpinVector = Eigen::VectorXd;

SpinVector spins_from_layout(const Layout& x);

QuboMatrix power_qubo(const FarmProblem& problem);
QuboMatrix count_constraint(int sites, int max_turbines);
QuboMatrix spacing_constraint(const FarmProblem& problem);
QuboMatrix avoidance_constraint(const std::vector<double>& avoidance);
QuboMatrix assemble_qubo(const FarmProblem& problem);

double evaluate_qubo(const QuboMatrix& q, const Layout& x);

/// Throws std::invalid_argument for an asymmetric input.
IsingModel to_ising(const QuboMatrix& q);
IsingModel to_ising(const Eigen::MatrixXd& q, double offset);

double evaluate_ising(const IsingModel& model, const SpinVector& s);

/// log10|Q_ij| for non-zero entries, empty for exact zeros.
using Heatmap = std::vector<std::vector<std::optional<double>>>;
Heatmap heatmap_data(const QuboMatrix& q);
void write_heatmap_csv(std::ostream& out, const Heatmap& h);

/// Plain-text exchange format: "N offset" then "i j value" with i <= j.
void write_qubo_text(std::ostream& out, const QuboMatrix& q);
QuboMatrix read_qubo_text(std::istream& in);

/// Best and runner-up (next distinct cost) layouts of a QUBO.
struct RankedSolutions {
  Layout best;
  double best_cost = 0.0;
  std::optional<Layout> runner_up;
  double runner_up_cost = 0.0;
};
using ExactSolver = std::function<RankedSolutions(const QuboMatrix&)>;

struct LambdaScanPoint {
  double lambda = 0.0;
  int turbines = 0;      // in the argmin
  double cost_gap = 0.0;   // runner-up minus best, full penalised cost
  double power_gap = 0.0;  // same pair, wake-power objective only
  Layout best;
};

/// Applies each lambda to all three weights and solves exactly.
/// Throws CapabilityError when N > 24.
std::vector<LambdaScanPoint> lambda_scan(const FarmProblem& problem,
                                         const std::vector<double>& lambdas,
                                         const ExactSolver& solver);

}  // namespace wflo
