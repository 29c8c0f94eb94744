#include "wflo/qubo.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "wflo/errors.hpp"

namespace wflo {

namespace {

constexpr double kSymmetryTol = 1e-12;

void check_symmetric(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("QUBO matrix must be square");
  if (!q.allFinite()) throw std::invalid_argument("QUBO matrix has non-finite entries");
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = i + 1; j < q.cols(); ++j)
      if (std::abs(q(i, j) - q(j, i)) > kSymmetryTol)
        throw std::invalid_argument("QUBO matrix is not symmetric");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

QuboMatrix::QuboMatrix(Eigen::MatrixXd q, double offset) : q_(std::move(q)), offset_(offset) {
  check_symmetric(q_);
  if (!std::isfinite(offset_)) throw std::invalid_argument("QUBO offset must be finite");
}

void QuboMatrix::add_symmetric(int i, int j, double v) {
  q_(i, j) += v;
  if (i != j) q_(j, i) += v;
}

QuboMatrix& QuboMatrix::operator+=(const QuboMatrix& other) {
  if (other.size() != size()) throw std::invalid_argument("QUBO dimension mismatch");
  q_ += other.q_;
  offset_ += other.offset_;
  return *this;
}

QuboMatrix operator*(double s, QuboMatrix a) {
  a.q_ *= s;
  a.offset_ *= s;
  return a;
}

double IsingModel::scale() const {
  double m = 0.0;
  if (couplings.size() > 0) m = couplings.cwiseAbs().maxCoeff();
  if (fields.size() > 0) m = std::max(m, fields.cwiseAbs().maxCoeff());
  return m;
}

SpinVector spins_from_layout(const Layout& x) {
  SpinVector s(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) s[static_cast<Eigen::Index>(i)] = x[i] ? 1.0 : -1.0;
  return s;
}

QuboMatrix power_qubo(const FarmProblem& problem) {
  const int n = problem.sites();
  QuboMatrix q(n);
  for (const auto& d : problem.regime.arrangements()) {
    const double v3 = d.free_speed * d.free_speed * d.free_speed;
    for (int i = 0; i < n; ++i) {
      q.add_symmetric(i, i, -d.probability * v3 / 3.0);
      for (const auto& w : wake_set(problem, i, d)) {
        const double u = reduced_windspeed(problem.turbine, d.free_speed, w.distance, problem.jensen);
        // Directed wake term split evenly across the symmetric pair.
        q.add_symmetric(i, w.site, 0.5 * d.probability * (v3 - u * u * u) / 3.0);
      }
    }
  }
  return q;
}

QuboMatrix count_constraint(int sites, int max_turbines) {
  if (max_turbines < 0 || max_turbines > sites)
    throw std::invalid_argument("M must lie in [0, N]");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(sites, sites, 1.0);
  m.diagonal().setConstant(1.0 - 2.0 * max_turbines);
  return QuboMatrix(std::move(m), static_cast<double>(max_turbines) * max_turbines);
}

QuboMatrix spacing_constraint(const FarmProblem& problem) {
  const int n = problem.sites();
  QuboMatrix q(n);
  if (!problem.min_spacing) return q;
  const double e = *problem.min_spacing;
  if (e < 0.0) throw std::invalid_argument("E must be >= 0");
  for (int i = 0; i < n; ++i) {
    const Point a = site_position(problem.grid, i);
    for (int j = i + 1; j < n; ++j) {
      const Point b = site_position(problem.grid, j);
      if (std::hypot(a.x - b.x, a.y - b.y) < e) q.add_symmetric(i, j, 0.5);
    }
  }
  return q;
}

QuboMatrix avoidance_constraint(const std::vector<double>& avoidance) {
  const int n = static_cast<int>(avoidance.size());
  QuboMatrix q(n);
  for (int i = 0; i < n; ++i) {
    if (!(avoidance[i] >= 0.0 && avoidance[i] <= 1.0))
      throw ConfigError("avoidance entries must lie in [0,1]");
    q.add_symmetric(i, i, avoidance[i]);
  }
  return q;
}

QuboMatrix assemble_qubo(const FarmProblem& problem) {
  problem.validate();
  const auto& w = problem.weights;
  QuboMatrix q = power_qubo(problem);
  q += w.count * count_constraint(problem.sites(), problem.max_turbines);
  q += w.spacing * spacing_constraint(problem);
  if (problem.avoidance) q += w.avoidance * avoidance_constraint(*problem.avoidance);
  return q;
}

double evaluate_qubo(const QuboMatrix& q, const Layout& x) {
  if (static_cast<int>(x.size()) != q.size())
    throw std::invalid_argument("layout length does not match the QUBO dimension");
  const auto& m = q.matrix();
  double total = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < q.size(); ++j)
      if (x[j]) total += m(i, j);
  }
  return total + q.offset();
}

IsingModel to_ising(const Eigen::MatrixXd& q, double offset) {
  check_symmetric(q);
  const Eigen::Index n = q.rows();
  IsingModel m;
  m.couplings = q / 4.0;
  m.couplings.diagonal().setZero();
  m.fields = Eigen::VectorXd::Zero(n);
  m.offset = offset;
  for (Eigen::Index i = 0; i < n; ++i) {
    m.fields[i] = q(i, i) / 2.0;
    m.offset += q(i, i) / 2.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      m.fields[i] += q(i, j) / 2.0;
      m.offset += q(i, j) / 4.0;
    }
  }
  return m;
}

IsingModel to_ising(const QuboMatrix& q) { return to_ising(q.matrix(), q.offset()); }

double evaluate_ising(const IsingModel& model, const SpinVector& s) {
  if (s.size() != model.fields.size())
    throw std::invalid_argument("spin vector length does not match the model");
  return s.dot(model.couplings * s) + model.fields.dot(s) + model.offset;
}

Heatmap heatmap_data(const QuboMatrix& q) {
  const int n = q.size();
  Heatmap h(n, std::vector<std::optional<double>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (q(i, j) != 0.0) h[i][j] = std::log10(std::abs(q(i, j)));
  return h;
}

void write_heatmap_csv(std::ostream& out, const Heatmap& h) {
  for (const auto& row : h) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      if (row[j]) out << format_double(*row[j]);
    }
    out << '\n';
  }
}

void write_qubo_text(std::ostream& out, const QuboMatrix& q) {
  out << q.size() << ' ' << format_double(q.offset()) << '\n';
  for (int i = 0; i < q.size(); ++i)
    for (int j = i; j < q.size(); ++j)
      if (q(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(q(i, j)) << '\n';
}

QuboMatrix read_qubo_text(std::istream& in) {
  int n = 0;
  double offset = 0.0;
  if (!(in >> n >> offset) || n < 0) throw std::invalid_argument("bad QUBO header");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  int i = 0;
  int j = 0;
  double v = 0.0;
  while (in >> i >> j >> v) {
    if (i < 0 || j < i || j >= n) throw std::invalid_argument("bad QUBO entry index");
    m(i, j) = v;
    m(j, i) = v;
  }
  if (!in.eof()) throw std::invalid_argument("malformed QUBO entry line");
  return QuboMatrix(std::move(m), offset);
}

std::vector<LambdaScanPoint> lambda_scan(const FarmProblem& problem,
                                         const std::vector<double>& lambdas,
                                         const ExactSolver& solver) {
  if (problem.sites() > 24)
    throw CapabilityError("lambda scan needs an exact solve; N=" +
                          std::to_string(problem.sites()) + " exceeds 24");
  const QuboMatrix power = power_qubo(problem);
  std::vector<LambdaScanPoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    FarmProblem p = problem;
    p.weights = ConstraintWeights::uniform(lambda);
    const RankedSolutions r = solver(assemble_qubo(p));
    LambdaScanPoint pt;
    pt.lambda = lambda;
    pt.best = r.best;
    pt.turbines = r.best.count();
    if (r.runner_up) {
      pt.cost_gap = r.runner_up_cost - r.best_cost;
      pt.power_gap = evaluate_qubo(power, *r.runner_up) - evaluate_qubo(power, r.best);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace wflo
