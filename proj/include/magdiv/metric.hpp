#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace magdiv {

struct MetricOptions {
  // Validate the triangle inequality (O(n^3)); can be switched off for large inputs.
  bool check_triangle = true;
};

inline constexpr double kTriangleTolerance = 1e-9;

/// A finite metric space given by point labels and a full distance matrix.
///
/// Construction validates: square matrix matching the label count, distinct
/// labels, exact symmetry, zero diagonal, finite strictly positive
/// off-diagonal entries and (optionally) the triangle inequality up to
/// kTriangleTolerance. Instances are immutable.
class FiniteMetric {
 public:
  FiniteMetric(std::vector<std::string> labels, Eigen::MatrixXd dist,
               MetricOptions options = {});

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string> &labels() const { return labels_; }
  const Eigen::MatrixXd &dist() const { return dist_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }

  std::optional<std::size_t> index_of(const std::string &label) const;

  // (X, t d): every distance multiplied by t > 0.
  FiniteMetric scaled(double t) const;

  // Sub-metric on the given point indices, in the given order.
  FiniteMetric restricted(std::span<const std::size_t> indices) const;

 private:
  struct Trusted {};
  FiniteMetric(Trusted, std::vector<std::string> labels, Eigen::MatrixXd dist)
      : labels_(std::move(labels)), dist_(std::move(dist)) {}

  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
};

// Z(x, y) = exp(-d(x, y)).
class SimilarityKernel {
 public:
  explicit SimilarityKernel(Eigen::MatrixXd z) : z_(std::move(z)) {}
  std::size_t size() const { return static_cast<std::size_t>(z_.rows()); }
  const Eigen::MatrixXd &matrix() const { return z_; }
  double operator()(std::size_t i, std::size_t j) const { return z_(i, j); }

  // Principal submatrix on the given indices.
  Eigen::MatrixXd principal(std::span<const std::size_t> indices) const;

 private:
  Eigen::MatrixXd z_;
};

// A finite signed measure: one mass per point.
struct Measure {
  Eigen::VectorXd values;

  double total() const;
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool is_probability(double tol = 1e-12) const;

  static Measure dirac(std::size_t n, std::size_t at);
  static Measure uniform(std::size_t n);
};

SimilarityKernel build_kernel(const FiniteMetric &m);

// a^T Z b: the average similarity between independent samples of a and b.
double bilinear_form(const SimilarityKernel &k, const Measure &a, const Measure &b);

/// Solves Z v = rhs by an unpivoted Cholesky factorization.
///
/// Throws NotPositiveDefinite when a pivot is nonpositive and
/// InaccurateSolve when, after iterative refinement, the residual still
/// exceeds 1e-9 * (1 + |rhs|_inf).
Eigen::VectorXd solve_spd(const Eigen::MatrixXd &z, const Eigen::VectorXd &rhs);
Eigen::VectorXd solve_spd(const SimilarityKernel &k, const Eigen::VectorXd &rhs);

// Distance-matrix CSV: header `label,<l1>,...,<ln>`, then `<li>,d(i,1),...,d(i,n)`.
FiniteMetric read_metric_csv(std::istream &in, MetricOptions options = {});
FiniteMetric read_metric_csv_file(const std::string &path, MetricOptions options = {});
void write_metric_csv(std::ostream &out, const FiniteMetric &m);

}  // namespace magdiv
