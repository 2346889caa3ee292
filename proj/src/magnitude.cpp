#include "magdiv/magnitude.hpp"

#include "magdiv/errors.hpp"
#include "magdiv/summation.hpp"

#include <cmath>

namespace magdiv {

namespace {

// 1/(1+exp(-l)), the contribution of an edge to each of its endpoints.
double edge_share(double length) { return 1.0 / (1.0 + std::exp(-length)); }

}  // namespace

WeightVector tree_weights(const WeightedTree &t) {
  const auto n = t.vertex_count();
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    CompensatedSum s(1.0 - static_cast<double>(t.degree(x)));
    for (const auto &nb : t.neighbors(x)) s += edge_share(t.edges()[nb.edge].length);
    w(static_cast<Eigen::Index>(x)) = s.value();
  }
  return {std::move(w), tree_magnitude(t)};
}

double tree_magnitude(const WeightedTree &t) {
  CompensatedSum s(1.0);
  for (const auto &e : t.edges()) s += std::tanh(e.length / 2.0);
  return s.value();
}

double wedge_magnitude(double mx, double my) {
  if (!(mx >= 1.0) || !(my >= 1.0)) {
    throw ValidationError("wedge_magnitude: magnitudes of nonempty spaces are at least 1");
  }
  return mx + my - 1.0;
}

SparseInverse sparse_inverse(const WeightedTree &t) {
  const auto n = static_cast<Eigen::Index>(t.vertex_count());
  SparseInverse inv;
  inv.edges = t.edges();
  inv.offdiag.resize(static_cast<Eigen::Index>(t.edge_count()));
  std::vector<CompensatedSum> diag(static_cast<std::size_t>(n), CompensatedSum(1.0));
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const auto &edge = t.edges()[e];
    // exp(-2l)/(1-exp(-2l)) = 1/expm1(2l);  exp(-l)/(1-exp(-2l)) = 1/(2 sinh l).
    const double d = 1.0 / std::expm1(2.0 * edge.length);
    diag[edge.u] += d;
    diag[edge.v] += d;
    inv.offdiag(static_cast<Eigen::Index>(e)) = -1.0 / (2.0 * std::sinh(edge.length));
  }
  inv.diag.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) inv.diag(i) = diag[static_cast<std::size_t>(i)].value();
  return inv;
}

Eigen::MatrixXd SparseInverse::assemble() const {
  const auto n = diag.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diag;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto u = static_cast<Eigen::Index>(edges[e].u);
    const auto v = static_cast<Eigen::Index>(edges[e].v);
    m(u, v) = offdiag(static_cast<Eigen::Index>(e));
    m(v, u) = offdiag(static_cast<Eigen::Index>(e));
  }
  return m;
}

double continuum_magnitude(double total_length) {
  if (!std::isfinite(total_length) || total_length < 0.0) {
    throw ValidationError("continuum_magnitude: total length must be finite and nonnegative");
  }
  return 1.0 + total_length / 2.0;
}

}  // namespace magdiv
