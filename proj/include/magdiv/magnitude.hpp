#pragma once

#include "magdiv/tree.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace magdiv {

// Signed weighting w with Z w = 1; its total mass is the magnitude.
struct WeightVector {
  Eigen::VectorXd values;
  double magnitude;
};

/// Inverse of a tree's similarity matrix. Only the diagonal and one value
/// per edge are stored; entries for non-adjacent pairs are zero.
struct SparseInverse {
  Eigen::VectorXd diag;      // per vertex
  Eigen::VectorXd offdiag;   // per edge, in the tree's edge order
  std::vector<Edge> edges;   // topology the offdiagonal values refer to

  std::size_t stored_values() const {
    return static_cast<std::size_t>(diag.size() + offdiag.size());
  }
  Eigen::MatrixXd assemble() const;
};

// w(x) = sum over incident edges of 1/(1+exp(-l)) minus (deg x - 1).
WeightVector tree_weights(const WeightedTree &t);

// 1 + sum over edges of tanh(l/2), compensated.
double tree_magnitude(const WeightedTree &t);

// Magnitude of a wedge sum: |X| + |Y| - 1.
double wedge_magnitude(double mx, double my);

SparseInverse sparse_inverse(const WeightedTree &t);

// Magnitude of a simplicial tree or compact R-tree of the given total length.
double continuum_magnitude(double total_length);

}  // namespace magdiv
