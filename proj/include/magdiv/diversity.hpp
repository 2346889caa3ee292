#pragma once

#include "magdiv/metric.hpp"
#include "magdiv/tree.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace magdiv {

inline constexpr double kCertificateTolerance = 1e-8;
// Relative to the largest entry: a point is in the support iff mass > this * max mass.
inline constexpr double kPositivityTolerance = 1e-12;
inline constexpr std::size_t kBruteForceLimit = 20;

/// Optimality test for a probability measure mu: with C = <mu, mu>,
/// mu maximizes diversity iff Z mu = C on supp mu and Z mu >= C everywhere.
struct CertificateReport {
  double c_value = 0.0;
  double max_on_support_deviation = 0.0;
  // +infinity when the support is the whole space.
  double min_off_support_slack = 0.0;
  bool passed = false;
};

struct DiversitySolution {
  Measure measure;
  std::vector<std::size_t> support;  // indices, increasing
  double diversity = 0.0;
  std::size_t iterations = 0;
  CertificateReport certificate;
  // Brute force only: the winning subset Y (may carry zero-weight points).
  std::vector<std::size_t> subset;
};

struct ProfilePoint {
  double t;
  double diversity;
  std::size_t support_size;
  bool certified;
};

// Indices whose mass exceeds kPositivityTolerance * max mass.
std::vector<std::size_t> support_of(const Measure &mu);

CertificateReport verify_certificate(const FiniteMetric &m, const Measure &mu);
CertificateReport verify_certificate(const SimilarityKernel &k, const Measure &mu);

/// Active-set peeling: solve Z_A w = 1 on the active set A, keep the points
/// with positive weight, and repeat until the weights are nonnegative. The
/// normalized weights are returned together with a certificate evaluated on
/// the whole space.
DiversitySolution peel(const FiniteMetric &m);

/// Exhaustive search over all nonempty subsets (at most kBruteForceLimit
/// points). Among nonnegatively weighted subsets whose normalized weight
/// passes the full-space certificate, returns the one of largest magnitude.
/// Ties within 1e-12 go to the lexicographically smallest sorted label set.
DiversitySolution brute_force(const FiniteMetric &m);

// sum_{e at x} 1/(1+exp(-l(e))) <= deg(x) - 1; true means x is outside the support.
bool exclusion_inequality(const WeightedTree &t, const std::string &x);
bool exclusion_inequality(const WeightedTree &t, std::size_t x);

/// Probability measure on the neighbours of x with masses proportional to
/// 1/(2 sinh l_j), returned only if Z nu(y) <= exp(-d(x, y)) holds at every
/// vertex y. Such a measure proves x is outside the support.
std::optional<Measure> exclusion_certificate(const WeightedTree &t, const std::string &x);
std::optional<Measure> exclusion_certificate(const WeightedTree &t, std::size_t x);

// Peels (X, t d) for every t of a strictly increasing positive grid.
std::vector<ProfilePoint> diversity_profile(const FiniteMetric &m, std::span<const double> t_grid);

// `steps` points from tmin to tmax inclusive, linearly or geometrically spaced.
std::vector<double> make_grid(double tmin, double tmax, std::size_t steps, bool log_spacing);

}  // namespace magdiv
