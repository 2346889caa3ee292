#include "magdiv/diversity.hpp"

#include "magdiv/errors.hpp"
#include "magdiv/summation.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace magdiv {

namespace {

Eigen::VectorXd scatter(std::size_t n, std::span<const std::size_t> indices, const Eigen::VectorXd &v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < indices.size(); ++a) {
    out(static_cast<Eigen::Index>(indices[a])) = v(static_cast<Eigen::Index>(a));
  }
  return out;
}

std::vector<std::string> sorted_labels(const FiniteMetric &m, std::span<const std::size_t> idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(m.labels()[i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Path-length distances from `src` to every vertex.
std::vector<double> distances_from(const WeightedTree &t, std::size_t src) {
  std::vector<double> d(t.vertex_count(), 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{src, src}};
  while (!stack.empty()) {
    const auto [x, from] = stack.back();
    stack.pop_back();
    for (const auto &nb : t.neighbors(x)) {
      if (nb.vertex == from) continue;
      d[nb.vertex] = d[x] + t.edges()[nb.edge].length;
      stack.emplace_back(nb.vertex, x);
    }
  }
  return d;
}

DiversitySolution single_point_solution(const SimilarityKernel &k) {
  DiversitySolution s;
  s.measure = Measure::dirac(1, 0);
  s.support = {0};
  s.subset = {0};
  s.diversity = 1.0;
  s.certificate = verify_certificate(k, s.measure);
  return s;
}

}  // namespace

std::vector<std::size_t> support_of(const Measure &mu) {
  std::vector<std::size_t> out;
  if (mu.size() == 0) return out;
  const double threshold = kPositivityTolerance * std::max(mu.values.maxCoeff(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.values(static_cast<Eigen::Index>(i)) > threshold) out.push_back(i);
  }
  return out;
}

CertificateReport verify_certificate(const SimilarityKernel &k, const Measure &mu) {
  if (mu.size() != k.size()) {
    throw DimensionMismatch("verify_certificate: measure of size " + std::to_string(mu.size()) +
                            " on a space of " + std::to_string(k.size()) + " points");
  }
  const Eigen::VectorXd zmu = k.matrix() * mu.values;
  CertificateReport r;
  r.c_value = mu.values.dot(zmu);
  const auto supp = support_of(mu);
  std::vector<bool> in_support(mu.size(), false);
  for (auto i : supp) in_support[i] = true;
  r.max_on_support_deviation = 0.0;
  r.min_off_support_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double gap = zmu(static_cast<Eigen::Index>(i)) - r.c_value;
    if (in_support[i]) {
      r.max_on_support_deviation = std::max(r.max_on_support_deviation, std::abs(gap));
    } else {
      r.min_off_support_slack = std::min(r.min_off_support_slack, gap);
    }
  }
  r.passed = !supp.empty() && r.max_on_support_deviation <= kCertificateTolerance &&
             r.min_off_support_slack >= -kCertificateTolerance;
  return r;
}

CertificateReport verify_certificate(const FiniteMetric &m, const Measure &mu) {
  return verify_certificate(build_kernel(m), mu);
}

DiversitySolution peel(const FiniteMetric &m) {
  const auto n = m.size();
  const auto kernel = build_kernel(m);
  if (n == 1) return single_point_solution(kernel);

  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  Eigen::VectorXd w;
  std::size_t iterations = 0;
  while (true) {
    if (active.empty()) throw NoConvergence("peel: active set became empty");
    if (iterations == n) throw NoConvergence("peel: active set failed to stabilize");
    ++iterations;
    const Eigen::VectorXd local =
        solve_spd(kernel.principal(active), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(active.size())));
    w = scatter(n, active, local);
    const double wmax = w.maxCoeff();
    if (!(wmax > 0.0)) throw NoConvergence("peel: no positive weight on the active set");
    const double threshold = kPositivityTolerance * wmax;

    std::vector<std::size_t> next;
    for (auto i : active) {
      if (w(static_cast<Eigen::Index>(i)) > threshold) next.push_back(i);
    }
    if (local.minCoeff() >= -threshold) {
      // w >= 0: points with (numerically) zero weight carry no mass.
      for (auto i : active) {
        if (w(static_cast<Eigen::Index>(i)) <= threshold) w(static_cast<Eigen::Index>(i)) = 0.0;
      }
      break;
    }
    active = std::move(next);
  }

  DiversitySolution s;
  CompensatedSum total;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w(i);
  s.diversity = total.value();
  s.measure = Measure{w / s.diversity};
  s.support = support_of(s.measure);
  s.subset = s.support;
  s.iterations = iterations;
  s.certificate = verify_certificate(kernel, s.measure);
  return s;
}

DiversitySolution brute_force(const FiniteMetric &m) {
  const auto n = m.size();
  if (n > kBruteForceLimit) {
    throw TooLarge("brute_force: " + std::to_string(n) + " points exceed the limit of " +
                   std::to_string(kBruteForceLimit));
  }
  const auto kernel = build_kernel(m);
  if (n == 1) return single_point_solution(kernel);

  std::optional<DiversitySolution> best;
  std::vector<std::string> best_labels;
  std::vector<std::size_t> subset;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(i);
    }
    const Eigen::VectorXd w =
        solve_spd(kernel.principal(subset), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(subset.size())));
    if (w.minCoeff() < -1e-12) continue;

    CompensatedSum total;
    for (Eigen::Index i = 0; i < w.size(); ++i) total += w(i);
    const double value = total.value();
    Measure mu{scatter(n, subset, w.cwiseMax(0.0))};
    mu.values /= mu.values.sum();
    const auto cert = verify_certificate(kernel, mu);
    if (!cert.passed) continue;

    bool take = !best || value > best->diversity + 1e-12;
    std::vector<std::string> labels;
    if (!take && std::abs(value - best->diversity) <= 1e-12) {
      labels = sorted_labels(m, subset);
      take = labels < best_labels;
    }
    if (!take) continue;
    if (labels.empty()) labels = sorted_labels(m, subset);
    DiversitySolution s;
    s.measure = std::move(mu);
    s.support = support_of(s.measure);
    s.subset = subset;
    s.diversity = value;
    s.iterations = static_cast<std::size_t>(count - 1);
    s.certificate = cert;
    best = std::move(s);
    best_labels = std::move(labels);
  }
  if (!best) throw NoConvergence("brute_force: no nonnegatively weighted subset passed the certificate");
  return *best;
}

bool exclusion_inequality(const WeightedTree &t, std::size_t x) {
  if (x >= t.vertex_count()) throw ValidationError("exclusion_inequality: vertex index out of range");
  const auto deg = t.degree(x);
  CompensatedSum lhs;
  for (const auto &nb : t.neighbors(x)) lhs += 1.0 / (1.0 + std::exp(-t.edges()[nb.edge].length));
  const double slack = 8.0 * DBL_EPSILON * static_cast<double>(deg + 1);
  return lhs.value() <= static_cast<double>(deg) - 1.0 + slack;
}

bool exclusion_inequality(const WeightedTree &t, const std::string &x) {
  return exclusion_inequality(t, t.require_vertex(x));
}

std::optional<Measure> exclusion_certificate(const WeightedTree &t, std::size_t x) {
  if (x >= t.vertex_count()) throw ValidationError("exclusion_certificate: vertex index out of range");
  const auto &nbrs = t.neighbors(x);
  if (nbrs.empty()) return std::nullopt;

  const auto n = t.vertex_count();
  Measure nu{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  for (const auto &nb : nbrs) {
    nu.values(static_cast<Eigen::Index>(nb.vertex)) = 1.0 / (2.0 * std::sinh(t.edges()[nb.edge].length));
  }
  nu.values /= nu.values.sum();

  const auto from_x = distances_from(t, x);
  Eigen::VectorXd znu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto &nb : nbrs) {
    const auto from_y = distances_from(t, nb.vertex);
    const double mass = nu.values(static_cast<Eigen::Index>(nb.vertex));
    for (std::size_t y = 0; y < n; ++y) znu(static_cast<Eigen::Index>(y)) += mass * std::exp(-from_y[y]);
  }
  for (std::size_t y = 0; y < n; ++y) {
    const double bound = std::exp(-from_x[y]);
    if (znu(static_cast<Eigen::Index>(y)) > bound * (1.0 + 1e-12)) return std::nullopt;
  }
  return nu;
}

std::optional<Measure> exclusion_certificate(const WeightedTree &t, const std::string &x) {
  return exclusion_certificate(t, t.require_vertex(x));
}

std::vector<ProfilePoint> diversity_profile(const FiniteMetric &m, std::span<const double> t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || !(t_grid[i] > 0.0)) {
      throw ValidationError("diversity_profile: scales must be positive and finite");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw ValidationError("diversity_profile: scales must be strictly increasing");
    }
  }
  std::vector<ProfilePoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto s = peel(m.scaled(t));
    out.push_back({t, s.diversity, s.support.size(), s.certificate.passed});
  }
  return out;
}

std::vector<double> make_grid(double tmin, double tmax, std::size_t steps, bool log_spacing) {
  if (!std::isfinite(tmin) || !std::isfinite(tmax) || !(tmin > 0.0) || !(tmin < tmax)) {
    throw ValidationError("grid: need 0 < tmin < tmax");
  }
  if (steps < 2) throw ValidationError("grid: need at least 2 steps");
  std::vector<double> grid(steps);
  const double last = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / last;
    grid[i] = log_spacing ? tmin * std::pow(tmax / tmin, f) : tmin + (tmax - tmin) * f;
  }
  grid.front() = tmin;
  grid.back() = tmax;
  return grid;
}

}  // namespace magdiv
