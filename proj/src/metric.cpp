#include "magdiv/metric.hpp"

#include "magdiv/errors.hpp"
#include "magdiv/format.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace magdiv {

namespace {

std::string pair_name(const std::vector<std::string> &labels, std::size_t i, std::size_t j) {
  return "(" + labels[i] + ", " + labels[j] + ")";
}

}  // namespace

FiniteMetric::FiniteMetric(std::vector<std::string> labels, Eigen::MatrixXd dist,
                           MetricOptions options)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  const auto n = labels_.size();
  if (n == 0) throw ValidationError("metric: at least one point is required");
  if (static_cast<std::size_t>(dist_.rows()) != n || static_cast<std::size_t>(dist_.cols()) != n) {
    throw ValidationError("metric: distance matrix is " + std::to_string(dist_.rows()) + "x" +
                          std::to_string(dist_.cols()) + " but there are " + std::to_string(n) +
                          " labels");
  }
  std::unordered_set<std::string> seen;
  for (const auto &l : labels_) {
    if (l.empty()) throw ValidationError("metric: empty label");
    if (!seen.insert(l).second) throw ValidationError("metric: duplicate label '" + l + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_(i, i) != 0.0) {
      throw ValidationError("metric: nonzero diagonal entry at " + pair_name(labels_, i, i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist_(i, j);
      if (!std::isfinite(d)) {
        throw ValidationError("metric: non-finite distance at " + pair_name(labels_, i, j));
      }
      if (!(d > 0.0)) {
        throw ValidationError("metric: nonpositive distance between distinct points " +
                              pair_name(labels_, i, j));
      }
      if (dist_(j, i) != d) {
        throw ValidationError("metric: asymmetric entries at " + pair_name(labels_, i, j));
      }
    }
  }
  if (options.check_triangle) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (dist_(i, k) > dist_(i, j) + dist_(j, k) + kTriangleTolerance) {
            throw ValidationError("metric: triangle inequality violated for " + labels_[i] +
                                  ", " + labels_[j] + ", " + labels_[k]);
          }
        }
      }
    }
  }
}

std::optional<std::size_t> FiniteMetric::index_of(const std::string &label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

FiniteMetric FiniteMetric::scaled(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ValidationError("metric: scale must be a positive finite real");
  }
  return FiniteMetric(Trusted{}, labels_, dist_ * t);
}

FiniteMetric FiniteMetric::restricted(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw ValidationError("metric: restriction to an empty set");
  std::vector<std::string> labels;
  labels.reserve(indices.size());
  Eigen::MatrixXd d(indices.size(), indices.size());
  std::unordered_set<std::size_t> seen;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] >= size()) throw DimensionMismatch("metric: restriction index out of range");
    if (!seen.insert(indices[a]).second) {
      throw ValidationError("metric: restriction index repeated");
    }
    labels.push_back(labels_[indices[a]]);
    for (std::size_t b = 0; b < indices.size(); ++b) d(a, b) = dist_(indices[a], indices[b]);
  }
  return FiniteMetric(Trusted{}, std::move(labels), std::move(d));
}

Eigen::MatrixXd SimilarityKernel::principal(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd out(indices.size(), indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = 0; b < indices.size(); ++b) out(a, b) = z_(indices[a], indices[b]);
  }
  return out;
}

double Measure::total() const { return values.sum(); }

bool Measure::is_probability(double tol) const {
  return (values.array() >= 0.0).all() && std::abs(total() - 1.0) <= tol;
}

Measure Measure::dirac(std::size_t n, std::size_t at) {
  Measure m{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  m.values(static_cast<Eigen::Index>(at)) = 1.0;
  return m;
}

Measure Measure::uniform(std::size_t n) {
  return Measure{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n))};
}

SimilarityKernel build_kernel(const FiniteMetric &m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-m.dist()(i, j));
      z(i, j) = v;
      z(j, i) = v;
    }
  }
  return SimilarityKernel(std::move(z));
}

double bilinear_form(const SimilarityKernel &k, const Measure &a, const Measure &b) {
  if (a.size() != k.size() || b.size() != k.size()) {
    throw DimensionMismatch("bilinear_form: measure sizes " + std::to_string(a.size()) + ", " +
                            std::to_string(b.size()) + " against kernel of size " +
                            std::to_string(k.size()));
  }
  return a.values.dot(k.matrix() * b.values);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd &z, const Eigen::VectorXd &rhs) {
  if (z.rows() != z.cols() || z.rows() != rhs.size()) {
    throw DimensionMismatch("solve_spd: matrix " + std::to_string(z.rows()) + "x" +
                            std::to_string(z.cols()) + " against right-hand side of size " +
                            std::to_string(rhs.size()));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(z);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(
        "solve_spd: nonpositive pivot in Cholesky factorization; the similarity matrix is not "
        "positive definite (the metric may not be of negative type at this scale)");
  }
  const double tol = 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd v = llt.solve(rhs);
  Eigen::VectorXd r = rhs - z * v;
  for (int step = 0; step < 3 && r.lpNorm<Eigen::Infinity>() > tol; ++step) {
    v += llt.solve(r);
    r = rhs - z * v;
  }
  const double res = r.lpNorm<Eigen::Infinity>();
  if (!(res <= tol)) {
    throw InaccurateSolve("solve_spd: residual " + format_real(res) + " exceeds tolerance " +
                          format_real(tol) + " (matrix too ill-conditioned)");
  }
  return v;
}

Eigen::VectorXd solve_spd(const SimilarityKernel &k, const Eigen::VectorXd &rhs) {
  return solve_spd(k.matrix(), rhs);
}

namespace {

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

FiniteMetric read_metric_csv(std::istream &in, MetricOptions options) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> labels;
  bool have_header = false;
  Eigen::MatrixXd dist;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells.front() != "label") {
        throw ParseError(lineno, "header must start with 'label'");
      }
      labels.assign(cells.begin() + 1, cells.end());
      if (labels.empty()) throw ParseError(lineno, "header lists no points");
      const auto n = static_cast<Eigen::Index>(labels.size());
      dist.resize(n, n);
      have_header = true;
      continue;
    }
    if (row >= labels.size()) throw ParseError(lineno, "more rows than header labels");
    if (cells.size() != labels.size() + 1) {
      throw ParseError(lineno, "expected " + std::to_string(labels.size() + 1) + " fields, got " +
                                   std::to_string(cells.size()));
    }
    if (cells.front() != labels[row]) {
      throw ParseError(lineno, "row label '" + cells.front() + "' does not match header label '" +
                                   labels[row] + "'");
    }
    for (std::size_t j = 0; j < labels.size(); ++j) {
      auto v = parse_real(cells[j + 1]);
      if (!v) throw ParseError(lineno, "not a real number: '" + cells[j + 1] + "'");
      dist(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = *v;
    }
    ++row;
  }
  if (!have_header) throw ParseError(lineno, "empty distance-matrix file");
  if (row != labels.size()) {
    throw ParseError(lineno, "expected " + std::to_string(labels.size()) + " rows, got " +
                                 std::to_string(row));
  }
  return FiniteMetric(std::move(labels), std::move(dist), options);
}

FiniteMetric read_metric_csv_file(const std::string &path, MetricOptions options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_metric_csv(in, options);
}

void write_metric_csv(std::ostream &out, const FiniteMetric &m) {
  out << "label";
  for (const auto &l : m.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_real(m(i, j));
    out << '\n';
  }
}

}  // namespace magdiv
