#include "magdiv/tree.hpp"

#include "magdiv/errors.hpp"
#include "magdiv/format.hpp"
#include "magdiv/summation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

namespace magdiv {

namespace {

bool has_whitespace(const std::string &s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

WeightedTree::WeightedTree(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const auto n = vertices_.size();
  if (n == 0) throw ValidationError("tree: at least one vertex is required");
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto &l = vertices_[i];
    if (l.empty()) throw ValidationError("tree: empty vertex label");
    if (has_whitespace(l)) throw ValidationError("tree: vertex label '" + l + "' contains whitespace");
    if (!seen.emplace(l, i).second) throw ValidationError("tree: duplicate vertex '" + l + "'");
  }
  if (edges_.size() + 1 != n) {
    throw ValidationError("tree: " + std::to_string(n) + " vertices require exactly " +
                          std::to_string(n - 1) + " edges, got " + std::to_string(edges_.size()));
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  adjacency_.assign(n, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto &[u, v, len] = edges_[e];
    if (u >= n || v >= n) throw ValidationError("tree: edge endpoint out of range");
    const std::string name = "{" + vertices_[u] + ", " + vertices_[v] + "}";
    if (u == v) throw ValidationError("tree: self-loop at '" + vertices_[u] + "'");
    if (!std::isfinite(len) || !(len > 0.0)) {
      throw ValidationError("tree: edge " + name + " has nonpositive or non-finite length");
    }
    if (!pairs.emplace(std::min(u, v), std::max(u, v)).second) {
      throw ValidationError("tree: duplicate edge " + name);
    }
    const auto ru = find_root(parent, u);
    const auto rv = find_root(parent, v);
    if (ru == rv) throw ValidationError("tree: edge " + name + " closes a cycle");
    parent[ru] = rv;
    adjacency_[u].push_back({v, e});
    adjacency_[v].push_back({u, e});
  }
}

WeightedTree WeightedTree::from_labeled(const std::vector<LabeledEdge> &edges,
                                        const std::vector<std::string> &isolated) {
  std::vector<std::string> vertices;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const std::string &l) {
    auto [it, inserted] = index.emplace(l, vertices.size());
    if (inserted) vertices.push_back(l);
    return it->second;
  };
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto &e : edges) {
    const auto u = intern(e.u);
    const auto v = intern(e.v);
    out.push_back({u, v, e.length});
  }
  for (const auto &l : isolated) intern(l);
  return WeightedTree(std::move(vertices), std::move(out));
}

std::optional<std::size_t> WeightedTree::index_of(const std::string &label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t WeightedTree::require_vertex(const std::string &label) const {
  auto i = index_of(label);
  if (!i) throw ValidationError("tree: unknown vertex '" + label + "'");
  return *i;
}

double WeightedTree::total_length() const {
  CompensatedSum s;
  for (const auto &e : edges_) s += e.length;
  return s.value();
}

std::vector<VertexClass> classify_vertices(const WeightedTree &t) {
  std::vector<VertexClass> out;
  out.reserve(t.vertex_count());
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    const auto d = t.degree(v);
    out.push_back({d, d <= 1, d >= 3});
  }
  return out;
}

FiniteMetric tree_metric(const WeightedTree &t) {
  const auto n = t.vertex_count();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (vertex, parent)
  for (std::size_t src = 0; src < n; ++src) {
    stack.assign(1, {src, src});
    while (!stack.empty()) {
      const auto [x, from] = stack.back();
      stack.pop_back();
      for (const auto &nb : t.neighbors(x)) {
        if (nb.vertex == from) continue;
        d(src, nb.vertex) = d(src, x) + t.edges()[nb.edge].length;
        stack.emplace_back(nb.vertex, x);
      }
    }
  }
  // Path sums accumulate in different orders from each end.
  d = (0.5 * (d + d.transpose())).eval();
  return FiniteMetric(t.vertices(), std::move(d), MetricOptions{.check_triangle = false});
}

WeightedTree subdivide(const WeightedTree &t, std::size_t k) {
  if (k == 0) throw ValidationError("subdivide: k must be at least 1");
  if (k == 1) return t;
  std::vector<std::string> vertices = t.vertices();
  std::vector<Edge> edges;
  edges.reserve(t.edge_count() * k);
  for (const auto &e : t.edges()) {
    auto a = e.u;
    auto b = e.v;
    if (t.vertices()[b] < t.vertices()[a]) std::swap(a, b);
    const double piece = e.length / static_cast<double>(k);
    const std::string prefix = t.vertices()[a] + "|" + t.vertices()[b] + "|";
    std::size_t prev = a;
    for (std::size_t j = 1; j < k; ++j) {
      vertices.push_back(prefix + std::to_string(j));
      const auto cur = vertices.size() - 1;
      edges.push_back({prev, cur, piece});
      prev = cur;
    }
    edges.push_back({prev, b, piece});
  }
  return WeightedTree(std::move(vertices), std::move(edges));
}

WeightedTree scale(const WeightedTree &t, double s) {
  if (!std::isfinite(s) || !(s > 0.0)) throw ValidationError("scale: factor must be positive and finite");
  std::vector<Edge> edges = t.edges();
  for (auto &e : edges) e.length *= s;
  return WeightedTree(t.vertices(), std::move(edges));
}

LengthLaw parse_length_law(const std::string &text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("length law must be 'fixed:<c>' or 'uniform:<lo>,<hi>', got '" + text + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  if (kind == "fixed") {
    auto c = parse_real(rest);
    if (!c || !std::isfinite(*c) || !(*c > 0.0)) {
      throw ValidationError("fixed length law needs a positive finite length");
    }
    return FixedLength{*c};
  }
  if (kind == "uniform") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ValidationError("uniform length law needs '<lo>,<hi>'");
    auto lo = parse_real(rest.substr(0, comma));
    auto hi = parse_real(rest.substr(comma + 1));
    if (!lo || !hi) throw ValidationError("uniform length law bounds are not reals");
    return UniformLength{*lo, *hi};
  }
  throw ValidationError("unknown length law '" + kind + "'");
}

std::string to_string(const LengthLaw &law) {
  return std::visit(
      [](const auto &l) -> std::string {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, FixedLength>) {
          return "fixed:" + format_real(l.value);
        } else {
          return "uniform:" + format_real(l.lo) + "," + format_real(l.hi);
        }
      },
      law);
}

std::vector<std::pair<std::size_t, std::size_t>> prufer_decode(
    const std::vector<std::size_t> &sequence) {
  const std::size_t n = sequence.size() + 2;
  std::vector<std::size_t> degree(n, 1);
  for (auto s : sequence) {
    if (s >= n) throw ValidationError("prufer: entry out of range");
    ++degree[s];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(n - 1);
  for (auto s : sequence) {
    const auto leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, s);
    if (--degree[s] == 1) leaves.push(s);
  }
  const auto a = leaves.top();
  leaves.pop();
  const auto b = leaves.top();
  edges.emplace_back(a, b);
  return edges;
}

WeightedTree random_tree(std::size_t n, const LengthLaw &law, std::uint64_t seed) {
  if (n == 0) throw ValidationError("random_tree: n must be at least 1");
  std::function<double(std::mt19937_64 &)> draw;
  if (const auto *f = std::get_if<FixedLength>(&law)) {
    if (!std::isfinite(f->value) || !(f->value > 0.0)) {
      throw ValidationError("random_tree: fixed length must be positive and finite");
    }
    draw = [c = f->value](std::mt19937_64 &) { return c; };
  } else {
    const auto &u = std::get<UniformLength>(law);
    if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo > 0.0) || u.hi < u.lo) {
      throw ValidationError("random_tree: uniform bounds must satisfy 0 < lo <= hi < inf");
    }
    draw = [u](std::mt19937_64 &g) {
      return u.lo == u.hi ? u.lo : std::uniform_real_distribution<double>(u.lo, u.hi)(g);
    };
  }

  std::mt19937_64 rng(seed);
  std::vector<std::string> vertices;
  vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));

  std::vector<std::pair<std::size_t, std::size_t>> topology;
  if (n == 2) {
    topology.emplace_back(0, 1);
  } else if (n >= 3) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> seq(n - 2);
    for (auto &s : seq) s = pick(rng);
    topology = prufer_decode(seq);
  }
  std::vector<Edge> edges;
  edges.reserve(topology.size());
  for (const auto &[u, v] : topology) edges.push_back({u, v, draw(rng)});
  return WeightedTree(std::move(vertices), std::move(edges));
}

}  // namespace magdiv
