#pragma once

#include "magdiv/metric.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace magdiv {

struct Edge {
  std::size_t u;
  std::size_t v;
  double length;
};

struct LabeledEdge {
  std::string u;
  std::string v;
  double length;
};

struct Neighbor {
  std::size_t vertex;
  std::size_t edge;
};

/// A finite tree with strictly positive edge lengths.
///
/// Labels must be nonempty, pairwise distinct and free of whitespace (they
/// are written verbatim into the tree file format). The constructor rejects
/// self-loops, duplicate edges, nonpositive or non-finite lengths, and any
/// edge set that is not a spanning tree of the vertex set.
class WeightedTree {
 public:
  WeightedTree(std::vector<std::string> vertices, std::vector<Edge> edges);

  // Vertex set is inferred in order of first appearance; `isolated` is only
  // meaningful for the single-vertex tree.
  static WeightedTree from_labeled(const std::vector<LabeledEdge> &edges,
                                   const std::vector<std::string> &isolated = {});

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string> &vertices() const { return vertices_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::vector<Neighbor> &neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }

  std::optional<std::size_t> index_of(const std::string &label) const;
  // Like index_of, but throws ValidationError for an unknown label.
  std::size_t require_vertex(const std::string &label) const;

  // Compensated sum of all edge lengths.
  double total_length() const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

struct VertexClass {
  std::size_t degree;
  bool is_leaf;    // degree <= 1
  bool is_branch;  // degree >= 3
};

std::vector<VertexClass> classify_vertices(const WeightedTree &t);

// Path-length metric on the vertices.
FiniteMetric tree_metric(const WeightedTree &t);

/// Replaces each edge by a path of k equal edges. The j-th inserted point on
/// edge {u, v} (counted from the lexicographically smaller endpoint u) is
/// labelled `u|v|j`.
WeightedTree subdivide(const WeightedTree &t, std::size_t k);

WeightedTree scale(const WeightedTree &t, double s);

struct FixedLength {
  double value;
};
struct UniformLength {
  double lo;
  double hi;
};
using LengthLaw = std::variant<FixedLength, UniformLength>;

// Parses `fixed:<c>` or `uniform:<lo>,<hi>`.
LengthLaw parse_length_law(const std::string &text);
std::string to_string(const LengthLaw &law);

/// Uniformly random labelled tree on n vertices (decoded from a random
/// Prüfer sequence), vertices labelled v0..v{n-1}. Deterministic in `seed`.
WeightedTree random_tree(std::size_t n, const LengthLaw &law, std::uint64_t seed);

// Decodes a Prüfer sequence of length n - 2 over {0..n-1} into n - 1 edges.
std::vector<std::pair<std::size_t, std::size_t>> prufer_decode(
    const std::vector<std::size_t> &sequence);

inline constexpr const char *kTreeFileHeader = "# magdiv-tree v1";

WeightedTree read_tree(std::istream &in);
WeightedTree read_tree_file(const std::string &path);
void write_tree(std::ostream &out, const WeightedTree &t);
std::string tree_to_string(const WeightedTree &t);

}  // namespace magdiv
