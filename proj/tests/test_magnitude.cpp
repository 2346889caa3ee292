#include "doctest.h"

#include "magdiv/errors.hpp"
#include "magdiv/magnitude.hpp"
#include "magdiv/metric.hpp"
#include "magdiv/tree.hpp"

#include <cmath>
#include <random>

using namespace magdiv;

namespace {

WeightedTree star(const std::vector<double> &lengths) {
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < lengths.size(); ++i) edges.push_back({"c", "l" + std::to_string(i), lengths[i]});
  return WeightedTree::from_labeled(edges);
}

// The part of t hanging off `cut` through the given neighbours, `cut` included.
WeightedTree branch(const WeightedTree &t, std::size_t cut, const std::vector<Neighbor> &through) {
  std::vector<LabeledEdge> edges;
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (const auto &nb : through) {
    edges.push_back({t.vertices()[cut], t.vertices()[nb.vertex], t.edges()[nb.edge].length});
    stack.emplace_back(nb.vertex, cut);
  }
  while (!stack.empty()) {
    const auto [x, from] = stack.back();
    stack.pop_back();
    for (const auto &nb : t.neighbors(x)) {
      if (nb.vertex == from) continue;
      edges.push_back({t.vertices()[x], t.vertices()[nb.vertex], t.edges()[nb.edge].length});
      stack.emplace_back(nb.vertex, x);
    }
  }
  return WeightedTree::from_labeled(edges);
}

}  // namespace

TEST_CASE("tree_weights") {
  SUBCASE("single vertex") {
    const auto w = tree_weights(WeightedTree({"a"}, {}));
    CHECK(w.values(0) == 1.0);
    CHECK(w.magnitude == 1.0);
  }
  SUBCASE("two points") {
    for (double L : {0.1, 1.0, 5.0, 40.0}) {
      const auto w = tree_weights(WeightedTree::from_labeled({{"x", "y", L}}));
      CHECK(w.values(0) == doctest::Approx(1.0 / (1.0 + std::exp(-L))).epsilon(1e-15));
      CHECK(w.values(1) == w.values(0));
      CHECK(w.magnitude == doctest::Approx(1.0 + std::tanh(L / 2.0)).epsilon(1e-15));
    }
  }
  SUBCASE("degree-3 centre at log 2 has zero weight") {
    const auto w = tree_weights(star({std::log(2.0), std::log(2.0), std::log(2.0)}));
    CHECK(std::abs(w.values(0)) <= 1e-15);
  }
  SUBCASE("matches the dense solve on a 200-vertex tree") {
    const auto t = random_tree(200, UniformLength{0.05, 3.0}, 200);
    const auto w = tree_weights(t);
    const auto dense = solve_spd(build_kernel(tree_metric(t)), Eigen::VectorXd::Ones(200));
    CHECK((w.values - dense).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  SUBCASE("weighting equation holds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto t = random_tree(2 + 7 * seed, UniformLength{0.01, 5.0}, seed);
      const auto w = tree_weights(t);
      const auto z = build_kernel(tree_metric(t)).matrix();
      CHECK((z * w.values - Eigen::VectorXd::Ones(w.values.size())).lpNorm<Eigen::Infinity>() <= 1e-9);
      CHECK(w.magnitude >= 1.0);
    }
  }
}

TEST_CASE("tree_magnitude") {
  SUBCASE("star with three equal edges") {
    for (double l : {0.2, 1.0, 3.0}) {
      CHECK(tree_magnitude(star({l, l, l})) == doctest::Approx(1.0 + 3.0 * std::tanh(l / 2.0)).epsilon(1e-15));
    }
  }
  SUBCASE("large scale tends to the vertex count") {
    const auto t = random_tree(25, UniformLength{0.05, 3.0}, 7);
    CHECK(tree_magnitude(scale(t, 1e4)) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(tree_magnitude(scale(t, 10.0)) < tree_magnitude(scale(t, 100.0)));
  }
  SUBCASE("equals the sum of weights and lies in [1, |V|)") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto t = random_tree(2 + 13 * seed, UniformLength{0.05, 3.0}, 1000 + seed);
      const double m = tree_magnitude(t);
      CHECK(std::abs(m - tree_weights(t).values.sum()) <= 1e-10);
      CHECK(m >= 1.0);
      CHECK(m < static_cast<double>(t.vertex_count()));
    }
  }
  SUBCASE("strictly increasing in every edge length") {
    const auto t = random_tree(20, UniformLength{0.05, 3.0}, 99);
    const double base = tree_magnitude(t);
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      auto edges = t.edges();
      edges[e].length += 1e-3;
      CHECK(tree_magnitude(WeightedTree(t.vertices(), edges)) > base);
    }
  }
}

TEST_CASE("wedge_magnitude") {
  CHECK(wedge_magnitude(1.0, 2.75) == 2.75);
  const double L1 = 0.4, L2 = 2.2;
  const double wedged = wedge_magnitude(1.0 + std::tanh(L1 / 2), 1.0 + std::tanh(L2 / 2));
  CHECK(wedged == doctest::Approx(tree_magnitude(WeightedTree::from_labeled({{"a", "b", L1}, {"b", "c", L2}}))).epsilon(1e-15));
  CHECK_THROWS_AS(wedge_magnitude(0.5, 2.0), ValidationError);

  SUBCASE("random split at a cut vertex") {
    std::mt19937_64 rng(5);
    int splits = 0;
    for (std::uint64_t seed = 0; splits < 25; ++seed) {
      const auto t = random_tree(30, UniformLength{0.05, 3.0}, seed);
      std::vector<std::size_t> cuts;
      for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        if (t.degree(v) >= 2) cuts.push_back(v);
      }
      const auto cut = cuts[std::uniform_int_distribution<std::size_t>(0, cuts.size() - 1)(rng)];
      auto nbrs = t.neighbors(cut);
      std::shuffle(nbrs.begin(), nbrs.end(), rng);
      const auto split = std::uniform_int_distribution<std::size_t>(1, nbrs.size() - 1)(rng);
      const auto left = branch(t, cut, {nbrs.begin(), nbrs.begin() + static_cast<long>(split)});
      const auto right = branch(t, cut, {nbrs.begin() + static_cast<long>(split), nbrs.end()});
      CHECK(left.vertex_count() + right.vertex_count() == t.vertex_count() + 1);
      CHECK(std::abs(wedge_magnitude(tree_magnitude(left), tree_magnitude(right)) - tree_magnitude(t)) <= 1e-12);
      ++splits;
    }
  }
}

TEST_CASE("sparse_inverse") {
  SUBCASE("two points") {
    const double L = 0.8;
    const auto inv = sparse_inverse(WeightedTree::from_labeled({{"x", "y", L}})).assemble();
    const double f = 1.0 / (1.0 - std::exp(-2 * L));
    CHECK(inv(0, 0) == doctest::Approx(f).epsilon(1e-14));
    CHECK(inv(1, 1) == doctest::Approx(f).epsilon(1e-14));
    CHECK(inv(0, 1) == doctest::Approx(-f * std::exp(-L)).epsilon(1e-14));
  }
  SUBCASE("path a-b-c against a high-precision inverse") {
    const auto t = WeightedTree::from_labeled({{"a", "b", 0.3}, {"b", "c", 0.9}});
    const auto inv = sparse_inverse(t);
    CHECK(inv.stored_values() == 5);
    const auto m = inv.assemble();
    CHECK(m(0, 2) == 0.0);
    CHECK(m(2, 0) == 0.0);
    // 40-digit reference values.
    CHECK(m(0, 0) == doctest::Approx(2.2163692151608707947).epsilon(1e-14));
    CHECK(m(1, 1) == doctest::Approx(2.4144028416758767123).epsilon(1e-14));
    CHECK(m(2, 2) == doctest::Approx(1.1980336265150059175).epsilon(1e-14));
    CHECK(m(0, 1) == doctest::Approx(-1.6419266983492118076).epsilon(1e-14));
    CHECK(m(1, 2) == doctest::Approx(-0.48708412389000195408).epsilon(1e-14));
  }
  SUBCASE("random 100-vertex tree inverts the kernel") {
    const auto t = random_tree(100, UniformLength{0.05, 3.0}, 100);
    const auto inv = sparse_inverse(t);
    CHECK(inv.stored_values() == 2 * t.vertex_count() - 1);
    const auto z = build_kernel(tree_metric(t)).matrix();
    CHECK((inv.assemble() * z - Eigen::MatrixXd::Identity(100, 100)).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  SUBCASE("very long edges stay finite") {
    const auto inv = sparse_inverse(WeightedTree::from_labeled({{"x", "y", 800.0}}));
    CHECK(inv.diag(0) == 1.0);
    CHECK(inv.offdiag(0) == 0.0);
  }
  SUBCASE("row sums of the inverse are the weights") {
    const auto t = random_tree(40, UniformLength{0.05, 3.0}, 3);
    const Eigen::VectorXd rows = sparse_inverse(t).assemble().rowwise().sum();
    CHECK((rows - tree_weights(t).values).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("continuum_magnitude") {
  CHECK(continuum_magnitude(0.0) == 1.0);
  CHECK(continuum_magnitude(3.0) == 2.5);
  CHECK_THROWS_AS(continuum_magnitude(-1.0), ValidationError);
  CHECK_THROWS_AS(continuum_magnitude(std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("subdivided magnitude increases to the continuum value") {
  SUBCASE("single unit edge, high-precision gaps") {
    const auto t = WeightedTree::from_labeled({{"a", "b", 1.0}});
    const std::vector<std::pair<std::size_t, double>> gaps{
        {1, 0.037882842739990241498}, {2, 0.010162675192581741444},
        {4, 0.0025879929136151677814}, {8, 0.00065002601989988407886}};
    for (auto [k, gap] : gaps) {
      CHECK(continuum_magnitude(1.0) - tree_magnitude(subdivide(t, k)) == doctest::Approx(gap).epsilon(1e-10));
    }
  }
  SUBCASE("monotone and bounded on random trees") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = random_tree(10, UniformLength{0.05, 3.0}, seed);
      const double target = continuum_magnitude(t.total_length());
      double prev = 0.0;
      for (std::size_t k : {1, 2, 3, 5, 8, 13, 21}) {
        const double m = tree_magnitude(subdivide(t, k));
        CHECK(m >= prev);
        CHECK(m <= target + 1e-12);
        prev = m;
      }
    }
  }
}
