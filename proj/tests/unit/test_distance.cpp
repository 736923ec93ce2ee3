#include <doctest.h>

#include <cmath>

#include "stylo/corpus.hpp"
#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/rng.hpp"
#include "stylo/synth.hpp"

using namespace stylo;
using namespace stylo::distance;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, bool positive) {
  std::vector<double> v(n);
  for (double& x : v) x = positive ? uniform_real(rng) : 4.0 * uniform_real(rng) - 2.0;
  return v;
}

DistanceMatrix from_values(std::vector<std::string> ids, std::vector<std::vector<double>> rows) {
  DistanceMatrix d;
  d.ids = std::move(ids);
  d.values = Matrix::from_rows(rows);
  return d;
}

}  // namespace

TEST_CASE("delta axioms for every kind") {
  Rng rng(1);
  for (DeltaKind kind : all_delta_kinds()) {
    const bool positive = kind == DeltaKind::eder_simple;
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + uniform_index(rng, 40);
      const auto a = random_vector(rng, n, positive);
      const auto b = random_vector(rng, n, positive);
      const double ab = delta(a, b, kind);
      CHECK(ab == delta(b, a, kind));
      CHECK(ab >= 0.0);
      CHECK(std::isfinite(ab));
      CHECK(delta(a, a, kind) == 0.0);
    }
  }
}

TEST_CASE("delta hand values") {
  const std::vector<double> a{1, -1}, b{0, 0};
  CHECK(delta(a, b, DeltaKind::burrows) == 1.0);
  CHECK(delta(a, b, DeltaKind::manhattan) == 2.0);
  CHECK(delta(a, b, DeltaKind::euclidean) == doctest::Approx(std::sqrt(2.0)));
  CHECK(delta(a, b, DeltaKind::canberra) == 2.0);
  // Eder weights (N - rank + 1) / N: 2/2 and 1/2, then / N.
  CHECK(delta(a, b, DeltaKind::eder) == doctest::Approx((1.0 * 1.0 + 1.0 * 0.5) / 2.0));
  CHECK(delta(std::vector<double>{1, 0}, std::vector<double>{0, 1}, DeltaKind::cosine_delta) ==
        doctest::Approx(1.0));
  CHECK(delta(std::vector<double>{0.25, 0.04}, std::vector<double>{0.09, 0.16}, DeltaKind::eder_simple) ==
        doctest::Approx(0.2 + 0.2));
  CHECK_THROWS_AS(delta(a, std::vector<double>{1}, DeltaKind::burrows), Error);
  CHECK_THROWS_AS(delta(a, b, DeltaKind::cosine_delta), Error);
  CHECK_THROWS_AS(delta(a, b, DeltaKind::eder_simple), Error);
}

TEST_CASE("pairwise matches the scalar op") {
  Rng rng(2);
  Matrix m(5, 7);
  for (double& x : m.data()) x = uniform_real(rng);
  const std::vector<std::string> ids{"a", "b", "c", "d", "e"};
  for (DeltaKind kind : all_delta_kinds()) {
    auto d = pairwise(ids, m, kind);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(d.values(i, i) == 0.0);
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(d.values(i, j) == d.values(j, i));
        if (i != j) CHECK(d.values(i, j) == delta(m.row(i), m.row(j), kind));
      }
    }
  }
  Matrix same = Matrix::from_rows({{1, 2}, {1, 2}});
  CHECK(pairwise({"x", "y"}, same, DeltaKind::burrows).values(0, 1) == 0.0);
}

TEST_CASE("z-scored deltas are invariant to column scaling") {
  Rng rng(3);
  features::FeatureMatrix raw;
  raw.values = Matrix(6, 8);
  for (std::size_t i = 0; i < 6; ++i) raw.sample_ids.push_back("s" + std::to_string(i));
  for (std::size_t j = 0; j < 8; ++j) raw.feature_names.push_back("f" + std::to_string(j));
  for (double& x : raw.values.data()) x = uniform_real(rng);
  features::FeatureMatrix scaled = raw;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 8; ++j) scaled.values(i, j) *= 0.5 + static_cast<double>(j);
  for (DeltaKind kind : {DeltaKind::burrows, DeltaKind::eder, DeltaKind::cosine_delta}) {
    auto a = pairwise(features::zscore(raw).matrix, kind);
    auto b = pairwise(features::zscore(scaled).matrix, kind);
    for (std::size_t k = 0; k < a.values.data().size(); ++k)
      CHECK(std::abs(a.values.data()[k] - b.values.data()[k]) < 1e-9);
  }
}

TEST_CASE("clustering hand traces") {
  auto two = cluster(from_values({"a", "b"}, {{0, 3}, {3, 0}}));
  REQUIRE(two.merges.size() == 1);
  CHECK(two.merges[0].height == 3.0);

  auto d = from_values({"A", "B", "C"}, {{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
  auto avg = cluster(d, Linkage::average);
  REQUIRE(avg.merges.size() == 2);
  CHECK(avg.merges[0].left == 0);
  CHECK(avg.merges[0].right == 1);
  CHECK(avg.merges[0].height == 1.0);
  CHECK(avg.merges[1].height == 10.0);
  CHECK(avg.merges[1].size == 3);

  // Unequal distances: average vs complete vs single second merge height.
  auto e = from_values({"A", "B", "C"}, {{0, 1, 4}, {1, 0, 6}, {4, 6, 0}});
  CHECK(cluster(e, Linkage::average).merges[1].height == 5.0);
  CHECK(cluster(e, Linkage::complete).merges[1].height == 6.0);
  CHECK(cluster(e, Linkage::single).merges[1].height == 4.0);

  // Ties go to the smallest id pair.
  auto tie = from_values({"p", "q", "r", "s"}, {{0, 2, 2, 2}, {2, 0, 2, 2}, {2, 2, 0, 2}, {2, 2, 2, 0}});
  auto t = cluster(tie);
  CHECK(t.merges[0].left == 0);
  CHECK(t.merges[0].right == 1);
  CHECK(t.merges[1].left == 2);
  CHECK(t.merges[1].right == 3);

  CHECK_THROWS_AS(cluster(from_values({"a"}, {{0}})), Error);
}

TEST_CASE("dendrogram heights are non-decreasing with n-1 merges") {
  Rng rng(4);
  Matrix pts(30, 3);
  for (double& x : pts.data()) x = uniform_real(rng);
  std::vector<std::string> ids;
  for (int i = 0; i < 30; ++i) ids.push_back("p" + std::to_string(i));
  auto d = pairwise(ids, pts, DeltaKind::euclidean);
  for (Linkage l : {Linkage::average, Linkage::complete, Linkage::single}) {
    auto tree = cluster(d, l);
    CHECK(tree.merges.size() == 29);
    for (std::size_t k = 1; k < tree.merges.size(); ++k) CHECK(tree.merges[k].height >= tree.merges[k - 1].height);
    CHECK(tree.merges.back().size == 30);
  }
  auto tree = cluster(d);
  const std::string dot = to_dot(tree);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(to_dot(tree, true).rfind("graph", 0) == 0);
  CHECK(to_json(tree).find("\"merges\"") != std::string::npos);
}

TEST_CASE("separation directionality") {
  auto d = from_values({"a1", "a2", "b1", "b2"}, {{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
  auto s = separation(d, {"A", "A", "B", "B"});
  CHECK(s.raw_difference == 1.0);
  CHECK(s.ingroup_pairs == 2);
  CHECK(s.outgroup_pairs == 4);
  CHECK(s.standardized_difference > 1e6);
  CHECK(s.raw_difference == s.outgroup_mean - s.ingroup_mean);

  auto flat = from_values({"a1", "a2", "b1"}, {{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
  CHECK(separation(flat, {"A", "A", "B"}).raw_difference == 0.0);
  CHECK_THROWS_AS(separation(flat, {"A", "B", "C"}), Error);
  CHECK_THROWS_AS(separation(flat, {"A", "A", "A"}), Error);

  // Oracle for the pooled standard deviation.
  auto g = from_values({"a", "b", "c", "d"}, {{0, 1, 4, 5}, {1, 0, 6, 9}, {4, 6, 0, 3}, {5, 9, 3, 0}});
  auto sg = separation(g, {"X", "X", "Y", "Y"});
  // ingroup {1, 3}, outgroup {4, 5, 6, 9}
  // means 2 and 6
  const double ss_in = 1.0 + 1.0, ss_out = 4.0 + 1.0 + 0.0 + 9.0;
  CHECK(sg.pooled_sd == doctest::Approx(std::sqrt((ss_in + ss_out) / 4.0)));
  CHECK(sg.standardized_difference == doctest::Approx(4.0 / std::sqrt((ss_in + ss_out) / 4.0)));
}

TEST_CASE("delta grid shape and synthetic separation") {
  synth::CorpusSpec spec;
  spec.authors = 3;
  spec.works_per_author = 4;
  spec.words_per_work = 600;
  spec.seed = 9;
  GridInput input;
  for (const auto& d : synth::make_corpus(spec)) {
    auto c = corpus::canonicalize(d);
    input.samples.push_back(features::tokenize(*c.canonical_text, c.id));
    input.labels.push_back(*c.author);
  }
  auto one = delta_grid(input, {100}, {0}, {DeltaKind::burrows});
  CHECK(one.size() == 1);
  auto grid = delta_grid(input, {100, 500}, {0, 50}, {DeltaKind::burrows});
  CHECK(grid.size() == 4);
  auto all = delta_grid(input, {50, 150}, {0, 50}, all_delta_kinds());
  CHECK(all.size() == 2 * 2 * 7);
  for (std::size_t i = 1; i < all.size(); ++i)
    CHECK(all[i - 1].score.standardized_difference >= all[i].score.standardized_difference);
  CHECK(all.front().score.standardized_difference > 0.0);
  CHECK(grid_csv(all) == grid_csv(delta_grid(input, {50, 150}, {0, 50}, all_delta_kinds())));
}
