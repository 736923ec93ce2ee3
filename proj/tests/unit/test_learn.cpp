#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "stylo/error.hpp"
#include "stylo/learn.hpp"
#include "stylo/rng.hpp"

using namespace stylo;
using namespace stylo::learn;

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform_real(rng), u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// `classes` blobs on the corners of a simplex-like layout, `gap` noise units apart.
std::pair<Matrix, std::vector<std::string>> blobs(std::size_t classes, std::size_t per, std::size_t p, double gap,
                                                  std::uint64_t seed, double offset = 0.0) {
  Rng rng(seed);
  Matrix x(classes * per, p);
  std::vector<std::string> y;
  for (std::size_t i = 0; i < classes * per; ++i) {
    const std::size_t c = i / per;
    for (std::size_t j = 0; j < p; ++j) x(i, j) = offset + gaussian(rng) + (j % classes == c ? gap : 0.0);
    y.push_back(std::string(1, static_cast<char>('a' + c)));
  }
  return {x, y};
}

double accuracy(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("every classifier fits separable blobs") {
  auto [x, y] = blobs(3, 15, 6, 10.0, 1, 12.0);  // offset keeps naive Bayes inputs positive
  for (auto kind : all_classifier_kinds()) {
    if (kind == ClassifierKind::bernoulli_nb) continue;
    const std::string kind_name = to_string(kind);
    CAPTURE(kind_name);
    const Model m = train(kind, x, y, {}, 7);
    CHECK(accuracy(predict(m, x).labels, y) == 1.0);
  }
  // Bernoulli NB only sees presence, so give each class its own active features.
  Matrix sparse = x;
  for (double& v : sparse.data()) v = std::max(0.0, v - 17.0);
  CHECK(accuracy(predict(train(ClassifierKind::bernoulli_nb, sparse, y), sparse).labels, y) == 1.0);
  // Kinds that must also work through the high-dimensional (dual) paths.
  auto [wide, wy] = blobs(2, 8, 60, 6.0, 2);
  for (auto kind : {ClassifierKind::ridge, ClassifierKind::maxent, ClassifierKind::linear_svm, ClassifierKind::sgd_hinge}) {
    const std::string kind_name = to_string(kind);
    CAPTURE(kind_name);
    CHECK(accuracy(predict(train(kind, wide, wy), wide).labels, wy) == 1.0);
  }
}

TEST_CASE("train preconditions") {
  Matrix x(4, 2, 1.0);
  CHECK_THROWS_AS(train(ClassifierKind::multinomial_nb, x, {"a", "a", "a", "a"}), Error);
  CHECK_THROWS_AS(train(ClassifierKind::ridge, x, {"a", "b"}), Error);
  Matrix bad = x;
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(train(ClassifierKind::ridge, bad, {"a", "a", "b", "b"}), Error);
  Matrix neg = x;
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(train(ClassifierKind::bernoulli_nb, neg, {"a", "a", "b", "b"}), Error);
  const Model m = train(ClassifierKind::ridge, x, {"a", "a", "b", "b"});
  CHECK_THROWS_AS(predict(m, Matrix(1, 3)), Error);
  CHECK_THROWS_AS(linear_form(train(ClassifierKind::nearest_centroid, x, {"a", "a", "b", "b"})), Error);
  CHECK(parse_classifier_kind("maxent") == ClassifierKind::maxent);
  CHECK_THROWS_AS(parse_classifier_kind("forest"), Error);
}

TEST_CASE("nearest centroid matches a brute-force oracle") {
  auto [x, y] = blobs(3, 10, 4, 2.0, 3);
  const Model m = train(ClassifierKind::nearest_centroid, x, y);
  Rng rng(4);
  Matrix q(50, 4);
  for (double& v : q.data()) v = 3.0 * gaussian(rng);
  const auto got = predict(m, q).labels;
  for (std::size_t i = 0; i < 50; ++i) {
    std::string best;
    double best_d = INFINITY;
    for (const std::string c : {"a", "b", "c"}) {
      std::vector<double> mu(4, 0.0);
      for (std::size_t s = 0; s < 30; ++s)
        if (y[s] == c)
          for (std::size_t j = 0; j < 4; ++j) mu[j] += x(s, j) / 10.0;
      double d = 0.0;
      for (std::size_t j = 0; j < 4; ++j) d += (q(i, j) - mu[j]) * (q(i, j) - mu[j]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    CHECK(got[i] == best);
  }
}

TEST_CASE("nearest centroid zero input and ties") {
  const Matrix x = Matrix::from_rows({{3, 0}, {5, 0}, {0, 2}, {0, 2}, {0, -2}, {0, -2}});
  const Model m = train(ClassifierKind::nearest_centroid, x, {"far", "far", "up", "up", "down", "down"});
  // "up" and "down" centroids are equally near the origin; "down" < "up".
  CHECK(predict(m, Matrix(1, 2)).labels[0] == "down");
}

TEST_CASE("training and prediction are deterministic") {
  auto [x, y] = blobs(3, 12, 5, 1.5, 5);
  for (auto kind : all_classifier_kinds()) {
    if (kind == ClassifierKind::bernoulli_nb || kind == ClassifierKind::multinomial_nb) continue;
    const auto a = predict(train(kind, x, y, {}, 9), x);
    const auto b = predict(train(kind, x, y, {}, 9), x);
    CHECK(a.labels == b.labels);
    CHECK(a.scores == b.scores);
  }
}

TEST_CASE("linear kinds have affine decision scores") {
  auto [x, y] = blobs(3, 12, 5, 1.5, 6);
  Hyperparams with_pca;
  with_pca.pca_components = 3;
  for (const auto& hp : {Hyperparams{}, with_pca})
    for (auto kind : {ClassifierKind::ridge, ClassifierKind::linear_svm, ClassifierKind::maxent, ClassifierKind::sgd_hinge}) {
      const std::string kind_name = to_string(kind);
    CAPTURE(kind_name);
      const Model m = train(kind, x, y, hp, 3);
      const LinearForm f = linear_form(m);
      Rng rng(8);
      Matrix a(1, 5), b(1, 5);
      for (std::size_t j = 0; j < 5; ++j) {
        a(0, j) = gaussian(rng);
        b(0, j) = a(0, j) + gaussian(rng);
      }
      const Matrix sa = decision_scores(m, a), sb = decision_scores(m, b);
      REQUIRE(sa.cols() == f.weights.rows());
      for (std::size_t r = 0; r < f.weights.rows(); ++r) {
        double wd = 0.0, wx = f.bias[r];
        for (std::size_t j = 0; j < 5; ++j) {
          wd += f.weights(r, j) * (b(0, j) - a(0, j));
          wx += f.weights(r, j) * a(0, j);
        }
        const double scale = 1.0 + std::abs(sa(0, r)) + std::abs(sb(0, r));
        CHECK(std::abs((sb(0, r) - sa(0, r)) - wd) < 1e-9 * scale);
        CHECK(std::abs(sa(0, r) - wx) < 1e-9 * scale);
      }
    }
}

TEST_CASE("ridge weights satisfy the normal equations in both forms") {
  for (std::size_t p : {4u, 40u}) {
    auto [x, y] = blobs(2, 10, p, 1.0, 10 + p);
    const Model m = train(ClassifierKind::ridge, x, y);
    // Standardize as the model does, then check (Z^T Z + I) w = Z^T t.
    Matrix z = x;
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < p; ++j) z(i, j) = (x(i, j) - m.mean[j]) / m.scale[j];
    for (std::size_t k = 0; k < 2; ++k) {
      std::vector<double> t(20);
      double tm = 0.0;
      for (std::size_t i = 0; i < 20; ++i) tm += t[i] = (y[i] == m.labels[k] ? 1.0 : -1.0);
      tm /= 20.0;
      CHECK(m.bias[k] == doctest::Approx(tm));
      for (std::size_t j = 0; j < p; ++j) {
        double lhs = m.weights(k, j), rhs = 0.0;
        for (std::size_t i = 0; i < 20; ++i) {
          lhs += z(i, j) * dot(z.row(i), m.weights.row(k));
          rhs += z(i, j) * (t[i] - tm);
        }
        CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("sgd_hinge and linear_svm agree on a well-separated set") {
  auto [x, y] = blobs(2, 20, 3, 12.0, 12);
  const Matrix grid = [] {
    Rng rng(13);
    Matrix g(60, 3);
    for (std::size_t i = 0; i < 60; ++i)
      for (std::size_t j = 0; j < 3; ++j) g(i, j) = gaussian(rng) + (i % 2 == j % 2 ? 12.0 : 0.0);
    return g;
  }();
  CHECK(predict(train(ClassifierKind::sgd_hinge, x, y, {}, 1), grid).labels ==
        predict(train(ClassifierKind::linear_svm, x, y, {}, 1), grid).labels);
}

TEST_CASE("metrics boundary cases") {
  ConfusionMatrix perfect{{"a", "b"}, {{5, 0}, {0, 7}}};
  auto m = metrics(perfect);
  CHECK(m.accuracy == 1.0);
  CHECK(m.mcc == 1.0);
  CHECK(m.macro_f1 == 1.0);
  CHECK(metrics(ConfusionMatrix{{"a", "b"}, {{0, 4}, {6, 0}}}).mcc == -1.0);
  m = metrics(ConfusionMatrix{{"a", "b"}, {{1, 1}, {1, 1}}});
  CHECK(m.mcc == 0.0);
  CHECK(m.per_class[0].precision == 0.5);
  CHECK(m.per_class[0].recall == 0.5);
  CHECK_FALSE(m.degenerate);
  // Nothing predicted as b: zero denominators give 0 and raise the flag.
  m = metrics(ConfusionMatrix{{"a", "b"}, {{3, 0}, {2, 0}}});
  CHECK(m.per_class[1].precision == 0.0);
  CHECK(m.mcc == 0.0);
  CHECK(m.degenerate);
  CHECK(metrics(ConfusionMatrix{{"a", "b", "c"}, {{2, 0, 0}, {0, 3, 0}, {0, 0, 1}}}).mcc == 1.0);
}

TEST_CASE("metrics match brute force on random confusion matrices") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 2 + uniform_index(rng, 4);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < c; ++k) labels.push_back("L" + std::to_string(k));
    std::vector<std::string> truth, pred;
    const std::size_t n = 5 + uniform_index(rng, 200);
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(labels[uniform_index(rng, c)]);
      pred.push_back(uniform_real(rng) < 0.6 ? truth.back() : labels[uniform_index(rng, c)]);
    }
    const Metrics m = metrics(confusion(truth, pred, labels));
    // Oracle straight from the pairs.
    double macro_f1 = 0.0, correct = 0.0;
    for (const auto& l : labels) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += truth[i] == l && pred[i] == l;
        fp += truth[i] != l && pred[i] == l;
        fn += truth[i] == l && pred[i] != l;
      }
      const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0, r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      macro_f1 += (p + r > 0 ? 2 * p * r / (p + r) : 0.0) / static_cast<double>(c);
    }
    for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
    // MCC as the Pearson correlation of the one-hot indicator matrices.
    double sxy = 0, sxx = 0, syy = 0;
    for (const auto& l : labels) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < n; ++i) {
        mx += (truth[i] == l) / static_cast<double>(n);
        my += (pred[i] == l) / static_cast<double>(n);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = (truth[i] == l) - mx, dy = (pred[i] == l) - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
      }
    }
    const double mcc = sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    CHECK(std::abs(m.macro_f1 - macro_f1) < 1e-12);
    CHECK(std::abs(m.accuracy - correct / static_cast<double>(n)) < 1e-12);
    CHECK(std::abs(m.mcc - mcc) < 1e-12);
  }
}

TEST_CASE("binary mcc is invariant under relabeling and transpose") {
  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<std::size_t>> c(2, std::vector<std::size_t>(2));
    for (auto& row : c)
      for (auto& v : row) v = 1 + uniform_index(rng, 30);
    const double a = metrics({{"p", "q"}, c}).mcc;
    const double swapped = metrics({{"p", "q"}, {{c[1][1], c[1][0]}, {c[0][1], c[0][0]}}}).mcc;
    const double transposed = metrics({{"p", "q"}, {{c[0][0], c[1][0]}, {c[0][1], c[1][1]}}}).mcc;
    CHECK(std::abs(a - swapped) < 1e-12);
    CHECK(std::abs(a - transposed) < 1e-12);
  }
}

TEST_CASE("fold assignment") {
  std::vector<std::string> y;
  for (int i = 0; i < 53; ++i) y.push_back(i % 3 == 0 ? "x" : i % 3 == 1 ? "y" : "z");
  bool strat = false;
  const auto f = assign_folds(y, 5, 4, &strat);
  CHECK(strat);
  CHECK(f == assign_folds(y, 5, 4));
  CHECK(f != assign_folds(y, 5, 5));
  std::map<std::size_t, std::size_t> sizes;
  std::map<std::pair<std::size_t, std::string>, std::size_t> per_class;
  for (std::size_t i = 0; i < y.size(); ++i) {
    REQUIRE(f[i] < 5);
    ++sizes[f[i]];
    ++per_class[{f[i], y[i]}];
  }
  for (const auto& [_, s] : sizes) CHECK((s == 10 || s == 11));
  for (const auto& [_, s] : per_class) CHECK((s == 3 || s == 4));

  y.push_back("rare");
  CHECK(assign_folds(y, 5, 4, &strat).size() == 54);
  CHECK_FALSE(strat);
  CHECK_THROWS_AS(assign_folds(y, 55, 4), Error);
  CHECK_THROWS_AS(assign_folds(y, 1, 4), Error);
}

TEST_CASE("cross validation on separable data") {
  auto [x, y] = blobs(3, 10, 4, 10.0, 30);
  const auto r = cross_validate(ClassifierKind::ridge, x, y, 5, 2);
  CHECK(r.metrics.accuracy == 1.0);
  CHECK(r.metrics.macro_f1 == 1.0);
  CHECK(r.confusion.total() == 30);
  CHECK(r.warnings.empty());
  const auto again = cross_validate(ClassifierKind::ridge, x, y, 5, 2);
  CHECK(again.predicted == r.predicted);
  CHECK(to_json(r) == to_json(again));
}

TEST_CASE("attribution tallies") {
  auto single = attribute({{"ridge", "bow", std::vector<std::string>(73, "A")}}, {"A"});
  CHECK(single.table[0].wins == 1);
  CHECK(single.table[0].counts[0] == 73);

  auto r = attribute({{"ridge", "bow", {"A", "A", "A", "B"}}, {"maxent", "cng", {"A", "B", "B", "B"}}}, {"B", "A", "C"});
  REQUIRE(r.table.size() == 3);
  CHECK(r.table[0].candidate == "A");
  CHECK(r.table[0].wins == 1);
  CHECK(r.table[1].candidate == "B");
  CHECK(r.table[1].wins == 1);
  CHECK(r.table[0].average == 2.0);
  CHECK(r.table[1].average == 2.0);
  CHECK(r.table[2].wins == 0);
  CHECK(to_csv(r) == "candidate,ridge+bow,maxent+cng,wins,avg\nA,3,1,1,2\nB,1,3,1,2\nC,0,0,0,0\n");
  CHECK_THROWS_AS(attribute({{"r", "f", {"Z"}}}, {"A"}), Error);
  CHECK_THROWS_AS(attribute({{"r", "f", {}}}, {"A"}), Error);
}

TEST_CASE("ranking order") {
  std::vector<RankingRow> rows{{"a", "x", 0.9, 0.8, 0.85}, {"b", "y", 0.95, 0.7, 0.8}, {"c", "z", 0.9, 0.9, 0.9}};
  sort_ranking(rows);
  CHECK(rows[0].algorithm == "b");
  CHECK(rows[1].algorithm == "c");
  CHECK(ranking_csv(rows).rfind("algorithm,features,precision,recall,f_score\n", 0) == 0);
}
