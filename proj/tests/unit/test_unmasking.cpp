#include <doctest.h>

#include <cmath>
#include <map>

#include "stylo/error.hpp"
#include "stylo/synth.hpp"
#include "stylo/unmasking.hpp"

using namespace stylo;
using namespace stylo::unmasking;

namespace {

corpus::Chunk chunk(const std::string& doc, std::vector<std::string> tokens) {
  corpus::Chunk c;
  c.doc_id = doc;
  c.tokens = std::move(tokens);
  c.word_count = c.tokens.size();
  return c;
}

std::vector<Work> synthetic_works(std::size_t authors, std::size_t works, std::size_t words, std::uint64_t seed,
                                  int chunk_words = 100) {
  synth::CorpusSpec spec;
  spec.authors = authors;
  spec.works_per_author = works;
  spec.words_per_work = words;
  spec.seed = seed;
  spec.config.paragraph_words = 30;
  std::vector<Work> out;
  for (const auto& d : synth::make_corpus(spec))
    out.push_back({d.id, *d.author, corpus::segment_chunks(corpus::canonicalize(d), chunk_words)});
  return out;
}

Config small() {
  Config cfg;
  cfg.n = 60;
  cfg.k = 2;
  cfg.m = 3;
  cfg.cv_folds = 3;
  return cfg;
}

}  // namespace

TEST_CASE("unmasking config validation") {
  Config cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.k = 3;
  CHECK_NOTHROW(validate(cfg));
  cfg.n = 48;  // 2 * 3 * 8
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = Config{};
  cfg.m = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("pair vocabulary ranks by the averaged side frequency") {
  // Work side: "x" has frequency 0.02 (2 of 100); candidate side: 0.01.
  std::vector<std::string> wt(100, "w"), ct(100, "c");
  wt[0] = wt[1] = "x";
  ct[0] = "x";
  wt[2] = "y";
  ct[1] = ct[2] = ct[3] = ct[4] = "z";
  std::vector<corpus::Chunk> work, cand;
  for (int i = 0; i < 2; ++i) {
    work.push_back(chunk("W", std::vector<std::string>(wt.begin() + 50 * i, wt.begin() + 50 * (i + 1))));
    cand.push_back(chunk("C", std::vector<std::string>(ct.begin() + 50 * i, ct.begin() + 50 * (i + 1))));
  }
  Config cfg;
  cfg.n = 5;
  cfg.k = 1;
  cfg.m = 2;
  cfg.cv_folds = 2;
  const auto d = pair_features(work, cand, cfg);
  REQUIRE(d.vocabulary.size() == 5);
  CHECK(d.vocabulary == std::vector<std::string>{"w", "c", "z", "x", "y"});
  CHECK(d.work_frequency[3] == doctest::Approx(0.02));
  CHECK(d.candidate_frequency[3] == doctest::Approx(0.01));
  CHECK(0.5 * (d.work_frequency[3] + d.candidate_frequency[3]) == doctest::Approx(0.015));
  CHECK(d.sides == std::vector<std::string>{"work", "work", "candidate", "candidate"});
  CHECK(d.values(0, 3) == doctest::Approx(2.0 / 50.0));

  cfg.n = 3;
  CHECK(pair_features(work, cand, Config{3, 1, 1, 2}).vocabulary.size() == 3);
  // Candidate chunks of the work's own document are removed first.
  auto mixed = cand;
  mixed.push_back(chunk("W", wt));
  CHECK(pair_features(work, mixed, Config{5, 1, 2, 2}).values.rows() == 4);
  CHECK_THROWS_AS(pair_features(work, {cand[0]}, Config{5, 1, 2, 2}), Error);
}

TEST_CASE("identical sides give identical side means") {
  const auto works = synthetic_works(1, 1, 1200, 3);
  // Same document on both sides: the candidate side empties out.
  CHECK_THROWS_AS(pair_features(works[0].chunks, works[0].chunks, small()), Error);
  auto copy = works[0].chunks;
  for (auto& c : copy) c.doc_id = "copy";
  const auto e = pair_features(works[0].chunks, copy, small());
  CHECK(e.work_frequency == e.candidate_frequency);
  const std::size_t half = e.values.rows() / 2;
  for (std::size_t j = 0; j < e.values.cols(); ++j) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      a += e.values(i, j);
      b += e.values(half + i, j);
    }
    CHECK(a == b);
  }
}

TEST_CASE("curve shape and feature elimination are exact") {
  const auto works = synthetic_works(2, 2, 1500, 5);
  const Config cfg = small();
  std::vector<corpus::Chunk> cand;
  for (const auto& w : works)
    if (w.author == "B") cand.insert(cand.end(), w.chunks.begin(), w.chunks.end());
  const auto c = unmask_pair(works[0].id, works[0].chunks, "B", cand, cfg);
  REQUIRE(c.accuracies.size() == cfg.m + 1);
  REQUIRE(c.removed.size() == cfg.m);
  for (std::size_t t = 0; t <= cfg.m; ++t) {
    CHECK(c.live_features[t] == c.live_features[0] - 2 * cfg.k * t);
    CHECK(c.accuracies[t] >= 0.0);
    CHECK(c.accuracies[t] <= 1.0);
  }
  for (const auto& step : c.removed) CHECK(step.size() == 2 * cfg.k);
  const auto again = unmask_pair(works[0].id, works[0].chunks, "B", cand, cfg);
  CHECK(again.accuracies == c.accuracies);
  CHECK(again.removed == c.removed);

  const auto f = curve_features(c);
  REQUIRE(f.size() == 2 * cfg.m + 2);
  CHECK(f[cfg.m + 1] == doctest::Approx(c.accuracies[1] - c.accuracies[0]));
  double drop = -1.0;
  for (std::size_t t = 0; t < cfg.m; ++t) drop = std::max(drop, c.accuracies[t] - c.accuracies[t + 1]);
  CHECK(f.back() == drop);
}

TEST_CASE("curve dataset pair counts") {
  const auto works = synthetic_works(3, 2, 1000, 7);
  const auto ds = build_curve_dataset(works, small());
  CHECK(ds.curves.size() == 18);
  CHECK(ds.same_author == 6);
  CHECK(ds.different_author == 12);
  CHECK(ds.features.rows() == 18);
  CHECK(ds.features.cols() == 2 * small().m + 2);
  for (std::size_t i = 0; i < ds.curves.size(); ++i) {
    const auto& c = ds.curves[i];
    const std::string author = c.work.substr(0, c.work.find('_'));
    CHECK(*c.label == (author == c.candidate ? kSameAuthor : kDifferentAuthor));
    CHECK(ds.labels[i] == *c.label);
  }

  // A single-work author only yields different-author curves.
  auto uneven = works;
  uneven.pop_back();  // C keeps one work
  const auto u = build_curve_dataset(uneven, small());
  CHECK(u.curves.size() == 5 * 3 - 1);
  for (const auto& c : u.curves)
    if (c.work.rfind("C_", 0) == 0) CHECK(*c.label == kDifferentAuthor);

  std::vector<Work> solo{works[0], works[2]};  // A_w1 and B_w1: no same-author pair
  CHECK_THROWS_AS(build_curve_dataset(solo, small()), Error);
}

TEST_CASE("verification on well-separated synthetic authors") {
  // Meta-model from authors A..C; D is never a candidate.
  const auto works = synthetic_works(4, 3, 2500, 11);
  std::vector<Work> known;
  std::vector<corpus::Chunk> query_x, query_w;
  for (const auto& w : works) {
    if (w.id == "A_w3") query_x = w.chunks;
    else if (w.id == "D_w1") query_w = w.chunks;
    if (w.author != "D" && w.id != "A_w3") known.push_back(w);
  }
  const Config cfg{100, 3, 5, 5};
  const auto ds = build_curve_dataset(known, cfg);
  const auto meta = train_meta(ds);
  const auto vx = verify("A_w3", query_x, known, meta, cfg);
  REQUIRE(vx.candidates.size() == 3);
  CHECK(std::find(vx.matched.begin(), vx.matched.end(), "A") != vx.matched.end());

  const auto vw = verify("D_w1", query_w, known, meta, cfg);
  CHECK(vw.matched.empty());
  CHECK(to_json(vw).find("\"outcome\": \"none\"") != std::string::npos);

  learn::Model wrong = meta;
  wrong.input_dim = 3;
  CHECK_THROWS_AS(verify("A_w3", query_x, known, wrong, cfg), Error);
}

TEST_CASE("curves csv") {
  DegradationCurve c{"W", "A", {1.0, 0.5}, {10, 8}, {{"p", "q"}}, kSameAuthor};
  CHECK(curves_csv({c}) == "work,candidate,step,accuracy,live_features,label\nW,A,0,1,10,same_author\nW,A,1,0.5,8,same_author\n");
  CHECK(curves_json({c}).find("\"removed\"") != std::string::npos);
}
