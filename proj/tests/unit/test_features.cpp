#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/rng.hpp"

using namespace stylo;
using namespace stylo::features;

namespace {

std::vector<TokenStream> streams_of(const std::vector<std::string>& texts) {
  std::vector<TokenStream> out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(tokenize(texts[i], "s" + std::to_string(i)));
  return out;
}

}  // namespace

TEST_CASE("tokenize marks words, punctuation and sentence ends") {
  auto s = tokenize("Hola, mundo.");
  REQUIRE(s.tokens.size() == 5);
  CHECK(s.tokens[0].text == "Hola");
  CHECK(s.tokens[0].norm == "hola");
  CHECK(s.tokens[0].kind == TokenKind::word);
  CHECK(s.tokens[1].text == ",");
  CHECK(s.tokens[1].kind == TokenKind::punctuation);
  CHECK(s.tokens[2].text == "mundo");
  CHECK(s.tokens[3].text == ".");
  CHECK(s.tokens[4].kind == TokenKind::sentence_end);

  CHECK(tokenize("").tokens.empty());
  auto ab = tokenize("a b");
  REQUIRE(ab.tokens.size() == 2);
  CHECK(ab.tokens[1].kind == TokenKind::word);

  auto run = tokenize("¿Qué?! Sí… no");
  std::size_t ends = 0;
  for (const auto& t : run.tokens) ends += t.kind == TokenKind::sentence_end;
  CHECK(ends == 2);
}

TEST_CASE("sentence_end follows terminal punctuation only") {
  auto s = tokenize("Uno, dos; tres. ¡Cuatro! Cinco? seis… «siete» (ocho)");
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (s.tokens[i].kind != TokenKind::sentence_end) continue;
    REQUIRE(i > 0);
    const auto& prev = s.tokens[i - 1].text;
    CHECK((prev == "." || prev == "!" || prev == "?" || prev == "…"));
  }
}

TEST_CASE("tokenize covers every non-space character exactly once") {
  const std::string text = "El «hidalgo» d'Ávila, dijo: —¡basta!  (y 3 más)...";
  auto s = tokenize(text);
  std::string joined, stripped;
  for (const auto& t : s.tokens) joined += t.text;
  for (char c : text)
    if (c != ' ') stripped += c;
  CHECK(joined == stripped);
}

TEST_CASE("character n-grams use boundaries and stay inside sentences") {
  auto s = tokenize("ab c. d");
  auto grams = unit_terms(s, Unit{UnitKind::char_ngram, 3, 3});
  CHECK(grams == std::vector<std::string>{"_ab", "ab_", "b_c", "_c_", "_d_"});
  auto wg = unit_terms(tokenize("a b c. d e"), Unit{UnitKind::word_ngram, 2, 3});
  CHECK(wg == std::vector<std::string>{"a b", "b c", "a b c", "d e"});
  auto multibyte = unit_terms(tokenize("ñú"), Unit{UnitKind::char_ngram, 2, 2});
  CHECK(multibyte == std::vector<std::string>{"_ñ", "ñú", "ú_"});
}

TEST_CASE("vocabulary ordering and culling") {
  std::vector<TokenStream> s{tokenize("b b a c", "d1"), tokenize("a b z", "d2"), tokenize("x y", "d3"),
                             tokenize("x", "d4"), tokenize("q", "d5")};
  auto v = build_vocabulary(s, Unit{}, 100, 0.0);
  REQUIRE(v.terms.size() == 7);
  CHECK(v.terms[0].term == "b");
  CHECK(v.terms[0].corpus_frequency == 3);
  CHECK(v.terms[1].term == "a");
  CHECK(v.terms[2].term == "x");
  CHECK(v.terms[3].term == "c");  // ties broken lexicographically
  CHECK(v.terms[4].term == "q");

  // "a" is in 2 of 5 documents (40%): excluded at 50% culling.
  auto culled = build_vocabulary(s, Unit{}, 100, 50.0);
  CHECK(culled.terms.empty());
  auto forty = build_vocabulary(s, Unit{}, 100, 40.0);
  CHECK(forty.names() == std::vector<std::string>{"b", "a", "x"});

  CHECK(build_vocabulary(s, Unit{}, 2, 0.0).terms.size() == 2);
  CHECK_THROWS_AS(build_vocabulary(s, Unit{}, 0, 0.0), Error);
}

TEST_CASE("culling counts source documents, not chunks") {
  std::vector<TokenStream> s{tokenize("a", "c1", "docA"), tokenize("a", "c2", "docA"),
                             tokenize("b", "c3", "docB")};
  auto v = build_vocabulary(s, Unit{}, 10, 60.0);
  CHECK(v.terms.empty());
  CHECK(v.document_count == 2);
  auto v50 = build_vocabulary(s, Unit{}, 10, 50.0);
  REQUIRE(v50.terms.size() == 2);
  CHECK(v50.terms[0].document_frequency == 1);
}

TEST_CASE("3000 character trigrams at most") {
  std::string text;
  Rng rng(5);
  for (int i = 0; i < 4000; ++i) {
    std::string w;
    const std::size_t len = 2 + uniform_index(rng, 6);
    for (std::size_t k = 0; k < len; ++k) w.push_back(static_cast<char>('a' + uniform_index(rng, 26)));
    text += w + (i % 12 == 11 ? ". " : " ");
  }
  auto v = build_vocabulary({tokenize(text)}, Unit{UnitKind::char_ngram, 3, 3}, 3000, 0.0);
  CHECK(v.terms.size() == 3000);
}

TEST_CASE("lexical statistics") {
  auto s = streams_of({"a b a ."});
  auto m = extract(s, default_spec(FeatureKind::lexical), Vocabulary{});
  REQUIRE(m.cols() == 3);
  CHECK(m.values(0, 0) == doctest::Approx(3.0));
  CHECK(m.values(0, 1) == doctest::Approx(0.0));
  CHECK(m.values(0, 2) == doctest::Approx(2.0 / 3.0));

  auto two = extract(streams_of({"a b. c c c d."}), default_spec(FeatureKind::lexical), Vocabulary{});
  CHECK(two.values(0, 0) == doctest::Approx(3.0));
  CHECK(two.values(0, 1) == doctest::Approx(1.0));
  CHECK(two.values(0, 2) == doctest::Approx((1.0 + 0.5) / 2.0));
}

TEST_CASE("distribution rows sum to one or are flagged") {
  auto s = streams_of({"el perro y el gato", "la casa de la sierra", "zzz"});
  const FeatureSpec spec = default_spec(FeatureKind::bow);
  auto vocab = build_vocabulary({s[0], s[1]}, Unit{}, spec.mfw, 0.0);
  auto m = extract(s, spec, vocab);
  for (std::size_t i = 0; i < 2; ++i) {
    double sum = 0;
    for (double v : m.values.row(i)) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  CHECK(m.zero_rows == std::vector<std::string>{"s2"});
  CHECK(m.values(0, 0) == doctest::Approx(0.4));  // "el" twice in 5
  CHECK(m.feature_names[0] == "bow:el");
}

TEST_CASE("stopword features only use the list") {
  auto s = streams_of({"el perro y el gato de la casa", "una casa"});
  auto p = FeaturePipeline::fit(s, default_spec(FeatureKind::stopwords), {"el", "la", "de", "y", "una"});
  auto m = p.transform(s);
  const std::set<std::string> names(m.feature_names.begin(), m.feature_names.end());
  CHECK(names == std::set<std::string>{"stopwords:el", "stopwords:la", "stopwords:de", "stopwords:y",
                                       "stopwords:una"});
}

TEST_CASE("punctuation rates per thousand tokens") {
  auto m = extract(streams_of({"a, b, c."}), default_spec(FeatureKind::punctuation), Vocabulary{});
  REQUIRE(m.cols() == kPunctuationInventory.size());
  CHECK(m.values(0, 1) == doctest::Approx(2000.0 / 6.0));  // ","
  CHECK(m.values(0, 0) == doctest::Approx(1000.0 / 6.0));  // "."
}

TEST_CASE("pos requires a sidecar") {
  auto s = streams_of({"a b."});
  const FeatureSpec spec = default_spec(FeatureKind::pos);
  try {
    FeaturePipeline::fit(s, spec);
    FAIL("expected missing annotation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_annotation);
  }
  CHECK_THROWS_AS(attach_tags(s[0], "DET NOUN"), Error);
  attach_tags(s[0], "DET NOUN PUNCT");
  auto m = FeaturePipeline::fit(s, spec).transform(s);
  CHECK(m.cols() == 3);
}

TEST_CASE("tf-idf matches direct evaluation") {
  // 3 documents, raw counts.
  FeatureMatrix counts;
  counts.sample_ids = {"d0", "d1", "d2"};
  counts.feature_names = {"t0", "t1", "t2"};
  counts.values = Matrix::from_rows({{2, 1, 0}, {1, 0, 3}, {4, 1, 1}});
  auto w = tfidf_weight(counts);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> expect(3);
    double norm = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      int df = 0;
      for (std::size_t k = 0; k < 3; ++k) df += counts.values(k, j) > 0;
      expect[j] = counts.values(i, j) * std::log((1.0 + 3.0) / (1.0 + df));
      norm += expect[j] * expect[j];
    }
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(w.values(i, j) - expect[j] / std::sqrt(norm)) < 1e-12);
    CHECK(std::abs(norm2(w.values.row(i)) - 1.0) < 1e-9);
  }
  CHECK(w.values(0, 0) == 0.0);  // t0 is in every document

  FeatureMatrix single = counts;
  single.sample_ids = {"d"};
  single.values = Matrix::from_rows({{3, 1, 2}});
  // Every idf is ln(2/2) = 0 here, so the row is flagged instead of ranked.
  const auto idf = idf_weights(single.values);
  CHECK(idf == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(tfidf_weight(single).zero_rows == std::vector<std::string>{"d"});
}

TEST_CASE("tf-idf kinds cap at 1000 features and are unit rows") {
  std::vector<std::string> texts;
  Rng rng(11);
  for (int d = 0; d < 6; ++d) {
    std::string t;
    for (int i = 0; i < 800; ++i) t += "w" + std::to_string(uniform_index(rng, 400)) + (i % 9 == 8 ? ". " : " ");
    texts.push_back(t);
  }
  // Digits are not letters; map them to letters so words survive tokenization.
  for (auto& t : texts)
    for (char& c : t)
      if (c >= '0' && c <= '9') c = static_cast<char>('a' + (c - '0'));
  auto s = streams_of(texts);
  auto m = FeaturePipeline::fit(s, default_spec(FeatureKind::word_ngrams_tfidf)).transform(s);
  CHECK(m.cols() == 1000);
  CHECK(m.scaling == Scaling::tfidf);
  for (std::size_t i = 0; i < m.rows(); ++i) CHECK(std::abs(norm2(m.values.row(i)) - 1.0) < 1e-9);
}

TEST_CASE("zscore moments and dropped columns") {
  FeatureMatrix m;
  m.sample_ids = {"a", "b", "c"};
  m.feature_names = {"x", "const", "y"};
  m.values = Matrix::from_rows({{1, 5, 0.1}, {3, 5, 0.7}, {8, 5, 0.2}});
  auto r = zscore(m);
  CHECK(r.model.dropped == std::vector<std::string>{"const"});
  REQUIRE(r.matrix.cols() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0, ss = 0;
    for (std::size_t i = 0; i < 3; ++i) mean += r.matrix.values(i, j);
    mean /= 3;
    for (std::size_t i = 0; i < 3; ++i) ss += (r.matrix.values(i, j) - mean) * (r.matrix.values(i, j) - mean);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(ss / 2) - 1.0) < 1e-9);
  }

  FeatureMatrix two;
  two.sample_ids = {"a", "b"};
  two.feature_names = {"x"};
  two.values = Matrix::from_rows({{1}, {3}});
  auto z2 = zscore(two);
  CHECK(z2.matrix.values(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(z2.matrix.values(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  FeatureMatrix one = two;
  one.sample_ids = {"a"};
  one.values = Matrix::from_rows({{1}});
  CHECK_THROWS_AS(zscore(one), Error);
}

TEST_CASE("total equals concatenation of independently extracted parts") {
  std::vector<std::string> texts{"El perro, y el gato. La casa de la sierra!", "Una casa; otra casa. ¿Dónde?",
                                 "el gato come. la sierra duerme y el perro no.", "De la casa al perro, del gato."};
  auto s = streams_of(texts);
  auto total = FeaturePipeline::fit(s, default_spec(FeatureKind::total)).transform(s);
  std::size_t dims = 0;
  std::size_t col = 0;
  for (FeatureKind k : total_components(false)) {
    auto part = FeaturePipeline::fit(s, default_spec(k)).transform(s);
    dims += part.cols();
    for (std::size_t j = 0; j < part.cols(); ++j, ++col) {
      CHECK(total.feature_names[col] == part.feature_names[j]);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(total.values(i, col) == part.values(i, j));
    }
  }
  CHECK(total.cols() == dims);
}

TEST_CASE("extraction is pure and pipelines reuse training vocabulary") {
  auto s = streams_of({"el perro y el gato", "la casa de la sierra"});
  auto p = FeaturePipeline::fit(s, default_spec(FeatureKind::cng));
  CHECK(to_csv(p.transform(s)) == to_csv(p.transform(s)));
  auto q = p.transform(streams_of({"un pez"}));
  CHECK(q.feature_names == p.transform(s).feature_names);
}

TEST_CASE("csv serialization") {
  FeatureMatrix m;
  m.sample_ids = {"a"};
  m.feature_names = {"bow:x", "bow:y,z"};
  m.values = Matrix::from_rows({{0.5, 0.25}});
  CHECK(to_csv(m) == "sample_id,bow:x,\"bow:y,z\"\n" "a,0.5,0.25\n");
  CHECK(to_json(m).find("\"kind\": \"bow\"") != std::string::npos);
}
