#include <array>
#include <utility>

#include "stylo/error.hpp"
#include "stylo/features.hpp"

namespace stylo::features {

namespace {

constexpr std::array<std::pair<FeatureKind, const char*>, 10> kKindNames{{
    {FeatureKind::stopwords, "stopwords"},
    {FeatureKind::bow, "bow"},
    {FeatureKind::cng, "cng"},
    {FeatureKind::lexical, "lexical"},
    {FeatureKind::punctuation, "punctuation"},
    {FeatureKind::lexical_punct, "lexical_punct"},
    {FeatureKind::pos, "pos"},
    {FeatureKind::word_ngrams_tfidf, "word_ngrams_tfidf"},
    {FeatureKind::char_ngrams_tfidf, "char_ngrams_tfidf"},
    {FeatureKind::total, "total"},
}};

}  // namespace

const char* to_string(FeatureKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

FeatureKind parse_feature_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  fail(ErrorCode::invalid_argument, "unknown feature kind \"" + std::string(name) + "\"");
}

const char* to_string(Scaling s) {
  switch (s) {
    case Scaling::raw_relative: return "raw_relative";
    case Scaling::zscore: return "zscore";
    case Scaling::tfidf: return "tfidf";
  }
  return "?";
}

std::vector<FeatureKind> total_components(bool with_pos) {
  std::vector<FeatureKind> out{FeatureKind::stopwords, FeatureKind::bow, FeatureKind::cng,
                               FeatureKind::lexical, FeatureKind::punctuation};
  if (with_pos) out.push_back(FeatureKind::pos);
  out.push_back(FeatureKind::word_ngrams_tfidf);
  out.push_back(FeatureKind::char_ngrams_tfidf);
  return out;
}

FeatureSpec default_spec(FeatureKind kind) {
  FeatureSpec s;
  s.kind = kind;
  switch (kind) {
    case FeatureKind::stopwords: s.mfw = 1000; break;
    case FeatureKind::bow: s.mfw = 300; break;
    case FeatureKind::cng: s.mfw = 3000; s.ngram_min = s.ngram_max = 3; break;
    case FeatureKind::lexical: s.mfw = 3; break;
    case FeatureKind::punctuation: s.mfw = static_cast<int>(kPunctuationInventory.size()); break;
    case FeatureKind::lexical_punct: s.mfw = 3 + static_cast<int>(kPunctuationInventory.size()); break;
    case FeatureKind::pos: s.mfw = 30; break;
    case FeatureKind::word_ngrams_tfidf:
      s.mfw = 1000; s.ngram_min = 2; s.ngram_max = 3; s.tfidf = true;
      break;
    case FeatureKind::char_ngrams_tfidf:
      s.mfw = 1000; s.ngram_min = 2; s.ngram_max = 4; s.tfidf = true;
      break;
    case FeatureKind::total: s.mfw = 1; break;
  }
  return s;
}

void validate(const FeatureSpec& spec) {
  require(spec.mfw >= 1, ErrorCode::invalid_argument, "feature spec: mfw must be >= 1");
  require(spec.ngram_min >= 1 && spec.ngram_min <= spec.ngram_max, ErrorCode::invalid_argument,
          "feature spec: need 1 <= ngram_min <= ngram_max");
  require(spec.culling >= 0.0 && spec.culling <= 100.0, ErrorCode::invalid_argument,
          "feature spec: culling must be in [0, 100]");
}

std::optional<Unit> spec_unit(const FeatureSpec& spec) {
  switch (spec.kind) {
    case FeatureKind::stopwords:
    case FeatureKind::bow: return Unit{UnitKind::word, 1, 1};
    case FeatureKind::cng:
    case FeatureKind::char_ngrams_tfidf: return Unit{UnitKind::char_ngram, spec.ngram_min, spec.ngram_max};
    case FeatureKind::word_ngrams_tfidf: return Unit{UnitKind::word_ngram, spec.ngram_min, spec.ngram_max};
    case FeatureKind::pos: return Unit{UnitKind::tag, 1, 1};
    default: return std::nullopt;
  }
}

bool is_distribution(FeatureKind kind) {
  return kind == FeatureKind::stopwords || kind == FeatureKind::bow || kind == FeatureKind::cng ||
         kind == FeatureKind::pos;
}

}  // namespace stylo::features
