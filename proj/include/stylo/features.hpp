#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/matrix.hpp"

namespace stylo::features {

enum class TokenKind { word, punctuation, sentence_end };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::word;
  std::string norm;  // case-folded word; punctuation and markers keep their text
};

struct TokenStream {
  std::string id;
  /// Source document, used as the culling unit. Empty means `id`.
  std::string document;
  std::vector<Token> tokens;
  /// Optional POS sidecar, one tag per word or punctuation token.
  std::optional<std::vector<std::string>> tags;

  const std::string& document_id() const { return document.empty() ? id : document; }
};

TokenStream tokenize(std::string_view text, std::string id = {}, std::string document = {});

/// Attaches a whitespace-separated tag sidecar. The tag count must equal the
/// number of word and punctuation tokens.
void attach_tags(TokenStream& stream, std::string_view sidecar);

/// Sentences as lists of folded words; a trailing unterminated sentence counts.
std::vector<std::vector<std::string>> sentences(const TokenStream& stream);

enum class UnitKind { word, char_ngram, word_ngram, tag };

struct Unit {
  UnitKind kind = UnitKind::word;
  int n_min = 1;
  int n_max = 1;
};

/// Boundary placeholder used inside character n-grams.
inline constexpr char kBoundary = '_';

/// Every occurrence of the unit in the stream, in text order.
std::vector<std::string> unit_terms(const TokenStream& stream, const Unit& unit);

struct VocabTerm {
  std::string term;
  std::size_t corpus_frequency = 0;
  std::size_t document_frequency = 0;
};

struct Vocabulary {
  Unit unit;
  std::vector<VocabTerm> terms;
  double culling_applied = 0.0;
  std::size_t document_count = 0;

  std::vector<std::string> names() const;
};

/// Counts the unit over all streams; drops terms found in fewer than
/// `culling` percent of documents, orders by frequency then term, keeps the
/// first `mfw`. A non-empty `allowed` list restricts candidate terms.
Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, const Unit& unit, int mfw,
                            double culling, const std::vector<std::string>& allowed = {});

enum class FeatureKind {
  stopwords,
  bow,
  cng,
  lexical,
  punctuation,
  lexical_punct,
  pos,
  word_ngrams_tfidf,
  char_ngrams_tfidf,
  total,
};

const char* to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);
/// Components of `total`, in concatenation order (pos only if tags exist).
std::vector<FeatureKind> total_components(bool with_pos);

struct FeatureSpec {
  FeatureKind kind = FeatureKind::bow;
  int mfw = 300;
  int ngram_min = 1;
  int ngram_max = 1;
  double culling = 0.0;
  bool tfidf = false;

  bool operator==(const FeatureSpec&) const = default;
};

FeatureSpec default_spec(FeatureKind kind);
void validate(const FeatureSpec& spec);
/// The counting unit for vocabulary-based kinds.
std::optional<Unit> spec_unit(const FeatureSpec& spec);
bool is_distribution(FeatureKind kind);

enum class Scaling { raw_relative, zscore, tfidf };

const char* to_string(Scaling s);

struct FeatureMatrix {
  std::vector<std::string> sample_ids;
  std::vector<std::string> feature_names;
  Matrix values;
  FeatureSpec spec;
  Scaling scaling = Scaling::raw_relative;
  /// Rows of a distribution or tf-idf kind that contained no vocabulary term.
  std::vector<std::string> zero_rows;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
};

/// Raw term counts over a vocabulary.
Matrix count_matrix(const std::vector<TokenStream>& streams, const Vocabulary& vocab);

inline const std::vector<std::string> kPunctuationInventory{
    ".", ",", ";", ":", "!", "?", "¡", "¿", "«", "»", "(", ")", "—", "-", "…", "\"", "'"};

/// One component kind. Vocabulary-based kinds need a vocabulary built with
/// spec_unit(spec); tf-idf kinds take idf from `streams` itself.
FeatureMatrix extract(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                      const Vocabulary& vocab);

/// weight = count * ln((1 + N) / (1 + df)), rows then L2-normalized.
std::vector<double> idf_weights(const Matrix& counts);
Matrix tfidf_apply(const Matrix& counts, const std::vector<double>& idf);
FeatureMatrix tfidf_weight(const FeatureMatrix& counts);

struct ZScoreModel {
  std::vector<std::size_t> kept;
  std::vector<double> mean;  // per kept column
  std::vector<double> sd;
  std::vector<std::string> dropped;
};

struct ZScoreResult {
  FeatureMatrix matrix;
  ZScoreModel model;
};

/// Column-wise (x - mean) / sd with the sample standard deviation; constant
/// columns are dropped and listed.
ZScoreResult zscore(const FeatureMatrix& m);
/// Applies training moments to another matrix with the same columns.
FeatureMatrix apply_zscore(const ZScoreModel& model, const FeatureMatrix& m);

/// A fitted extractor: vocabularies and idf are learned once on training
/// streams and reused for queries, so both land in the same space.
class FeaturePipeline {
 public:
  struct Component {
    FeatureSpec spec;
    Vocabulary vocab;
    std::vector<double> idf;
  };

  static FeaturePipeline fit(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                             const std::vector<std::string>& stopwords);
  static FeaturePipeline fit(const std::vector<TokenStream>& streams, const FeatureSpec& spec);

  FeatureMatrix transform(const std::vector<TokenStream>& streams) const;

  const FeatureSpec& spec() const { return spec_; }
  const std::vector<Component>& components() const { return components_; }

 private:
  FeatureSpec spec_;
  std::vector<Component> components_;
};

FeatureMatrix hconcat(const std::vector<FeatureMatrix>& parts, const FeatureSpec& spec);

std::string to_csv(const FeatureMatrix& m);
std::string to_json(const FeatureMatrix& m);
std::string spec_json(const FeatureSpec& spec);

}  // namespace stylo::features
