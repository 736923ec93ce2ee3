#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "stylo/data.hpp"
#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/parallel.hpp"

namespace stylo::features {

namespace {

constexpr std::size_t kTfidfCap = 1000;

bool uses_tfidf(const FeatureSpec& spec) {
  return spec.tfidf || spec.kind == FeatureKind::word_ngrams_tfidf ||
         spec.kind == FeatureKind::char_ngrams_tfidf;
}

std::string prefixed(FeatureKind kind, const std::string& term) {
  return std::string(to_string(kind)) + ":" + term;
}

std::vector<std::string> sample_ids(const std::vector<TokenStream>& streams) {
  std::vector<std::string> ids;
  ids.reserve(streams.size());
  for (const auto& s : streams) ids.push_back(s.id);
  return ids;
}

FeatureMatrix lexical_matrix(const std::vector<TokenStream>& streams) {
  FeatureMatrix fm;
  fm.sample_ids = sample_ids(streams);
  fm.feature_names = {"lexical:mean_sentence_length", "lexical:sd_sentence_length",
                      "lexical:mean_sentence_diversity"};
  fm.values = Matrix(streams.size(), 3);
  parallel_for(streams.size(), [&](std::size_t i) {
    const auto sents = sentences(streams[i]);
    if (sents.empty()) return;
    const double n = static_cast<double>(sents.size());
    double mean = 0.0, diversity = 0.0;
    for (const auto& s : sents) {
      mean += static_cast<double>(s.size());
      const std::set<std::string> distinct(s.begin(), s.end());
      diversity += static_cast<double>(distinct.size()) / static_cast<double>(s.size());
    }
    mean /= n;
    double var = 0.0;
    for (const auto& s : sents) var += (static_cast<double>(s.size()) - mean) * (static_cast<double>(s.size()) - mean);
    fm.values(i, 0) = mean;
    fm.values(i, 1) = std::sqrt(var / n);
    fm.values(i, 2) = diversity / n;
  });
  for (std::size_t i = 0; i < streams.size(); ++i)
    if (sentences(streams[i]).empty()) fm.zero_rows.push_back(streams[i].id);
  return fm;
}

FeatureMatrix punctuation_matrix(const std::vector<TokenStream>& streams) {
  FeatureMatrix fm;
  fm.sample_ids = sample_ids(streams);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < kPunctuationInventory.size(); ++j) {
    column.emplace(kPunctuationInventory[j], j);
    fm.feature_names.push_back(prefixed(FeatureKind::punctuation, kPunctuationInventory[j]));
  }
  fm.values = Matrix(streams.size(), kPunctuationInventory.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    std::size_t total = 0;
    auto row = fm.values.row(i);
    for (const auto& t : streams[i].tokens) {
      if (t.kind == TokenKind::sentence_end) continue;
      ++total;
      if (t.kind != TokenKind::punctuation) continue;
      auto it = column.find(t.text);
      if (it != column.end()) row[it->second] += 1.0;
    }
    if (total == 0) {
      fm.zero_rows.push_back(streams[i].id);
      continue;
    }
    for (double& v : row) v *= 1000.0 / static_cast<double>(total);
  }
  return fm;
}

// One vocabulary-based component, given a fitted vocabulary and (for tf-idf)
// fitted idf weights.
FeatureMatrix vocab_matrix(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                           const Vocabulary& vocab, const std::vector<double>* idf) {
  FeatureMatrix fm;
  for (const auto& t : vocab.terms) fm.feature_names.push_back(prefixed(spec.kind, t.term));
  const Matrix counts = count_matrix(streams, vocab);
  if (uses_tfidf(spec)) {
    fm.values = idf ? tfidf_apply(counts, *idf) : tfidf_apply(counts, idf_weights(counts));
    fm.scaling = Scaling::tfidf;
  } else {
    fm.values = counts;
    for (std::size_t i = 0; i < fm.values.rows(); ++i) {
      auto row = fm.values.row(i);
      double sum = 0.0;
      for (double v : row) sum += v;
      if (sum > 0.0)
        for (double& v : row) v /= sum;
    }
  }
  for (std::size_t i = 0; i < fm.values.rows(); ++i) {
    const auto row = fm.values.row(i);
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; }))
      fm.zero_rows.push_back(streams[i].id);
  }
  return fm;
}

FeatureMatrix component_matrix(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                               const Vocabulary* vocab, const std::vector<double>* idf) {
  FeatureMatrix fm;
  switch (spec.kind) {
    case FeatureKind::lexical: fm = lexical_matrix(streams); break;
    case FeatureKind::punctuation: fm = punctuation_matrix(streams); break;
    case FeatureKind::lexical_punct:
      fm = hconcat({lexical_matrix(streams), punctuation_matrix(streams)}, spec);
      break;
    case FeatureKind::total: fail(ErrorCode::invalid_argument, "total is not a single component");
    default:
      if (spec.kind == FeatureKind::pos)
        for (const auto& s : streams)
          require(s.tags.has_value(), ErrorCode::missing_annotation,
                  "pos features requested but sample \"" + s.id + "\" has no tag sidecar");
      require(vocab != nullptr, ErrorCode::precondition, "vocabulary required");
      fm = vocab_matrix(streams, spec, *vocab, idf);
      break;
  }
  fm.sample_ids = sample_ids(streams);
  fm.spec = spec;
  return fm;
}

Vocabulary fit_vocabulary(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                          const std::vector<std::string>& stopwords) {
  const Unit unit = *spec_unit(spec);
  std::size_t mfw = static_cast<std::size_t>(spec.mfw);
  if (uses_tfidf(spec)) mfw = std::min(mfw, kTfidfCap);
  static const std::vector<std::string> none;
  return build_vocabulary(streams, unit, static_cast<int>(mfw), spec.culling,
                          spec.kind == FeatureKind::stopwords ? stopwords : none);
}

}  // namespace

FeatureMatrix extract(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                      const Vocabulary& vocab) {
  validate(spec);
  if (spec.kind == FeatureKind::total) return FeaturePipeline::fit(streams, spec).transform(streams);
  if (auto unit = spec_unit(spec)) {
    require(unit->kind == vocab.unit.kind && unit->n_min == vocab.unit.n_min &&
                unit->n_max == vocab.unit.n_max,
            ErrorCode::invalid_argument,
            std::string("vocabulary unit does not match feature kind ") + to_string(spec.kind));
  }
  return component_matrix(streams, spec, &vocab, nullptr);
}

std::vector<double> idf_weights(const Matrix& counts) {
  const double n = static_cast<double>(counts.rows());
  std::vector<double> idf(counts.cols());
  for (std::size_t j = 0; j < counts.cols(); ++j) {
    std::size_t df = 0;
    for (std::size_t i = 0; i < counts.rows(); ++i) {
      require(counts(i, j) >= 0.0, ErrorCode::invalid_argument, "tf-idf needs non-negative counts");
      if (counts(i, j) > 0.0) ++df;
    }
    idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(df)));
  }
  return idf;
}

Matrix tfidf_apply(const Matrix& counts, const std::vector<double>& idf) {
  require(idf.size() == counts.cols(), ErrorCode::dimension_mismatch, "idf length mismatch");
  Matrix out(counts.rows(), counts.cols());
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < counts.cols(); ++j) row[j] = counts(i, j) * idf[j];
    const double norm = norm2(row);
    if (norm > 0.0)
      for (double& v : row) v /= norm;
  }
  return out;
}

FeatureMatrix tfidf_weight(const FeatureMatrix& counts) {
  FeatureMatrix out = counts;
  out.values = tfidf_apply(counts.values, idf_weights(counts.values));
  out.scaling = Scaling::tfidf;
  out.zero_rows.clear();
  for (std::size_t i = 0; i < out.rows(); ++i)
    if (norm2(out.values.row(i)) == 0.0) out.zero_rows.push_back(out.sample_ids[i]);
  return out;
}

FeatureMatrix hconcat(const std::vector<FeatureMatrix>& parts, const FeatureSpec& spec) {
  require(!parts.empty(), ErrorCode::invalid_argument, "hconcat needs at least one part");
  FeatureMatrix out;
  out.sample_ids = parts.front().sample_ids;
  out.spec = spec;
  out.values = Matrix(parts.front().rows(), 0);
  std::set<std::string> zero;
  for (const auto& p : parts) {
    require(p.sample_ids == out.sample_ids, ErrorCode::dimension_mismatch,
            "hconcat: parts disagree on sample ids");
    out.values = out.values.hconcat(p.values);
    out.feature_names.insert(out.feature_names.end(), p.feature_names.begin(), p.feature_names.end());
    zero.insert(p.zero_rows.begin(), p.zero_rows.end());
  }
  for (const auto& id : out.sample_ids)
    if (zero.count(id)) out.zero_rows.push_back(id);
  return out;
}

FeaturePipeline FeaturePipeline::fit(const std::vector<TokenStream>& streams, const FeatureSpec& spec) {
  return fit(streams, spec, data::default_stopwords());
}

FeaturePipeline FeaturePipeline::fit(const std::vector<TokenStream>& streams, const FeatureSpec& spec,
                                     const std::vector<std::string>& stopwords) {
  validate(spec);
  require(!streams.empty(), ErrorCode::precondition, "feature pipeline needs training samples");
  FeaturePipeline p;
  p.spec_ = spec;
  std::vector<FeatureSpec> parts;
  if (spec.kind == FeatureKind::total) {
    const bool with_pos = std::all_of(streams.begin(), streams.end(),
                                      [](const TokenStream& s) { return s.tags.has_value(); });
    for (FeatureKind k : total_components(with_pos)) {
      FeatureSpec c = default_spec(k);
      c.culling = spec.culling;
      parts.push_back(c);
    }
  } else {
    parts.push_back(spec);
  }
  for (const auto& c : parts) {
    Component comp;
    comp.spec = c;
    if (spec_unit(c)) {
      if (c.kind == FeatureKind::pos)
        for (const auto& s : streams)
          require(s.tags.has_value(), ErrorCode::missing_annotation,
                  "pos features requested but sample \"" + s.id + "\" has no tag sidecar");
      comp.vocab = fit_vocabulary(streams, c, stopwords);
      if (uses_tfidf(c)) comp.idf = idf_weights(count_matrix(streams, comp.vocab));
    }
    p.components_.push_back(std::move(comp));
  }
  return p;
}

FeatureMatrix FeaturePipeline::transform(const std::vector<TokenStream>& streams) const {
  std::vector<FeatureMatrix> parts;
  for (const auto& c : components_) {
    const bool vocab_based = spec_unit(c.spec).has_value();
    parts.push_back(component_matrix(streams, c.spec, vocab_based ? &c.vocab : nullptr,
                                     uses_tfidf(c.spec) ? &c.idf : nullptr));
  }
  if (parts.size() == 1) {
    parts.front().spec = spec_;
    return std::move(parts.front());
  }
  return hconcat(parts, spec_);
}

}  // namespace stylo::features
