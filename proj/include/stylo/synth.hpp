#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"

namespace stylo::synth {

/// Generator for Spanish-looking test corpora. Each author draws words from
/// a shared Zipfian lexicon whose probabilities are perturbed per author
/// (broad, many-feature style differences); each work additionally mixes in
/// a handful of boosted topical words (narrow, few-feature differences).
struct Config {
  std::size_t vocabulary = 2000;
  double zipf_exponent = 1.0;
  double author_sigma = 0.5;     // log-normal spread of per-author word weights
  std::size_t topic_words = 8;   // per work
  double topic_rate = 0.05;      // share of tokens drawn from topical words
  std::size_t paragraph_words = 90;
};

struct Author {
  std::string name;
  std::vector<double> cdf;  // over the lexicon
  double mean_sentence = 15.0;
  double comma_rate = 0.08;
  double semicolon_rate = 0.01;
  double question_rate = 0.08;
  double exclaim_rate = 0.05;
};

class Generator {
 public:
  Generator(Config config, std::uint64_t seed);

  const std::vector<std::string>& lexicon() const { return lexicon_; }
  const Config& config() const { return config_; }

  Author author(const std::string& name, std::uint64_t stream) const;
  /// A work of roughly `words` words in paragraphs separated by blank lines.
  std::string work(const Author& a, std::size_t words, std::uint64_t stream) const;

 private:
  Config config_;
  std::uint64_t seed_;
  std::vector<std::string> lexicon_;
  std::vector<double> base_;  // Zipf weights
};

struct CorpusSpec {
  std::size_t authors = 4;
  std::size_t works_per_author = 20;
  std::size_t words_per_work = 2000;
  /// Extra works per author with ids "<author>_q<k>" and variant_tag
  /// "query". They keep their author so tests know the truth.
  std::size_t queries_per_author = 0;
  std::uint64_t seed = 0;
  Config config;
};

/// Labeled documents "<author>_w<k>" with raw text set (not canonicalized).
std::vector<corpus::Document> make_corpus(const CorpusSpec& spec);

/// Writes each document to <dir>/texts/<id>.txt and a manifest.json. Works
/// tagged "query" are written without an author.
std::filesystem::path write_corpus(const std::vector<corpus::Document>& docs,
                                   const std::filesystem::path& dir, int min_chunk_words = 300);

}  // namespace stylo::synth
