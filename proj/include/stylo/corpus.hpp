#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylo/data.hpp"

namespace stylo::corpus {

struct Document {
  std::string id;
  std::optional<std::string> author;  // absent for query documents
  std::string title;
  std::optional<int> year;
  std::string raw_text;
  std::optional<std::string> canonical_text;
  std::optional<std::string> variant_tag;
  bool play = false;  // speaker markup is stripped from plays
};

struct ManifestEntry {
  std::filesystem::path path;
  std::string id;
  std::optional<std::string> author;
  std::string title;
  std::optional<int> year;
  std::optional<std::string> variant_tag;
  bool play = false;
};

struct CorpusManifest {
  std::vector<ManifestEntry> documents;
  int min_chunk_words = 300;
};

/// A contiguous run of whole paragraphs of one document.
struct Chunk {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;  // case-folded words
  std::size_t word_count = 0;
  bool short_flag = false;
  /// 0 for an original chunk; k > 0 for the k-th resampled copy made by
  /// balance_chunks.
  std::size_t replica = 0;

  std::string sample_id() const;
};

struct AuthorProfile {
  std::string author;
  std::string concatenated_text;
  std::vector<std::string> source_doc_ids;
};

struct Delimiters {
  std::string open;
  std::string close;
};

/// Markup conventions and switches for canonicalize(). Defaults follow the
/// plain-text conventions documented in the README.
struct CanonicalRules {
  std::vector<Delimiters> annotation_spans{{"{", "}"}, {"[[", "]]"}};
  std::vector<std::string> header_line_prefixes{"@header", "@footer", "@page"};
  bool strip_page_numbers = true;
  std::vector<Delimiters> citation_spans{{"<la>", "</la>"}, {"<grc>", "</grc>"}};
  std::map<std::string, std::string> abbreviations = data::default_abbreviations();
  std::vector<std::string> heading_keywords{
      "capítulo", "capitulo", "cap", "tratado", "parte", "libro", "volumen", "tomo",
      "escena", "acto", "jornada", "chapter", "part", "book", "volume", "scene", "act"};
  std::vector<std::string> end_marks{"fin", "finis", "laus deo", "the end"};
  Delimiters speaker_span{"<sp>", "</sp>"};
};

CorpusManifest load_manifest(const std::filesystem::path& manifest_path);
CorpusManifest parse_manifest(const std::string& json_text,
                              const std::filesystem::path& base_dir);

/// Reads every entry's text. Errors (missing file, duplicate id, malformed
/// UTF-8) name the offending entry.
std::vector<Document> load_corpus(const CorpusManifest& manifest);

std::map<std::string, std::string> load_abbreviations(const std::filesystem::path& json_path);

Document canonicalize(const Document& doc, const CanonicalRules& rules = {});
/// The rule pipeline on a bare string; `play` enables speaker stripping.
std::string canonicalize_text(const std::string& raw, const CanonicalRules& rules, bool play);

std::vector<Chunk> segment_chunks(const Document& doc, int min_words);

std::vector<AuthorProfile> build_profiles(const std::vector<Document>& docs);

using ChunksByAuthor = std::map<std::string, std::vector<Chunk>>;

struct BalanceBounds {
  double mean = 0.0;
  std::size_t floor = 0;
  std::size_t ceiling = 0;
};

BalanceBounds balance_bounds(const ChunksByAuthor& chunks, double fraction);
ChunksByAuthor balance_chunks(const ChunksByAuthor& chunks, double fraction,
                              std::uint64_t seed);

}  // namespace stylo::corpus
