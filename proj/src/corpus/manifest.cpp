#include <set>

#include <json.hpp>

#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/unicode.hpp"

namespace stylo::corpus {

using nlohmann::json;

namespace {

const std::set<std::string> kEntryKeys{"id", "path", "author", "title", "year", "variant_tag", "play"};

std::string entry_label(std::size_t index, const json& e) {
  if (e.is_object() && e.contains("id") && e["id"].is_string())
    return "entry " + std::to_string(index) + " (id \"" + e["id"].get<std::string>() + "\")";
  return "entry " + std::to_string(index);
}

}  // namespace

CorpusManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, std::string("manifest is not valid JSON: ") + e.what());
  }
  require(root.is_object(), ErrorCode::config, "manifest must be a JSON object");
  for (auto it = root.begin(); it != root.end(); ++it)
    require(it.key() == "min_chunk_words" || it.key() == "documents", ErrorCode::config,
            "unknown manifest key \"" + it.key() + "\"");

  CorpusManifest m;
  if (root.contains("min_chunk_words")) {
    require(root["min_chunk_words"].is_number_integer() && root["min_chunk_words"].get<int>() >= 1,
            ErrorCode::config, "min_chunk_words must be a positive integer");
    m.min_chunk_words = root["min_chunk_words"].get<int>();
  }
  require(root.contains("documents") && root["documents"].is_array(), ErrorCode::config,
          "manifest needs a \"documents\" array");

  std::size_t index = 0;
  for (const auto& e : root["documents"]) {
    const std::string label = entry_label(index, e);
    require(e.is_object(), ErrorCode::config, label + ": not an object");
    for (auto it = e.begin(); it != e.end(); ++it)
      require(kEntryKeys.count(it.key()) > 0, ErrorCode::config,
              label + ": unknown key \"" + it.key() + "\"");
    require(e.contains("id") && e["id"].is_string() && !e["id"].get<std::string>().empty(),
            ErrorCode::config, label + ": missing id");
    require(e.contains("path") && e["path"].is_string(), ErrorCode::config, label + ": missing path");

    ManifestEntry entry;
    entry.id = e["id"].get<std::string>();
    std::filesystem::path p = e["path"].get<std::string>();
    entry.path = p.is_absolute() ? p : base_dir / p;
    if (e.contains("author") && !e["author"].is_null()) entry.author = e["author"].get<std::string>();
    if (e.contains("title")) entry.title = e["title"].get<std::string>();
    if (e.contains("year") && !e["year"].is_null()) entry.year = e["year"].get<int>();
    if (e.contains("variant_tag") && !e["variant_tag"].is_null())
      entry.variant_tag = e["variant_tag"].get<std::string>();
    if (e.contains("play")) entry.play = e["play"].get<bool>();
    m.documents.push_back(std::move(entry));
    ++index;
  }
  return m;
}

CorpusManifest load_manifest(const std::filesystem::path& manifest_path) {
  return parse_manifest(io::read_file(manifest_path), manifest_path.parent_path());
}

std::vector<Document> load_corpus(const CorpusManifest& manifest) {
  std::set<std::string> seen;
  for (const auto& e : manifest.documents)
    if (!seen.insert(e.id).second)
      fail(ErrorCode::duplicate_id, "duplicate document id \"" + e.id + "\" in manifest");

  bool any_labeled = false;
  std::vector<Document> docs;
  docs.reserve(manifest.documents.size());
  for (const auto& e : manifest.documents) {
    if (!std::filesystem::is_regular_file(e.path))
      fail(ErrorCode::missing_file,
           "document \"" + e.id + "\": file not found: " + e.path.string());
    Document d;
    d.id = e.id;
    d.author = e.author;
    d.title = e.title;
    d.year = e.year;
    d.variant_tag = e.variant_tag;
    d.play = e.play;
    d.raw_text = io::read_file(e.path);
    if (auto bad = unicode::find_invalid_utf8(d.raw_text))
      fail(ErrorCode::invalid_utf8, "document \"" + e.id + "\": invalid UTF-8 at byte " +
                                        std::to_string(*bad) + " of " + e.path.string());
    any_labeled = any_labeled || d.author.has_value();
    docs.push_back(std::move(d));
  }
  require(any_labeled, ErrorCode::precondition, "manifest has no labeled document");
  return docs;
}

std::map<std::string, std::string> load_abbreviations(const std::filesystem::path& json_path) {
  json root;
  try {
    root = json::parse(io::read_file(json_path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, "abbreviation table " + json_path.string() + ": " + e.what());
  }
  require(root.is_object(), ErrorCode::config, "abbreviation table must be a JSON object");
  std::map<std::string, std::string> table;
  for (auto it = root.begin(); it != root.end(); ++it) {
    require(it.value().is_string() && !it.key().empty(), ErrorCode::config,
            "abbreviation table: bad entry \"" + it.key() + "\"");
    table[it.key()] = it.value().get<std::string>();
  }
  return table;
}

}  // namespace stylo::corpus
