#include <set>

#include <json.hpp>

#include "internal.hpp"
#include "stylo/app.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/text.hpp"

namespace stylo::app {

namespace {

using ojson = nlohmann::ordered_json;

std::string file_stem(const std::string& id, std::set<std::string>& taken) {
  const std::string s = detail::safe_name(id);
  std::string name = s;
  for (int k = 2; !taken.insert(name).second; ++k) name = s + "-" + std::to_string(k);
  return name;
}

}  // namespace

IngestResult ingest(const RunConfig& cfg, bool force) {
  require(!cfg.manifest.empty(), ErrorCode::config, "no manifest given (use --manifest or the config key)");
  const corpus::CorpusManifest manifest = corpus::load_manifest(cfg.manifest);
  const std::vector<corpus::Document> raw = corpus::load_corpus(manifest);

  IngestResult result;
  auto emit = [&](const std::string& rel, const std::string& content) {
    io::write_artifact(cfg.output / rel, content, force);
    result.artifacts.push_back(rel);
  };

  ojson index;
  index["version"] = kVersion;
  index["min_chunk_words"] = manifest.min_chunk_words;
  index["documents"] = ojson::array();
  std::string chunks_csv = io::csv_row({"doc_id", "chunk", "word_count", "short", "first_words"});
  std::set<std::string> taken;
  for (const auto& d : raw) {
    corpus::Document doc;
    try {
      doc = corpus::canonicalize(d);
    } catch (const Error& e) {
      fail(e.code(), "document \"" + d.id + "\": " + e.what());
    }
    const std::string rel = "corpus/canonical/" + file_stem(d.id, taken) + ".txt";
    emit(rel, *doc.canonical_text);
    const auto chunks = corpus::segment_chunks(doc, manifest.min_chunk_words);
    for (const auto& c : chunks) {
      std::string head;
      for (std::size_t i = 0; i < c.tokens.size() && i < 5; ++i) head += (i ? " " : "") + c.tokens[i];
      chunks_csv += io::csv_row({c.doc_id, std::to_string(c.index), std::to_string(c.word_count),
                                 c.short_flag ? "1" : "0", head});
      if (c.short_flag)
        result.warnings.push_back("document \"" + d.id + "\": chunk " + std::to_string(c.index) + " is short (" +
                                  std::to_string(c.word_count) + " words)");
    }
    ojson e;
    e["id"] = doc.id;
    e["author"] = doc.author ? ojson(*doc.author) : ojson(nullptr);
    e["title"] = doc.title;
    e["year"] = doc.year ? ojson(*doc.year) : ojson(nullptr);
    e["variant_tag"] = doc.variant_tag ? ojson(*doc.variant_tag) : ojson(nullptr);
    e["play"] = doc.play;
    e["canonical"] = rel.substr(std::string("corpus/").size());
    e["words"] = text::count_words(*doc.canonical_text);
    e["chunks"] = chunks.size();
    index["documents"].push_back(e);
    result.chunks += chunks.size();
    ++result.documents;
  }
  emit("corpus/chunks.csv", chunks_csv);
  emit("corpus/corpus.json", index.dump(2) + "\n");
  return result;
}

CorpusCache load_cache(const std::filesystem::path& output) {
  const auto dir = output / "corpus";
  const auto index_path = dir / "corpus.json";
  require(std::filesystem::exists(index_path), ErrorCode::missing_file,
          "no ingest cache at " + index_path.string() + " (run `stylo ingest` first)");
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(io::read_file(index_path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, "corrupt ingest cache " + index_path.string() + ": " + e.what());
  }
  CorpusCache cache;
  cache.min_chunk_words = index.at("min_chunk_words").get<int>();
  for (const auto& e : index.at("documents")) {
    corpus::Document d;
    d.id = e.at("id").get<std::string>();
    if (!e.at("author").is_null()) d.author = e.at("author").get<std::string>();
    d.title = e.at("title").get<std::string>();
    if (!e.at("year").is_null()) d.year = e.at("year").get<int>();
    if (!e.at("variant_tag").is_null()) d.variant_tag = e.at("variant_tag").get<std::string>();
    d.play = e.at("play").get<bool>();
    d.canonical_text = io::read_file(dir / e.at("canonical").get<std::string>());
    d.raw_text = *d.canonical_text;
    cache.documents.push_back(std::move(d));
  }
  return cache;
}

}  // namespace stylo::app
