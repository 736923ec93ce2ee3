#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylo/compression.hpp"
#include "stylo/corpus.hpp"

namespace stylo::app {

inline constexpr const char* kVersion = "1.0.0";

struct DeltaOptions {
  std::vector<int> mfw{100, 200, 300, 500};
  std::vector<double> culling{0.0, 50.0};
  std::vector<std::string> kinds{"burrows"};
  std::string linkage = "average";
};

struct NcdOptions {
  std::string mode = "instance";  // or "profile"
  std::string compressor;         // empty: the run-level compressor
};

struct ProjectionOptions {
  std::string features = "punctuation";
  std::size_t components = 2;
  bool lda = true;
  std::size_t plot_sample = 600;  // chunks drawn in the scatter plot; 0 = all
};

struct ClassifyOptions {
  std::vector<std::string> kinds{"ridge", "nearest_centroid", "multinomial_nb", "linear_svm", "maxent"};
  std::vector<std::string> features{"bow", "cng"};
  std::size_t folds = 10;
  bool balance = true;
  double balance_fraction = 0.10;
  std::size_t pca_components = 0;
};

struct UnmaskOptions {
  std::size_t n = 250;
  std::size_t k = 6;
  std::size_t m = 8;
  std::size_t cv_folds = 10;
  bool remove_least = false;
};

inline const std::vector<std::string> kAnalysisOrder{"delta", "ncd", "projection", "classify", "unmask"};

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path output = "stylo-out";
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
  std::string compressor = "bzip2";
  std::vector<compression::ExternalConfig> external_compressors;
  std::vector<std::string> analyses = kAnalysisOrder;
  DeltaOptions delta;
  NcdOptions ncd;
  ProjectionOptions projection;
  ClassifyOptions classify;
  UnmaskOptions unmask;
  bool plots = true;

  std::uint64_t effective_seed() const { return seed.value_or(0); }
};

/// Strict parse: unknown keys and wrong types are config errors. Relative
/// paths are resolved against `base_dir`.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
/// Checks values and names before any work starts.
void validate(const RunConfig& cfg);
/// Canonical JSON echo of the configuration.
std::string config_json(const RunConfig& cfg);
/// "all" expands to the full sequence; names are returned in pipeline order.
std::vector<std::string> parse_analyses(const std::string& list);

compression::Registry make_registry(const RunConfig& cfg);

struct IngestResult {
  std::size_t documents = 0;
  std::size_t chunks = 0;
  std::vector<std::string> artifacts;  // relative to the output directory
  std::vector<std::string> warnings;
};

/// Canonicalizes the manifest's texts into <output>/corpus.
IngestResult ingest(const RunConfig& cfg, bool force);

/// The ingest cache read back: canonical texts, labels and chunking size.
struct CorpusCache {
  std::vector<corpus::Document> documents;
  int min_chunk_words = 300;
};

CorpusCache load_cache(const std::filesystem::path& output);

struct StageResult {
  std::string name;
  std::string status = "ok";  // ok | failed
  std::string error;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

struct RunReport {
  std::string config;  // config_json()
  std::vector<StageResult> stages;
  std::vector<std::string> warnings;

  bool ok() const;
};

/// Runs the selected analyses in order. A failing stage is recorded and the
/// remaining stages still run. Writes run_report.json (deterministic) and
/// timings.json (wall clock, rewritten every run).
RunReport analyze(const RunConfig& cfg, bool force);

std::string to_json(const RunReport& r);

struct Summary {
  std::string json;
  std::string text;
  std::vector<std::string> sections;
};

/// Consolidates whatever analysis artifacts exist under `run_dir`.
Summary summarize(const std::filesystem::path& run_dir);
/// summarize() plus writing summary.json and summary.txt.
Summary report(const std::filesystem::path& run_dir, bool force);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick end-to-end sanity checks on built-in data.
std::vector<SelftestCheck> selftest();

}  // namespace stylo::app
