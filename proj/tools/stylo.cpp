#include <cerrno>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "stylo/app.hpp"
#include "stylo/error.hpp"
#include "stylo/parallel.hpp"
#include "stylo/synth.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitPartial = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::string config;
  std::string manifest;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string analysis;
  std::vector<int> mfw;
  std::vector<double> culling;
  std::vector<std::string> delta_kinds;
  std::vector<std::string> kinds;
  std::vector<std::string> features;
  std::string compressor;
  std::string ncd_mode;
  std::optional<std::size_t> plot_sample;
  bool no_plots = false;
  bool force = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("--manifest", o.manifest, "corpus manifest (overrides the config)");
  cmd->add_option("-o,--output", o.output, "output directory (overrides the config)");
  cmd->add_flag("--force", o.force, "overwrite artifacts whose content changed");
}

std::uint64_t env_seed() {
  const char* s = std::getenv("STYLO_SEED");
  if (s == nullptr || *s == '\0') return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  stylo::require(errno == 0 && *end == '\0' && s[0] != '-', stylo::ErrorCode::config,
                 std::string("STYLO_SEED must be a non-negative integer, got \"") + s + "\"");
  return v;
}

// Flags beat the config file; the seed falls back to STYLO_SEED, then 0.
stylo::app::RunConfig build_config(const Overrides& o) {
  using stylo::app::RunConfig;
  RunConfig c = o.config.empty() ? RunConfig{} : stylo::app::load_config(o.config);
  if (!o.manifest.empty()) c.manifest = o.manifest;
  if (!o.output.empty()) c.output = o.output;
  if (o.seed) c.seed = o.seed;
  if (!c.seed) c.seed = env_seed();
  if (o.jobs) c.jobs = *o.jobs;
  if (!o.analysis.empty()) c.analyses = stylo::app::parse_analyses(o.analysis);
  if (!o.mfw.empty()) c.delta.mfw = o.mfw;
  if (!o.culling.empty()) c.delta.culling = o.culling;
  if (!o.delta_kinds.empty()) c.delta.kinds = o.delta_kinds;
  if (!o.kinds.empty()) c.classify.kinds = o.kinds;
  if (!o.features.empty()) c.classify.features = o.features;
  if (!o.compressor.empty()) c.compressor = o.compressor;
  if (!o.ncd_mode.empty()) c.ncd.mode = o.ncd_mode;
  if (o.plot_sample) c.projection.plot_sample = *o.plot_sample;
  if (o.no_plots) c.plots = false;
  stylo::app::validate(c);
  stylo::set_max_jobs(c.jobs);
  return c;
}

int run_ingest(const Overrides& o) {
  const auto cfg = build_config(o);
  const auto r = stylo::app::ingest(cfg, o.force);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "ingest: " << r.documents << " documents, " << r.chunks << " chunks -> "
            << (cfg.output / "corpus").string() << "\n";
  return 0;
}

int run_analyze(const Overrides& o) {
  const auto cfg = build_config(o);
  const auto r = stylo::app::analyze(cfg, o.force);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& s : r.stages) {
    std::cout << s.name << ": " << s.status << " (" << s.artifacts.size() << " artifacts)";
    if (!s.error.empty()) std::cout << ": " << s.error;
    std::cout << "\n";
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  }
  std::cout << "report: " << (cfg.output / "run_report.json").string() << "\n";
  return r.ok() ? 0 : kExitPartial;
}

int run_report(const std::string& dir, bool force) {
  const auto s = stylo::app::report(dir, force);
  std::cout << s.text;
  return 0;
}

int run_compressors(const Overrides& o) {
  stylo::app::RunConfig c = o.config.empty() ? stylo::app::RunConfig{} : stylo::app::load_config(o.config);
  const auto registry = stylo::app::make_registry(c);
  for (const auto& id : registry.ids()) std::cout << id << "\tlevel " << registry.get(id).level() << "\n";
  return 0;
}

int run_selftest() {
  int failed = 0;
  for (const auto& c : stylo::app::selftest()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) std::cout << ": " << c.detail;
    std::cout << "\n";
    failed += !c.passed;
  }
  return failed == 0 ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylo: stylometric authorship attribution"};
  app.set_version_flag("--version", std::string("stylo ") + stylo::app::kVersion);
  app.require_subcommand(1);

  Overrides o;
  auto* ingest = app.add_subcommand("ingest", "canonicalize and chunk the corpus into <output>/corpus");
  add_common(ingest, o);

  auto* analyze = app.add_subcommand("analyze", "run analyses on the ingested corpus");
  add_common(analyze, o);
  analyze->add_option("--seed", o.seed, "random seed (default: config, then STYLO_SEED, then 0)");
  analyze->add_option("-j,--jobs", o.jobs, "worker threads (0 = all cores)");
  analyze->add_option("-a,--analysis", o.analysis, "delta,ncd,projection,classify,unmask or all");
  analyze->add_option("--mfw", o.mfw, "delta grid: most-frequent-word counts")->delimiter(',');
  analyze->add_option("--culling", o.culling, "delta grid: culling percentages")->delimiter(',');
  analyze->add_option("--delta-kinds", o.delta_kinds, "delta grid: distance kinds")->delimiter(',');
  analyze->add_option("--kinds", o.kinds, "classify grid: classifier kinds")->delimiter(',');
  analyze->add_option("--features", o.features, "classify grid: feature sets")->delimiter(',');
  analyze->add_option("--compressor", o.compressor, "compressor id for NCD");
  analyze->add_option("--ncd-mode", o.ncd_mode, "instance or profile");
  analyze->add_option("--plot-sample", o.plot_sample, "chunks drawn in projection plots (0 = all)");
  analyze->add_flag("--no-plots", o.no_plots, "skip SVG output");

  std::string run_dir;
  bool report_force = false;
  auto* report = app.add_subcommand("report", "summarize an analysis output directory");
  report->add_option("run_dir", run_dir, "output directory of a previous analyze")->required();
  report->add_flag("--force", report_force, "overwrite a changed summary");

  auto* compressors = app.add_subcommand("compressors", "compressor registry");
  auto* list = compressors->add_subcommand("list", "list available compressors");
  list->add_option("-c,--config", o.config, "config declaring external compressors");
  compressors->require_subcommand(1);

  auto* selftest = app.add_subcommand("selftest", "quick built-in sanity checks");

  stylo::synth::CorpusSpec spec;
  std::string synth_dir;
  int synth_min_words = 300;
  auto* synth = app.add_subcommand("synth", "write a synthetic test corpus and manifest");
  synth->add_option("dir", synth_dir, "destination directory")->required();
  synth->add_option("--authors", spec.authors, "number of authors");
  synth->add_option("--works", spec.works_per_author, "labeled works per author");
  synth->add_option("--queries", spec.queries_per_author, "unlabeled works per author");
  synth->add_option("--words", spec.words_per_work, "words per work");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--min-chunk-words", synth_min_words, "manifest chunk size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(o);
    if (*analyze) return run_analyze(o);
    if (*report) return run_report(run_dir, report_force);
    if (*list) return run_compressors(o);
    if (*selftest) return run_selftest();
    if (*synth) {
      const auto path = stylo::synth::write_corpus(stylo::synth::make_corpus(spec), synth_dir, synth_min_words);
      std::cout << "manifest: " << path.string() << "\n";
      return 0;
    }
  } catch (const stylo::Error& e) {
    std::cerr << "error (" << stylo::to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == stylo::ErrorCode::config ? kExitConfig : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
