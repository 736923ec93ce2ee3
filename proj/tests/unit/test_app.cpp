#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "stylo/app.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/synth.hpp"

using namespace stylo;
using namespace stylo::app;

namespace {

struct Scratch {
  std::filesystem::path path;
  explicit Scratch(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~Scratch() { std::filesystem::remove_all(path); }
};

RunConfig synthetic_run(const Scratch& dir, std::size_t authors, std::size_t works, std::size_t queries,
                        std::size_t words) {
  synth::CorpusSpec spec;
  spec.authors = authors;
  spec.works_per_author = works;
  spec.queries_per_author = queries;
  spec.words_per_work = words;
  spec.seed = 5;
  RunConfig cfg;
  cfg.manifest = synth::write_corpus(synth::make_corpus(spec), dir.path / "corpus", 300);
  cfg.output = dir.path / "out";
  cfg.plots = false;
  return cfg;
}

std::size_t csv_rows(const std::filesystem::path& p) { return io::parse_csv(io::read_file(p)).size() - 1; }

}  // namespace

TEST_CASE("config defaults and strict keys") {
  const RunConfig c = parse_config("{}");
  CHECK(c.analyses == kAnalysisOrder);
  CHECK(c.effective_seed() == 0);
  CHECK(c.compressor == "bzip2");
  CHECK_NOTHROW(validate(c));

  auto code_of = [](const std::string& text) {
    try {
      validate(parse_config(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::numeric;  // sentinel: no error
  };
  CHECK(code_of(R"({"bogus": 1})") == ErrorCode::config);
  CHECK(code_of(R"({"delta": {"mfw": [100], "extra": true}})") == ErrorCode::config);
  CHECK(code_of(R"({"delta": {"mfw": "100"}})") == ErrorCode::config);
  CHECK(code_of(R"({"delta": {"mfw": [0]}})") == ErrorCode::config);
  CHECK(code_of(R"({"delta": {"kinds": ["nope"]}})") == ErrorCode::config);
  CHECK(code_of(R"({"compressor": "lzma"})") == ErrorCode::config);
  CHECK(code_of(R"({"classify": {"folds": 1}})") == ErrorCode::config);
  CHECK(code_of(R"({"classify": {"features": ["bow", "nope"]}})") == ErrorCode::config);
  CHECK(code_of(R"({"unmask": {"n": 10, "k": 3, "m": 2}})") == ErrorCode::config);
  CHECK(code_of(R"({"seed": -1})") == ErrorCode::config);
  CHECK(code_of("not json") == ErrorCode::config);
}

TEST_CASE("config paths resolve against the config directory") {
  const RunConfig c = parse_config(R"({"manifest": "m.json", "output": "/abs/out"})", "/base");
  CHECK(c.manifest == std::filesystem::path("/base/m.json"));
  CHECK(c.output == std::filesystem::path("/abs/out"));
}

TEST_CASE("config echo round-trips") {
  const RunConfig c = parse_config(
      R"({"seed": 9, "analyses": "delta,classify", "delta": {"mfw": [50, 60], "culling": [10]},
          "classify": {"kinds": ["ridge"], "features": ["bow"]}, "unmask": {"k": 3}})");
  CHECK(c.seed == 9u);
  CHECK(c.analyses == std::vector<std::string>{"delta", "classify"});
  CHECK(config_json(parse_config(config_json(c))) == config_json(c));
}

TEST_CASE("analysis lists") {
  CHECK(parse_analyses("all") == kAnalysisOrder);
  CHECK(parse_analyses("unmask,delta") == std::vector<std::string>{"delta", "unmask"});
  CHECK_THROWS_AS(parse_analyses("delta,nope"), Error);
  CHECK_THROWS_AS(parse_analyses(""), Error);
}

TEST_CASE("external compressors join the registry") {
  const RunConfig c = parse_config(R"({"external_compressors": [{"id": "gz", "command": "gzip", "args": ["-c"]}],
                                       "compressor": "gz"})");
  CHECK_NOTHROW(validate(c));
  CHECK(make_registry(c).ids() == std::vector<std::string>{"bzip2", "deflate", "gz"});
  CHECK_THROWS_AS(make_registry(parse_config(R"({"external_compressors": [{"id": "bzip2", "command": "x"}]})")),
                  Error);
}

TEST_CASE("ingest writes the cache and is idempotent") {
  Scratch dir("stylo_app_ingest");
  const RunConfig cfg = synthetic_run(dir, 3, 1, 0, 700);
  const auto r = ingest(cfg, false);
  CHECK(r.documents == 3);
  CHECK(r.artifacts.size() == 5);  // 3 canonical texts + chunk index + corpus index
  for (const auto& a : r.artifacts) CHECK(std::filesystem::exists(cfg.output / a));
  CHECK(csv_rows(cfg.output / "corpus/chunks.csv") == r.chunks);

  std::vector<std::string> before;
  for (const auto& a : r.artifacts) before.push_back(io::read_file(cfg.output / a));
  const auto again = ingest(cfg, false);  // would throw on any changed byte
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(io::read_file(cfg.output / again.artifacts[i]) == before[i]);

  const auto cache = load_cache(cfg.output);
  REQUIRE(cache.documents.size() == 3);
  CHECK(cache.documents[0].author == std::optional<std::string>("A"));
  CHECK(cache.min_chunk_words == 300);
}

TEST_CASE("ingest names the broken entry") {
  Scratch dir("stylo_app_broken");
  io::write_file(dir.path / "m.json", R"({"documents": [{"id": "lost", "path": "missing.txt", "author": "A"}]})");
  RunConfig cfg;
  cfg.manifest = dir.path / "m.json";
  cfg.output = dir.path / "out";
  try {
    ingest(cfg, false);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_file);
    CHECK(std::string(e.what()).find("lost") != std::string::npos);
  }
}

TEST_CASE("delta grid size is the cartesian product and the report has only that section") {
  Scratch dir("stylo_app_delta");
  RunConfig cfg = synthetic_run(dir, 2, 3, 0, 800);
  cfg.analyses = {"delta"};
  cfg.delta.mfw = {100, 500};
  cfg.delta.culling = {0, 50};
  const auto r = analyze(cfg, false);
  CHECK(r.ok());
  CHECK(csv_rows(cfg.output / "delta/grid.csv") == 4);
  const auto s = summarize(cfg.output);
  CHECK(s.sections == std::vector<std::string>{"delta"});

  // Every listed artifact exists.
  const auto j = nlohmann::json::parse(io::read_file(cfg.output / "run_report.json"));
  for (const auto& a : j.at("artifacts")) CHECK(std::filesystem::exists(cfg.output / a.get<std::string>()));
  CHECK(j.at("status") == "ok");
}

TEST_CASE("classify grid ranking and per-query attribution") {
  Scratch dir("stylo_app_classify");
  RunConfig cfg = synthetic_run(dir, 2, 3, 1, 1500);
  cfg.analyses = {"classify"};
  cfg.classify.kinds = {"ridge", "maxent"};
  cfg.classify.features = {"bow", "cng", "total"};
  cfg.classify.folds = 3;
  const auto r = analyze(cfg, false);
  REQUIRE(r.ok());
  const auto rows = io::parse_csv(io::read_file(cfg.output / "classify/ranking.csv"));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"algorithm", "features", "precision", "recall", "f_score"});
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i - 1][2]) >= std::stod(rows[i][2]));

  for (const std::string q : {"A_q1", "B_q1"}) {
    const auto a = nlohmann::json::parse(io::read_file(cfg.output / ("classify/attribution/" + q + ".json")));
    CHECK(a.at("query") == q);
    const auto& table = a.at("table");
    REQUIRE(table.size() == 2);
    CHECK(table[0].at("candidate") == q.substr(0, 1));
    CHECK(table[0].at("wins").get<int>() >= table[1].at("wins").get<int>());
  }
  const auto s = summarize(cfg.output);
  CHECK(s.sections == std::vector<std::string>{"ranking", "attribution"});
}

TEST_CASE("a failing stage is recorded and later stages still run") {
  Scratch dir("stylo_app_partial");
  RunConfig cfg = synthetic_run(dir, 2, 2, 0, 700);  // too few chunks to unmask
  cfg.analyses = {"unmask", "ncd"};
  cfg.compressor = "deflate";
  const auto r = analyze(cfg, false);
  CHECK_FALSE(r.ok());
  REQUIRE(r.stages.size() == 3);
  CHECK(r.stages[0].name == "ingest");
  CHECK(r.stages[1].name == "ncd");
  CHECK(r.stages[1].status == "ok");
  CHECK(r.stages[2].name == "unmask");
  CHECK(r.stages[2].status == "failed");
  CHECK_FALSE(r.stages[2].error.empty());
  const auto j = nlohmann::json::parse(io::read_file(cfg.output / "run_report.json"));
  CHECK(j.at("status") == "partial_failure");
}

TEST_CASE("artifacts are not overwritten without force") {
  Scratch dir("stylo_app_force");
  RunConfig cfg = synthetic_run(dir, 2, 2, 0, 700);
  cfg.analyses = {"delta"};
  cfg.delta.mfw = {50};
  CHECK(analyze(cfg, false).ok());
  CHECK(analyze(cfg, false).ok());  // same bytes: allowed
  cfg.delta.mfw = {60};
  CHECK_THROWS_AS(analyze(cfg, false), Error);
  CHECK(analyze(cfg, true).ok());
}

TEST_CASE("report on a missing or empty directory fails") {
  CHECK_THROWS_AS(summarize("/nonexistent/stylo/run"), Error);
  Scratch dir("stylo_app_empty");
  CHECK_THROWS_AS(summarize(dir.path), Error);
}

TEST_CASE("selftest passes") {
  for (const auto& c : selftest()) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}
