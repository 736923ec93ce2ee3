#include <doctest.h>

#include <filesystem>

#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/text.hpp"

using namespace stylo;
using namespace stylo::corpus;

namespace {

std::string canon(const std::string& raw, bool play = false) {
  return canonicalize_text(raw, CanonicalRules{}, play);
}

Document doc_with(const std::string& id, const std::string& canonical) {
  Document d;
  d.id = id;
  d.author = "A";
  d.raw_text = canonical;
  d.canonical_text = canonical;
  return d;
}

std::string words_para(std::size_t n, const std::string& w = "palabra") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w;
  return s;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("abbreviation expansion") { CHECK(canon("Ð la mano") == "DE la mano"); }

TEST_CASE("hand-applied rule list") { CHECK(canon("fin!!! 12 de—ber") == "fin! deber"); }

TEST_CASE("canonicalize rejects empty raw text") {
  Document d;
  d.id = "x";
  CHECK_THROWS_AS(canonicalize(d), Error);
}

TEST_CASE("individual rules") {
  CHECK(canon("uno {nota al margen} dos") == "uno dos");
  CHECK(canon("uno [[nota]] dos") == "uno dos");
  CHECK(canon("@header Libro primero\ntexto\n@page 3") == "texto");
  CHECK(canon("texto\n  23  \nmás") == "texto\nmás");
  CHECK(canon("dijo <la>arma virumque</la> luego") == "dijo luego");
  CHECK(canon("pala-\nbra y cosa") == "palabra y cosa");
  CHECK(canon("a\x01" "b\tc") == "ab c");
  CHECK(canon("¿qué???") == "¿qué?");
  CHECK(canon("uno – dos") == "uno - dos");
  CHECK(canon("año 1554, mes") == "año , mes");
  CHECK(canon("CAPÍTULO PRIMERO\n\nEra un día.") == "Era un día.");
  CHECK(canon("Era un día.\n\nFIN") == "Era un día.");
  CHECK(canon("# Tratado segundo\nEra") == "Era");
  CHECK(canon("<sp>LOPE</sp> Hola amigo", true) == "Hola amigo");
  CHECK(canon("<sp>LOPE</sp> Hola amigo", false) == "LOPE Hola amigo");
  CHECK(canon("a\n\n\n\nb  c ") == "a\n\nb c");
}

TEST_CASE("canonicalize is idempotent") {
  const std::vector<std::string> samples{
      "fin!!! 12 de—ber", "Ð la mano", "pala-\nbra 3!! !", "x {a} [[b]] <la>c</la>\n\n\n12\n\nCAPÍTULO I\n\nfin",
      "1!2!3!", "Ð-\nla", "a - - b", "uno\r\ndos\r\n\r\ntres", "  \n\n", "«Dijo», —pues— ¡ya!"};
  for (const auto& s : samples) {
    const std::string once = canon(s);
    CHECK(canon(once) == once);
  }
}

TEST_CASE("segment_chunks greedy rule") {
  auto chunks = segment_chunks(doc_with("d", words_para(320) + "\n\n" + words_para(330)), 300);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].word_count == 320);
  CHECK(chunks[1].word_count == 330);

  auto short_doc = segment_chunks(doc_with("s", words_para(200)), 300);
  REQUIRE(short_doc.size() == 1);
  CHECK(short_doc[0].short_flag);

  auto exact = segment_chunks(doc_with("e", words_para(300)), 300);
  REQUIRE(exact.size() == 1);
  CHECK(exact[0].word_count == 300);
  CHECK_FALSE(exact[0].short_flag);

  auto remainder = segment_chunks(
      doc_with("r", words_para(310) + "\n\n" + words_para(305) + "\n\n" + words_para(50)), 300);
  REQUIRE(remainder.size() == 2);
  CHECK(remainder[1].word_count == 355);
  CHECK(remainder[1].index == 1);

  CHECK_THROWS_AS(segment_chunks(doc_with("z", "12 !!"), 300), Error);
}

TEST_CASE("chunks conserve words and never split paragraphs") {
  std::string text;
  std::vector<std::string> paras;
  for (int i = 0; i < 25; ++i) {
    paras.push_back(words_para(17 + (i * 37) % 90, "w" + std::string(1, static_cast<char>('a' + i))));
    text += (i ? "\n\n" : "") + paras.back();
  }
  auto chunks = segment_chunks(doc_with("c", text), 120);
  std::size_t total = 0;
  std::string rebuilt;
  for (const auto& c : chunks) {
    total += c.word_count;
    CHECK(c.word_count == c.tokens.size());
    CHECK(c.word_count >= 120);
    rebuilt += (rebuilt.empty() ? "" : "\n\n") + c.text;
  }
  CHECK(total == text::count_words(text));
  CHECK(rebuilt == text);
}

TEST_CASE("build_profiles groups by author in manifest order") {
  Document a = doc_with("a1", "uno");
  Document b = doc_with("b1", "dos");
  b.author = "B";
  Document c = doc_with("a2", "tres");
  auto profiles = build_profiles({a, b, c});
  REQUIRE(profiles.size() == 2);
  CHECK(profiles[0].author == "A");
  CHECK(profiles[0].concatenated_text == "uno\n\ntres");
  CHECK(profiles[0].source_doc_ids == std::vector<std::string>{"a1", "a2"});
  CHECK(build_profiles({}).empty());
  Document anon = doc_with("q", "x");
  anon.author.reset();
  CHECK_THROWS_AS(build_profiles({a, anon}), Error);
}

TEST_CASE("balance_chunks bounds") {
  ChunksByAuthor g;
  for (int i = 0; i < 100; ++i) g["X"].push_back(Chunk{"x", static_cast<std::size_t>(i)});
  for (int i = 0; i < 10; ++i) g["Y"].push_back(Chunk{"y", static_cast<std::size_t>(i)});
  auto b = balance_bounds(g, 0.10);
  CHECK(b.ceiling == 60);
  CHECK(b.floor == 50);
  auto out = balance_chunks(g, 0.10, 42);
  CHECK(out["X"].size() == 60);
  CHECK(out["Y"].size() == 50);
  auto again = balance_chunks(g, 0.10, 42);
  for (const auto& [k, v] : out) {
    REQUIRE(again[k].size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(again[k][i].sample_id() == v[i].sample_id());
  }

  ChunksByAuthor even;
  for (int i = 0; i < 50; ++i) {
    even["X"].push_back(Chunk{"x", static_cast<std::size_t>(i)});
    even["Y"].push_back(Chunk{"y", static_cast<std::size_t>(i)});
  }
  auto same = balance_chunks(even, 0.1, 1);
  CHECK(same["X"].size() == 50);
  CHECK(same["Y"].size() == 50);

  ChunksByAuthor one{{"X", {Chunk{"x", 0}}}};
  CHECK_THROWS_AS(balance_chunks(one, 0.1, 1), Error);
  CHECK_THROWS_AS(balance_chunks(g, 1.0, 1), Error);
}

TEST_CASE("load_corpus errors name the entry") {
  TempDir dir("stylo_corpus_test");
  io::write_file(dir.path / "a.txt", "Hola mundo.");
  io::write_file(dir.path / "b.txt", std::string("mal \xff texto"));
  auto manifest = [&](const std::string& docs) {
    io::write_file(dir.path / "m.json", "{\"documents\":[" + docs + "]}");
    return load_manifest(dir.path / "m.json");
  };

  auto ok = load_corpus(manifest(R"({"id":"A","path":"a.txt","author":"x"},{"id":"Q","path":"a.txt"})"));
  REQUIRE(ok.size() == 2);
  CHECK(ok[0].raw_text == "Hola mundo.");
  CHECK_FALSE(ok[1].author.has_value());
  CHECK_FALSE(ok[0].canonical_text.has_value());

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::numeric;
  };
  CHECK(code_of([&] { load_corpus(manifest(R"({"id":"A","path":"a.txt","author":"x"},{"id":"A","path":"a.txt"})")); }) ==
        ErrorCode::duplicate_id);
  CHECK(code_of([&] { load_corpus(manifest(R"({"id":"A","path":"nope.txt","author":"x"})")); }) ==
        ErrorCode::missing_file);
  CHECK(code_of([&] { load_corpus(manifest(R"({"id":"B","path":"b.txt","author":"x"})")); }) ==
        ErrorCode::invalid_utf8);
  CHECK(code_of([&] { manifest(R"({"id":"A","path":"a.txt","colour":"x"})"); }) == ErrorCode::config);
  try {
    load_corpus(manifest(R"({"id":"B","path":"b.txt","author":"x"})"));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("\"B\"") != std::string::npos);
  }
}
