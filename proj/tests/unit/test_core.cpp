#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "stylo/data.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/matrix.hpp"
#include "stylo/parallel.hpp"
#include "stylo/rng.hpp"
#include "stylo/text.hpp"
#include "stylo/unicode.hpp"

using namespace stylo;

TEST_CASE("words are letter runs, folded, with internal apostrophes") {
  CHECK(text::words("Hola, MUNDO d'Artagnan 'x' 42 Ñandú") ==
        std::vector<std::string>{"hola", "mundo", "d'artagnan", "x", "ñandú"});
  CHECK(text::count_words("") == 0);
  CHECK(text::count_words("  ,,, 12 ") == 0);
}

TEST_CASE("paragraphs split on blank lines") {
  auto p = text::paragraphs("a b\nc\n\n  \nd\n\n");
  REQUIRE(p.size() == 2);
  CHECK(p[0] == "a b\nc");
  CHECK(p[1] == "d");
}

TEST_CASE("invalid utf-8 offset") {
  CHECK_FALSE(unicode::find_invalid_utf8("ñandú").has_value());
  std::string bad = "ab";
  bad.push_back(static_cast<char>(0xC3));
  CHECK(unicode::find_invalid_utf8(bad) == 2);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("csv escape and parse") {
  const std::string row = io::csv_row({"a", "b,c", "d\"e"});
  CHECK(row == "a,\"b,c\",\"d\"\"e\"\n");
  auto parsed = io::parse_csv(row + "x,y,z\n");
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0][1] == "b,c");
  CHECK(parsed[0][2] == "d\"e");
}

TEST_CASE("write_artifact refuses to overwrite different bytes without force") {
  const auto dir = std::filesystem::temp_directory_path() / "stylo_io_test";
  std::filesystem::remove_all(dir);
  const auto f = dir / "x.txt";
  CHECK(io::write_artifact(f, "one", false) == io::WriteOutcome::written);
  CHECK(io::write_artifact(f, "one", false) == io::WriteOutcome::unchanged);
  CHECK_THROWS_AS(io::write_artifact(f, "two", false), Error);
  CHECK(io::write_artifact(f, "two", true) == io::WriteOutcome::written);
  std::filesystem::remove_all(dir);
}

TEST_CASE("symmetric eigen reconstructs the input") {
  Rng rng(7);
  const std::size_t n = 6;
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = uniform_real(rng) - 0.5;
  auto e = symmetric_eigen(a);
  for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] >= e.values[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < n; ++k) s += e.values[k] * e.vectors(k, i) * e.vectors(k, j);
      CHECK(std::abs(s - a(i, j)) < 1e-12);
      CHECK(std::abs(dot(e.vectors.row(i), e.vectors.row(j)) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("cholesky solve") {
  Matrix a = Matrix::from_rows({{4, 1}, {1, 3}});
  Matrix b = Matrix::from_rows({{1, 0}, {2, 1}});
  Matrix x = cholesky_solve(a, b);
  Matrix back = multiply(a, x);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(back(i, j) == doctest::Approx(b(i, j)).epsilon(1e-14));
}

TEST_CASE("uniform_index stays in range and is reproducible") {
  Rng a(3), b(3);
  for (int i = 0; i < 1000; ++i) {
    const auto x = uniform_index(a, 7);
    CHECK(x < 7);
    CHECK(x == uniform_index(b, 7));
  }
}

TEST_CASE("parallel_for fills every slot and rethrows") {
  std::vector<int> out(100, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);
  CHECK_THROWS(parallel_for(10, [](std::size_t i) {
    if (i == 4) throw std::runtime_error("boom");
  }));
}

TEST_CASE("nested parallel_for completes with several workers") {
  const std::size_t saved = max_jobs();
  set_max_jobs(4);
  std::vector<std::vector<int>> out(8, std::vector<int>(16, 0));
  parallel_for(out.size(), [&](std::size_t i) {
    parallel_for(out[i].size(), [&](std::size_t j) { out[i][j] = static_cast<int>(i * 100 + j); });
  });
  set_max_jobs(saved);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j) CHECK(out[i][j] == static_cast<int>(i * 100 + j));
}

TEST_CASE("embedded data") {
  const auto sw = data::default_stopwords();
  CHECK(sw.size() == 313);
  CHECK(sw.front() == "de");
  CHECK(data::default_abbreviations().at("Ð") == "DE");
  CHECK(data::parse_word_list("# c\nA\n\n b \n") == std::vector<std::string>{"a", "b"});
}
