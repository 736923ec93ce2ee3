#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "stylo/compression.hpp"
#include "stylo/error.hpp"
#include "stylo/synth.hpp"

using namespace stylo;
using namespace stylo::compression;

namespace {

// Sizes looked up from a table; unknown inputs fall back to their length.
class MockCompressor final : public Compressor {
 public:
  std::map<std::string, std::size_t> sizes;
  std::string id() const override { return "mock"; }
  int level() const override { return 0; }
  std::string compress(std::string_view input) const override {
    auto it = sizes.find(std::string(input));
    return std::string(it == sizes.end() ? input.size() : it->second, 'x');
  }
};

std::string prose(std::uint64_t stream, std::size_t words) {
  static const synth::Generator gen(synth::Config{}, 77);
  return gen.work(gen.author("P", stream), words, stream);
}

}  // namespace

TEST_CASE("builtin compressors are lossless and deterministic") {
  const std::string text = prose(1, 3000);
  for (const auto& c : {make_bzip2(), make_deflate()}) {
    const std::string packed = c->compress(text);
    CHECK(c->decompress(packed, text.size()) == text);
    CHECK(c->compress(text) == packed);
    CHECK(compressed_size("", *c) > 0);
    CHECK(compressed_size(std::string(10000, 'a'), *c) < 200);
    // Concatenation never costs much more than compressing separately.
    const std::string other = prose(2, 3000);
    CHECK(compressed_size(text + other, *c) <= compressed_size(text, *c) + compressed_size(other, *c) + 64);
  }
}

TEST_CASE("registry") {
  auto r = Registry::with_builtins();
  CHECK(r.ids() == std::vector<std::string>{"bzip2", "deflate"});
  CHECK(r.get("bzip2").level() == 9);
  try {
    r.get("rar");
    FAIL("expected unknown compressor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_compressor);
  }
}

TEST_CASE("ncd formula via mock sizes") {
  CHECK(std::abs(ncd_from_sizes(100, 120, 150) - 50.0 / 120.0) < 1e-12);
  MockCompressor m;
  const std::string x = "xxxx", y = "yyyyy";
  m.sizes = {{x, 100}, {y, 120}, {x + y, 150}, {y + x, 170}};
  CHECK(std::abs(ncd(x, y, m) - 0.41667) < 1e-5);
  CHECK(ncd(x, y, m) == ncd(y, x, m));
  m.sizes[y + x] = 130;
  CHECK(ncd(x, y, m) == doctest::Approx(30.0 / 120.0));
  CHECK_THROWS_AS(ncd("", y, m), Error);
}

TEST_CASE("ncd on prose") {
  const std::string x = prose(3, 2500), z = prose(4, 2500);
  REQUIRE(x.size() >= 10000);
  // Block sorting leaves a sizeable residue on xx; LZ77 nearly erases it.
  auto bz = make_bzip2();
  const double xx = ncd(x, x, *bz), xz = ncd(x, z, *bz);
  CHECK(xx > 0.0);
  CHECK(xx < 0.4);
  CHECK(xz > 0.8);
  CHECK(xz <= 1.2);
  CHECK(ncd(x, x, *make_deflate()) <= 0.15);
}

TEST_CASE("ncd matrix cache does not change results") {
  std::vector<Sample> s;
  for (int i = 0; i < 4; ++i) s.push_back({"s" + std::to_string(i), prose(10 + static_cast<std::uint64_t>(i), 400)});
  auto c = make_deflate();
  auto cached = ncd_matrix(s, *c, Mode::instance, true);
  auto uncached = ncd_matrix(s, *c, Mode::instance, false);
  CHECK(cached.values == uncached.values);
  CHECK(cached.stats.single_compressions == 4);
  CHECK(cached.stats.pair_evaluations == 4 * 3 / 2 + 4);
  CHECK(uncached.stats.single_compressions > 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(cached.values(i, j) == cached.values(j, i));
  CHECK(to_csv(cached).rfind("id,s0,s1,s2,s3\n", 0) == 0);
  CHECK(to_json(cached).find("\"compressor_id\": \"deflate\"") != std::string::npos);
}

TEST_CASE("near duplicates merge first in the ncd tree") {
  const std::string a = prose(20, 800), b = prose(21, 800);
  std::vector<Sample> s{{"a1", a}, {"b1", b}, {"a2", a + " fin."}, {"b2", "Hoy. " + b}};
  auto m = ncd_matrix(s, *make_bzip2(), Mode::instance);
  auto tree = ncd_tree(m);
  REQUIRE(tree.merges.size() == 3);
  auto pair_of = [](const distance::Merge& mg) { return std::make_pair(std::min(mg.left, mg.right), std::max(mg.left, mg.right)); };
  const auto first = pair_of(tree.merges[0]), second = pair_of(tree.merges[1]);
  const std::set<std::pair<std::size_t, std::size_t>> got{first, second};
  CHECK(got == std::set<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 3}});
  CHECK(distance::to_dot(tree, true) == distance::to_dot(ncd_tree(m), true));
}

TEST_CASE("external adapter") {
  auto cat = make_external({"cat", "cat", {}, 10.0});
  const std::string text = prose(30, 20000);
  CHECK(cat->compressed_size(text) == text.size());
  auto gz = make_external({"gzip", "gzip", {"-c", "-9"}, 10.0});
  CHECK(gz->compressed_size(text) < text.size() / 2);
  auto slow = make_external({"slow", "sleep", {"5"}, 0.3});
  CHECK_THROWS_AS(slow->compressed_size("x"), Error);
  auto missing = make_external({"none", "/nonexistent/compressor", {}, 5.0});
  CHECK_THROWS_AS(missing->compressed_size("x"), Error);
}
