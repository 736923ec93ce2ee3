#include <doctest.h>

#include "stylo/error.hpp"
#include "stylo/plot.hpp"

using namespace stylo;
using namespace stylo::plot;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("scatter colors by group and escapes labels") {
  const std::vector<Point> pts{{0, 0, "a<1>", "query"}, {1, 2, "b", "candidate"}, {2, 1, "c", "candidate"}};
  const std::string svg = scatter_svg(pts, {"PCA", "PC1", "PC2"});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<circle") == 3);
  CHECK(count(svg, "fill=\"#1f77b4\" fill-opacity") == 1);
  CHECK(count(svg, "fill=\"#d62728\" fill-opacity") == 2);
  CHECK(svg.find("a&lt;1&gt;") != std::string::npos);
  CHECK(svg == scatter_svg(pts, {"PCA", "PC1", "PC2"}));
}

TEST_CASE("line chart has one polyline per series") {
  const std::string svg = line_svg({{"A", {1.0, 0.8, 0.5}}, {"B", {1.0, 0.95, 0.9}}}, {"Unmasking", "step", "accuracy"});
  CHECK(count(svg, "<polyline") == 2);
  CHECK(svg.find(">A</text>") != std::string::npos);
}

TEST_CASE("heatmap shades closer pairs darker") {
  const Matrix d = Matrix::from_rows({{0.0, 0.2, 1.0}, {0.2, 0.0, 0.6}, {1.0, 0.6, 0.0}});
  const std::string svg = heatmap_svg({"x", "y", "z"}, d, "NCD");
  CHECK(count(svg, "fill=\"#000000\"") == 3);  // diagonal
  CHECK(count(svg, "fill=\"#ffffff\"") == 2);  // the farthest pair
  CHECK(count(svg, "fill=\"#333333\"") == 2);  // 0.2 -> 51
  CHECK_THROWS_AS(heatmap_svg({"x"}, d, "bad"), Error);
}

TEST_CASE("dendrogram draws three segments per merge") {
  distance::Dendrogram t{{"a", "b", "c"}, {{0, 1, 1.0, 3, 2}, {3, 2, 4.0, 4, 3}}};
  const std::string svg = dendrogram_svg(t, "tree");
  CHECK(count(svg, "<line") == 6);
  for (const char* leaf : {">a<", ">b<", ">c<"}) CHECK(svg.find(leaf) != std::string::npos);
  distance::Dendrogram broken{{"a", "b", "c"}, {}};
  CHECK_THROWS_AS(dendrogram_svg(broken, "x"), Error);
}
