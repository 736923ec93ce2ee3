#include <algorithm>
#include <limits>

#include <json.hpp>

#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"

namespace stylo::distance {

const char* to_string(Linkage l) {
  switch (l) {
    case Linkage::average: return "average";
    case Linkage::complete: return "complete";
    case Linkage::single: return "single";
  }
  return "?";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "average") return Linkage::average;
  if (name == "complete") return Linkage::complete;
  if (name == "single") return Linkage::single;
  fail(ErrorCode::invalid_argument, "unknown linkage \"" + std::string(name) + "\"");
}

Dendrogram cluster(const DistanceMatrix& d, Linkage linkage) {
  const std::size_t n = d.size();
  require(n >= 2, ErrorCode::precondition, "cluster needs at least two samples");
  require(d.values.rows() == n && d.values.cols() == n, ErrorCode::dimension_mismatch,
          "cluster: distance matrix is not square over its ids");

  Dendrogram tree;
  tree.leaves = d.ids;
  // Cluster distances indexed by node id; nodes n..2n-2 are created as merges happen.
  const std::size_t total = 2 * n - 1;
  Matrix dist(total, total, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist(i, j) = d.values(i, j);
  std::vector<std::size_t> size(total, 1);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  double last_height = 0.0;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    // active is kept sorted, so the first strict minimum in (i, j) order is
    // the smallest id pair among ties.
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = dist(active[a], active[b]);
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    const std::size_t left = active[bi], right = active[bj];
    const std::size_t node = n + step;
    size[node] = size[left] + size[right];
    // Guard against rounding producing a height a hair below the previous one.
    last_height = std::max(last_height, best);
    tree.merges.push_back({left, right, last_height, node, size[node]});

    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    for (std::size_t k : active) {
      const double dl = dist(k, left), dr = dist(k, right);
      double v = 0.0;
      switch (linkage) {
        case Linkage::average:
          v = (static_cast<double>(size[left]) * dl + static_cast<double>(size[right]) * dr) /
              static_cast<double>(size[node]);
          break;
        case Linkage::complete: v = std::max(dl, dr); break;
        case Linkage::single: v = std::min(dl, dr); break;
      }
      dist(k, node) = dist(node, k) = v;
    }
    active.push_back(node);
  }
  return tree;
}

std::string to_dot(const Dendrogram& tree, bool unrooted) {
  const std::size_t n = tree.leaves.size();
  std::string out = unrooted ? "graph dendrogram {\n  layout=neato;\n  overlap=false;\n"
                             : "digraph dendrogram {\n  rankdir=TB;\n";
  const std::string edge = unrooted ? " -- " : " -> ";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q.push_back('\\');
      q.push_back(c);
    }
    return q + "\"";
  };
  for (std::size_t i = 0; i < n; ++i)
    out += "  n" + std::to_string(i) + " [shape=box, label=" + quote(tree.leaves[i]) + "];\n";
  for (const auto& m : tree.merges) {
    out += "  n" + std::to_string(m.node) + " [shape=point, xlabel=" + quote(io::format_double(m.height)) + "];\n";
    out += "  n" + std::to_string(m.node) + edge + "n" + std::to_string(m.left) + ";\n";
    out += "  n" + std::to_string(m.node) + edge + "n" + std::to_string(m.right) + ";\n";
  }
  return out + "}\n";
}

std::string to_json(const Dendrogram& tree) {
  nlohmann::ordered_json j;
  j["leaves"] = tree.leaves;
  j["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : tree.merges) {
    nlohmann::ordered_json e;
    e["left"] = m.left;
    e["right"] = m.right;
    e["height"] = m.height;
    e["node"] = m.node;
    e["size"] = m.size;
    j["merges"].push_back(e);
  }
  return j.dump(2) + "\n";
}

}  // namespace stylo::distance
