#include "stylo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "stylo/error.hpp"

namespace stylo::plot {

namespace {

const std::vector<std::string> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const std::string& extra = {}) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + extra + ">" + escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke = "black") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
         "\" stroke=\"" + stroke + "\"/>\n";
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void fit(double v, bool first) {
    if (first) lo = hi = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

constexpr double kW = 640, kH = 480, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;

struct Frame {
  Range xr, yr;
  double px(double x) const { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kW - kLeft - kRight); }
  double py(double y) const { return kH - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kH - kTop - kBottom); }
};

std::string axes_svg(const Frame& f, const Axes& a) {
  std::string out;
  out += text(kW / 2, 22, a.title, " text-anchor=\"middle\" font-size=\"14\"");
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kW - kLeft - kRight) +
         "\" height=\"" + num(kH - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.xr.lo + (f.xr.hi - f.xr.lo) * i / 4.0;
    const double yv = f.yr.lo + (f.yr.hi - f.yr.lo) * i / 4.0;
    out += line(f.px(xv), kH - kBottom, f.px(xv), kH - kBottom + 4);
    out += text(f.px(xv), kH - kBottom + 16, num(xv), " text-anchor=\"middle\"");
    out += line(kLeft - 4, f.py(yv), kLeft, f.py(yv));
    out += text(kLeft - 6, f.py(yv) + 4, num(yv), " text-anchor=\"end\"");
  }
  out += text((kLeft + kW - kRight) / 2, kH - 12, a.x_label, " text-anchor=\"middle\"");
  out += text(16, (kTop + kH - kBottom) / 2, a.y_label,
              " text-anchor=\"middle\" transform=\"rotate(-90 16 " + num((kTop + kH - kBottom) / 2) + ")\"");
  return out;
}

std::string legend(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 14 + 16 * static_cast<double>(i);
    const std::string& c = kPalette[i % kPalette.size()];
    out += "<rect x=\"" + num(kW - kRight + 12) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
           c + "\"/>\n";
    out += text(kW - kRight + 28, y, names[i]);
  }
  return out;
}

}  // namespace

std::string scatter_svg(const std::vector<Point>& points, const Axes& axes) {
  Frame f;
  std::vector<std::string> groups;
  std::map<std::string, std::size_t> color;
  for (std::size_t i = 0; i < points.size(); ++i) {
    f.xr.fit(points[i].x, i == 0);
    f.yr.fit(points[i].y, i == 0);
    if (color.emplace(points[i].group, groups.size()).second) groups.push_back(points[i].group);
  }
  f.xr.pad();
  f.yr.pad();
  std::string out = header(kW, kH) + axes_svg(f, axes);
  for (const auto& p : points) {
    out += "<circle cx=\"" + num(f.px(p.x)) + "\" cy=\"" + num(f.py(p.y)) + "\" r=\"3.5\" fill=\"" +
           kPalette[color[p.group] % kPalette.size()] + "\" fill-opacity=\"0.8\"><title>" + escape(p.label) +
           "</title></circle>\n";
  }
  return out + legend(groups) + "</svg>\n";
}

std::string line_svg(const std::vector<Series>& series, const Axes& axes) {
  Frame f;
  bool first = true;
  std::size_t longest = 0;
  for (const auto& s : series) {
    longest = std::max(longest, s.y.size());
    for (double v : s.y) {
      f.yr.fit(v, first);
      first = false;
    }
  }
  f.xr = {0.0, static_cast<double>(std::max<std::size_t>(longest, 2) - 1)};
  f.yr.pad();
  std::string out = header(kW, kH) + axes_svg(f, axes);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    names.push_back(series[i].name);
    std::string pts;
    for (std::size_t k = 0; k < series[i].y.size(); ++k)
      pts += (k ? " " : "") + num(f.px(static_cast<double>(k))) + "," + num(f.py(series[i].y[k]));
    out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + kPalette[i % kPalette.size()] +
           "\" points=\"" + pts + "\"/>\n";
  }
  return out + legend(names) + "</svg>\n";
}

std::string heatmap_svg(const std::vector<std::string>& ids, const Matrix& values, const std::string& title) {
  const std::size_t n = ids.size();
  require(values.rows() == n && values.cols() == n, ErrorCode::dimension_mismatch,
          "heatmap needs a square matrix matching the ids");
  const double cell = std::clamp(480.0 / std::max<double>(1.0, static_cast<double>(n)), 4.0, 28.0);
  const double margin = 130, w = margin + cell * static_cast<double>(n) + 20;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < values.data().size(); ++i) {
    lo = i ? std::min(lo, values.data()[i]) : values.data()[i];
    hi = i ? std::max(hi, values.data()[i]) : values.data()[i];
  }
  std::string out = header(w, w) + text(w / 2, 20, title, " text-anchor=\"middle\" font-size=\"14\"");
  for (std::size_t i = 0; i < n; ++i) {
    const double y = margin + cell * static_cast<double>(i);
    out += text(margin - 4, y + cell * 0.7, ids[i], " text-anchor=\"end\"");
    out += text(margin + cell * (static_cast<double>(i) + 0.7), margin - 4, ids[i],
                " transform=\"rotate(-90 " + num(margin + cell * (static_cast<double>(i) + 0.7)) + " " +
                    num(margin - 4) + ")\"");
    for (std::size_t j = 0; j < n; ++j) {
      const double t = hi > lo ? (values(i, j) - lo) / (hi - lo) : 0.0;
      const int shade = static_cast<int>(std::lround(255.0 * t));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", shade, shade, shade);
      out += "<rect x=\"" + num(margin + cell * static_cast<double>(j)) + "\" y=\"" + num(y) + "\" width=\"" +
             num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" + fill + "\"/>\n";
    }
  }
  return out + "</svg>\n";
}

std::string dendrogram_svg(const distance::Dendrogram& tree, const std::string& title) {
  const std::size_t n = tree.leaves.size();
  require(n >= 1 && tree.merges.size() + 1 == n, ErrorCode::invalid_argument, "dendrogram is incomplete");
  // Leaf order from a depth-first walk so branches never cross.
  std::vector<std::pair<std::size_t, std::size_t>> children(n + tree.merges.size());
  for (const auto& m : tree.merges) children[m.node] = {m.left, m.right};
  std::vector<double> pos(children.size(), 0.0), height(children.size(), 0.0);
  for (const auto& m : tree.merges) height[m.node] = m.height;
  std::size_t next = 0;
  std::vector<std::size_t> stack{children.size() - 1};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v < n) pos[v] = static_cast<double>(next++);
    else {
      stack.push_back(children[v].second);
      stack.push_back(children[v].first);
    }
  }
  for (const auto& m : tree.merges) pos[m.node] = 0.5 * (pos[m.left] + pos[m.right]);

  const double row = 18, label = 150, width = 640, top = 40;
  const double hmax = tree.merges.empty() ? 1.0 : std::max(tree.merges.back().height, 1e-12);
  auto x = [&](std::size_t v) { return label + height[v] / hmax * (width - label - 30); };
  auto y = [&](std::size_t v) { return top + pos[v] * row; };
  std::string out = header(width, top + row * static_cast<double>(n) + 20) +
                    text(width / 2, 20, title, " text-anchor=\"middle\" font-size=\"14\"");
  for (std::size_t i = 0; i < n; ++i) out += text(label - 6, y(i) + 4, tree.leaves[i], " text-anchor=\"end\"");
  for (const auto& m : tree.merges) {
    out += line(x(m.left), y(m.left), x(m.node), y(m.left));
    out += line(x(m.right), y(m.right), x(m.node), y(m.right));
    out += line(x(m.node), y(m.left), x(m.node), y(m.right));
  }
  return out + "</svg>\n";
}

}  // namespace stylo::plot
