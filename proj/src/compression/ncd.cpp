#include <algorithm>

#include <json.hpp>

#include "stylo/compression.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/parallel.hpp"

namespace stylo::compression {

std::size_t compressed_size(std::string_view text, const Compressor& c) { return c.compressed_size(text); }

double ncd_from_sizes(std::size_t cx, std::size_t cy, std::size_t cxy) {
  const std::size_t hi = std::max(cx, cy);
  require(hi > 0, ErrorCode::numeric, "ncd: zero compressed sizes");
  const double lo = static_cast<double>(std::min(cx, cy));
  return (static_cast<double>(cxy) - lo) / static_cast<double>(hi);
}

namespace {

double symmetric_ncd(std::string_view x, std::string_view y, std::size_t cx, std::size_t cy, const Compressor& c) {
  std::string xy;
  xy.reserve(x.size() + y.size());
  xy.append(x).append(y);
  const std::size_t c1 = c.compressed_size(xy);
  xy.assign(y).append(x);
  const std::size_t c2 = c.compressed_size(xy);
  return ncd_from_sizes(cx, cy, std::min(c1, c2));
}

}  // namespace

double ncd(std::string_view x, std::string_view y, const Compressor& c) {
  require(!x.empty() && !y.empty(), ErrorCode::invalid_argument, "ncd of an empty input");
  return symmetric_ncd(x, y, c.compressed_size(x), c.compressed_size(y), c);
}

const char* to_string(Mode m) { return m == Mode::profile ? "profile" : "instance"; }

NcdMatrix ncd_matrix(const std::vector<Sample>& samples, const Compressor& c, Mode mode, bool cache) {
  const std::size_t n = samples.size();
  require(n >= 2, ErrorCode::precondition, "ncd_matrix needs at least two samples");
  for (const auto& s : samples)
    require(!s.text.empty(), ErrorCode::invalid_argument, "ncd_matrix: sample \"" + s.id + "\" is empty");

  NcdMatrix m;
  m.compressor_id = c.id();
  m.mode = mode;
  m.values = Matrix(n, n);
  for (const auto& s : samples) m.ids.push_back(s.id);

  std::vector<std::size_t> sizes(n, 0);
  if (cache) {
    parallel_for(n, [&](std::size_t i) { sizes[i] = c.compressed_size(samples[i].text); });
    m.stats.single_compressions = n;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const std::size_t ci = cache ? sizes[i] : c.compressed_size(samples[i].text);
    const std::size_t cj = cache ? sizes[j] : c.compressed_size(samples[j].text);
    out[k] = symmetric_ncd(samples[i].text, samples[j].text, ci, cj, c);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    m.values(i, j) = m.values(j, i) = out[k];
  }
  m.stats.pair_evaluations = pairs.size();
  m.stats.concat_compressions = 2 * pairs.size();
  if (!cache) m.stats.single_compressions = 2 * pairs.size();
  return m;
}

distance::DistanceMatrix as_distance(const NcdMatrix& m) {
  distance::DistanceMatrix d;
  d.ids = m.ids;
  d.values = m.values;
  for (std::size_t i = 0; i < m.ids.size(); ++i) d.values(i, i) = 0.0;
  d.kind = "ncd";
  d.params = std::string("{\"compressor\":\"") + m.compressor_id + "\",\"mode\":\"" + to_string(m.mode) + "\"}";
  return d;
}

distance::Dendrogram ncd_tree(const NcdMatrix& m) {
  return distance::cluster(as_distance(m), distance::Linkage::average);
}

std::string to_csv(const NcdMatrix& m) {
  std::vector<std::string> header{"id"};
  header.insert(header.end(), m.ids.begin(), m.ids.end());
  std::string out = io::csv_row(header);
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    std::vector<std::string> row{m.ids[i]};
    for (double v : m.values.row(i)) row.push_back(io::format_double(v));
    out += io::csv_row(row);
  }
  return out;
}

std::string to_json(const NcdMatrix& m) {
  nlohmann::ordered_json j;
  j["compressor_id"] = m.compressor_id;
  j["mode"] = to_string(m.mode);
  j["ids"] = m.ids;
  j["values"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    const auto row = m.values.row(i);
    j["values"].push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["stats"] = {{"single_compressions", m.stats.single_compressions},
                {"pair_evaluations", m.stats.pair_evaluations},
                {"concat_compressions", m.stats.concat_compressions}};
  return j.dump(2) + "\n";
}

}  // namespace stylo::compression
