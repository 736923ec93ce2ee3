#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/io.hpp"

namespace stylo::features {

ZScoreResult zscore(const FeatureMatrix& m) {
  require(m.rows() >= 2, ErrorCode::precondition, "zscore needs at least two samples");
  ZScoreResult r;
  const double n = static_cast<double>(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double lo = m.values(0, j), hi = lo, mean = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double v = m.values(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) ss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (lo == hi || !(sd > 0.0)) {
      r.model.dropped.push_back(m.feature_names[j]);
      continue;
    }
    r.model.kept.push_back(j);
    r.model.mean.push_back(mean);
    r.model.sd.push_back(sd);
  }
  r.matrix = apply_zscore(r.model, m);
  return r;
}

FeatureMatrix apply_zscore(const ZScoreModel& model, const FeatureMatrix& m) {
  FeatureMatrix out;
  out.sample_ids = m.sample_ids;
  out.spec = m.spec;
  out.scaling = Scaling::zscore;
  out.zero_rows = m.zero_rows;
  out.values = Matrix(m.rows(), model.kept.size());
  for (std::size_t k = 0; k < model.kept.size(); ++k) {
    const std::size_t j = model.kept[k];
    require(j < m.cols(), ErrorCode::dimension_mismatch, "zscore model does not fit this matrix");
    out.feature_names.push_back(m.feature_names[j]);
    for (std::size_t i = 0; i < m.rows(); ++i) out.values(i, k) = (m.values(i, j) - model.mean[k]) / model.sd[k];
  }
  return out;
}

std::string spec_json(const FeatureSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["mfw"] = spec.mfw;
  j["ngram_min"] = spec.ngram_min;
  j["ngram_max"] = spec.ngram_max;
  j["culling"] = spec.culling;
  j["tfidf"] = spec.tfidf;
  return j.dump();
}

std::string to_csv(const FeatureMatrix& m) {
  std::vector<std::string> header{"sample_id"};
  header.insert(header.end(), m.feature_names.begin(), m.feature_names.end());
  std::string out = io::csv_row(header);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    fields.assign(1, m.sample_ids[i]);
    for (double v : m.values.row(i)) fields.push_back(io::format_double(v));
    out += io::csv_row(fields);
  }
  return out;
}

std::string to_json(const FeatureMatrix& m) {
  nlohmann::ordered_json j;
  j["spec"] = nlohmann::ordered_json::parse(spec_json(m.spec));
  j["scaling"] = to_string(m.scaling);
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["sample_ids"] = m.sample_ids;
  j["feature_names"] = m.feature_names;
  j["zero_rows"] = m.zero_rows;
  return j.dump(2) + "\n";
}

}  // namespace stylo::features
