#include <algorithm>
#include <cmath>
#include <set>

#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"

namespace stylo::distance {

namespace {

struct Moments {
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
  std::size_t n = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.ss += (x - m.mean) * (x - m.mean);
  return m;
}

}  // namespace

SeparationScore separation(const DistanceMatrix& d, const std::vector<std::string>& labels) {
  require(labels.size() == d.size(), ErrorCode::dimension_mismatch, "separation: one label per sample");
  require(std::set<std::string>(labels.begin(), labels.end()).size() >= 2, ErrorCode::precondition,
          "separation needs at least two authors");
  std::vector<double> in, out;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) (labels[i] == labels[j] ? in : out).push_back(d.values(i, j));
  require(!in.empty(), ErrorCode::precondition, "separation: no same-author pairs");

  const Moments mi = moments(in), mo = moments(out);
  SeparationScore s;
  s.ingroup_mean = mi.mean;
  s.outgroup_mean = mo.mean;
  s.ingroup_pairs = mi.n;
  s.outgroup_pairs = mo.n;
  const double dof = static_cast<double>(mi.n + mo.n) - 2.0;
  const double pooled = dof > 0.0 ? std::sqrt((mi.ss + mo.ss) / dof) : 0.0;
  s.pooled_sd = std::max(pooled, 1e-12);
  s.raw_difference = s.outgroup_mean - s.ingroup_mean;
  s.standardized_difference = s.raw_difference / s.pooled_sd;
  return s;
}

std::vector<GridRow> delta_grid(const GridInput& input, const std::vector<int>& mfw_grid,
                                const std::vector<double>& culling_grid,
                                const std::vector<DeltaKind>& kinds) {
  require(!mfw_grid.empty() && !culling_grid.empty() && !kinds.empty(), ErrorCode::invalid_argument,
          "delta_grid: every grid must be non-empty");
  require(input.labels.size() == input.samples.size(), ErrorCode::dimension_mismatch,
          "delta_grid: one label per sample");

  std::vector<GridRow> rows;
  for (int mfw : mfw_grid) {
    for (double culling : culling_grid) {
      features::FeatureSpec spec = features::default_spec(features::FeatureKind::bow);
      spec.mfw = mfw;
      spec.culling = culling;
      const auto pipeline = features::FeaturePipeline::fit(input.samples, spec);
      const features::FeatureMatrix raw = pipeline.transform(input.samples);
      require(raw.cols() >= 1, ErrorCode::precondition,
              "delta_grid: no words survive mfw " + std::to_string(mfw) + ", culling " +
                  io::format_double(culling));
      const features::ZScoreResult z = features::zscore(raw);
      for (DeltaKind kind : kinds) {
        const features::FeatureMatrix& m = needs_zscore(kind) ? z.matrix : raw;
        require(m.cols() >= 1, ErrorCode::precondition, "delta_grid: every column has zero variance");
        GridRow row;
        row.mfw = mfw;
        row.culling = culling;
        row.kind = kind;
        row.features = m.cols();
        row.score = separation(pairwise(m, kind), input.labels);
        rows.push_back(row);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) {
    return a.score.standardized_difference > b.score.standardized_difference;
  });
  return rows;
}

std::string grid_csv(const std::vector<GridRow>& rows) {
  std::string out = io::csv_row({"rank", "mfw", "culling", "delta", "features", "ingroup_mean", "outgroup_mean",
                                 "pooled_sd", "raw_difference", "standardized_difference"});
  std::size_t rank = 1;
  for (const auto& r : rows)
    out += io::csv_row({std::to_string(rank++), std::to_string(r.mfw), io::format_double(r.culling),
                        to_string(r.kind), std::to_string(r.features), io::format_double(r.score.ingroup_mean),
                        io::format_double(r.score.outgroup_mean), io::format_double(r.score.pooled_sd),
                        io::format_double(r.score.raw_difference),
                        io::format_double(r.score.standardized_difference)});
  return out;
}

}  // namespace stylo::distance
