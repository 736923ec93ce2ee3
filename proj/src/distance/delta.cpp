#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/parallel.hpp"

namespace stylo::distance {

namespace {

constexpr std::array<std::pair<DeltaKind, const char*>, 7> kNames{{
    {DeltaKind::burrows, "burrows"},
    {DeltaKind::eder, "eder"},
    {DeltaKind::eder_simple, "eder_simple"},
    {DeltaKind::cosine_delta, "cosine_delta"},
    {DeltaKind::euclidean, "euclidean"},
    {DeltaKind::manhattan, "manhattan"},
    {DeltaKind::canberra, "canberra"},
}};

}  // namespace

const char* to_string(DeltaKind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "?";
}

DeltaKind parse_delta_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  fail(ErrorCode::invalid_argument, "unknown delta kind \"" + std::string(name) + "\"");
}

std::vector<DeltaKind> all_delta_kinds() {
  std::vector<DeltaKind> out;
  for (const auto& [k, _] : kNames) out.push_back(k);
  return out;
}

const char* formula(DeltaKind kind) {
  switch (kind) {
    case DeltaKind::burrows: return "mean_i |a_i - b_i| on z-scores";
    case DeltaKind::eder: return "sum_i |a_i - b_i| * (N - i + 1) / N, divided by N; i = 1-based vocabulary rank, z-scores";
    case DeltaKind::eder_simple: return "sum_i |sqrt(a_i) - sqrt(b_i)| on raw relative frequencies";
    case DeltaKind::cosine_delta: return "1 - cos(a, b) on z-scores";
    case DeltaKind::euclidean: return "sqrt(sum_i (a_i - b_i)^2) on z-scores";
    case DeltaKind::manhattan: return "sum_i |a_i - b_i| on z-scores";
    case DeltaKind::canberra: return "sum_i |a_i - b_i| / (|a_i| + |b_i|), 0/0 terms skipped, on z-scores";
  }
  return "?";
}

bool needs_zscore(DeltaKind kind) { return kind != DeltaKind::eder_simple; }

double delta(std::span<const double> a, std::span<const double> b, DeltaKind kind) {
  require(a.size() == b.size(), ErrorCode::dimension_mismatch,
          "delta: vectors of dimension " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  require(!a.empty(), ErrorCode::dimension_mismatch, "delta: empty vectors");
  const std::size_t n = a.size();
  const double nd = static_cast<double>(n);
  double acc = 0.0;
  switch (kind) {
    case DeltaKind::burrows:
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
      return acc / nd;
    case DeltaKind::eder:
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]) * (nd - static_cast<double>(i)) / nd;
      return acc / nd;
    case DeltaKind::eder_simple:
      for (std::size_t i = 0; i < n; ++i) {
        require(a[i] >= 0.0 && b[i] >= 0.0, ErrorCode::invalid_argument,
                "eder_simple needs non-negative relative frequencies");
        acc += std::abs(std::sqrt(a[i]) - std::sqrt(b[i]));
      }
      return acc;
    case DeltaKind::cosine_delta: {
      const double na = norm2(a), nb = norm2(b);
      require(na > 0.0 && nb > 0.0, ErrorCode::invalid_argument, "cosine_delta of a zero vector");
      bool same = true;
      for (std::size_t i = 0; i < n && same; ++i) same = a[i] == b[i];
      if (same) return 0.0;
      const double c = dot(a, b) / (na * nb);
      return std::clamp(1.0 - c, 0.0, 2.0);
    }
    case DeltaKind::euclidean:
      for (std::size_t i = 0; i < n; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    case DeltaKind::manhattan:
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case DeltaKind::canberra:
      for (std::size_t i = 0; i < n; ++i) {
        const double den = std::abs(a[i]) + std::abs(b[i]);
        if (den > 0.0) acc += std::abs(a[i] - b[i]) / den;
      }
      return acc;
  }
  return 0.0;
}

DistanceMatrix pairwise(const std::vector<std::string>& ids, const Matrix& rows, DeltaKind kind) {
  require(rows.rows() >= 2, ErrorCode::precondition, "pairwise needs at least two samples");
  require(ids.size() == rows.rows(), ErrorCode::dimension_mismatch, "pairwise: id count != row count");
  DistanceMatrix d;
  d.ids = ids;
  d.kind = to_string(kind);
  const std::size_t n = rows.rows();
  d.values = Matrix(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = delta(rows.row(i), rows.row(j), kind);
      require(std::isfinite(v), ErrorCode::numeric, "non-finite distance");
      d.values(i, j) = v;
      d.values(j, i) = v;
    }
  });
  return d;
}

DistanceMatrix pairwise(const features::FeatureMatrix& m, DeltaKind kind) {
  DistanceMatrix d = pairwise(m.sample_ids, m.values, kind);
  d.params = features::spec_json(m.spec);
  return d;
}

std::string to_csv(const DistanceMatrix& d) {
  std::vector<std::string> header{"id"};
  header.insert(header.end(), d.ids.begin(), d.ids.end());
  std::string out = io::csv_row(header);
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<std::string> row{d.ids[i]};
    for (double v : d.values.row(i)) row.push_back(io::format_double(v));
    out += io::csv_row(row);
  }
  return out;
}

}  // namespace stylo::distance
