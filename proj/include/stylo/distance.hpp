#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/features.hpp"
#include "stylo/matrix.hpp"

namespace stylo::distance {

enum class DeltaKind { burrows, eder, eder_simple, cosine_delta, euclidean, manhattan, canberra };

const char* to_string(DeltaKind kind);
DeltaKind parse_delta_kind(std::string_view name);
std::vector<DeltaKind> all_delta_kinds();
/// Human-readable formula, echoed into reports.
const char* formula(DeltaKind kind);
/// eder_simple works on raw relative frequencies; every other kind expects
/// z-scored input.
bool needs_zscore(DeltaKind kind);

double delta(std::span<const double> a, std::span<const double> b, DeltaKind kind);

struct DistanceMatrix {
  std::vector<std::string> ids;
  Matrix values;
  std::string kind;    // delta kind name or "ncd"
  std::string params;  // originating spec, free-form JSON

  std::size_t size() const { return ids.size(); }
};

DistanceMatrix pairwise(const std::vector<std::string>& ids, const Matrix& rows, DeltaKind kind);
DistanceMatrix pairwise(const features::FeatureMatrix& m, DeltaKind kind);

std::string to_csv(const DistanceMatrix& d);

enum class Linkage { average, complete, single };

const char* to_string(Linkage l);
Linkage parse_linkage(std::string_view name);

/// Leaves are nodes 0..n-1; merge t creates node n+t.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t node = 0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

/// Agglomerative clustering. Equal distances are resolved by the smallest
/// (node id, node id) pair.
Dendrogram cluster(const DistanceMatrix& d, Linkage linkage = Linkage::average);

/// Leaves labeled by id, internal nodes by height. `unrooted` draws
/// undirected edges with a radial layout hint.
std::string to_dot(const Dendrogram& tree, bool unrooted = false);
std::string to_json(const Dendrogram& tree);

struct SeparationScore {
  double ingroup_mean = 0.0;
  double outgroup_mean = 0.0;
  double pooled_sd = 0.0;
  double raw_difference = 0.0;
  double standardized_difference = 0.0;
  std::size_t ingroup_pairs = 0;
  std::size_t outgroup_pairs = 0;
};

/// Compares same-label and different-label distances. pooled_sd is floored
/// at 1e-12 so the standardized value stays finite.
SeparationScore separation(const DistanceMatrix& d, const std::vector<std::string>& labels);

struct GridRow {
  int mfw = 0;
  double culling = 0.0;
  DeltaKind kind = DeltaKind::burrows;
  std::size_t features = 0;  // vocabulary size after culling and z-score drops
  SeparationScore score;
};

struct GridInput {
  std::vector<features::TokenStream> samples;
  std::vector<std::string> labels;  // author per sample
};

/// Every (mfw, culling, kind) cell on MFW relative frequencies, sorted by
/// standardized separation, descending (stable).
std::vector<GridRow> delta_grid(const GridInput& input, const std::vector<int>& mfw_grid,
                                const std::vector<double>& culling_grid,
                                const std::vector<DeltaKind>& kinds);

std::string grid_csv(const std::vector<GridRow>& rows);

}  // namespace stylo::distance
