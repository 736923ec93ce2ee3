#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/learn.hpp"
#include "stylo/matrix.hpp"

namespace stylo::unmasking {

struct Config {
  std::size_t n = 250;        // vocabulary size
  std::size_t k = 6;          // features removed per end per step
  std::size_t m = 8;          // elimination steps
  std::size_t cv_folds = 10;
  std::uint64_t seed = 0;
  /// Ablation: remove the 2k features with the smallest |weight| instead.
  bool remove_least = false;
  /// Down-sample the larger side to the smaller side's chunk count.
  bool balance = true;
};

/// n > 2km and every field positive.
void validate(const Config& cfg);

inline const std::string kSameAuthor = "same_author";
inline const std::string kDifferentAuthor = "different_author";

struct PairData {
  std::vector<std::string> vocabulary;  // by averaged relative frequency
  std::vector<double> work_frequency;   // per vocabulary word, side-level
  std::vector<double> candidate_frequency;
  Matrix values;                        // chunk relative frequencies
  std::vector<std::string> sides;       // "work" or "candidate" per row
};

/// Candidate chunks from the work's own documents are dropped first. Both
/// sides need at least cv_folds chunks (after balancing).
PairData pair_features(const std::vector<corpus::Chunk>& work, const std::vector<corpus::Chunk>& candidate,
                       const Config& cfg);

struct DegradationCurve {
  std::string work;
  std::string candidate;
  std::vector<double> accuracies;          // m + 1, step 0 first
  std::vector<std::size_t> live_features;  // feature count at each step
  std::vector<std::vector<std::string>> removed;  // per elimination step
  std::optional<std::string> label;        // kSameAuthor / kDifferentAuthor
};

DegradationCurve unmask_pair(const std::string& work_id, const std::vector<corpus::Chunk>& work,
                             const std::string& candidate_id, const std::vector<corpus::Chunk>& candidate,
                             const Config& cfg);

/// Raw accuracies, consecutive differences (a[t+1] - a[t]) and the largest
/// single-step drop: 2m + 2 values.
std::vector<double> curve_features(const DegradationCurve& c);

struct Work {
  std::string id;
  std::string author;
  std::vector<corpus::Chunk> chunks;
};

struct CurveDataset {
  std::vector<DegradationCurve> curves;
  Matrix features;
  std::vector<std::string> labels;
  std::size_t same_author = 0;
  std::size_t different_author = 0;
};

/// One curve per (work, candidate author). An author's only work yields no
/// same-author curve, as nothing remains on the candidate side.
CurveDataset build_curve_dataset(const std::vector<Work>& works, const Config& cfg);

/// Linear SVM over curve features.
learn::Model train_meta(const CurveDataset& data, std::uint64_t seed = 0);

struct MetaEvaluation {
  std::vector<std::string> predicted;
  learn::ConfusionMatrix confusion;
  learn::Metrics metrics;
};

/// Leave-one-pair-out evaluation of the meta-classifier.
MetaEvaluation leave_one_out(const CurveDataset& data, std::uint64_t seed = 0);

struct CandidateVerdict {
  std::string candidate;
  std::string label;
  double score = 0.0;  // meta decision value, positive = same author
  DegradationCurve curve;
};

struct Verdict {
  std::string work;
  std::vector<CandidateVerdict> candidates;
  std::vector<std::string> matched;  // empty means "none"
};

Verdict verify(const std::string& work_id, const std::vector<corpus::Chunk>& work,
               const std::vector<Work>& candidate_works, const learn::Model& meta, const Config& cfg);

std::string curves_csv(const std::vector<DegradationCurve>& curves);
std::string curves_json(const std::vector<DegradationCurve>& curves);
std::string to_json(const Verdict& v);

}  // namespace stylo::unmasking
