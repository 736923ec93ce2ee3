#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/matrix.hpp"
#include "stylo/projection.hpp"

namespace stylo::learn {

enum class ClassifierKind {
  ridge,
  bernoulli_nb,
  multinomial_nb,
  nearest_centroid,
  linear_svm,
  svm_rbf,
  maxent,
  sgd_hinge,
};

const char* to_string(ClassifierKind k);
ClassifierKind parse_classifier_kind(std::string_view name);
std::vector<ClassifierKind> all_classifier_kinds();
/// Kinds whose decision scores are affine in the input (weights exposed).
bool is_linear(ClassifierKind k);

struct Hyperparams {
  double ridge_alpha = 1.0;
  double svm_lambda = 1e-4;
  int svm_epochs = 500;
  double rbf_gamma = 0.0;  // 0 means 1 / features
  double maxent_l2 = 1e-4;
  int maxent_iterations = 1000;
  double maxent_tol = 1e-8;
  double sgd_lambda = 1e-4;
  int sgd_epochs = 20;
  double nb_alpha = 1.0;
  /// Optional PCA before classification (0 = off); capped at samples - 1.
  std::size_t pca_components = 0;
};

/// A binary kernel machine: f(x) = sum_i coef_i * (k(sv_i, x) + 1). The +1
/// is the constant feature carrying the (regularized) bias.
struct KernelMachine {
  std::size_t positive = 0;  // class index scored as +1
  std::size_t negative = 0;
  Matrix support;            // rows in the internal (standardized) space
  std::vector<double> coef;
  std::vector<double> weights;  // linear kernel only: explicit w
  double bias = 0.0;            // linear kernel only
};

struct Model {
  ClassifierKind kind = ClassifierKind::ridge;
  std::vector<std::string> labels;  // sorted; index = class id
  Hyperparams params;
  std::uint64_t seed = 0;
  std::size_t input_dim = 0;

  // Internal affine map: z = P ((x - mean) / scale), P optional.
  std::vector<double> mean;
  std::vector<double> scale;
  std::optional<projection::Model> pca;

  Matrix weights;             // classes x internal dim (ridge, maxent, sgd_hinge)
  std::vector<double> bias;   // per class
  std::vector<KernelMachine> machines;  // linear_svm, svm_rbf (one-vs-one)
  double gamma = 0.0;                   // svm_rbf
  Matrix centroids;                     // nearest_centroid
  Matrix log_prob;                      // naive Bayes: classes x features
  Matrix log_neg_prob;                  // bernoulli_nb: log(1 - p)
  std::vector<double> log_prior;
};

/// Fits a classifier. Requires >= 2 distinct labels and finite features.
Model train(ClassifierKind kind, const Matrix& x, const std::vector<std::string>& labels,
            const Hyperparams& params = {}, std::uint64_t seed = 0);

struct Prediction {
  std::vector<std::string> labels;
  /// n x classes; the predicted class has the highest score, ties going to
  /// the smallest label. One-vs-one kinds score by votes.
  Matrix scores;
};

Prediction predict(const Model& model, const Matrix& x);

/// Raw decision functions: one column per class for ridge, maxent and
/// sgd_hinge; one column per one-vs-one machine for linear_svm.
Matrix decision_scores(const Model& model, const Matrix& x);

struct LinearForm {
  Matrix weights;  // one row per decision column, in input feature space
  std::vector<double> bias;
  std::vector<std::string> names;  // class label or "pos|neg" per row
};

/// decision_scores(x) = weights * x + bias. Errors for non-linear kinds.
LinearForm linear_form(const Model& model);

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;  // rows = truth, cols = predicted

  std::size_t total() const;
};

ConfusionMatrix confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                          std::vector<std::string> labels = {});

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Metrics {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double accuracy = 0.0;
  /// Binary: from the four cells. Multiclass: the generalized (R_K) form.
  double mcc = 0.0;
  /// Some ratio had a zero denominator and was set to 0 by convention.
  bool degenerate = false;
};

/// Zero denominators give 0 for precision, recall, F1 and MCC.
Metrics metrics(const ConfusionMatrix& cm);

/// Fold id per sample. Stratified by label unless some class has fewer
/// members than `folds`; depends only on (labels, folds, seed).
std::vector<std::size_t> assign_folds(const std::vector<std::string>& labels, std::size_t folds,
                                      std::uint64_t seed, bool* stratified = nullptr);

struct EvaluationReport {
  ClassifierKind kind = ClassifierKind::ridge;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<std::size_t> fold_of;
  std::vector<std::string> predicted;  // pooled out-of-fold
  ConfusionMatrix confusion;
  Metrics metrics;
  std::vector<std::string> warnings;
};

EvaluationReport cross_validate(ClassifierKind kind, const Matrix& x, const std::vector<std::string>& labels,
                                std::size_t folds, std::uint64_t seed, const Hyperparams& params = {});

std::string to_json(const EvaluationReport& r, const std::vector<std::string>& sample_ids = {});

/// One (classifier, feature set) row of a ranking table.
struct RankingRow {
  std::string algorithm;
  std::string features;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Sorted by precision, recall and F-score, descending; stable.
void sort_ranking(std::vector<RankingRow>& rows);
std::string ranking_csv(const std::vector<RankingRow>& rows);

struct AttributionRun {
  std::string algorithm;
  std::string features;
  std::vector<std::string> predicted;  // one label per query chunk
};

struct CandidateTally {
  std::string candidate;
  std::vector<std::size_t> counts;  // per run
  std::size_t wins = 0;
  double average = 0.0;
};

struct AttributionResult {
  std::vector<std::string> runs;  // "algorithm+features"
  std::size_t query_chunks = 0;
  /// Sorted by wins, then average, descending; then by name.
  std::vector<CandidateTally> table;
};

/// Each run's win goes to its most-assigned candidate (ties to the smallest
/// name). Labels outside `candidates` are rejected.
AttributionResult attribute(const std::vector<AttributionRun>& runs, const std::vector<std::string>& candidates);

std::string to_csv(const AttributionResult& r);
std::string to_json(const AttributionResult& r);

}  // namespace stylo::learn
