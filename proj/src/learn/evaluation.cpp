#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/learn.hpp"
#include "stylo/parallel.hpp"
#include "stylo/rng.hpp"

namespace stylo::learn {

namespace {

double ratio(double num, double den, bool& degenerate) {
  if (den == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return num / den;
}

double harmonic(double p, double r, bool& degenerate) { return ratio(2.0 * p * r, p + r, degenerate); }

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (std::size_t v : row) t += v;
  return t;
}

ConfusionMatrix confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                          std::vector<std::string> labels) {
  require(truth.size() == predicted.size(), ErrorCode::dimension_mismatch, "confusion: length mismatch");
  if (labels.empty()) {
    std::set<std::string> all(truth.begin(), truth.end());
    all.insert(predicted.begin(), predicted.end());
    labels.assign(all.begin(), all.end());
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = k;
  ConfusionMatrix cm{labels, std::vector<std::vector<std::size_t>>(labels.size(), std::vector<std::size_t>(labels.size(), 0))};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto t = index.find(truth[i]), p = index.find(predicted[i]);
    require(t != index.end() && p != index.end(), ErrorCode::invalid_argument, "confusion: label outside the label set");
    ++cm.counts[t->second][p->second];
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  const std::size_t c = cm.labels.size();
  require(c > 0 && cm.counts.size() == c, ErrorCode::precondition, "metrics: empty confusion matrix");
  Metrics m;
  std::vector<double> row(c, 0.0), col(c, 0.0);
  double total = 0.0, trace = 0.0;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double v = static_cast<double>(cm.counts[i][j]);
      row[i] += v;
      col[j] += v;
      total += v;
      if (i == j) trace += v;
    }
  double tp_sum = 0.0, fp_sum = 0.0, fn_sum = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double tp = static_cast<double>(cm.counts[k][k]);
    ClassMetrics cl;
    cl.label = cm.labels[k];
    cl.precision = ratio(tp, col[k], m.degenerate);
    cl.recall = ratio(tp, row[k], m.degenerate);
    cl.f1 = harmonic(cl.precision, cl.recall, m.degenerate);
    cl.support = static_cast<std::size_t>(row[k]);
    m.macro_precision += cl.precision / static_cast<double>(c);
    m.macro_recall += cl.recall / static_cast<double>(c);
    m.macro_f1 += cl.f1 / static_cast<double>(c);
    tp_sum += tp;
    fp_sum += col[k] - tp;
    fn_sum += row[k] - tp;
    m.per_class.push_back(cl);
  }
  m.micro_precision = ratio(tp_sum, tp_sum + fp_sum, m.degenerate);
  m.micro_recall = ratio(tp_sum, tp_sum + fn_sum, m.degenerate);
  m.micro_f1 = harmonic(m.micro_precision, m.micro_recall, m.degenerate);
  m.accuracy = ratio(trace, total, m.degenerate);

  if (c == 2) {
    const double tp = static_cast<double>(cm.counts[0][0]), fn = static_cast<double>(cm.counts[0][1]);
    const double fp = static_cast<double>(cm.counts[1][0]), tn = static_cast<double>(cm.counts[1][1]);
    const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    m.mcc = ratio(tp * tn - fp * fn, std::sqrt(den), m.degenerate);
  } else {
    double pp = 0.0, tt = 0.0, pt = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      pp += col[k] * col[k];
      tt += row[k] * row[k];
      pt += col[k] * row[k];
    }
    const double den = std::sqrt(total * total - pp) * std::sqrt(total * total - tt);
    m.mcc = ratio(trace * total - pt, den, m.degenerate);
  }
  m.mcc = std::clamp(m.mcc, -1.0, 1.0);
  return m;
}

std::vector<std::size_t> assign_folds(const std::vector<std::string>& labels, std::size_t folds, std::uint64_t seed,
                                      bool* stratified) {
  const std::size_t n = labels.size();
  require(folds >= 2, ErrorCode::invalid_argument, "cross-validation needs at least two folds");
  require(folds <= n, ErrorCode::invalid_argument,
          "folds (" + std::to_string(folds) + ") exceed samples (" + std::to_string(n) + ")");
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
  bool strat = true;
  for (const auto& [_, idx] : members) strat = strat && idx.size() >= folds;
  if (stratified) *stratified = strat;

  std::vector<std::size_t> fold(n, 0);
  std::size_t next = 0;
  auto deal = [&](std::vector<std::size_t> idx, std::uint64_t stream) {
    Rng rng(derive_seed(seed, stream));
    shuffle(idx, rng);
    for (std::size_t i : idx) fold[i] = next++ % folds;
  };
  if (strat) {
    std::uint64_t stream = 0;
    for (const auto& [_, idx] : members) deal(idx, stream++);
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    deal(all, 0xa11);
  }
  return fold;
}

EvaluationReport cross_validate(ClassifierKind kind, const Matrix& x, const std::vector<std::string>& labels,
                                std::size_t folds, std::uint64_t seed, const Hyperparams& params) {
  require(labels.size() == x.rows(), ErrorCode::dimension_mismatch, "cross_validate: one label per sample required");
  EvaluationReport r;
  r.kind = kind;
  r.folds = folds;
  r.seed = seed;
  r.fold_of = assign_folds(labels, folds, seed, &r.stratified);
  if (!r.stratified)
    r.warnings.push_back("some class has fewer than " + std::to_string(folds) +
                         " samples; folds are not stratified");

  const std::size_t n = labels.size();
  std::vector<std::vector<std::size_t>> train_idx(folds), test_idx(folds);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < folds; ++f) (r.fold_of[i] == f ? test_idx : train_idx)[f].push_back(i);

  std::vector<std::vector<std::string>> fold_pred(folds);
  parallel_for(folds, [&](std::size_t f) {
    std::vector<std::string> tl;
    for (std::size_t i : train_idx[f]) tl.push_back(labels[i]);
    const Model m = train(kind, x.select_rows(train_idx[f]), tl, params, derive_seed(seed, 1000 + f));
    fold_pred[f] = predict(m, x.select_rows(test_idx[f])).labels;
  });
  r.predicted.assign(n, "");
  for (std::size_t f = 0; f < folds; ++f)
    for (std::size_t t = 0; t < test_idx[f].size(); ++t) r.predicted[test_idx[f][t]] = fold_pred[f][t];

  std::set<std::string> all(labels.begin(), labels.end());
  r.confusion = confusion(labels, r.predicted, std::vector<std::string>(all.begin(), all.end()));
  r.metrics = metrics(r.confusion);
  if (r.metrics.degenerate) r.warnings.push_back("degenerate metric cell set to 0");
  return r;
}

std::string to_json(const EvaluationReport& r, const std::vector<std::string>& sample_ids) {
  nlohmann::ordered_json j;
  j["classifier"] = to_string(r.kind);
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["stratified"] = r.stratified;
  j["labels"] = r.confusion.labels;
  j["confusion"] = r.confusion.counts;
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (const auto& c : r.metrics.per_class)
    per.push_back({{"label", c.label}, {"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}, {"support", c.support}});
  j["per_class"] = per;
  j["macro"] = {{"precision", r.metrics.macro_precision}, {"recall", r.metrics.macro_recall}, {"f1", r.metrics.macro_f1}};
  j["micro"] = {{"precision", r.metrics.micro_precision}, {"recall", r.metrics.micro_recall}, {"f1", r.metrics.micro_f1}};
  j["accuracy"] = r.metrics.accuracy;
  j["mcc"] = r.metrics.mcc;
  j["degenerate"] = r.metrics.degenerate;
  if (!sample_ids.empty()) {
    require(sample_ids.size() == r.fold_of.size(), ErrorCode::dimension_mismatch, "to_json: sample id count");
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < sample_ids.size(); ++i)
      samples.push_back({{"id", sample_ids[i]}, {"fold", r.fold_of[i]}, {"predicted", r.predicted[i]}});
    j["samples"] = samples;
  } else {
    j["fold_of"] = r.fold_of;
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

void sort_ranking(std::vector<RankingRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
    if (a.precision != b.precision) return a.precision > b.precision;
    if (a.recall != b.recall) return a.recall > b.recall;
    return a.f1 > b.f1;
  });
}

std::string ranking_csv(const std::vector<RankingRow>& rows) {
  std::string out = io::csv_row({"algorithm", "features", "precision", "recall", "f_score"});
  for (const auto& r : rows)
    out += io::csv_row({r.algorithm, r.features, io::format_double(r.precision), io::format_double(r.recall),
                        io::format_double(r.f1)});
  return out;
}

AttributionResult attribute(const std::vector<AttributionRun>& runs, const std::vector<std::string>& candidates) {
  require(!runs.empty(), ErrorCode::precondition, "attribute: no runs");
  require(!candidates.empty(), ErrorCode::precondition, "attribute: no candidates");
  AttributionResult r;
  r.query_chunks = runs.front().predicted.size();
  require(r.query_chunks > 0, ErrorCode::precondition, "attribute: no query chunks");
  std::vector<std::string> names(candidates);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < names.size(); ++k) {
    index[names[k]] = k;
    r.table.push_back({names[k], std::vector<std::size_t>(runs.size(), 0), 0, 0.0});
  }
  for (std::size_t run = 0; run < runs.size(); ++run) {
    const auto& rr = runs[run];
    require(rr.predicted.size() == r.query_chunks, ErrorCode::dimension_mismatch,
            "attribute: every run must label the same query chunks");
    r.runs.push_back(rr.algorithm + "+" + rr.features);
    for (const auto& label : rr.predicted) {
      auto it = index.find(label);
      require(it != index.end(), ErrorCode::invalid_argument, "attribute: \"" + label + "\" is not a candidate");
      ++r.table[it->second].counts[run];
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < names.size(); ++k)
      if (r.table[k].counts[run] > r.table[best].counts[run]) best = k;
    ++r.table[best].wins;
  }
  for (auto& t : r.table) {
    double sum = 0.0;
    for (std::size_t v : t.counts) sum += static_cast<double>(v);
    t.average = sum / static_cast<double>(runs.size());
  }
  std::stable_sort(r.table.begin(), r.table.end(), [](const CandidateTally& a, const CandidateTally& b) {
    if (a.wins != b.wins) return a.wins > b.wins;
    if (a.average != b.average) return a.average > b.average;
    return a.candidate < b.candidate;
  });
  return r;
}

std::string to_csv(const AttributionResult& r) {
  std::vector<std::string> header{"candidate"};
  header.insert(header.end(), r.runs.begin(), r.runs.end());
  header.push_back("wins");
  header.push_back("avg");
  std::string out = io::csv_row(header);
  for (const auto& t : r.table) {
    std::vector<std::string> row{t.candidate};
    for (std::size_t v : t.counts) row.push_back(std::to_string(v));
    row.push_back(std::to_string(t.wins));
    row.push_back(io::format_double(t.average));
    out += io::csv_row(row);
  }
  return out;
}

std::string to_json(const AttributionResult& r) {
  nlohmann::ordered_json j;
  j["runs"] = r.runs;
  j["query_chunks"] = r.query_chunks;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& t : r.table)
    table.push_back({{"candidate", t.candidate}, {"counts", t.counts}, {"wins", t.wins}, {"average", t.average}});
  j["table"] = table;
  return j.dump(2) + "\n";
}

}  // namespace stylo::learn
