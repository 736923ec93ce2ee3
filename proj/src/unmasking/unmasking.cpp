#include "stylo/unmasking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/parallel.hpp"
#include "stylo/rng.hpp"

namespace stylo::unmasking {

namespace {

std::vector<corpus::Chunk> sample(const std::vector<corpus::Chunk>& chunks, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx(chunks.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  shuffle(idx, rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<corpus::Chunk> out;
  for (std::size_t i : idx) out.push_back(chunks[i]);
  return out;
}

std::map<std::string, double> side_frequencies(const std::vector<corpus::Chunk>& chunks) {
  std::map<std::string, double> f;
  double total = 0.0;
  for (const auto& c : chunks) {
    for (const auto& w : c.tokens) f[w] += 1.0;
    total += static_cast<double>(c.tokens.size());
  }
  require(total > 0.0, ErrorCode::precondition, "unmasking: a side has no words");
  for (auto& [_, v] : f) v /= total;
  return f;
}

const std::string kWorkSide = "work";
const std::string kCandidateSide = "candidate";

}  // namespace

void validate(const Config& cfg) {
  require(cfg.n > 0 && cfg.k > 0 && cfg.m > 0 && cfg.cv_folds >= 2, ErrorCode::config,
          "unmasking: n, k, m must be positive and cv_folds >= 2");
  require(cfg.n > 2 * cfg.k * cfg.m, ErrorCode::config,
          "unmasking: n must exceed 2*k*m so features survive every step");
}

PairData pair_features(const std::vector<corpus::Chunk>& work, const std::vector<corpus::Chunk>& candidate,
                       const Config& cfg) {
  validate(cfg);
  std::set<std::string> own;
  for (const auto& c : work) own.insert(c.doc_id);
  std::vector<corpus::Chunk> w = work, cand;
  for (const auto& c : candidate)
    if (!own.count(c.doc_id)) cand.push_back(c);
  if (cfg.balance) {
    const std::size_t target = std::min(w.size(), cand.size());
    if (w.size() > target) w = sample(w, target, derive_seed(cfg.seed, 0xb1));
    if (cand.size() > target) cand = sample(cand, target, derive_seed(cfg.seed, 0xb2));
  }
  require(w.size() >= cfg.cv_folds && cand.size() >= cfg.cv_folds, ErrorCode::precondition,
          "unmasking: each side needs at least " + std::to_string(cfg.cv_folds) + " chunks (work " +
              std::to_string(w.size()) + ", candidate " + std::to_string(cand.size()) + ")");

  const auto fw = side_frequencies(w), fc = side_frequencies(cand);
  std::vector<std::pair<double, std::string>> ranked;
  std::set<std::string> words;
  for (const auto& [t, _] : fw) words.insert(t);
  for (const auto& [t, _] : fc) words.insert(t);
  for (const auto& t : words) {
    const auto a = fw.find(t), b = fc.find(t);
    const double avg = 0.5 * ((a == fw.end() ? 0.0 : a->second) + (b == fc.end() ? 0.0 : b->second));
    ranked.emplace_back(avg, t);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  if (ranked.size() > cfg.n) ranked.resize(cfg.n);

  PairData d;
  std::map<std::string, std::size_t> col;
  for (const auto& [f, t] : ranked) {
    col[t] = d.vocabulary.size();
    d.vocabulary.push_back(t);
    d.work_frequency.push_back(fw.count(t) ? fw.at(t) : 0.0);
    d.candidate_frequency.push_back(fc.count(t) ? fc.at(t) : 0.0);
  }
  d.values = Matrix(w.size() + cand.size(), d.vocabulary.size());
  std::size_t r = 0;
  for (const auto* side : {&w, &cand}) {
    for (const auto& c : *side) {
      for (const auto& t : c.tokens) {
        auto it = col.find(t);
        if (it != col.end()) d.values(r, it->second) += 1.0;
      }
      const double len = static_cast<double>(std::max<std::size_t>(1, c.tokens.size()));
      for (double& v : d.values.row(r)) v /= len;
      d.sides.push_back(side == &w ? kWorkSide : kCandidateSide);
      ++r;
    }
  }
  return d;
}

DegradationCurve unmask_pair(const std::string& work_id, const std::vector<corpus::Chunk>& work,
                             const std::string& candidate_id, const std::vector<corpus::Chunk>& candidate,
                             const Config& cfg) {
  const PairData d = pair_features(work, candidate, cfg);
  require(d.vocabulary.size() > 2 * cfg.k * cfg.m, ErrorCode::precondition,
          "unmasking: vocabulary of " + std::to_string(d.vocabulary.size()) + " words is too small for k and m");
  DegradationCurve c;
  c.work = work_id;
  c.candidate = candidate_id;
  std::vector<std::size_t> live(d.vocabulary.size());
  for (std::size_t j = 0; j < live.size(); ++j) live[j] = j;

  for (std::size_t t = 0; t <= cfg.m; ++t) {
    const Matrix x = d.values.select_columns(live);
    c.live_features.push_back(live.size());
    c.accuracies.push_back(
        learn::cross_validate(learn::ClassifierKind::linear_svm, x, d.sides, cfg.cv_folds, cfg.seed).metrics.accuracy);
    if (t == cfg.m) break;
    const learn::Model model = learn::train(learn::ClassifierKind::linear_svm, x, d.sides, {}, cfg.seed);
    const std::vector<double>& w = model.machines.at(0).weights;
    std::vector<std::size_t> order(live.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::vector<std::size_t> drop;
    if (cfg.remove_least) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return std::abs(w[a]) < std::abs(w[b]); });
      drop.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(2 * cfg.k));
    } else {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
      drop.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.k));
      drop.insert(drop.end(), order.end() - static_cast<std::ptrdiff_t>(cfg.k), order.end());
    }
    std::set<std::size_t> gone(drop.begin(), drop.end());
    std::vector<std::string> names;
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < live.size(); ++j) {
      if (gone.count(j)) names.push_back(d.vocabulary[live[j]]);
      else next.push_back(live[j]);
    }
    c.removed.push_back(std::move(names));
    live = std::move(next);
  }
  return c;
}

std::vector<double> curve_features(const DegradationCurve& c) {
  require(c.accuracies.size() >= 2, ErrorCode::precondition, "curve_features: curve too short");
  std::vector<double> f = c.accuracies;
  double max_drop = -INFINITY;
  for (std::size_t t = 0; t + 1 < c.accuracies.size(); ++t) {
    f.push_back(c.accuracies[t + 1] - c.accuracies[t]);
    max_drop = std::max(max_drop, c.accuracies[t] - c.accuracies[t + 1]);
  }
  f.push_back(max_drop);
  return f;
}

CurveDataset build_curve_dataset(const std::vector<Work>& works, const Config& cfg) {
  validate(cfg);
  std::map<std::string, std::vector<std::size_t>> by_author;
  for (std::size_t i = 0; i < works.size(); ++i) by_author[works[i].author].push_back(i);
  require(by_author.size() >= 2, ErrorCode::precondition, "unmasking needs at least two authors");

  struct Job {
    std::size_t work;
    std::string author;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < works.size(); ++i)
    for (const auto& [author, idx] : by_author)
      if (!(author == works[i].author && idx.size() < 2)) jobs.push_back({i, author});

  CurveDataset ds;
  ds.curves.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const Work& w = works[jobs[j].work];
    std::vector<corpus::Chunk> cand;
    for (std::size_t o : by_author[jobs[j].author])
      if (o != jobs[j].work) cand.insert(cand.end(), works[o].chunks.begin(), works[o].chunks.end());
    DegradationCurve c = unmask_pair(w.id, w.chunks, jobs[j].author, cand, cfg);
    c.label = jobs[j].author == w.author ? kSameAuthor : kDifferentAuthor;
    ds.curves[j] = std::move(c);
  });
  for (const auto& c : ds.curves) {
    ds.labels.push_back(*c.label);
    (*c.label == kSameAuthor ? ds.same_author : ds.different_author)++;
  }
  require(ds.same_author > 0, ErrorCode::precondition, "unmasking: no author has two works, so no same-author pairs");
  ds.features = Matrix(ds.curves.size(), 2 * cfg.m + 2);
  for (std::size_t i = 0; i < ds.curves.size(); ++i) {
    const auto f = curve_features(ds.curves[i]);
    std::copy(f.begin(), f.end(), ds.features.row(i).begin());
  }
  return ds;
}

learn::Model train_meta(const CurveDataset& data, std::uint64_t seed) {
  return learn::train(learn::ClassifierKind::linear_svm, data.features, data.labels, {}, seed);
}

MetaEvaluation leave_one_out(const CurveDataset& data, std::uint64_t seed) {
  const std::size_t n = data.labels.size();
  MetaEvaluation e;
  e.predicted.resize(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<std::size_t> rest;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) {
        rest.push_back(j);
        labels.push_back(data.labels[j]);
      }
    const auto m = learn::train(learn::ClassifierKind::linear_svm, data.features.select_rows(rest), labels, {}, seed);
    e.predicted[i] = learn::predict(m, data.features.select_rows(std::vector<std::size_t>{i})).labels[0];
  });
  e.confusion = learn::confusion(data.labels, e.predicted, {kDifferentAuthor, kSameAuthor});
  e.metrics = learn::metrics(e.confusion);
  return e;
}

Verdict verify(const std::string& work_id, const std::vector<corpus::Chunk>& work,
               const std::vector<Work>& candidate_works, const learn::Model& meta, const Config& cfg) {
  require(meta.kind == learn::ClassifierKind::linear_svm &&
              meta.labels == std::vector<std::string>{kDifferentAuthor, kSameAuthor} && meta.input_dim == 2 * cfg.m + 2,
          ErrorCode::precondition, "verify needs a meta-model trained on curves of this configuration");
  std::map<std::string, std::vector<corpus::Chunk>> pool;
  for (const auto& w : candidate_works)
    if (w.id != work_id) pool[w.author].insert(pool[w.author].end(), w.chunks.begin(), w.chunks.end());
  require(!pool.empty(), ErrorCode::precondition, "verify: no candidates");

  Verdict v;
  v.work = work_id;
  v.candidates.resize(pool.size());
  std::vector<std::string> names;
  for (const auto& [a, _] : pool) names.push_back(a);
  parallel_for(names.size(), [&](std::size_t i) {
    CandidateVerdict cv;
    cv.candidate = names[i];
    cv.curve = unmask_pair(work_id, work, names[i], pool.at(names[i]), cfg);
    const auto f = curve_features(cv.curve);
    const Matrix row = Matrix::from_rows({f});
    // The single machine scores different_author (label 0) as positive.
    cv.score = -learn::decision_scores(meta, row)(0, 0);
    cv.label = learn::predict(meta, row).labels[0];
    v.candidates[i] = std::move(cv);
  });
  for (const auto& c : v.candidates)
    if (c.label == kSameAuthor) v.matched.push_back(c.candidate);
  return v;
}

std::string curves_csv(const std::vector<DegradationCurve>& curves) {
  std::string out = io::csv_row({"work", "candidate", "step", "accuracy", "live_features", "label"});
  for (const auto& c : curves)
    for (std::size_t t = 0; t < c.accuracies.size(); ++t)
      out += io::csv_row({c.work, c.candidate, std::to_string(t), io::format_double(c.accuracies[t]),
                          std::to_string(c.live_features[t]), c.label.value_or("")});
  return out;
}

namespace {

nlohmann::ordered_json curve_json(const DegradationCurve& c) {
  nlohmann::ordered_json j;
  j["work"] = c.work;
  j["candidate"] = c.candidate;
  j["accuracies"] = c.accuracies;
  j["live_features"] = c.live_features;
  j["removed"] = c.removed;
  if (c.label) j["label"] = *c.label;
  return j;
}

}  // namespace

std::string curves_json(const std::vector<DegradationCurve>& curves) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : curves) j.push_back(curve_json(c));
  return j.dump(2) + "\n";
}

std::string to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["work"] = v.work;
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const auto& c : v.candidates)
    cands.push_back({{"candidate", c.candidate}, {"label", c.label}, {"score", c.score}, {"curve", curve_json(c.curve)}});
  j["candidates"] = cands;
  j["outcome"] = v.matched.empty() ? nlohmann::ordered_json("none") : nlohmann::ordered_json(v.matched);
  return j.dump(2) + "\n";
}

}  // namespace stylo::unmasking
