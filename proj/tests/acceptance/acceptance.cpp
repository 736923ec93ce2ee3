// Acceptance checks: one PASS/FAIL line per criterion.
//
//   acceptance [--only N[,M...]] [--allow-fail N[,M...]]
//
// Exit status is 0 when every failing criterion is listed in --allow-fail.
// Allowed failures are still printed as FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stylo/app.hpp"
#include "stylo/compression.hpp"
#include "stylo/corpus.hpp"
#include "stylo/distance.hpp"
#include "stylo/features.hpp"
#include "stylo/io.hpp"
#include "stylo/learn.hpp"
#include "stylo/parallel.hpp"
#include "stylo/projection.hpp"
#include "stylo/rng.hpp"
#include "stylo/synth.hpp"
#include "stylo/text.hpp"
#include "stylo/unmasking.hpp"

using namespace stylo;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "" : "NOT ") + what);
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Metric oracle

struct Brute {
  std::vector<double> precision, recall, f1;
  double macro_p = 0, macro_r = 0, macro_f = 0, micro_p = 0, micro_r = 0, micro_f = 0, accuracy = 0, mcc = 0;
};

// Straight from the (truth, predicted) pairs; MCC as the Pearson correlation
// of the one-hot indicator vectors.
Brute brute_force(const std::vector<std::string>& truth, const std::vector<std::string>& pred,
                  const std::vector<std::string>& labels) {
  Brute b;
  const std::size_t n = truth.size(), k = labels.size();
  double tp_sum = 0, fp_sum = 0, fn_sum = 0;
  for (const auto& l : labels) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tp += truth[i] == l && pred[i] == l;
      fp += truth[i] != l && pred[i] == l;
      fn += truth[i] == l && pred[i] != l;
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    b.precision.push_back(p);
    b.recall.push_back(r);
    b.f1.push_back(p + r > 0 ? 2 * p * r / (p + r) : 0.0);
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
  }
  for (std::size_t c = 0; c < k; ++c) {
    b.macro_p += b.precision[c] / static_cast<double>(k);
    b.macro_r += b.recall[c] / static_cast<double>(k);
    b.macro_f += b.f1[c] / static_cast<double>(k);
  }
  b.micro_p = tp_sum + fp_sum > 0 ? tp_sum / (tp_sum + fp_sum) : 0.0;
  b.micro_r = tp_sum + fn_sum > 0 ? tp_sum / (tp_sum + fn_sum) : 0.0;
  b.micro_f = b.micro_p + b.micro_r > 0 ? 2 * b.micro_p * b.micro_r / (b.micro_p + b.micro_r) : 0.0;
  double correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
  b.accuracy = correct / static_cast<double>(n);

  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& l : labels) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += truth[i] == l;
      my += pred[i] == l;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (truth[i] == l) - mx, y = (pred[i] == l) - my;
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
  }
  b.mcc = sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return b;
}

Outcome criterion_metrics() {
  Outcome o;
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + uniform_index(rng, 4);
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < k; ++c) labels.push_back(std::string(1, static_cast<char>('a' + c)));
    std::vector<std::string> truth, pred;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) {
        // Sparse cells exercise the zero-denominator conventions.
        const std::size_t count = uniform_real(rng) < 0.25 ? 0 : uniform_index(rng, 30);
        for (std::size_t i = 0; i < count; ++i) {
          truth.push_back(labels[r]);
          pred.push_back(labels[c]);
        }
      }
    if (truth.empty()) {
      truth.push_back(labels[0]);
      pred.push_back(labels[1]);
    }
    const auto m = learn::metrics(learn::confusion(truth, pred, labels));
    const Brute b = brute_force(truth, pred, labels);
    auto diff = [&](double a, double e) { worst = std::max(worst, std::abs(a - e)); };
    for (std::size_t c = 0; c < k; ++c) {
      diff(m.per_class[c].precision, b.precision[c]);
      diff(m.per_class[c].recall, b.recall[c]);
      diff(m.per_class[c].f1, b.f1[c]);
    }
    diff(m.macro_precision, b.macro_p);
    diff(m.macro_recall, b.macro_r);
    diff(m.macro_f1, b.macro_f);
    diff(m.micro_precision, b.micro_p);
    diff(m.micro_recall, b.micro_r);
    diff(m.micro_f1, b.micro_f);
    diff(m.accuracy, b.accuracy);
    diff(m.mcc, b.mcc);
  }
  o.check(worst < 1e-12, "100 random matrices within 1e-12 (max |diff| " + sci(worst) + ")");

  const std::vector<std::string> ab{"a", "b"};
  learn::ConfusionMatrix perfect{ab, {{7, 0}, {0, 5}}};
  learn::ConfusionMatrix anti{ab, {{0, 6}, {4, 0}}};
  learn::ConfusionMatrix uniform{ab, {{3, 3}, {3, 3}}};
  const double p = learn::metrics(perfect).mcc, a = learn::metrics(anti).mcc, u = learn::metrics(uniform).mcc;
  o.check(p == 1.0 && a == -1.0 && u == 0.0,
          "MCC boundaries exact (perfect " + fmt(p, 1) + ", anti-diagonal " + fmt(a, 1) + ", uniform " + fmt(u, 1) + ")");
  return o;
}

// ---------------------------------------------------------------------------
// 2. Delta axioms

Outcome criterion_delta() {
  Outcome o;
  Rng rng(2);
  std::size_t violations = 0;
  double worst_asym = 0.0;
  for (auto kind : distance::all_delta_kinds()) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t dim = 1 + uniform_index(rng, 60);
      std::vector<double> a(dim), b(dim);
      const bool positive = !distance::needs_zscore(kind);  // eder_simple takes frequencies
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] = positive ? uniform_real(rng) : 6.0 * uniform_real(rng) - 3.0;
        b[i] = positive ? uniform_real(rng) : 6.0 * uniform_real(rng) - 3.0;
      }
      const double ab = distance::delta(a, b, kind), ba = distance::delta(b, a, kind);
      worst_asym = std::max(worst_asym, std::abs(ab - ba));
      if (!(ab >= 0.0) || std::abs(ab - ba) > 1e-12 || distance::delta(a, a, kind) != 0.0 ||
          distance::delta(b, b, kind) != 0.0)
        ++violations;
    }
  }
  o.check(violations == 0, "symmetry, non-negativity, d(a,a)=0 on 7000 pairs (" + std::to_string(violations) +
                               " violations, max asymmetry " + sci(worst_asym) + ")");
  const std::vector<double> x{1.0, -1.0}, y{0.0, 0.0};
  const double bur = distance::delta(x, y, distance::DeltaKind::burrows);
  o.check(bur == (std::abs(1.0 - 0.0) + std::abs(-1.0 - 0.0)) / 2.0, "Burrows [1,-1] vs [0,0] = " + fmt(bur, 6));
  return o;
}

// ---------------------------------------------------------------------------
// 3. NCD contract

class TableCompressor final : public compression::Compressor {
 public:
  std::map<std::string, std::size_t> sizes;
  std::string id() const override { return "table"; }
  int level() const override { return 0; }
  std::string compress(std::string_view input) const override {
    const auto it = sizes.find(std::string(input));
    return std::string(it == sizes.end() ? input.size() : it->second, 'x');
  }
};

// Replaces 5% of the word tokens (chosen without replacement) with words
// drawn uniformly from the lexicon, keeping punctuation and spacing.
std::string perturb(const std::string& x, const std::vector<std::string>& lexicon, Rng& rng) {
  const auto spans = text::word_spans(x);
  std::vector<std::size_t> idx(spans.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  shuffle(idx, rng);
  idx.resize(static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(spans.size()))));
  std::sort(idx.rbegin(), idx.rend());
  std::string out = x;
  for (std::size_t i : idx)
    out.replace(spans[i].begin, spans[i].end - spans[i].begin, lexicon[uniform_index(rng, lexicon.size())]);
  return out;
}

Outcome criterion_ncd() {
  Outcome o;
  const synth::Generator gen(synth::Config{}, 303);
  auto bz = compression::make_bzip2();

  std::vector<compression::Sample> samples;
  std::vector<synth::Author> authors;
  for (std::size_t a = 0; a < 10; ++a) authors.push_back(gen.author("P" + std::to_string(a), a));
  for (std::size_t i = 0; i < 20; ++i)
    samples.push_back({"s" + std::to_string(i), gen.work(authors[i % 10], 2600, 1000 + i)});
  std::size_t smallest = samples[0].text.size();
  for (const auto& s : samples) smallest = std::min(smallest, s.text.size());

  const auto m = compression::ncd_matrix(samples, *bz, compression::Mode::instance);
  double lo = 1e9, hi = -1e9, self_max = 0.0;
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    self_max = std::max(self_max, m.values(i, i));
    for (std::size_t j = 0; j < m.ids.size(); ++j) {
      lo = std::min(lo, m.values(i, j));
      hi = std::max(hi, m.values(i, j));
    }
  }

  Rng rng(33);
  int wins = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t xi = uniform_index(rng, samples.size());
    std::size_t zi = uniform_index(rng, samples.size() - 1);
    if (zi >= xi) ++zi;
    if (zi % 10 == xi % 10) zi = (zi + 1) % samples.size();  // another author
    const std::string& x = samples[xi].text;
    const std::string xp = perturb(x, gen.lexicon(), rng);
    const double near = compression::ncd(x, xp, *bz), far = compression::ncd(x, samples[zi].text, *bz);
    lo = std::min({lo, near, far});
    hi = std::max({hi, near, far});
    wins += near < far;
  }

  TableCompressor mock;
  mock.sizes = {{"X", 100}, {"Y", 120}, {"XY", 150}, {"YX", 150}};
  const double spot = compression::ncd("X", "Y", mock);

  o.check(smallest >= 10000, "20 samples >= 10 kB (smallest " + std::to_string(smallest) + " bytes)");
  o.check(lo >= 0.0 && hi <= 1.2, "all values in [0, 1.2] (range " + fmt(lo) + ".." + fmt(hi) + ")");
  o.check(self_max <= 0.15, "NCD(x,x) <= 0.15 with bzip2 (max " + fmt(self_max) + ")");
  o.check(wins >= 95, "5% perturbation discrimination " + std::to_string(wins) + "/100");
  o.check(std::abs(spot - 0.41667) <= 1e-5 && std::abs(spot - 50.0 / 120.0) < 1e-12,
          "mock spot-check 100/120/150 -> " + fmt(spot, 5));

  // Context only: the same self-distance on real English prose.
#ifdef STYLO_SOURCE_DIR
  const std::filesystem::path paper = std::filesystem::path(STYLO_SOURCE_DIR) / "paper.md";
  if (std::filesystem::exists(paper)) {
    const std::string text = io::read_file(paper);
    double worst = 0.0;
    std::size_t slices = 0;
    for (std::size_t off = 0; off + 10000 <= text.size(); off += 10000, ++slices) {
      std::string s = text.substr(off, 10000);
      worst = std::max(worst, compression::ncd(s, s, *bz));
    }
    o.notes.push_back("info: bzip2 NCD(x,x) on " + std::to_string(slices) + " English 10 kB slices reaches " +
                      fmt(worst));
  }
#endif
  return o;
}

// ---------------------------------------------------------------------------
// 4. Synthetic closed-set attribution

struct ChunkSet {
  std::vector<features::TokenStream> streams;
  std::vector<std::string> labels;
};

Outcome criterion_attribution() {
  Outcome o;
  synth::CorpusSpec spec;
  spec.authors = 4;
  spec.works_per_author = 20;
  spec.words_per_work = 2000;
  spec.queries_per_author = 1;
  spec.seed = 44;
  spec.config.vocabulary = 2000;

  ChunkSet train;
  std::map<std::string, ChunkSet> queries;  // by true author
  for (const auto& d : synth::make_corpus(spec)) {
    const auto doc = corpus::canonicalize(d);
    ChunkSet& dst = d.variant_tag ? queries[*d.author] : train;
    for (const auto& c : corpus::segment_chunks(doc, 300)) {
      dst.streams.push_back(features::tokenize(c.text, c.sample_id(), c.doc_id));
      dst.labels.push_back(*d.author);
    }
  }
  std::vector<features::TokenStream> all = train.streams;
  for (const auto& q : queries) all.insert(all.end(), q.second.streams.begin(), q.second.streams.end());

  struct Run {
    learn::ClassifierKind kind;
    features::FeatureKind feats;
  };
  const std::vector<Run> runs{{learn::ClassifierKind::ridge, features::FeatureKind::bow},
                              {learn::ClassifierKind::maxent, features::FeatureKind::cng}};
  std::map<std::string, std::vector<learn::AttributionRun>> per_author;
  for (const auto& r : runs) {
    const auto pipeline = features::FeaturePipeline::fit(all, features::default_spec(r.feats));
    const auto x = pipeline.transform(train.streams);
    const std::string name = std::string(learn::to_string(r.kind)) + "+" + features::to_string(r.feats);
    const auto report = learn::cross_validate(r.kind, x.values, train.labels, 10, 4);
    o.check(report.metrics.macro_f1 >= 0.95,
            name + " 10-fold macro-F1 " + fmt(report.metrics.macro_f1) + " on " + std::to_string(x.rows()) + " chunks");
    const auto model = learn::train(r.kind, x.values, train.labels, {}, 4);
    for (const auto& [author, q] : queries)
      per_author[author].push_back(
          {learn::to_string(r.kind), features::to_string(r.feats), learn::predict(model, pipeline.transform(q.streams).values).labels});
  }
  const std::vector<std::string> candidates{"A", "B", "C", "D"};
  double worst = 1.0;
  bool top_ok = true;
  for (const auto& [author, runs_for] : per_author) {
    const auto result = learn::attribute(runs_for, candidates);
    top_ok = top_ok && result.table.front().candidate == author;
    for (const auto& t : result.table)
      if (t.candidate == author) worst = std::min(worst, t.average / static_cast<double>(result.query_chunks));
  }
  o.check(top_ok && worst >= 0.9,
          "held-out works attributed to their author (lowest share " + fmt(worst * 100.0, 1) + "%)");
  return o;
}

// ---------------------------------------------------------------------------
// 5. PCA / LDA numerics

Matrix random_matrix(std::size_t n, std::size_t p, Rng& rng) {
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) x(i, j) = 4.0 * uniform_real(rng) - 2.0 + 0.3 * static_cast<double>(j);
  return x;
}

double normal(Rng& rng) {
  const double u1 = 1.0 - uniform_real(rng), u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Outcome criterion_projection() {
  Outcome o;
  Rng rng(5);
  double ortho = 0.0, recon = 0.0;
  bool sorted = true;
  for (const auto& [n, p] : std::vector<std::pair<std::size_t, std::size_t>>{{60, 12}, {15, 40}, {30, 30}}) {
    const Matrix x = random_matrix(n, p, rng);
    // Centered data has rank at most n - 1, so this k spans it completely.
    const std::size_t k = std::min(n - 1, p);
    const auto model = projection::fit_pca(x, k);
    const Matrix gram = multiply_bt(model.components, model.components);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) ortho = std::max(ortho, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
    for (std::size_t i = 1; i < model.eigenvalues.size(); ++i) {
      sorted = sorted && model.eigenvalues[i] <= model.eigenvalues[i - 1];
      sorted = sorted && model.explained_variance_ratio[i] <= model.explained_variance_ratio[i - 1];
    }
    const Matrix back = projection::inverse_transform(model, projection::transform(model, x));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j) recon = std::max(recon, std::abs(back(i, j) - x(i, j)));
  }
  o.check(ortho <= 1e-8, "component orthonormality (max deviation " + sci(ortho) + ")");
  o.check(sorted, "eigenvalues and explained variance sorted descending");
  o.check(recon < 1e-8, "full-k reconstruction error " + sci(recon));

  Matrix line(200, 6);
  const std::vector<double> dir{1.0, -2.0, 0.5, 3.0, 0.0, 1.5};
  for (std::size_t i = 0; i < line.rows(); ++i) {
    const double t = 10.0 * normal(rng);
    for (std::size_t j = 0; j < 6; ++j) line(i, j) = t * dir[j] + 1e-3 * normal(rng);
  }
  const double first = projection::fit_pca(line, 2).explained_variance_ratio[0];
  o.check(first >= 0.999, "collinear first-component variance share " + fmt(first, 6));

  Matrix blobs(150, 5);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < 150; ++i) {
    const std::size_t c = i % 3;
    labels.push_back(std::string(1, static_cast<char>('a' + c)));
    for (std::size_t j = 0; j < 5; ++j) blobs(i, j) = normal(rng) + (j == c ? 10.0 : 0.0);
  }
  const auto lda = projection::fit_lda(blobs, labels);
  const auto pred = projection::predict(lda, blobs);
  const auto lm = learn::metrics(learn::confusion(labels, pred));
  o.check(lm.accuracy == 1.0 && std::abs(lm.mcc - 1.0) < 1e-12,
          "LDA training MCC on 10-sigma blobs " + fmt(lm.mcc, 12));
  return o;
}

// ---------------------------------------------------------------------------
// 6. Unmasking separation

Outcome criterion_unmasking() {
  Outcome o;
  synth::CorpusSpec spec;
  spec.authors = 2;
  spec.works_per_author = 10;
  spec.words_per_work = 4500;
  spec.seed = 66;
  std::vector<unmasking::Work> works;
  for (const auto& d : synth::make_corpus(spec))
    works.push_back({d.id, *d.author, corpus::segment_chunks(corpus::canonicalize(d), 300)});
  const unmasking::Config cfg;  // n 250, k 6, m 8, 10 folds
  const auto data = unmasking::build_curve_dataset(works, cfg);

  double same = 0.0, diff = 0.0;
  bool shape = true;
  for (const auto& c : data.curves) {
    const double drop = c.accuracies.front() - c.accuracies.back();
    (c.label == unmasking::kSameAuthor ? same : diff) += drop;
    shape = shape && c.accuracies.size() == cfg.m + 1 && c.live_features.size() == cfg.m + 1 &&
            c.live_features[0] == cfg.n;
    for (std::size_t t = 0; t < c.live_features.size(); ++t)
      shape = shape && c.live_features[t] == cfg.n - 2 * cfg.k * t;
  }
  same /= static_cast<double>(data.same_author);
  diff /= static_cast<double>(data.different_author);
  const auto loo = unmasking::leave_one_out(data, 6);
  o.check(same - diff > 0.1, "mean drop same " + fmt(same) + " vs different " + fmt(diff) + " (gap " +
                                 fmt(same - diff) + ", " + std::to_string(data.curves.size()) + " curves)");
  o.check(loo.metrics.mcc >= 0.9, "leave-one-pair-out MCC " + fmt(loo.metrics.mcc));
  o.check(shape, "curve length m+1 and live features n0-2kt at every step");
  return o;
}

// ---------------------------------------------------------------------------
// 7. Determinism

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = std::filesystem::relative(e.path(), dir).generic_string();
    if (rel == "timings.json") continue;  // wall clock by design
    files[rel] = io::read_file(e.path());
  }
  return files;
}

Outcome criterion_determinism() {
  Outcome o;
  const auto root = std::filesystem::temp_directory_path() / "stylo_acceptance_determinism";
  std::filesystem::remove_all(root);
  synth::CorpusSpec spec;
  spec.authors = 3;
  spec.works_per_author = 4;
  spec.queries_per_author = 1;
  spec.words_per_work = 4500;
  spec.seed = 77;
  app::RunConfig cfg;
  cfg.manifest = synth::write_corpus(synth::make_corpus(spec), root / "corpus", 300);
  cfg.output = root / "out";
  cfg.seed = 2024;
  cfg.analyses = app::parse_analyses("all");

  const std::size_t saved = max_jobs();
  std::vector<std::map<std::string, std::string>> runs;
  std::vector<bool> ok;
  for (std::size_t jobs : {1, 4}) {
    std::filesystem::remove_all(cfg.output);
    set_max_jobs(jobs);
    ok.push_back(app::analyze(cfg, false).ok());
    runs.push_back(snapshot(cfg.output));
  }
  set_max_jobs(saved);
  std::filesystem::remove_all(root);

  std::size_t differing = 0;
  for (const auto& [name, bytes] : runs[0]) {
    const auto it = runs[1].find(name);
    differing += it == runs[1].end() || it->second != bytes;
  }
  differing += runs[1].size() > runs[0].size() ? runs[1].size() - runs[0].size() : 0;
  o.check(ok[0] && ok[1], "analyze --analysis all succeeded in both runs");
  o.check(differing == 0 && !runs[0].empty(), std::to_string(runs[0].size()) + " artifacts compared, " +
                                                   std::to_string(differing) + " differ (1 vs 4 workers)");
  return o;
}

// ---------------------------------------------------------------------------
// 8. Pipeline conservation

std::vector<corpus::Document> conservation_docs() {
  synth::CorpusSpec spec;
  spec.authors = 3;
  spec.works_per_author = 3;
  spec.words_per_work = 1700;
  spec.seed = 88;
  auto docs = synth::make_corpus(spec);
  corpus::Document marked;
  marked.id = "marked";
  marked.author = "M";
  marked.raw_text =
      "@header Comedia llamada Eufemia\n\nCAPÍTULO I\n\nEn un lugar {nota al margen} de la Mancha, [[glosa]] cuyo "
      "nombre no quiero acordarme... no ha mucho tiempo que vivía un hidalgo.\n\n23\n\nDixo el Sr. cura: <la>dominus "
      "vobiscum</la> ¿qué es esto?? ¡Ay!!\n\nPág. 24\n\nY todo 1.500 maravedís costaba, y el 3er año fue peor.\n\nFIN\n";
  docs.push_back(marked);
  corpus::Document play;
  play.id = "play";
  play.author = "M";
  play.play = true;
  play.raw_text =
      "ESCENA PRIMERA\n\n<sp>LEONARDO</sp> Señor, ¿qué haremos?\n\n<sp>MELCHIOR</sp> Calla, que ya viene.\n\n"
      "<sp>LEONARDO</sp> Pues vamos, vamos.\n";
  docs.push_back(play);
  return docs;
}

Outcome criterion_conservation() {
  Outcome o;
  std::size_t docs = 0, conserved = 0, idempotent = 0;
  for (const auto& d : conservation_docs()) {
    const auto c = corpus::canonicalize(d);
    ++docs;
    std::size_t sum = 0;
    for (const auto& ch : corpus::segment_chunks(c, 300)) sum += ch.word_count;
    conserved += sum == text::count_words(*c.canonical_text);
    idempotent += corpus::canonicalize_text(*c.canonical_text, {}, d.play) == *c.canonical_text;
  }
  o.check(conserved == docs, "chunk word counts sum to canonical count in " + std::to_string(conserved) + "/" +
                                 std::to_string(docs) + " documents");
  o.check(idempotent == docs, "canonicalization idempotent in " + std::to_string(idempotent) + "/" +
                                  std::to_string(docs) + " documents");

  Rng rng(8);
  std::size_t cases = 0, respected = 0, repeatable = 0;
  for (int t = 0; t < 200; ++t) {
    corpus::ChunksByAuthor groups;
    const std::size_t authors = 2 + uniform_index(rng, 5);
    for (std::size_t a = 0; a < authors; ++a) {
      const std::size_t n = 1 + uniform_index(rng, 120);
      auto& list = groups["author" + std::to_string(a)];
      for (std::size_t i = 0; i < n; ++i) {
        corpus::Chunk c;
        c.doc_id = "d" + std::to_string(a);
        c.index = i;
        list.push_back(c);
      }
    }
    const double fraction = 0.02 + 0.9 * uniform_real(rng);
    const std::uint64_t seed = rng();
    const auto bounds = corpus::balance_bounds(groups, fraction);
    const auto out = corpus::balance_chunks(groups, fraction, seed);
    const auto out2 = corpus::balance_chunks(groups, fraction, seed);
    bool ok = out.size() == groups.size(), same = true;
    for (const auto& [author, list] : out) {
      ok = ok && list.size() >= bounds.floor && list.size() <= bounds.ceiling;
      const auto& other = out2.at(author);
      same = same && other.size() == list.size();
      for (std::size_t i = 0; same && i < list.size(); ++i)
        same = list[i].sample_id() == other[i].sample_id();
    }
    ++cases;
    respected += ok;
    repeatable += same;
  }
  o.check(respected == cases, "balance_chunks within [floor, ceiling] in " + std::to_string(respected) + "/" +
                                  std::to_string(cases) + " random groupings");
  o.check(repeatable == cases, "balance_chunks repeatable for a fixed seed");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::set<int> parse_ids(const char* s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, allowed;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--only") == 0) only = parse_ids(argv[i + 1]);
    else if (std::strcmp(argv[i], "--allow-fail") == 0) allowed = parse_ids(argv[i + 1]);
    else {
      std::fprintf(stderr, "usage: acceptance [--only N,...] [--allow-fail N,...]\n");
      return 64;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "metric oracle", 1.0, criterion_metrics},
      {2, "delta axioms", 1.0, criterion_delta},
      {3, "NCD contract", 30.0, criterion_ncd},
      {4, "synthetic closed-set attribution", 60.0, criterion_attribution},
      {5, "PCA/LDA numerics", 5.0, criterion_projection},
      {6, "unmasking separation", 120.0, criterion_unmasking},
      {7, "determinism", 300.0, criterion_determinism},
      {8, "pipeline conservation", 60.0, criterion_conservation},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.limit_s, "runtime " + fmt(secs, 2) + " s < " + fmt(c.limit_s, 0) + " s");
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !allowed.count(c.id)) ++unexpected;
    if (!o.pass && allowed.count(c.id))
      std::printf("     criterion %d failure is a known, documented limitation (allowed)\n", c.id);
  }
  return unexpected == 0 ? 0 : 1;
}
