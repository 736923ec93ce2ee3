#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include <json.hpp>

#include "internal.hpp"
#include "stylo/app.hpp"
#include "stylo/distance.hpp"
#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/io.hpp"
#include "stylo/learn.hpp"
#include "stylo/parallel.hpp"
#include "stylo/plot.hpp"
#include "stylo/projection.hpp"
#include "stylo/rng.hpp"
#include "stylo/unmasking.hpp"

namespace stylo::app {

namespace {

using ojson = nlohmann::ordered_json;

const std::string kQueryLabel = "query";

struct Context {
  const RunConfig& cfg;
  bool force;
  CorpusCache cache;
  std::vector<const corpus::Document*> labeled;
  std::vector<const corpus::Document*> queries;
  std::map<std::string, std::vector<corpus::Chunk>> chunks;  // by document id
  StageResult* stage = nullptr;

  void emit(const std::string& rel, const std::string& content) const {
    io::write_artifact(cfg.output / rel, content, force);
    stage->artifacts.push_back(rel);
  }
  void warn(const std::string& msg) const { stage->warnings.push_back(msg); }
  std::uint64_t seed_for(const std::string& stage_name) const {
    const auto it = std::find(kAnalysisOrder.begin(), kAnalysisOrder.end(), stage_name);
    return derive_seed(cfg.effective_seed(), static_cast<std::uint64_t>(it - kAnalysisOrder.begin()));
  }
  std::set<std::string> authors() const {
    std::set<std::string> a;
    for (const auto* d : labeled) a.insert(*d->author);
    return a;
  }
};

features::TokenStream stream_of(const corpus::Chunk& c) {
  return features::tokenize(c.text, c.sample_id(), c.doc_id);
}

std::string label_of(const corpus::Document& d) { return d.author.value_or(kQueryLabel); }

void require_authors(const Context& ctx, std::size_t n, const std::string& stage) {
  require(ctx.authors().size() >= n, ErrorCode::precondition,
          stage + " needs documents by at least " + std::to_string(n) + " authors");
}

// Burrows-style grid over labeled documents, then the winning cell applied
// to every document (queries included) for the distance table and tree.
void run_delta(Context& ctx) {
  require_authors(ctx, 2, "delta");
  const auto& o = ctx.cfg.delta;
  distance::GridInput in;
  for (const auto* d : ctx.labeled) {
    in.samples.push_back(features::tokenize(*d->canonical_text, d->id));
    in.labels.push_back(*d->author);
  }
  std::vector<distance::DeltaKind> kinds;
  for (const auto& k : o.kinds) kinds.push_back(distance::parse_delta_kind(k));
  const auto rows = distance::delta_grid(in, o.mfw, o.culling, kinds);
  ctx.emit("delta/grid.csv", distance::grid_csv(rows));

  const auto& top = rows.front();
  std::vector<features::TokenStream> all;
  std::vector<std::string> labels;
  for (const auto& d : ctx.cache.documents) {
    all.push_back(features::tokenize(*d.canonical_text, d.id));
    labels.push_back(label_of(d));
  }
  features::FeatureSpec spec = features::default_spec(features::FeatureKind::bow);
  spec.mfw = top.mfw;
  spec.culling = top.culling;
  const auto raw = features::FeaturePipeline::fit(all, spec).transform(all);
  features::FeatureMatrix m = raw;
  if (distance::needs_zscore(top.kind)) {
    auto z = features::zscore(raw);
    if (!z.model.dropped.empty())
      ctx.warn("delta: " + std::to_string(z.model.dropped.size()) + " constant feature(s) dropped before z-scoring");
    m = std::move(z.matrix);
  }
  const auto d = distance::pairwise(m, top.kind);
  const auto tree = distance::cluster(d, distance::parse_linkage(o.linkage));
  ctx.emit("delta/distances.csv", distance::to_csv(d));
  ctx.emit("delta/tree.dot", distance::to_dot(tree));
  ctx.emit("delta/tree.json", distance::to_json(tree));

  ojson j;
  j["mfw"] = top.mfw;
  j["culling"] = top.culling;
  j["delta"] = distance::to_string(top.kind);
  j["features"] = m.cols();
  j["standardized_difference"] = top.score.standardized_difference;
  j["raw_difference"] = top.score.raw_difference;
  j["linkage"] = o.linkage;
  j["formulas"] = ojson::object();
  for (auto k : kinds) j["formulas"][distance::to_string(k)] = distance::formula(k);
  j["labels"] = ojson::object();
  for (std::size_t i = 0; i < d.ids.size(); ++i) j["labels"][d.ids[i]] = labels[i];
  ctx.emit("delta/top.json", j.dump(2) + "\n");
  if (ctx.cfg.plots) {
    ctx.emit("delta/tree.svg", plot::dendrogram_svg(tree, std::string("Delta (") + distance::to_string(top.kind) +
                                                             ", mfw " + std::to_string(top.mfw) + ")"));
    ctx.emit("delta/distances.svg", plot::heatmap_svg(d.ids, d.values, "Delta distances"));
  }
}

void run_ncd(Context& ctx) {
  const auto registry = make_registry(ctx.cfg);
  const auto& c = registry.get(ctx.cfg.ncd.compressor.empty() ? ctx.cfg.compressor : ctx.cfg.ncd.compressor);
  const bool profile = ctx.cfg.ncd.mode == "profile";
  std::vector<compression::Sample> samples;
  std::vector<std::string> labels;
  if (profile) {
    std::vector<corpus::Document> docs;
    for (const auto* d : ctx.labeled) docs.push_back(*d);
    for (const auto& p : corpus::build_profiles(docs)) {
      samples.push_back({p.author, p.concatenated_text});
      labels.push_back(p.author);
    }
    for (const auto* d : ctx.queries) {
      samples.push_back({d->id, *d->canonical_text});
      labels.push_back(kQueryLabel);
    }
  } else {
    for (const auto& d : ctx.cache.documents) {
      samples.push_back({d.id, *d.canonical_text});
      labels.push_back(label_of(d));
    }
  }
  const auto m = compression::ncd_matrix(samples, c, profile ? compression::Mode::profile : compression::Mode::instance);
  std::size_t worst = 0;
  for (std::size_t i = 1; i < m.ids.size(); ++i)
    if (m.values(i, i) > m.values(worst, worst)) worst = i;
  if (m.values(worst, worst) > 0.15)
    ctx.warn("ncd: self-distances reach " + io::format_double(m.values(worst, worst)) + " (\"" + m.ids[worst] +
             "\", compressor " + m.compressor_id + ")");
  const auto tree = compression::ncd_tree(m);
  ctx.emit("ncd/matrix.csv", compression::to_csv(m));
  ctx.emit("ncd/matrix.json", compression::to_json(m));
  ctx.emit("ncd/tree.dot", distance::to_dot(tree));
  ctx.emit("ncd/tree.json", distance::to_json(tree));

  // Nearest neighbours of each query, or of every sample when none exist.
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == kQueryLabel) targets.push_back(i);
  if (targets.empty())
    for (std::size_t i = 0; i < labels.size(); ++i) targets.push_back(i);
  std::string nearest = io::csv_row({"sample", "rank", "neighbor", "label", "ncd"});
  for (std::size_t t : targets) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < m.ids.size(); ++j)
      if (j != t) others.push_back(j);
    std::stable_sort(others.begin(), others.end(),
                     [&](std::size_t a, std::size_t b) { return m.values(t, a) < m.values(t, b); });
    for (std::size_t r = 0; r < others.size() && r < 5; ++r)
      nearest += io::csv_row({m.ids[t], std::to_string(r + 1), m.ids[others[r]], labels[others[r]],
                              io::format_double(m.values(t, others[r]))});
  }
  ctx.emit("ncd/nearest.csv", nearest);
  if (ctx.cfg.plots) {
    ctx.emit("ncd/matrix.svg", plot::heatmap_svg(m.ids, m.values, "NCD (" + m.compressor_id + ")"));
    ctx.emit("ncd/tree.svg", plot::dendrogram_svg(tree, "NCD tree (" + m.compressor_id + ")"));
  }
}

std::string scatter(const projection::ProjectedPoints& p, std::size_t sample, std::uint64_t seed,
                     const std::string& title) {
  std::vector<std::size_t> idx(p.sample_ids.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (sample > 0 && idx.size() > sample) {
    Rng rng(seed);
    shuffle(idx, rng);
    idx.resize(sample);
    std::sort(idx.begin(), idx.end());
  }
  // Queries go first so they take the first palette color.
  std::stable_partition(idx.begin(), idx.end(), [&](std::size_t i) { return p.labels[i] == kQueryLabel; });
  std::vector<plot::Point> pts;
  for (std::size_t i : idx) {
    const double y = p.coordinates.cols() > 1 ? p.coordinates(i, 1) : 0.0;
    pts.push_back({p.coordinates(i, 0), y, p.sample_ids[i], p.labels[i]});
  }
  return plot::scatter_svg(pts, {title, "component 1", p.coordinates.cols() > 1 ? "component 2" : ""});
}

void run_projection(Context& ctx) {
  const auto& o = ctx.cfg.projection;
  std::vector<features::TokenStream> streams;
  std::vector<std::string> labels;
  for (const auto& d : ctx.cache.documents)
    for (const auto& c : ctx.chunks.at(d.id)) {
      streams.push_back(stream_of(c));
      labels.push_back(label_of(d));
    }
  require(streams.size() >= 2, ErrorCode::precondition, "projection needs at least two chunks");
  const auto spec = features::default_spec(features::parse_feature_kind(o.features));
  const auto fm = features::FeaturePipeline::fit(streams, spec).transform(streams);
  require(fm.cols() >= 1, ErrorCode::precondition, "projection: feature set \"" + o.features + "\" is empty");
  std::size_t k = std::min(o.components, fm.cols());
  if (k < o.components)
    ctx.warn("projection: only " + std::to_string(k) + " PCA component(s) available from " + std::to_string(fm.cols()) +
             " features");
  const auto pca = projection::fit_pca(fm, k);
  const auto pts = projection::transform(pca, fm, labels);
  ctx.emit("projection/pca_points.csv", projection::to_csv(pts));
  ctx.emit("projection/pca_model.json", projection::to_json(pca));
  const std::uint64_t seed = ctx.seed_for("projection");
  if (ctx.cfg.plots) ctx.emit("projection/pca.svg", scatter(pts, o.plot_sample, seed, "PCA (" + o.features + ")"));

  if (!o.lda) return;
  if (ctx.authors().size() < 2) {
    ctx.warn("projection: LDA skipped (fewer than two authors)");
    return;
  }
  std::vector<std::size_t> train;
  std::vector<std::string> train_labels;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != kQueryLabel) {
      train.push_back(i);
      train_labels.push_back(labels[i]);
    }
  const auto lda = projection::fit_lda(fm.values.select_rows(train), train_labels);
  projection::Model named = lda;
  named.feature_names = fm.feature_names;
  const auto lda_pts = projection::transform(named, fm, labels);
  const auto fitted = projection::predict(named, fm.values.select_rows(train));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < fitted.size(); ++i) correct += fitted[i] == train_labels[i];
  ojson j = ojson::parse(projection::to_json(named));
  j["training_accuracy"] = static_cast<double>(correct) / static_cast<double>(fitted.size());
  ctx.emit("projection/lda_points.csv", projection::to_csv(lda_pts));
  ctx.emit("projection/lda_model.json", j.dump(2) + "\n");
  if (ctx.cfg.plots)
    ctx.emit("projection/lda.svg", scatter(lda_pts, o.plot_sample, derive_seed(seed, 1), "LDA (" + o.features + ")"));
}

Matrix scale_rows(const Matrix& x, const std::vector<double>& factor) {
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= factor[i];
  return out;
}

struct CellResult {
  learn::EvaluationReport report;
  std::vector<std::string> query_predictions;
};

void run_classify(Context& ctx) {
  require_authors(ctx, 2, "classify");
  const auto& o = ctx.cfg.classify;
  const std::uint64_t seed = ctx.seed_for("classify");

  corpus::ChunksByAuthor by_author;
  for (const auto* d : ctx.labeled) {
    auto& dst = by_author[*d->author];
    const auto& src = ctx.chunks.at(d->id);
    dst.insert(dst.end(), src.begin(), src.end());
  }
  if (o.balance) {
    const auto balanced = corpus::balance_chunks(by_author, o.balance_fraction, derive_seed(seed, 0));
    for (const auto& [author, list] : by_author) {
      const std::size_t after = balanced.at(author).size();
      if (after != list.size())
        ctx.warn("classify: " + author + " rebalanced from " + std::to_string(list.size()) + " to " +
                 std::to_string(after) + " chunks");
    }
    by_author = balanced;
  }
  std::vector<features::TokenStream> train, query;
  std::vector<std::string> labels, train_ids;
  std::vector<double> train_words, query_words;
  for (const auto& [author, list] : by_author)
    for (const auto& c : list) {
      train.push_back(stream_of(c));
      train_words.push_back(static_cast<double>(c.word_count));
      labels.push_back(author);
      train_ids.push_back(c.sample_id());
    }
  std::vector<std::string> query_ids;
  for (const auto* d : ctx.queries)
    for (const auto& c : ctx.chunks.at(d->id)) {
      query.push_back(stream_of(c));
      query_words.push_back(static_cast<double>(c.word_count));
      query_ids.push_back(c.sample_id());
    }

  // Feature fitting is unsupervised, so it sees every chunk.
  std::vector<features::TokenStream> fit_on = train;
  fit_on.insert(fit_on.end(), query.begin(), query.end());
  std::vector<features::FeatureMatrix> xs(o.features.size()), qs(o.features.size());
  for (std::size_t f = 0; f < o.features.size(); ++f) {
    const auto spec = features::default_spec(features::parse_feature_kind(o.features[f]));
    const auto pipeline = features::FeaturePipeline::fit(fit_on, spec);
    xs[f] = pipeline.transform(train);
    if (!query.empty()) qs[f] = pipeline.transform(query);
    require(xs[f].cols() >= 1, ErrorCode::precondition, "classify: feature set \"" + o.features[f] + "\" is empty");
    if (!xs[f].zero_rows.empty())
      ctx.warn("classify: " + std::to_string(xs[f].zero_rows.size()) + " chunk(s) have no " + o.features[f] +
               " features");
  }

  learn::Hyperparams hp;
  hp.pca_components = o.pca_components;
  const std::size_t nk = o.kinds.size();
  std::vector<CellResult> cells(o.features.size() * nk);
  parallel_for(cells.size(), [&](std::size_t i) {
    const std::size_t f = i / nk;
    const auto kind = learn::parse_classifier_kind(o.kinds[i % nk]);
    const std::uint64_t cell_seed = derive_seed(seed, 1 + i);
    // Multinomial NB smooths with whole pseudo-counts, so it sees relative
    // frequencies scaled back to chunk length.
    const bool counts = kind == learn::ClassifierKind::multinomial_nb;
    const Matrix x = counts ? scale_rows(xs[f].values, train_words) : xs[f].values;
    cells[i].report = learn::cross_validate(kind, x, labels, o.folds, cell_seed, hp);
    if (!query.empty()) {
      const auto model = learn::train(kind, x, labels, hp, cell_seed);
      const Matrix q = counts ? scale_rows(qs[f].values, query_words) : qs[f].values;
      cells[i].query_predictions = learn::predict(model, q).labels;
    }
  });

  std::vector<learn::RankingRow> ranking;
  std::vector<learn::AttributionRun> runs;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& feat = o.features[i / nk];
    const std::string& kind = o.kinds[i % nk];
    const auto& r = cells[i].report;
    ctx.emit("classify/runs/" + kind + "+" + feat + ".json", learn::to_json(r, train_ids));
    for (const auto& w : r.warnings) ctx.warn("classify " + kind + "+" + feat + ": " + w);
    ranking.push_back({kind, feat, r.metrics.macro_precision, r.metrics.macro_recall, r.metrics.macro_f1});
    if (!query.empty()) runs.push_back({kind, feat, cells[i].query_predictions});
  }
  learn::sort_ranking(ranking);
  ctx.emit("classify/ranking.csv", learn::ranking_csv(ranking));

  if (query.empty()) {
    ctx.warn("classify: no query documents, attribution skipped");
    return;
  }
  const auto authors = ctx.authors();
  const std::vector<std::string> candidates(authors.begin(), authors.end());
  // One attribution table per query document.
  std::size_t offset = 0;
  for (const auto* d : ctx.queries) {
    const std::size_t n = ctx.chunks.at(d->id).size();
    std::vector<learn::AttributionRun> mine;
    for (const auto& r : runs)
      mine.push_back({r.algorithm, r.features,
                      std::vector<std::string>(r.predicted.begin() + static_cast<std::ptrdiff_t>(offset),
                                               r.predicted.begin() + static_cast<std::ptrdiff_t>(offset + n))});
    offset += n;
    const auto result = learn::attribute(mine, candidates);
    ojson j;
    j["query"] = d->id;
    const ojson body = ojson::parse(learn::to_json(result));
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    const std::string stem = "classify/attribution/" + detail::safe_name(d->id);
    ctx.emit(stem + ".csv", learn::to_csv(result));
    ctx.emit(stem + ".json", j.dump(2) + "\n");
  }
  std::vector<std::string> header{"chunk"};
  for (const auto& r : runs) header.push_back(r.algorithm + "+" + r.features);
  std::string csv = io::csv_row(header);
  for (std::size_t q = 0; q < query_ids.size(); ++q) {
    std::vector<std::string> row{query_ids[q]};
    for (const auto& r : runs) row.push_back(r.predicted[q]);
    csv += io::csv_row(row);
  }
  ctx.emit("classify/query_predictions.csv", csv);
}

void run_unmask(Context& ctx) {
  const auto& o = ctx.cfg.unmask;
  unmasking::Config ucfg;
  ucfg.n = o.n;
  ucfg.k = o.k;
  ucfg.m = o.m;
  ucfg.cv_folds = o.cv_folds;
  ucfg.remove_least = o.remove_least;
  ucfg.seed = ctx.seed_for("unmask");

  // Works too short to cross-validate are dropped from the pool up front.
  std::vector<unmasking::Work> works;
  for (const auto* d : ctx.labeled) {
    const auto& c = ctx.chunks.at(d->id);
    if (c.size() < o.cv_folds) {
      ctx.warn("unmask: work \"" + d->id + "\" dropped (" + std::to_string(c.size()) + " chunks, need " +
               std::to_string(o.cv_folds) + ")");
      continue;
    }
    works.push_back({d->id, *d->author, c});
  }
  const auto data = unmasking::build_curve_dataset(works, ucfg);
  ctx.emit("unmask/curves.csv", unmasking::curves_csv(data.curves));
  ctx.emit("unmask/curves.json", unmasking::curves_json(data.curves));

  const auto loo = unmasking::leave_one_out(data, ucfg.seed);
  double same_drop = 0.0, diff_drop = 0.0;
  for (const auto& c : data.curves) {
    const double drop = c.accuracies.front() - c.accuracies.back();
    (c.label == unmasking::kSameAuthor ? same_drop : diff_drop) += drop;
  }
  ojson ev;
  ev["pairs"] = data.curves.size();
  ev["same_author"] = data.same_author;
  ev["different_author"] = data.different_author;
  ev["mean_drop_same_author"] = data.same_author ? same_drop / static_cast<double>(data.same_author) : 0.0;
  ev["mean_drop_different_author"] =
      data.different_author ? diff_drop / static_cast<double>(data.different_author) : 0.0;
  ev["labels"] = loo.confusion.labels;
  ev["confusion"] = loo.confusion.counts;
  ev["accuracy"] = loo.metrics.accuracy;
  ev["mcc"] = loo.metrics.mcc;
  ev["macro_f1"] = loo.metrics.macro_f1;
  ev["degenerate"] = loo.metrics.degenerate;
  ctx.emit("unmask/meta_evaluation.json", ev.dump(2) + "\n");
  if (data.different_author == 0) {
    ctx.warn("unmask: no different-author pairs, verification skipped");
    return;
  }

  const auto meta = unmasking::train_meta(data, ucfg.seed);
  ojson verdicts = ojson::array();
  for (const auto* d : ctx.queries) {
    const auto& c = ctx.chunks.at(d->id);
    if (c.size() < o.cv_folds) {
      ctx.warn("unmask: query \"" + d->id + "\" skipped (" + std::to_string(c.size()) + " chunks, need " +
               std::to_string(o.cv_folds) + ")");
      continue;
    }
    const auto v = unmasking::verify(d->id, c, works, meta, ucfg);
    verdicts.push_back(ojson::parse(unmasking::to_json(v)));
    if (ctx.cfg.plots) {
      std::vector<plot::Series> series;
      for (const auto& cv : v.candidates) series.push_back({cv.candidate, cv.curve.accuracies});
      ctx.emit("unmask/" + detail::safe_name(d->id) + "_curves.svg",
               plot::line_svg(series, {"Unmasking " + d->id, "elimination step", "accuracy"}));
    }
  }
  if (ctx.queries.empty()) ctx.warn("unmask: no query documents, verification skipped");
  ctx.emit("unmask/verdicts.json", verdicts.dump(2) + "\n");
}

}  // namespace

bool RunReport::ok() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.status == "ok"; });
}

std::string to_json(const RunReport& r) {
  ojson j;
  j["tool"] = "stylo";
  j["version"] = kVersion;
  j["config"] = ojson::parse(r.config);
  j["status"] = r.ok() ? "ok" : "partial_failure";
  j["stages"] = ojson::array();
  for (const auto& s : r.stages) {
    ojson st;
    st["name"] = s.name;
    st["status"] = s.status;
    if (!s.error.empty()) st["error"] = s.error;
    st["artifacts"] = s.artifacts;
    st["warnings"] = s.warnings;
    j["stages"].push_back(st);
  }
  j["warnings"] = r.warnings;
  // Every file this run writes, including this report and the timings.
  std::vector<std::string> all;
  for (const auto& s : r.stages) all.insert(all.end(), s.artifacts.begin(), s.artifacts.end());
  all.push_back("run_report.json");
  all.push_back("timings.json");
  j["artifacts"] = all;
  return j.dump(2) + "\n";
}

RunReport analyze(const RunConfig& cfg, bool force) {
  validate(cfg);
  RunReport report;
  report.config = config_json(cfg);
  using clock = std::chrono::steady_clock;

  // Fail before any work when the previous run used another configuration.
  const auto report_path = cfg.output / "run_report.json";
  if (!force && std::filesystem::exists(report_path)) {
    ojson previous;
    try {
      previous = ojson::parse(io::read_file(report_path));
    } catch (const ojson::exception&) {
    }
    require(previous.is_object() && previous.contains("config") && previous["config"] == ojson::parse(report.config),
            ErrorCode::io,
            report_path.string() + " comes from a run with another configuration; use --force to overwrite");
  }

  // With a manifest the cache is refreshed first; unchanged files stay as they are.
  if (!cfg.manifest.empty()) {
    StageResult s;
    s.name = "ingest";
    const auto t0 = clock::now();
    const auto r = ingest(cfg, force);
    s.artifacts = r.artifacts;
    s.warnings = r.warnings;
    s.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.stages.push_back(std::move(s));
  }

  Context ctx{cfg, force, load_cache(cfg.output), {}, {}, {}, nullptr};
  for (const auto& d : ctx.cache.documents) {
    (d.author ? ctx.labeled : ctx.queries).push_back(&d);
    ctx.chunks[d.id] = corpus::segment_chunks(d, ctx.cache.min_chunk_words);
  }
  if (ctx.queries.empty()) report.warnings.push_back("corpus has no query (unlabeled) documents");

  const std::map<std::string, void (*)(Context&)> stages{{"delta", run_delta},
                                                          {"ncd", run_ncd},
                                                          {"projection", run_projection},
                                                          {"classify", run_classify},
                                                          {"unmask", run_unmask}};
  for (const auto& name : kAnalysisOrder) {
    if (std::find(cfg.analyses.begin(), cfg.analyses.end(), name) == cfg.analyses.end()) continue;
    StageResult s;
    s.name = name;
    ctx.stage = &s;
    const auto t0 = clock::now();
    try {
      stages.at(name)(ctx);
    } catch (const std::exception& e) {
      s.status = "failed";
      s.error = e.what();
    }
    s.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.stages.push_back(std::move(s));
  }

  io::write_artifact(report_path, to_json(report), force);
  ojson t = ojson::object();
  for (const auto& s : report.stages) t[s.name] = s.seconds;
  io::write_file(cfg.output / "timings.json", t.dump(2) + "\n");
  return report;
}

}  // namespace stylo::app
