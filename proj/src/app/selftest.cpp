#include <cmath>
#include <functional>

#include "stylo/app.hpp"
#include "stylo/compression.hpp"
#include "stylo/distance.hpp"
#include "stylo/features.hpp"
#include "stylo/io.hpp"
#include "stylo/learn.hpp"
#include "stylo/rng.hpp"
#include "stylo/synth.hpp"

namespace stylo::app {

namespace {

SelftestCheck run(const std::string& name, const std::function<std::string()>& body) {
  SelftestCheck c{name, false, {}};
  try {
    c.detail = body();
    c.passed = c.detail.empty();
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  return c;
}

}  // namespace

std::vector<SelftestCheck> selftest() {
  std::vector<SelftestCheck> out;
  out.push_back(run("compressors round-trip", [] {
    const std::string text(5000, 'a');
    for (const auto& c : {compression::make_bzip2(), compression::make_deflate()})
      if (c->decompress(c->compress(text), text.size()) != text) return c->id() + " round-trip differs";
    return std::string();
  }));
  out.push_back(run("ncd formula", [] {
    const double v = compression::ncd_from_sizes(100, 120, 150);
    return std::abs(v - 50.0 / 120.0) < 1e-12 ? std::string() : "got " + io::format_double(v);
  }));
  out.push_back(run("delta axioms", [] {
    Rng rng(7);
    for (auto k : distance::all_delta_kinds()) {
      std::vector<double> a(20), b(20);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = uniform_real(rng) + 0.01;
        b[i] = uniform_real(rng) + 0.01;
      }
      const double ab = distance::delta(a, b, k), ba = distance::delta(b, a, k);
      if (std::abs(ab - ba) > 1e-12 || ab < 0.0 || distance::delta(a, a, k) != 0.0)
        return std::string(distance::to_string(k)) + " violates an axiom";
    }
    return std::string();
  }));
  out.push_back(run("metrics", [] {
    const auto m = learn::metrics(learn::confusion({"a", "a", "b", "b"}, {"a", "a", "b", "b"}));
    return m.mcc == 1.0 && m.accuracy == 1.0 ? std::string() : "perfect prediction not scored 1";
  }));
  out.push_back(run("synthetic attribution", [] {
    synth::CorpusSpec spec;
    spec.authors = 2;
    spec.works_per_author = 6;
    spec.words_per_work = 600;
    spec.seed = 11;
    std::vector<features::TokenStream> streams;
    std::vector<std::string> labels;
    for (const auto& d : synth::make_corpus(spec)) {
      streams.push_back(features::tokenize(d.raw_text, d.id));
      labels.push_back(*d.author);
    }
    const auto fm = features::FeaturePipeline::fit(streams, features::default_spec(features::FeatureKind::bow))
                        .transform(streams);
    const auto r = learn::cross_validate(learn::ClassifierKind::ridge, fm.values, labels, 3, 1);
    return r.metrics.accuracy >= 0.9 ? std::string() : "accuracy " + io::format_double(r.metrics.accuracy);
  }));
  return out;
}

}  // namespace stylo::app
