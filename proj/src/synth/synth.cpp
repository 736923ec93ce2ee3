#include "stylo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "stylo/data.hpp"
#include "stylo/error.hpp"
#include "stylo/io.hpp"
#include "stylo/rng.hpp"

namespace stylo::synth {

namespace {

const std::vector<std::string> kOnsets{"",  "b", "c", "d", "f", "g", "l", "m", "n", "p",
                                       "r", "s", "t", "v", "ch", "ll", "br", "tr", "pl", "gr"};
const std::vector<std::string> kVowels{"a", "e", "i", "o", "u", "a", "e", "o", "á", "é", "í", "ó"};
const std::vector<std::string> kCodas{"", "", "", "n", "s", "r", "l", "d"};

double normal(Rng& rng) {
  // Box-Muller on the portable uniform source.
  const double u1 = 1.0 - uniform_real(rng);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform_real(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> to_cdf(const std::vector<double>& w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cdf[i] = acc += w[i];
  return cdf;
}

std::string capitalize(const std::string& w) {
  std::string out = w;
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string author_name(std::size_t i) {
  std::string name;
  do {
    name.insert(name.begin(), static_cast<char>('A' + i % 26));
    i /= 26;
  } while (i-- > 0);
  return name;
}

}  // namespace

Generator::Generator(Config config, std::uint64_t seed) : config_(config), seed_(seed) {
  require(config_.vocabulary >= 50, ErrorCode::invalid_argument, "synthetic vocabulary must be >= 50");
  Rng rng(derive_seed(seed, 0x1e));
  // Function words first so they dominate the head of the distribution, as
  // in real Spanish prose.
  std::set<std::string> used;
  for (const auto& w : data::default_stopwords()) {
    if (lexicon_.size() >= std::min<std::size_t>(120, config_.vocabulary / 4)) break;
    if (used.insert(w).second) lexicon_.push_back(w);
  }
  const auto stop = data::default_stopwords();
  used.insert(stop.begin(), stop.end());
  while (lexicon_.size() < config_.vocabulary) {
    std::string w;
    const std::size_t syllables = 2 + uniform_index(rng, 3);
    for (std::size_t s = 0; s < syllables; ++s)
      w += kOnsets[uniform_index(rng, kOnsets.size())] + kVowels[uniform_index(rng, kVowels.size())];
    w += kCodas[uniform_index(rng, kCodas.size())];
    if (used.insert(w).second) lexicon_.push_back(w);
  }
  base_.resize(lexicon_.size());
  for (std::size_t i = 0; i < base_.size(); ++i)
    base_[i] = 1.0 / std::pow(static_cast<double>(i + 1), config_.zipf_exponent);
}

Author Generator::author(const std::string& name, std::uint64_t stream) const {
  Rng rng(derive_seed(seed_, 0x100 + stream));
  Author a;
  a.name = name;
  std::vector<double> w = base_;
  for (double& x : w) x *= std::exp(config_.author_sigma * normal(rng));
  a.cdf = to_cdf(w);
  a.mean_sentence = 10.0 + 12.0 * uniform_real(rng);
  a.comma_rate = 0.03 + 0.10 * uniform_real(rng);
  a.semicolon_rate = 0.02 * uniform_real(rng);
  a.question_rate = 0.15 * uniform_real(rng);
  a.exclaim_rate = 0.10 * uniform_real(rng);
  return a;
}

std::string Generator::work(const Author& a, std::size_t words, std::uint64_t stream) const {
  Rng rng(derive_seed(seed_, 0x10000 + stream));
  // Topical words come from outside the most frequent band.
  const std::size_t head = std::min<std::size_t>(300, lexicon_.size() / 2);
  std::vector<std::size_t> topic;
  while (topic.size() < config_.topic_words) {
    const std::size_t t = head + uniform_index(rng, lexicon_.size() - head);
    if (std::find(topic.begin(), topic.end(), t) == topic.end()) topic.push_back(t);
  }

  std::string out;
  std::size_t written = 0, in_paragraph = 0;
  while (written < words) {
    const double span = std::max(2.0, a.mean_sentence);
    std::size_t len = 2 + static_cast<std::size_t>(uniform_real(rng) * (2.0 * span - 3.0));
    len = std::min(len, words - written + 1);
    const double kind = uniform_real(rng);
    const bool question = kind < a.question_rate;
    const bool exclaim = !question && kind < a.question_rate + a.exclaim_rate;
    std::string sentence = question ? "¿" : exclaim ? "¡" : "";
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t idx = (!topic.empty() && uniform_real(rng) < config_.topic_rate)
                                  ? topic[uniform_index(rng, topic.size())]
                                  : sample_cdf(a.cdf, rng);
      sentence += i == 0 && !question && !exclaim ? capitalize(lexicon_[idx]) : lexicon_[idx];
      if (i + 1 < len) {
        const double p = uniform_real(rng);
        if (p < a.comma_rate) sentence += ",";
        else if (p < a.comma_rate + a.semicolon_rate) sentence += ";";
        sentence += " ";
      }
    }
    sentence += question ? "?" : exclaim ? "!" : ".";
    written += len;
    in_paragraph += len;
    if (!out.empty()) out += in_paragraph == len ? "\n\n" : " ";
    out += sentence;
    if (in_paragraph >= config_.paragraph_words) in_paragraph = 0;
  }
  return out + "\n";
}

std::vector<corpus::Document> make_corpus(const CorpusSpec& spec) {
  require(spec.authors >= 1 && spec.works_per_author >= 1, ErrorCode::invalid_argument,
          "synthetic corpus needs authors and works");
  Generator gen(spec.config, spec.seed);
  std::vector<corpus::Document> docs;
  std::uint64_t stream = 0;
  for (std::size_t a = 0; a < spec.authors; ++a) {
    const Author author = gen.author(author_name(a), a);
    const std::size_t total = spec.works_per_author + spec.queries_per_author;
    for (std::size_t k = 0; k < total; ++k) {
      corpus::Document d;
      const bool query = k >= spec.works_per_author;
      const std::size_t ordinal = query ? k - spec.works_per_author + 1 : k + 1;
      d.id = author.name + (query ? "_q" : "_w") + std::to_string(ordinal);
      d.author = author.name;
      d.title = "Obra " + d.id;
      if (query) d.variant_tag = "query";
      d.raw_text = gen.work(author, spec.words_per_work, stream++);
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

std::filesystem::path write_corpus(const std::vector<corpus::Document>& docs,
                                   const std::filesystem::path& dir, int min_chunk_words) {
  nlohmann::ordered_json manifest;
  manifest["min_chunk_words"] = min_chunk_words;
  manifest["documents"] = nlohmann::ordered_json::array();
  for (const auto& d : docs) {
    const std::string rel = "texts/" + d.id + ".txt";
    io::write_file(dir / rel, d.raw_text);
    nlohmann::ordered_json e;
    e["id"] = d.id;
    e["path"] = rel;
    if (d.author && d.variant_tag != std::optional<std::string>("query")) e["author"] = *d.author;
    e["title"] = d.title;
    if (d.variant_tag) e["variant_tag"] = *d.variant_tag;
    manifest["documents"].push_back(e);
  }
  const auto path = dir / "manifest.json";
  io::write_file(path, manifest.dump(2) + "\n");
  return path;
}

}  // namespace stylo::synth
