#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/parallel.hpp"

namespace stylo::features {

std::vector<std::string> Vocabulary::names() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.term);
  return out;
}

Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, const Unit& unit, int mfw,
                            double culling, const std::vector<std::string>& allowed) {
  require(mfw >= 1, ErrorCode::invalid_argument, "mfw must be >= 1");
  require(culling >= 0.0 && culling <= 100.0, ErrorCode::invalid_argument,
          "culling must be a percentage in [0, 100]");
  require(!streams.empty(), ErrorCode::precondition, "build_vocabulary needs at least one stream");

  using Counts = std::unordered_map<std::string, std::size_t>;
  std::vector<Counts> per_stream(streams.size());
  const std::unordered_set<std::string> allow(allowed.begin(), allowed.end());
  parallel_for(streams.size(), [&](std::size_t i) {
    Counts& c = per_stream[i];
    for (auto& t : unit_terms(streams[i], unit))
      if (allow.empty() || allow.count(t)) ++c[std::move(t)];
  });

  // Sequential merge; document frequency counts distinct source documents.
  std::map<std::string, std::size_t> doc_index;
  for (const auto& s : streams) doc_index.emplace(s.document_id(), doc_index.size());
  std::unordered_map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> merged;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const std::size_t doc = doc_index.at(streams[i].document_id());
    for (const auto& [term, n] : per_stream[i]) {
      auto& entry = merged[term];
      entry.first += n;
      if (entry.second.empty() || entry.second.back() != doc) entry.second.push_back(doc);
    }
  }

  Vocabulary v;
  v.unit = unit;
  v.culling_applied = culling;
  v.document_count = doc_index.size();
  const double docs = static_cast<double>(v.document_count);
  for (auto& [term, entry] : merged) {
    auto& ds = entry.second;
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    const double pct = 100.0 * static_cast<double>(ds.size()) / docs;
    if (pct + 1e-9 < culling) continue;
    v.terms.push_back({term, entry.first, ds.size()});
  }
  std::sort(v.terms.begin(), v.terms.end(), [](const VocabTerm& a, const VocabTerm& b) {
    if (a.corpus_frequency != b.corpus_frequency) return a.corpus_frequency > b.corpus_frequency;
    return a.term < b.term;
  });
  if (v.terms.size() > static_cast<std::size_t>(mfw)) v.terms.resize(static_cast<std::size_t>(mfw));
  return v;
}

Matrix count_matrix(const std::vector<TokenStream>& streams, const Vocabulary& vocab) {
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < vocab.terms.size(); ++j) column.emplace(vocab.terms[j].term, j);
  Matrix m(streams.size(), vocab.terms.size());
  parallel_for(streams.size(), [&](std::size_t i) {
    auto row = m.row(i);
    for (const auto& t : unit_terms(streams[i], vocab.unit)) {
      auto it = column.find(t);
      if (it != column.end()) row[it->second] += 1.0;
    }
  });
  return m;
}

}  // namespace stylo::features
