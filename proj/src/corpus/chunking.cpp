#include <algorithm>
#include <cmath>

#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/rng.hpp"
#include "stylo/text.hpp"

namespace stylo::corpus {

std::string Chunk::sample_id() const {
  std::string id = doc_id + "#" + std::to_string(index);
  if (replica > 0) id += "~r" + std::to_string(replica);
  return id;
}

std::vector<Chunk> segment_chunks(const Document& doc, int min_words) {
  require(min_words >= 1, ErrorCode::invalid_argument, "segment_chunks: min_words must be >= 1");
  require(doc.canonical_text.has_value(), ErrorCode::precondition,
          "document \"" + doc.id + "\" has not been canonicalized");
  const std::string& canonical = *doc.canonical_text;

  struct Para {
    std::string_view text;
    std::vector<std::string> words;
  };
  std::vector<Para> paras;
  std::size_t total = 0;
  for (auto p : text::paragraphs(canonical)) {
    paras.push_back({p, text::words(p)});
    total += paras.back().words.size();
  }
  require(total > 0, ErrorCode::empty_document, "document \"" + doc.id + "\" has no words");

  std::vector<Chunk> chunks;
  Chunk current;
  auto add_para = [](Chunk& c, const Para& p) {
    if (!c.text.empty()) c.text += "\n\n";
    c.text.append(p.text);
    c.tokens.insert(c.tokens.end(), p.words.begin(), p.words.end());
    c.word_count += p.words.size();
  };
  for (const auto& p : paras) {
    add_para(current, p);
    if (current.word_count >= static_cast<std::size_t>(min_words)) {
      current.doc_id = doc.id;
      current.index = chunks.size();
      chunks.push_back(std::move(current));
      current = Chunk{};
    }
  }
  if (!current.text.empty()) {
    if (chunks.empty()) {
      current.doc_id = doc.id;
      current.index = 0;
      current.short_flag = true;
      chunks.push_back(std::move(current));
    } else {
      Chunk& last = chunks.back();
      last.text += "\n\n" + current.text;
      last.tokens.insert(last.tokens.end(), current.tokens.begin(), current.tokens.end());
      last.word_count += current.word_count;
    }
  }
  return chunks;
}

std::vector<AuthorProfile> build_profiles(const std::vector<Document>& docs) {
  std::vector<AuthorProfile> profiles;
  for (const auto& d : docs) {
    require(d.author.has_value(), ErrorCode::unlabeled_document,
            "build_profiles: document \"" + d.id + "\" has no author");
    require(d.canonical_text.has_value(), ErrorCode::precondition,
            "build_profiles: document \"" + d.id + "\" has not been canonicalized");
    auto it = std::find_if(profiles.begin(), profiles.end(),
                           [&](const AuthorProfile& p) { return p.author == *d.author; });
    if (it == profiles.end()) {
      profiles.push_back({*d.author, *d.canonical_text, {d.id}});
    } else {
      it->concatenated_text += "\n\n" + *d.canonical_text;
      it->source_doc_ids.push_back(d.id);
    }
  }
  return profiles;
}

BalanceBounds balance_bounds(const ChunksByAuthor& chunks, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::invalid_argument,
          "balance_chunks: fraction must be in (0, 1)");
  require(chunks.size() >= 2, ErrorCode::precondition,
          "balance_chunks: need at least two authors");
  std::size_t total = 0;
  for (const auto& [_, v] : chunks) total += v.size();
  BalanceBounds b;
  b.mean = static_cast<double>(total) / static_cast<double>(chunks.size());
  // Small epsilon keeps exact products (e.g. 55 * 1.1) on the right side of
  // the rounding.
  b.ceiling = static_cast<std::size_t>(std::floor(b.mean * (1.0 + fraction) + 1e-9));
  b.floor = static_cast<std::size_t>(std::ceil(b.mean * (1.0 - fraction) - 1e-9));
  b.ceiling = std::max(b.ceiling, b.floor);
  return b;
}

ChunksByAuthor balance_chunks(const ChunksByAuthor& chunks, double fraction, std::uint64_t seed) {
  const BalanceBounds b = balance_bounds(chunks, fraction);
  ChunksByAuthor out;
  std::uint64_t stream = 0;
  for (const auto& [author, list] : chunks) {
    Rng rng(derive_seed(seed, stream++));
    if (list.size() > b.ceiling) {
      std::vector<std::size_t> idx(list.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      shuffle(idx, rng);
      idx.resize(b.ceiling);
      std::sort(idx.begin(), idx.end());
      auto& dst = out[author];
      for (auto i : idx) dst.push_back(list[i]);
    } else if (list.size() < b.floor && !list.empty()) {
      auto& dst = out[author];
      dst = list;
      std::vector<std::size_t> copies(list.size(), 0);
      while (dst.size() < b.floor) {
        const std::size_t pick = uniform_index(rng, list.size());
        Chunk c = list[pick];
        c.replica = ++copies[pick];
        dst.push_back(std::move(c));
      }
    } else {
      out[author] = list;
    }
  }
  return out;
}

}  // namespace stylo::corpus
