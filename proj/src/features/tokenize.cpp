#include <algorithm>
#include <cctype>

#include "stylo/error.hpp"
#include "stylo/features.hpp"
#include "stylo/text.hpp"
#include "stylo/unicode.hpp"

namespace stylo::features {

namespace {

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?" || t == "…"; }

void add_punctuation(std::string_view s, std::size_t begin, std::size_t end, std::vector<Token>& out) {
  std::size_t pos = begin;
  while (pos < end) {
    const std::size_t at = pos;
    const char32_t cp = unicode::next(s, pos);
    if (unicode::is_space(cp)) continue;
    std::string t(s.substr(at, pos - at));
    out.push_back({t, TokenKind::punctuation, t});
  }
}

}  // namespace

TokenStream tokenize(std::string_view text, std::string id, std::string document) {
  TokenStream stream;
  stream.id = std::move(id);
  stream.document = std::move(document);
  std::vector<Token> raw;
  std::size_t cursor = 0;
  for (const auto& w : text::word_spans(text)) {
    add_punctuation(text, cursor, w.begin, raw);
    const std::string_view word = text.substr(w.begin, w.end - w.begin);
    raw.push_back({std::string(word), TokenKind::word, unicode::fold(word)});
    cursor = w.end;
  }
  add_punctuation(text, cursor, text.size(), raw);

  stream.tokens.reserve(raw.size() + raw.size() / 8);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const bool terminal = raw[i].kind == TokenKind::punctuation && is_terminal(raw[i].text);
    stream.tokens.push_back(std::move(raw[i]));
    if (!terminal) continue;
    const bool run_continues = i + 1 < raw.size() && raw[i + 1].kind == TokenKind::punctuation &&
                               is_terminal(raw[i + 1].text);
    if (!run_continues) stream.tokens.push_back({"", TokenKind::sentence_end, ""});
  }
  return stream;
}

void attach_tags(TokenStream& stream, std::string_view sidecar) {
  std::vector<std::string> tags;
  std::size_t pos = 0;
  while (pos < sidecar.size()) {
    while (pos < sidecar.size() && std::isspace(static_cast<unsigned char>(sidecar[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < sidecar.size() && !std::isspace(static_cast<unsigned char>(sidecar[pos]))) ++pos;
    if (pos > start) tags.emplace_back(sidecar.substr(start, pos - start));
  }
  const auto expected = static_cast<std::size_t>(
      std::count_if(stream.tokens.begin(), stream.tokens.end(),
                    [](const Token& t) { return t.kind != TokenKind::sentence_end; }));
  require(tags.size() == expected, ErrorCode::dimension_mismatch,
          "tag sidecar for \"" + stream.id + "\" has " + std::to_string(tags.size()) +
              " tags but the text has " + std::to_string(expected) + " tokens");
  stream.tags = std::move(tags);
}

std::vector<std::vector<std::string>> sentences(const TokenStream& stream) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  for (const auto& t : stream.tokens) {
    if (t.kind == TokenKind::word) {
      current.push_back(t.norm);
    } else if (t.kind == TokenKind::sentence_end && !current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> unit_terms(const TokenStream& stream, const Unit& unit) {
  require(unit.n_min >= 1 && unit.n_min <= unit.n_max, ErrorCode::invalid_argument,
          "n-gram range must satisfy 1 <= min <= max");
  std::vector<std::string> out;
  switch (unit.kind) {
    case UnitKind::word:
      for (const auto& t : stream.tokens)
        if (t.kind == TokenKind::word) out.push_back(t.norm);
      break;
    case UnitKind::tag:
      require(stream.tags.has_value(), ErrorCode::missing_annotation,
              "sample \"" + stream.id + "\" has no POS tag sidecar");
      out = *stream.tags;
      break;
    case UnitKind::word_ngram:
      for (const auto& s : sentences(stream)) {
        for (int n = unit.n_min; n <= unit.n_max; ++n) {
          const auto len = static_cast<std::size_t>(n);
          for (std::size_t i = 0; i + len <= s.size(); ++i) {
            std::string g = s[i];
            for (std::size_t j = 1; j < len; ++j) g += " " + s[i + j];
            out.push_back(std::move(g));
          }
        }
      }
      break;
    case UnitKind::char_ngram:
      for (const auto& s : sentences(stream)) {
        std::string line(1, kBoundary);
        for (const auto& w : s) {
          line += w;
          line.push_back(kBoundary);
        }
        // Byte offset of every code point, plus the end.
        std::vector<std::size_t> starts;
        for (std::size_t pos = 0; pos < line.size();) {
          starts.push_back(pos);
          unicode::next(line, pos);
        }
        starts.push_back(line.size());
        const std::size_t cps = starts.size() - 1;
        for (int n = unit.n_min; n <= unit.n_max; ++n) {
          const auto len = static_cast<std::size_t>(n);
          for (std::size_t i = 0; i + len <= cps; ++i)
            out.emplace_back(line.substr(starts[i], starts[i + len] - starts[i]));
        }
      }
      break;
  }
  return out;
}

}  // namespace stylo::features
