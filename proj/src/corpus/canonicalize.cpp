#include <algorithm>
#include <set>

#include <unicode/uchar.h>

#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/text.hpp"
#include "stylo/unicode.hpp"

namespace stylo::corpus {

namespace {

using u32 = std::u32string;

bool is_hyphen(char32_t c) {
  switch (c) {
    case U'-': case U'‐': case U'‑': case U'‒': case U'–':
    case U'—': case U'―': case U'−': case U'﹘': case U'﹣':
    case U'－': case U'­':
      return true;
    default:
      return false;
  }
}

bool is_horizontal_space(char32_t c) { return c != U'\n' && unicode::is_space(c); }

std::vector<u32> split_lines(const u32& s) {
  std::vector<u32> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == U'\n') {
      lines.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return lines;
}

u32 join_lines(const std::vector<u32>& lines) {
  u32 out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back(U'\n');
    out += lines[i];
  }
  return out;
}

u32 trim(const u32& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && unicode::is_space(s[b])) ++b;
  while (e > b && unicode::is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

u32 strip_spans(const u32& s, const Delimiters& d, bool keep_content) {
  const u32 open = unicode::to_u32(d.open);
  const u32 close = unicode::to_u32(d.close);
  if (open.empty() || close.empty()) return s;
  u32 out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t a = s.find(open, pos);
    if (a == u32::npos) break;
    const std::size_t b = s.find(close, a + open.size());
    if (b == u32::npos) break;
    out.append(s, pos, a - pos);
    if (keep_content) out.append(s, a + open.size(), b - a - open.size());
    pos = b + close.size();
  }
  out.append(s, pos, u32::npos);
  return out;
}

bool is_page_number_line(const u32& line) {
  std::string folded = unicode::fold(unicode::to_utf8(trim(line)));
  if (folded.empty()) return false;
  for (const char* prefix : {"pág.", "pag.", "fol.", "p.", "f."}) {
    if (folded.rfind(prefix, 0) == 0) {
      folded = folded.substr(std::string(prefix).size());
      break;
    }
  }
  while (!folded.empty() && folded.front() == ' ') folded.erase(folded.begin());
  if (!folded.empty() && (folded.back() == 'r' || folded.back() == 'v')) folded.pop_back();
  return !folded.empty() &&
         std::all_of(folded.begin(), folded.end(), [](char c) { return c >= '0' && c <= '9'; });
}

u32 strip_header_lines(const u32& s, const CanonicalRules& rules) {
  std::vector<u32> kept;
  for (const auto& line : split_lines(s)) {
    const std::string t = unicode::to_utf8(trim(line));
    bool drop = rules.strip_page_numbers && is_page_number_line(line);
    for (const auto& prefix : rules.header_line_prefixes)
      drop = drop || (!prefix.empty() && t.rfind(prefix, 0) == 0);
    if (!drop) kept.push_back(line);
  }
  return join_lines(kept);
}

// letter + hyphen variant + (nothing | line break) + letter -> joined word.
u32 join_split_words(const u32& s) {
  u32 out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    if (is_hyphen(c) && !out.empty() && text::is_word_char(out.back())) {
      std::size_t j = i + 1;
      while (j < s.size() && is_horizontal_space(s[j])) ++j;
      bool ok = false;
      if (j < s.size() && s[j] == U'\n') {
        ++j;
        while (j < s.size() && is_horizontal_space(s[j])) ++j;
        ok = j < s.size() && unicode::is_letter(s[j]);
      } else if (j == i + 1) {
        ok = j < s.size() && unicode::is_letter(s[j]);
      }
      if (ok) {
        i = j;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

u32 drop_control_chars(const u32& s) {
  u32 out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (c == U'\r') {
      if (i + 1 < s.size() && s[i + 1] == U'\n') continue;
      out.push_back(U'\n');
      continue;
    }
    if (c == U'\n') {
      out.push_back(c);
      continue;
    }
    if (c == U'\t') {
      out.push_back(U' ');
      continue;
    }
    if (c == U'�') continue;
    const int8_t type = u_charType(static_cast<UChar32>(c));
    if (type == U_CONTROL_CHAR || type == U_FORMAT_CHAR || type == U_UNASSIGNED ||
        type == U_PRIVATE_USE_CHAR)
      continue;
    out.push_back(c);
  }
  return out;
}

u32 collapse_repeated_punctuation(const u32& s) {
  u32 out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (!out.empty() && out.back() == c && u_ispunct(static_cast<UChar32>(c))) continue;
    out.push_back(c);
  }
  return out;
}

u32 normalize_hyphens(const u32& s) {
  u32 out = s;
  for (char32_t& c : out)
    if (is_hyphen(c)) c = U'-';
  return out;
}

u32 delete_free_numerals(const u32& s) {
  u32 out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const bool starts = unicode::is_digit(s[i]) &&
                        (out.empty() || (!text::is_word_char(out.back()) && !unicode::is_digit(out.back())));
    if (!starts) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < s.size()) {
      if (unicode::is_digit(s[j])) {
        ++j;
      } else if ((s[j] == U'.' || s[j] == U',') && j + 1 < s.size() && unicode::is_digit(s[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    if (j < s.size() && text::is_word_char(s[j])) {
      out.append(s, i, j - i);  // glued to a word: not free-standing
    }
    i = j;
  }
  return out;
}

u32 expand_abbreviations(const u32& s, const std::map<std::string, std::string>& table) {
  if (table.empty()) return s;
  std::vector<std::pair<u32, u32>> entries;
  for (const auto& [k, v] : table) entries.emplace_back(unicode::to_u32(k), unicode::to_u32(v));
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  u32 out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const bool boundary_before = i == 0 || !text::is_word_char(s[i - 1]);
    bool replaced = false;
    if (boundary_before) {
      for (const auto& [key, value] : entries) {
        if (s.compare(i, key.size(), key) != 0) continue;
        const std::size_t end = i + key.size();
        const bool boundary_after = end >= s.size() || !text::is_word_char(s[end]) ||
                                    !text::is_word_char(key.back());
        if (!boundary_after) continue;
        out += value;
        i = end;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(s[i++]);
  }
  return out;
}

bool all_caps(const std::string& line) {
  bool any_letter = false;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char32_t c = unicode::next(line, pos);
    if (!unicode::is_letter(c)) continue;
    any_letter = true;
    if (u_islower(static_cast<UChar32>(c))) return false;
  }
  return any_letter;
}

u32 strip_heading_lines(const u32& s, const CanonicalRules& rules) {
  std::set<std::string> keywords;
  for (const auto& k : rules.heading_keywords) keywords.insert(unicode::fold(k));
  std::set<std::string> ends;
  for (const auto& e : rules.end_marks) {
    std::string joined;
    for (const auto& w : text::words(e)) joined += (joined.empty() ? "" : " ") + w;
    ends.insert(joined);
  }

  std::vector<u32> kept;
  for (const auto& line : split_lines(s)) {
    const u32 t = trim(line);
    if (!t.empty() && t.front() == U'#') continue;
    const std::string utf8 = unicode::to_utf8(t);
    const auto ws = text::words(utf8);
    if (!ws.empty() && keywords.count(ws.front()) && (ws.size() <= 4 || all_caps(utf8))) continue;
    std::string joined;
    for (const auto& w : ws) joined += (joined.empty() ? "" : " ") + w;
    if (!joined.empty() && ends.count(joined)) continue;
    kept.push_back(line);
  }
  return join_lines(kept);
}

u32 strip_speakers(const u32& s, const Delimiters& d, bool play) {
  if (play) return strip_spans(s, d, false);
  return strip_spans(s, d, true);
}

// Collapses horizontal whitespace, trims lines and reduces every run of
// blank lines to a single paragraph break.
u32 normalize_whitespace(const u32& s) {
  std::vector<u32> lines;
  for (const auto& raw : split_lines(s)) {
    u32 line;
    for (char32_t c : raw) {
      if (unicode::is_space(c)) {
        if (!line.empty() && line.back() != U' ') line.push_back(U' ');
      } else {
        line.push_back(c);
      }
    }
    lines.push_back(trim(line));
  }
  u32 out;
  bool pending_break = false;
  for (const auto& line : lines) {
    if (line.empty()) {
      pending_break = !out.empty();
      continue;
    }
    if (!out.empty()) out += pending_break ? U"\n\n" : U"\n";
    pending_break = false;
    out += line;
  }
  return out;
}

u32 apply_rules_once(const u32& input, const CanonicalRules& rules, bool play) {
  u32 s = input;
  for (const auto& d : rules.annotation_spans) s = strip_spans(s, d, false);
  s = strip_header_lines(s, rules);
  for (const auto& d : rules.citation_spans) s = strip_spans(s, d, false);
  s = join_split_words(s);
  s = drop_control_chars(s);
  s = collapse_repeated_punctuation(s);
  s = normalize_hyphens(s);
  s = delete_free_numerals(s);
  s = expand_abbreviations(s, rules.abbreviations);
  s = strip_heading_lines(s, rules);
  s = strip_speakers(s, rules.speaker_span, play);
  return normalize_whitespace(s);
}

}  // namespace

std::string canonicalize_text(const std::string& raw, const CanonicalRules& rules, bool play) {
  u32 current = unicode::to_u32(raw);
  // Later rules can expose new matches for earlier ones (e.g. a deleted
  // numeral leaves "!!"), so iterate to a fixed point.
  for (int pass = 0; pass < 8; ++pass) {
    u32 next = apply_rules_once(current, rules, play);
    if (next == current) break;
    current = std::move(next);
  }
  return unicode::to_utf8(current);
}

Document canonicalize(const Document& doc, const CanonicalRules& rules) {
  require(!doc.raw_text.empty(), ErrorCode::precondition,
          "document \"" + doc.id + "\": raw_text is empty");
  Document out = doc;
  out.canonical_text = canonicalize_text(doc.raw_text, rules, doc.play);
  return out;
}

}  // namespace stylo::corpus
