#include "stylo/data.hpp"

#include <json.hpp>

#include "stylo/unicode.hpp"

namespace stylo::data {

namespace detail {
extern const std::string_view kStopwordsEs;
extern const std::string_view kAbbreviationsEs;
}  // namespace detail

std::string_view stopwords_es_text() { return detail::kStopwordsEs; }
std::string_view abbreviations_es_json() { return detail::kAbbreviationsEs; }

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') out.push_back(unicode::fold(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> default_stopwords() { return parse_word_list(stopwords_es_text()); }

std::map<std::string, std::string> default_abbreviations() {
  std::map<std::string, std::string> table;
  const auto root = nlohmann::json::parse(abbreviations_es_json());
  for (auto it = root.begin(); it != root.end(); ++it) table[it.key()] = it.value().get<std::string>();
  return table;
}

}  // namespace stylo::data
