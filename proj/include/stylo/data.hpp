#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stylo::data {

/// Contents of data/stopwords_es.txt and data/abbreviations_es.json, compiled
/// into the library.
std::string_view stopwords_es_text();
std::string_view abbreviations_es_json();

/// One entry per non-empty, non-comment line, case-folded.
std::vector<std::string> parse_word_list(std::string_view text);

std::vector<std::string> default_stopwords();
std::map<std::string, std::string> default_abbreviations();

}  // namespace stylo::data
