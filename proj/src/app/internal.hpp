#pragma once

#include <string>

namespace stylo::app::detail {

/// Maps an id onto [A-Za-z0-9._-] for use in file names.
inline std::string safe_name(const std::string& id) {
  std::string s;
  for (char ch : id) {
    const bool safe = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '-' || ch == '_' || ch == '.';
    s += safe ? ch : '_';
  }
  if (s.empty() || s[0] == '.') s = "_" + s;
  return s;
}

}  // namespace stylo::app::detail
