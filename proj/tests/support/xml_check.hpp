#pragma once

// Minimal XML well-formedness check: matched tags, quoted attributes, one root.

#include <cctype>
#include <string>
#include <vector>

namespace testsupport {

inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
  const auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 2, "<?") == 0) {
      const std::size_t end = text.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", i);
      if (end == std::string::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    const std::size_t end = text.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = text.substr(i + 1, end - i - 1);
    i = end + 1;
    const bool closing = !tag.empty() && tag.front() == '/';
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (closing) tag.erase(0, 1);
    if (self_closing) tag.pop_back();
    std::string name;
    for (const char c : tag) {
      if (std::isspace(static_cast<unsigned char>(c))) break;
      name.push_back(c);
    }
    if (name.empty()) return fail("empty tag name");
    if (closing) {
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
    } else {
      if (stack.empty()) {
        if (++roots > 1) return fail("multiple root elements");
      }
      if (!self_closing) stack.push_back(name);
    }
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (roots != 1) return fail("expected exactly one root element");
  return true;
}

inline int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace testsupport
