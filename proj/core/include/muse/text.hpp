#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace muse::text {

std::string lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lowercase words split on whitespace and punctuation other than '/', '.', '-' inside numbers.
std::vector<std::string> words(std::string_view s);

/// Irregular plural forms, loaded from a `singular|plural|...` list.
class Singularizer {
 public:
  Singularizer() = default;
  void add(const std::string& singular, const std::string& plural);
  /// Folds a single word; multiword phrases fold only their last word.
  std::string operator()(std::string_view word) const;
  std::string phrase(std::string_view phrase) const;

 private:
  std::map<std::string, std::string, std::less<>> exceptions_;
};

/// lowercase + trim + collapse whitespace + singularize last word.
std::string canonical_name(std::string_view raw, const Singularizer& singular);

}  // namespace muse::text
