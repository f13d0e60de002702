#include "muse/text.hpp"

#include <algorithm>
#include <cctype>

namespace muse::text {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    // trailing periods end sentences, not tokens ("1." is not a decimal either)
    while (!cur.empty() && cur.back() == '.') cur.pop_back();
    while (!cur.empty() && cur.front() == '.') cur.erase(cur.begin());
    if (!cur.empty()) out.push_back(lower(cur));
    cur.clear();
  };
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c) && ch != '/' && ch != '.' && ch != '-' && ch != '\'') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

void Singularizer::add(const std::string& singular, const std::string& plural) {
  exceptions_[lower(plural)] = lower(singular);
  // a singular form listed on its own line must stay as-is
  exceptions_.emplace(lower(singular), lower(singular));
}

namespace {
bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}
bool all_alpha(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c) || c == '-'; });
}
}  // namespace

std::string Singularizer::operator()(std::string_view word) const {
  std::string w = lower(word);
  if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
  if (w.size() <= 3 || !all_alpha(w)) return w;
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "oes")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes"))
    return w.substr(0, w.size() - 2);
  if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

std::string Singularizer::phrase(std::string_view phrase) const {
  auto parts = words(phrase);
  if (parts.empty()) return {};
  // whole-phrase exceptions first ("brussels sprouts")
  auto joined = join(parts, " ");
  if (auto it = exceptions_.find(joined); it != exceptions_.end()) return it->second;
  parts.back() = (*this)(parts.back());
  return join(parts, " ");
}

std::string canonical_name(std::string_view raw, const Singularizer& singular) {
  return singular.phrase(trim(raw));
}

}  // namespace muse::text
