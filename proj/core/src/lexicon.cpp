#include "muse/lexicon.hpp"

#include <fstream>

#include "muse/catalog.hpp"
#include "muse/error.hpp"

namespace muse {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::size_t word_count(const std::string& phrase) { return text::split(phrase, ' ').size(); }

}  // namespace

Lexicon Lexicon::load(const std::filesystem::path& path) { return from_lines(read_lines(path)); }

Lexicon Lexicon::from_lines(const std::vector<std::string>& lines) {
  Lexicon lex;
  for (const auto& raw : lines) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = text::split(line, '|');
    std::vector<std::string> aliases;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto alias = text::lower(text::trim(fields[i]));
      if (!alias.empty()) aliases.push_back(alias);
    }
    lex.add(text::lower(text::trim(fields[0])), aliases);
  }
  return lex;
}

void Lexicon::add(const std::string& canonical, const std::vector<std::string>& aliases) {
  if (canonical.empty()) return;
  if (!forms_.count(canonical)) canonicals_.push_back(canonical);
  forms_[canonical] = canonical;
  max_words_ = std::max(max_words_, word_count(canonical));
  for (const auto& alias : aliases) {
    forms_.emplace(alias, canonical);
    max_words_ = std::max(max_words_, word_count(alias));
  }
}

std::optional<Lexicon::Match> Lexicon::match_at(std::span<const std::string> words, std::size_t pos,
                                                const text::Singularizer* fold) const {
  if (pos >= words.size()) return std::nullopt;
  for (std::size_t len = std::min(max_words_, words.size() - pos); len >= 1; --len) {
    std::string phrase;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) phrase += ' ';
      phrase += words[pos + i];
    }
    if (auto it = forms_.find(phrase); it != forms_.end()) return Match{it->second, len};
    if (fold != nullptr) {
      auto folded = fold->phrase(phrase);
      if (auto it = forms_.find(folded); it != forms_.end()) return Match{it->second, len};
    }
  }
  return std::nullopt;
}

std::optional<std::string> Lexicon::lookup(const std::string& phrase) const {
  if (auto it = forms_.find(text::lower(phrase)); it != forms_.end()) return it->second;
  return std::nullopt;
}

UnitConversions UnitConversions::load(const std::filesystem::path& path) {
  UnitConversions conv;
  auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#' || (n == 0 && line.rfind("unit,", 0) == 0)) continue;
    auto f = csv::parse_line(line);
    if (f.size() != 3) throw DataError(path.string() + ":" + std::to_string(n + 1) + ": expected 3 fields");
    UnitInfo info;
    if (f[1] == "volume") info.dimension = Dimension::volume;
    else if (f[1] == "mass") info.dimension = Dimension::mass;
    else if (f[1] == "count") info.dimension = Dimension::count;
    else throw DataError(path.string() + ":" + std::to_string(n + 1) + ": unknown dimension '" + f[1] + "'");
    try {
      info.to_base = std::stod(f[2]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(n + 1) + ": bad factor '" + f[2] + "'");
    }
    conv.add(text::trim(f[0]), info);
  }
  return conv;
}

UnitInfo UnitConversions::info(const std::string& unit) const {
  if (auto it = table_.find(unit); it != table_.end()) return it->second;
  return UnitInfo{};
}

ActionDurations ActionDurations::load(const std::filesystem::path& path) {
  ActionDurations d;
  auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#' || (n == 0 && line.rfind("action,", 0) == 0)) continue;
    auto f = csv::parse_line(line);
    if (f.size() != 2) throw DataError(path.string() + ":" + std::to_string(n + 1) + ": expected 2 fields");
    double minutes = 0.0;
    try {
      minutes = std::stod(f[1]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(n + 1) + ": bad minutes '" + f[1] + "'");
    }
    if (minutes < 0) throw DataError(path.string() + ":" + std::to_string(n + 1) + ": negative duration");
    d.set(text::trim(f[0]), minutes);
  }
  return d;
}

double ActionDurations::minutes(const std::string& action) const {
  if (auto it = table_.find(action); it != table_.end()) return it->second;
  return kFallbackMinutes;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
  Lexicons lex;
  lex.units = Lexicon::load(dir / "units.txt");
  lex.verbs = Lexicon::load(dir / "verbs.txt");
  lex.tools = Lexicon::load(dir / "tools.txt");
  lex.states = Lexicon::load(dir / "states.txt");
  if (std::filesystem::exists(dir / "plurals.txt")) {
    for (const auto& raw : read_lines(dir / "plurals.txt")) {
      auto line = text::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      auto f = text::split(line, '|');
      auto singular = text::trim(f[0]);
      lex.singular.add(singular, singular);
      for (std::size_t i = 1; i < f.size(); ++i) lex.singular.add(singular, text::trim(f[i]));
    }
  }
  if (std::filesystem::exists(dir / "unit_conversions.csv"))
    lex.conversions = UnitConversions::load(dir / "unit_conversions.csv");
  return lex;
}

}  // namespace muse
