#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muse/text.hpp"

namespace muse {

/// Token inventory read from `canonical|alias1|alias2` lines. Entries may be
/// multiword ("frying pan"); matching is longest-first over word sequences.
class Lexicon {
 public:
  struct Match {
    std::string canonical;
    std::size_t length = 0;  // words consumed
  };

  Lexicon() = default;
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon from_lines(const std::vector<std::string>& lines);

  void add(const std::string& canonical, const std::vector<std::string>& aliases);

  /// Longest entry starting at words[pos]. `fold` is applied to the last word
  /// of each candidate span before lookup, so plural forms match.
  std::optional<Match> match_at(std::span<const std::string> words, std::size_t pos,
                                const text::Singularizer* fold = nullptr) const;
  std::optional<std::string> lookup(const std::string& phrase) const;
  bool contains(const std::string& phrase) const { return lookup(phrase).has_value(); }
  std::size_t size() const { return canonicals_.size(); }
  const std::vector<std::string>& canonicals() const { return canonicals_; }

 private:
  std::map<std::string, std::string> forms_;  // any form -> canonical
  std::vector<std::string> canonicals_;
  std::size_t max_words_ = 1;
};

enum class Dimension { volume, mass, count };

struct UnitInfo {
  Dimension dimension = Dimension::count;
  double to_base = 1.0;  // ml, g, or pieces
};

class UnitConversions {
 public:
  /// `unit,dimension,base_factor` rows.
  static UnitConversions load(const std::filesystem::path& path);
  void add(const std::string& unit, UnitInfo info) { table_[unit] = info; }
  /// Unknown units are treated as counts with factor 1.
  UnitInfo info(const std::string& unit) const;

 private:
  std::map<std::string, UnitInfo> table_;
};

class ActionDurations {
 public:
  static constexpr double kFallbackMinutes = 5.0;
  /// `action,default_minutes` rows.
  static ActionDurations load(const std::filesystem::path& path);
  void set(const std::string& action, double minutes) { table_[action] = minutes; }
  double minutes(const std::string& action) const;

 private:
  std::map<std::string, double> table_;
};

struct Lexicons {
  Lexicon units;
  Lexicon verbs;
  Lexicon tools;
  Lexicon states;
  text::Singularizer singular;
  UnitConversions conversions;

  /// Reads units.txt, verbs.txt, tools.txt, states.txt, plurals.txt and
  /// unit_conversions.csv from `dir`. plurals.txt and unit_conversions.csv are optional.
  static Lexicons load(const std::filesystem::path& dir);
};

}  // namespace muse
