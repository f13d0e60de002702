#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/parser.hpp"

namespace muse::testing {

struct FieldAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<std::string> misses;

  double rate() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
  void score(bool ok, const std::string& what) {
    ++total;
    if (ok)
      ++correct;
    else
      misses.push_back(what);
  }
};

inline std::vector<nlohmann::json> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

inline FieldAccuracy ingredient_line_accuracy(const std::filesystem::path& path, const Lexicons& lex) {
  FieldAccuracy acc;
  for (const auto& row : read_rows(path)) {
    const auto text = row.at("text").get<std::string>();
    const auto got = parse_ingredient_line(text, lex);
    const auto& gq = row.at("quantity");
    bool qty_ok = gq.is_null() ? !got.quantity.has_value()
                               : got.quantity.has_value() &&
                                     std::abs(boost::rational_cast<double>(*got.quantity) - gq.get<double>()) < 1e-9;
    acc.score(qty_ok, text + " [quantity]");
    acc.score(got.unit == row.at("unit").get<std::string>(), text + " [unit=" + got.unit + "]");
    acc.score(got.name == row.at("name").get<std::string>(), text + " [name=" + got.name + "]");
    acc.score(got.state == row.at("state").get<std::string>(), text + " [state=" + got.state + "]");
  }
  return acc;
}

inline FieldAccuracy instruction_accuracy(const std::filesystem::path& path, const Lexicons& lex) {
  FieldAccuracy acc;
  for (const auto& row : read_rows(path)) {
    const auto text = row.at("text").get<std::string>();
    const auto known = row.at("known").get<std::vector<std::string>>();
    const auto got = parse_instruction(text, known, lex);
    acc.score(got.action == row.at("action").get<std::string>(), text + " [action=" + got.action + "]");
    acc.score(got.tool == row.at("tool").get<std::string>(), text + " [tool=" + got.tool + "]");
    acc.score(got.ingredient_mentions == row.at("ingredients").get<std::vector<std::string>>(),
              text + " [ingredients]");
    const auto& gd = row.at("duration");
    bool dur_ok = gd.is_null() ? !got.duration.has_value()
                               : got.duration.has_value() && std::abs(*got.duration - gd.get<double>()) < 1e-9;
    acc.score(dur_ok, text + " [duration]");
  }
  return acc;
}

}  // namespace muse::testing
