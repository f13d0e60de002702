#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "muse/lexicon.hpp"
#include "muse/types.hpp"

namespace muse {

class CompoundCatalog;

using Quantity = boost::rational<std::int64_t>;

struct ParsedIngredient {
  std::optional<Quantity> quantity;
  std::string unit;   // canonical unit, empty when none
  std::string name;
  std::string state;  // processed states joined by a space, empty when none

  bool operator==(const ParsedIngredient&) const = default;
};

struct StepCandidate {
  std::string action;  // "unknown" when no verb matched
  std::string tool;
  std::vector<std::string> ingredient_mentions;
  std::optional<double> duration;  // minutes
  std::string tip;
};

enum class ParseOutcome { parsed, partial, failed };
std::string_view to_string(ParseOutcome o);

struct LineDiagnostic {
  std::size_t line = 0;
  ParseOutcome outcome = ParseOutcome::parsed;
  std::string reason;  // reason code, empty when parsed
  std::string text;
};

struct ParseDiagnostics {
  std::vector<LineDiagnostic> entries;

  std::size_t count(ParseOutcome o) const;
  double partial_rate() const;
};

/// "2", "1.5", "3/4", "1 1/2", "1½", "½" -> exact value. Nullopt when not a quantity.
std::optional<Quantity> parse_quantity(std::string_view token);
std::string format_quantity(const Quantity& q);

/// Grammar: [quantity] [unit] [state]* name [, state]*. Never throws; lines with
/// no recoverable name keep the whole trimmed text as the name.
ParsedIngredient parse_ingredient_line(std::string_view text, const Lexicons& lex,
                                       LineDiagnostic* diagnostic = nullptr);

/// "qty unit state name", omitting absent fields.
std::string render(const ParsedIngredient& ingredient);

/// Pattern extraction over one instruction sentence. Mentions are always drawn
/// from `known_ingredients` (returned verbatim, in order of appearance).
StepCandidate parse_instruction(std::string_view text, std::span<const std::string> known_ingredients,
                                const Lexicons& lex, LineDiagnostic* diagnostic = nullptr);

/// Splits an instruction paragraph on sentence terminators.
std::vector<std::string> split_sentences(std::string_view paragraph);

/// Links step candidates into Steps. `mention_ids` maps mention strings to
/// ingredient ids. Outputs are synthesized as s1, s2, ... in order. A step that
/// mentions an ingredient already absorbed into an unconsumed intermediate
/// consumes that intermediate; a step with no mentions consumes every
/// unconsumed intermediate. Steps left with no inputs are dropped with a
/// diagnostic on `diagnostics` (line numbers are 1-based step positions).
std::vector<Step> link_steps(const std::vector<StepCandidate>& candidates,
                             const std::map<std::string, std::string>& mention_ids,
                             ParseDiagnostics* diagnostics = nullptr);

struct RecipeDocument {
  std::string id;
  std::string title;
  std::string dish_type;
  std::string cuisine;
  std::vector<std::string> ingredient_lines;
  std::vector<std::string> instruction_lines;
};

struct ParsedRecipe {
  Recipe recipe;
  ParseDiagnostics diagnostics;
};

/// Composes the ingredient and instruction parsers. Ingredient names resolve to
/// catalog ids when `catalog` is given (by canonical name), otherwise the name
/// with spaces replaced by '_' is the id. Throws DataError on an empty
/// ingredient block.
ParsedRecipe parse_recipe(const RecipeDocument& document, const Lexicons& lex,
                          const CompoundCatalog* catalog = nullptr);

}  // namespace muse
