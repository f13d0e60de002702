#include "muse/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "muse/catalog.hpp"
#include "muse/error.hpp"

namespace muse {

namespace {

struct UnicodeFraction {
  std::string_view glyph;
  std::int64_t num;
  std::int64_t den;
};

constexpr std::array<UnicodeFraction, 15> kFractions = {{{"½", 1, 2},
                                                         {"⅓", 1, 3},
                                                         {"⅔", 2, 3},
                                                         {"¼", 1, 4},
                                                         {"¾", 3, 4},
                                                         {"⅕", 1, 5},
                                                         {"⅖", 2, 5},
                                                         {"⅗", 3, 5},
                                                         {"⅘", 4, 5},
                                                         {"⅙", 1, 6},
                                                         {"⅚", 5, 6},
                                                         {"⅛", 1, 8},
                                                         {"⅜", 3, 8},
                                                         {"⅝", 5, 8},
                                                         {"⅞", 7, 8}}};

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<std::int64_t> to_int(std::string_view s) {
  if (!is_digits(s) || s.size() > 12) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::optional<Quantity> parse_simple(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  for (const auto& f : kFractions) {
    if (tok == f.glyph) return Quantity(f.num, f.den);
    if (tok.size() > f.glyph.size() && tok.substr(tok.size() - f.glyph.size()) == f.glyph) {
      if (auto whole = to_int(tok.substr(0, tok.size() - f.glyph.size())))
        return Quantity(*whole) + Quantity(f.num, f.den);
    }
  }
  if (auto slash = tok.find('/'); slash != std::string_view::npos) {
    auto n = to_int(tok.substr(0, slash));
    auto d = to_int(tok.substr(slash + 1));
    if (n && d && *d != 0) return Quantity(*n, *d);
    return std::nullopt;
  }
  if (auto dot = tok.find('.'); dot != std::string_view::npos) {
    auto whole_part = tok.substr(0, dot);
    auto frac_part = tok.substr(dot + 1);
    if (!(whole_part.empty() || is_digits(whole_part)) || !is_digits(frac_part) || frac_part.size() > 9)
      return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    std::int64_t whole = whole_part.empty() ? 0 : *to_int(whole_part);
    return Quantity(whole) + Quantity(*to_int(frac_part), den);
  }
  if (auto v = to_int(tok)) return Quantity(*v);
  return std::nullopt;
}

bool is_adverb(const std::string& w) { return w.size() > 3 && w.ends_with("ly"); }

const std::set<std::string>& trailing_noise() {
  static const std::set<std::string> noise = {"to taste", "optional", "divided", "for garnish", "for serving",
                                              "or to taste", "as needed", "or more", "at room temperature",
                                              "plus more", "for dusting", "for frying"};
  return noise;
}

std::string strip_parentheticals(std::string_view s) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

// Strips known trailing noise phrases from a word list in place.
void strip_noise_suffix(std::vector<std::string>& words) {
  bool changed = true;
  while (changed && !words.empty()) {
    changed = false;
    for (const auto& phrase : trailing_noise()) {
      auto parts = text::split(phrase, ' ');
      if (parts.size() >= words.size()) continue;
      if (std::equal(parts.begin(), parts.end(), words.end() - static_cast<std::ptrdiff_t>(parts.size()))) {
        words.resize(words.size() - parts.size());
        changed = true;
      }
    }
  }
}

const std::set<std::string>& time_units() {
  static const std::set<std::string> units = {"minute", "minutes", "min", "mins", "hour", "hours", "hr",
                                              "hrs", "second", "seconds", "sec", "secs"};
  return units;
}

double minutes_per(const std::string& unit) {
  if (unit.starts_with("h")) return 60.0;
  if (unit.starts_with("s")) return 1.0 / 60.0;
  return 1.0;
}

double to_double(const Quantity& q) { return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()); }

// Reads a number at words[i] ("1", "1/2", "1 1/2", "a", "an"); returns value and words consumed.
std::optional<std::pair<Quantity, std::size_t>> number_at(const std::vector<std::string>& w, std::size_t i) {
  if (i >= w.size()) return std::nullopt;
  if (w[i] == "a" || w[i] == "an" || w[i] == "one") return std::pair{Quantity(1), std::size_t{1}};
  auto q = parse_simple(w[i]);
  if (!q) return std::nullopt;
  if (i + 1 < w.size() && w[i + 1].find('/') != std::string::npos && q->denominator() == 1) {
    if (auto frac = parse_simple(w[i + 1]); frac && *frac < 1) return std::pair{*q + *frac, std::size_t{2}};
  }
  return std::pair{*q, std::size_t{1}};
}

}  // namespace

std::string_view to_string(ParseOutcome o) {
  switch (o) {
    case ParseOutcome::parsed: return "parsed";
    case ParseOutcome::partial: return "partial";
    case ParseOutcome::failed: return "failed";
  }
  return "parsed";
}

std::size_t ParseDiagnostics::count(ParseOutcome o) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [o](const LineDiagnostic& d) { return d.outcome == o; }));
}

double ParseDiagnostics::partial_rate() const {
  return entries.empty() ? 0.0 : static_cast<double>(count(ParseOutcome::partial)) / static_cast<double>(entries.size());
}

std::optional<Quantity> parse_quantity(std::string_view token) {
  auto t = text::trim(token);
  std::optional<Quantity> q;
  if (auto space = t.find(' '); space != std::string::npos) {
    auto whole = parse_simple(text::trim(t.substr(0, space)));
    auto frac = parse_simple(text::trim(t.substr(space + 1)));
    if (whole && frac && whole->denominator() == 1 && *frac < 1) q = *whole + *frac;
  } else if (auto dash = t.find('-'); dash != std::string::npos && dash > 0) {
    q = parse_simple(t.substr(0, dash));  // ranges keep the lower bound
  } else {
    q = parse_simple(t);
  }
  if (q && *q > 0) return q;
  return std::nullopt;
}

std::string format_quantity(const Quantity& q) {
  auto whole = q.numerator() / q.denominator();
  auto rem = Quantity(q.numerator() % q.denominator(), q.denominator());
  if (rem.numerator() == 0) return std::to_string(whole);
  auto frac = std::to_string(rem.numerator()) + "/" + std::to_string(rem.denominator());
  return whole == 0 ? frac : std::to_string(whole) + " " + frac;
}

ParsedIngredient parse_ingredient_line(std::string_view raw, const Lexicons& lex, LineDiagnostic* diagnostic) {
  ParsedIngredient out;
  const auto trimmed = text::trim(raw);
  std::string reason;

  auto clauses = text::split(strip_parentheticals(trimmed), ',');
  auto w = text::words(clauses.front());
  std::size_t pos = 0;

  // "juice of 1 lemon" -> 1 lemon juice
  std::string part;
  if (w.size() > 2 && (w[0] == "juice" || w[0] == "zest") && w[1] == "of") {
    part = w[0];
    w.erase(w.begin(), w.begin() + 2);
  }

  const bool article = !w.empty() && (w[0] == "a" || w[0] == "an");
  if (auto n = number_at(w, 0); n && (!article || lex.units.match_at(w, 1, &lex.singular))) {
    out.quantity = n->first;
    pos = n->second;
  } else if (!w.empty() && w[0].find('-') != std::string::npos) {
    if (auto q = parse_quantity(w[0])) {
      out.quantity = q;
      pos = 1;
    }
  }

  // "2 to 3", "2 or 3": keep the lower bound
  if (out.quantity && pos + 1 < w.size() && (w[pos] == "to" || w[pos] == "or")) {
    if (auto upper = number_at(w, pos + 1); upper && w[pos + 1] != "a" && w[pos + 1] != "an") pos += 1 + upper->second;
  }

  if (auto unit = lex.units.match_at(w, pos, &lex.singular); unit && pos + unit->length < w.size()) {
    out.unit = unit->canonical;
    pos += unit->length;
    if (pos < w.size() && w[pos] == "of") ++pos;
  }

  std::vector<std::string> states;
  for (;;) {
    std::size_t p = pos;
    while (p < w.size() && (is_adverb(w[p]) || w[p] == "and")) ++p;
    auto st = lex.states.match_at(w, p);
    if (!st || p + st->length >= w.size()) break;
    states.push_back(st->canonical);
    pos = p + st->length;
  }

  std::vector<std::string> name_words(w.begin() + static_cast<std::ptrdiff_t>(pos), w.end());
  strip_noise_suffix(name_words);

  for (std::size_t c = 1; c < clauses.size(); ++c) {
    auto cw = text::words(clauses[c]);
    if (cw.empty()) continue;
    if (trailing_noise().count(text::join(cw, " "))) continue;
    std::vector<std::string> found;
    bool all_states = true;
    for (std::size_t p = 0; p < cw.size();) {
      if (is_adverb(cw[p]) || cw[p] == "and" || cw[p] == "then") {
        ++p;
        continue;
      }
      if (auto st = lex.states.match_at(cw, p)) {
        found.push_back(st->canonical);
        p += st->length;
        continue;
      }
      all_states = false;
      break;
    }
    if (all_states && !found.empty()) {
      states.insert(states.end(), found.begin(), found.end());
    } else {
      strip_noise_suffix(cw);
      if (!trailing_noise().count(text::join(cw, " "))) reason = "unrecognized_trailing_clause";
    }
  }

  out.state = text::join(states, " ");
  out.name = lex.singular.phrase(text::join(name_words, " "));
  if (!part.empty() && !out.name.empty()) out.name += " " + part;
  if (out.name.empty()) {
    out.name = text::lower(trimmed);
    out.quantity.reset();
    out.unit.clear();
    out.state.clear();
    reason = "no_name";
  }
  if (diagnostic != nullptr) {
    diagnostic->text = trimmed;
    diagnostic->outcome = reason.empty() ? ParseOutcome::parsed : ParseOutcome::partial;
    diagnostic->reason = reason;
  }
  return out;
}

std::string render(const ParsedIngredient& ingredient) {
  std::vector<std::string> parts;
  if (ingredient.quantity) parts.push_back(format_quantity(*ingredient.quantity));
  if (!ingredient.unit.empty()) parts.push_back(ingredient.unit);
  if (!ingredient.state.empty()) parts.push_back(ingredient.state);
  parts.push_back(ingredient.name);
  return text::join(parts, " ");
}

StepCandidate parse_instruction(std::string_view raw, std::span<const std::string> known_ingredients,
                                const Lexicons& lex, LineDiagnostic* diagnostic) {
  StepCandidate out;
  const auto trimmed = text::trim(raw);

  // tokens with clause boundaries (commas, semicolons) remembered by index
  std::vector<std::string> w;
  std::vector<std::size_t> clause_starts;
  for (auto& clause : text::split(trimmed, ',')) {
    for (auto& sub : text::split(clause, ';')) {
      auto cw = text::words(sub);
      if (cw.empty()) continue;
      clause_starts.push_back(w.size());
      w.insert(w.end(), cw.begin(), cw.end());
    }
  }
  std::vector<bool> covered(w.size(), false);
  auto cover = [&](std::size_t from, std::size_t len) {
    for (std::size_t i = from; i < from + len && i < covered.size(); ++i) covered[i] = true;
  };

  std::vector<std::string> folded;
  folded.reserve(w.size());
  for (const auto& t : w) folded.push_back(lex.singular(t));

  // action
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (auto v = lex.verbs.match_at(w, i)) {
      out.action = v->canonical;
      cover(i, v->length);
      break;
    }
  }
  if (out.action.empty()) out.action = "unknown";

  // ingredient mentions, longest known name first, then unambiguous head nouns
  struct Known {
    std::string text;
    std::vector<std::string> words;
  };
  std::vector<Known> known;
  for (const auto& k : known_ingredients) {
    auto kw = text::words(lex.singular.phrase(k));
    if (!kw.empty()) known.push_back({k, std::move(kw)});
  }
  std::stable_sort(known.begin(), known.end(),
                   [](const Known& a, const Known& b) { return a.words.size() > b.words.size(); });
  std::map<std::string, std::vector<const Known*>> heads;
  for (const auto& k : known)
    if (k.words.size() > 1) heads[k.words.back()].push_back(&k);

  std::vector<bool> in_mention(w.size(), false);
  auto add_mention = [&](const std::string& m) {
    if (std::find(out.ingredient_mentions.begin(), out.ingredient_mentions.end(), m) == out.ingredient_mentions.end())
      out.ingredient_mentions.push_back(m);
  };
  for (std::size_t i = 0; i < w.size();) {
    bool matched = false;
    if (!covered[i]) {
      for (const auto& k : known) {
        if (i + k.words.size() > w.size()) continue;
        if (std::equal(k.words.begin(), k.words.end(), folded.begin() + static_cast<std::ptrdiff_t>(i))) {
          add_mention(k.text);
          cover(i, k.words.size());
          for (std::size_t j = i; j < i + k.words.size(); ++j) in_mention[j] = true;
          i += k.words.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (auto h = heads.find(folded[i]); h != heads.end() && h->second.size() == 1) {
          add_mention(h->second.front()->text);
          cover(i, 1);
          in_mention[i] = true;
          ++i;
          matched = true;
        }
      }
    }
    if (!matched) ++i;
  }

  // tool: prefer one introduced by a preposition
  static const std::set<std::string> preps = {"with", "in", "using", "on", "into", "onto", "to", "over", "from"};
  std::optional<std::pair<std::size_t, Lexicon::Match>> tool_hit;
  for (std::size_t i = 0; i < w.size() && !tool_hit; ++i) {
    if (!preps.count(w[i])) continue;
    for (std::size_t j = i + 1; j < w.size() && j <= i + 4; ++j) {
      if (in_mention[j]) break;
      if (auto t = lex.tools.match_at(w, j, &lex.singular)) {
        tool_hit = std::pair{j, *t};
        break;
      }
    }
  }
  for (std::size_t i = 0; i < w.size() && !tool_hit; ++i) {
    if (in_mention[i]) continue;
    if (auto t = lex.tools.match_at(w, i, &lex.singular)) tool_hit = std::pair{i, *t};
  }
  if (tool_hit) {
    out.tool = tool_hit->second.canonical;
    cover(tool_hit->first, tool_hit->second.length);
  }

  // duration: <number> [to|or|- <number>] <time unit>, summed over adjacent expressions
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto n = number_at(w, i);
    std::optional<Quantity> value;
    std::size_t j = i;
    if (n) {
      value = n->first;
      j = i + n->second;
      if (j + 1 < w.size() && (w[j] == "to" || w[j] == "or")) {
        if (auto upper = number_at(w, j + 1)) {
          value = upper->first;
          j += 1 + upper->second;
        }
      }
    } else if (auto dash = w[i].find('-'); dash != std::string::npos && dash > 0) {
      if (auto upper = parse_simple(w[i].substr(dash + 1)); upper && parse_simple(w[i].substr(0, dash))) {
        value = upper;
        j = i + 1;
      }
    }
    if (!value || j >= w.size() || !time_units().count(w[j])) continue;
    double minutes = to_double(*value) * minutes_per(w[j]);
    std::size_t start = (i > 0 && (w[i - 1] == "for" || w[i - 1] == "about")) ? i - 1 : i;
    cover(start, j + 1 - start);
    std::size_t k = j + 1;
    if (k < w.size() && w[k] == "and") ++k;
    if (auto more = number_at(w, k); more && k + more->second < w.size() && time_units().count(w[k + more->second])) {
      minutes += to_double(more->first) * minutes_per(w[k + more->second]);
      cover(j + 1, k + more->second - j);
    }
    out.duration = minutes;
    break;
  }

  // tip: the earliest trailing segment (clause or "until ...") with nothing extracted
  std::vector<std::size_t> boundaries = clause_starts;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == "until") boundaries.push_back(i);
  std::sort(boundaries.begin(), boundaries.end());
  for (auto b : boundaries) {
    if (b == 0) continue;
    if (std::none_of(covered.begin() + static_cast<std::ptrdiff_t>(b), covered.end(), [](bool c) { return c; })) {
      out.tip = text::join(std::vector<std::string>(w.begin() + static_cast<std::ptrdiff_t>(b), w.end()), " ");
      break;
    }
  }

  if (diagnostic != nullptr) {
    diagnostic->text = trimmed;
    diagnostic->outcome = out.action == "unknown" ? ParseOutcome::partial : ParseOutcome::parsed;
    diagnostic->reason = out.action == "unknown" ? "no_verb" : "";
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view paragraph) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < paragraph.size(); ++i) {
    char c = paragraph[i];
    cur.push_back(c);
    bool terminator = c == '!' || c == '?' ||
                      (c == '.' && (i + 1 == paragraph.size() || std::isspace(static_cast<unsigned char>(paragraph[i + 1]))));
    // "approx. 5" and decimals are not boundaries when the next word starts lowercase or with a digit
    if (c == '.' && terminator && i + 2 < paragraph.size()) {
      auto next = static_cast<unsigned char>(paragraph[i + 2]);
      if (std::islower(next) || std::isdigit(next)) terminator = false;
    }
    if (terminator) {
      if (auto t = text::trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    }
  }
  if (auto t = text::trim(cur); !t.empty()) out.push_back(t);
  return out;
}

std::vector<Step> link_steps(const std::vector<StepCandidate>& candidates,
                             const std::map<std::string, std::string>& mention_ids, ParseDiagnostics* diagnostics) {
  struct Intermediate {
    std::string id;
    std::set<std::string> closure;
  };
  std::vector<Intermediate> dangling;
  std::vector<Step> steps;

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& cand = candidates[k];
    std::vector<std::string> ids;
    for (const auto& m : cand.ingredient_mentions) {
      auto it = mention_ids.find(m);
      if (it == mention_ids.end()) {
        if (diagnostics) diagnostics->entries.push_back({k + 1, ParseOutcome::partial, "unmatched_mention", m});
        continue;
      }
      if (std::find(ids.begin(), ids.end(), it->second) == ids.end()) ids.push_back(it->second);
    }

    std::vector<std::string> inputs;
    std::set<std::string> closure;
    std::vector<std::size_t> consumed;
    if (!ids.empty()) {
      for (const auto& id : ids) {
        bool absorbed = false;
        for (std::size_t d = dangling.size(); d-- > 0;) {
          if (dangling[d].closure.count(id)) {
            if (std::find(consumed.begin(), consumed.end(), d) == consumed.end()) consumed.push_back(d);
            absorbed = true;
            break;
          }
        }
        if (!absorbed) {
          inputs.push_back(id);
          closure.insert(id);
        }
      }
      std::sort(consumed.begin(), consumed.end());
    } else {
      for (std::size_t d = 0; d < dangling.size(); ++d) consumed.push_back(d);
    }
    std::vector<std::string> intermediate_inputs;
    for (auto d : consumed) {
      intermediate_inputs.push_back(dangling[d].id);
      closure.insert(dangling[d].closure.begin(), dangling[d].closure.end());
    }
    inputs.insert(inputs.begin(), intermediate_inputs.begin(), intermediate_inputs.end());
    if (inputs.empty()) {
      if (diagnostics) diagnostics->entries.push_back({k + 1, ParseOutcome::partial, "no_inputs", cand.action});
      continue;
    }
    for (auto it = consumed.rbegin(); it != consumed.rend(); ++it)
      dangling.erase(dangling.begin() + static_cast<std::ptrdiff_t>(*it));

    Step step;
    step.action = cand.action;
    step.tool = cand.tool;
    step.inputs = std::move(inputs);
    step.output = "s" + std::to_string(steps.size() + 1);
    step.duration = cand.duration;
    dangling.push_back({step.output, std::move(closure)});
    steps.push_back(std::move(step));
  }
  return steps;
}

ParsedRecipe parse_recipe(const RecipeDocument& document, const Lexicons& lex, const CompoundCatalog* catalog) {
  ParsedRecipe out;
  auto& recipe = out.recipe;
  recipe.id = document.id;
  recipe.title = document.title;
  recipe.dish_type = document.dish_type;
  recipe.cuisine = document.cuisine;

  std::size_t line_no = 0;
  std::map<std::string, std::string> mention_ids;  // ingredient name -> id
  std::vector<std::string> known;
  for (const auto& line : document.ingredient_lines) {
    if (text::trim(line).empty()) continue;
    LineDiagnostic diag;
    diag.line = ++line_no;
    auto parsed = parse_ingredient_line(line, lex, &diag);
    std::string id;
    if (catalog != nullptr) {
      if (const auto* ing = catalog->find_by_name(parsed.name)) id = ing->id;
    }
    if (id.empty()) {
      id = parsed.name;
      std::replace(id.begin(), id.end(), ' ', '_');
    }
    if (recipe.contains(id)) {
      diag.outcome = ParseOutcome::partial;
      diag.reason = "duplicate_ingredient";
    } else {
      RecipeIngredient ri;
      ri.id = id;
      if (parsed.quantity) ri.quantity = to_double(*parsed.quantity);
      ri.unit = parsed.unit;
      ri.state = parsed.state;
      recipe.ingredients.push_back(std::move(ri));
      mention_ids[parsed.name] = id;
      known.push_back(parsed.name);
    }
    out.diagnostics.entries.push_back(std::move(diag));
  }
  if (recipe.ingredients.empty()) throw DataError("recipe '" + document.title + "' has an empty ingredient block");

  std::vector<std::string> sentences;
  for (const auto& line : document.instruction_lines)
    for (auto& s : split_sentences(line)) sentences.push_back(std::move(s));

  std::vector<StepCandidate> candidates;
  std::size_t first_step_line = line_no + 1;
  for (const auto& s : sentences) {
    LineDiagnostic diag;
    diag.line = ++line_no;
    candidates.push_back(parse_instruction(s, known, lex, &diag));
    out.diagnostics.entries.push_back(std::move(diag));
  }
  ParseDiagnostics link_diag;
  recipe.steps = link_steps(candidates, mention_ids, &link_diag);
  for (const auto& d : link_diag.entries) {
    auto& entry = out.diagnostics.entries.at(first_step_line - 1 + d.line - 1);
    entry.outcome = ParseOutcome::partial;
    entry.reason = entry.reason.empty() ? d.reason : entry.reason + "," + d.reason;
  }
  return out;
}

}  // namespace muse
