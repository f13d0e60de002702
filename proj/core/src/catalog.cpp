#include "muse/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace muse {

namespace csv {

std::vector<std::string> parse_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace csv

namespace {

struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // 1-based line number, fields
};

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  CsvFile file;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    auto fields = csv::parse_line(line);
    for (auto& f : fields) f = text::trim(f);
    if (file.header.empty())
      file.header = std::move(fields);
    else
      file.rows.emplace_back(n, std::move(fields));
  }
  if (file.header.empty()) throw DataError(path.string() + ": empty file");
  return file;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(path, line, "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) fail(path, line, "not a number: '" + s + "'");
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string display_name(const std::string& id) {
  std::string name = id;
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const Ingredient* CompoundCatalog::find_ingredient(const std::string& id) const {
  auto it = ingredients.find(id);
  return it == ingredients.end() ? nullptr : &it->second;
}

const Ingredient* CompoundCatalog::find_by_name(const std::string& name) const {
  for (const auto& [id, ing] : ingredients)
    if (ing.name == name) return &ing;
  return nullptr;
}

const Compound* CompoundCatalog::find_compound(const std::string& id) const {
  auto it = compounds.find(id);
  return it == compounds.end() ? nullptr : &it->second;
}

std::vector<const Compound*> CompoundCatalog::labeled_compounds() const {
  std::vector<const Compound*> out;
  for (const auto& [id, c] : compounds)
    if (c.rated_pleasantness) out.push_back(&c);
  return out;
}

std::size_t CompoundCatalog::descriptor_index(const std::string& name) const {
  auto it = std::find(descriptors.begin(), descriptors.end(), name);
  if (it == descriptors.end()) throw NotFound("unknown descriptor '" + name + "'");
  return static_cast<std::size_t>(it - descriptors.begin());
}

CompoundCatalog load_compound_catalog(const std::filesystem::path& compound_features_path,
                                      const std::filesystem::path& ingredient_compound_path, Warnings* warnings) {
  CompoundCatalog catalog;

  auto cf = read_csv(compound_features_path);
  const auto& h = cf.header;
  if (h.size() < 3 || h.front() != "compound_id" || h[1] != "name" || h.back() != "pleasantness")
    fail(compound_features_path, 1, "header must be compound_id,name,feature:<name>...,pleasantness");
  for (std::size_t i = 2; i + 1 < h.size(); ++i) {
    if (h[i].rfind("feature:", 0) != 0 || h[i].size() == 8)
      fail(compound_features_path, 1, "column '" + h[i] + "' is not feature:<name>");
    catalog.descriptors.push_back(h[i].substr(8));
  }
  if (cf.rows.empty()) fail(compound_features_path, 1, "no compounds");
  for (const auto& [line, f] : cf.rows) {
    if (f.size() != h.size())
      fail(compound_features_path, line,
           "expected " + std::to_string(h.size()) + " fields, got " + std::to_string(f.size()));
    Compound c;
    c.id = f[0];
    c.name = f[1];
    if (c.id.empty()) fail(compound_features_path, line, "empty compound id");
    for (std::size_t i = 2; i + 1 < f.size(); ++i) c.features.push_back(parse_number(f[i], compound_features_path, line));
    if (!f.back().empty()) c.rated_pleasantness = parse_number(f.back(), compound_features_path, line);
    if (!catalog.compounds.emplace(c.id, c).second)
      fail(compound_features_path, line, "duplicate compound id '" + c.id + "'");
  }

  // labels on an unknown scale are rescaled onto [0,1]
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& [id, c] : catalog.compounds) {
    if (!c.rated_pleasantness) continue;
    lo = std::min(lo, *c.rated_pleasantness);
    hi = std::max(hi, *c.rated_pleasantness);
  }
  if (lo < 0.0 || hi > 1.0) {
    for (auto& [id, c] : catalog.compounds) {
      if (!c.rated_pleasantness) continue;
      c.rated_pleasantness = hi > lo ? (*c.rated_pleasantness - lo) / (hi - lo) : 0.5;
    }
  }

  auto ic = read_csv(ingredient_compound_path);
  if (ic.header != std::vector<std::string>{"ingredient_id", "compound_id", "ppm"})
    fail(ingredient_compound_path, 1, "header must be ingredient_id,compound_id,ppm");
  if (ic.rows.empty()) fail(ingredient_compound_path, 1, "no rows");
  std::vector<std::pair<std::string, std::string>> blanks;
  std::map<std::string, std::vector<double>> known_ppm;
  for (const auto& [line, f] : ic.rows) {
    if (f.size() != 3) fail(ingredient_compound_path, line, "expected 3 fields, got " + std::to_string(f.size()));
    const auto& ing_id = f[0];
    const auto& cmp_id = f[1];
    if (ing_id.empty() || cmp_id.empty()) fail(ingredient_compound_path, line, "empty id");
    auto& ing = catalog.ingredients[ing_id];
    if (ing.id.empty()) {
      ing.id = ing_id;
      ing.name = display_name(ing_id);
    }
    if (!catalog.compounds.count(cmp_id)) {
      warn(warnings, ingredient_compound_path.string() + ":" + std::to_string(line) + ": unknown compound '" + cmp_id +
                         "' for ingredient '" + ing_id + "' skipped");
      continue;
    }
    if (f[2].empty()) {
      blanks.emplace_back(ing_id, cmp_id);
      continue;
    }
    double ppm = parse_number(f[2], ingredient_compound_path, line);
    if (ppm < 0) fail(ingredient_compound_path, line, "negative concentration");
    ing.compound_profile[cmp_id] = ppm;
    known_ppm[cmp_id].push_back(ppm);
  }
  for (const auto& [ing_id, cmp_id] : blanks) {
    auto it = known_ppm.find(cmp_id);
    double fill = it == known_ppm.end() ? 0.0 : median(it->second);
    if (it == known_ppm.end())
      warn(warnings, "no known concentration for compound '" + cmp_id + "'; '" + ing_id + "' set to 0 ppm");
    catalog.ingredients[ing_id].compound_profile.emplace(cmp_id, fill);
  }
  return catalog;
}

void save_compound_catalog(const CompoundCatalog& catalog, const std::filesystem::path& compound_features_path,
                           const std::filesystem::path& ingredient_compound_path) {
  std::ofstream cf(compound_features_path);
  if (!cf) throw DataError("cannot write " + compound_features_path.string());
  cf << "compound_id,name";
  for (const auto& d : catalog.descriptors) cf << ",feature:" << d;
  cf << ",pleasantness\n";
  for (const auto& [id, c] : catalog.compounds) {
    cf << quote(c.id) << ',' << quote(c.name);
    for (double v : c.features) cf << ',' << fmt(v);
    cf << ',' << (c.rated_pleasantness ? fmt(*c.rated_pleasantness) : std::string{}) << '\n';
  }
  std::ofstream ic(ingredient_compound_path);
  if (!ic) throw DataError("cannot write " + ingredient_compound_path.string());
  ic << "ingredient_id,compound_id,ppm\n";
  for (const auto& [id, ing] : catalog.ingredients)
    for (const auto& [cmp, ppm] : ing.compound_profile) ic << quote(id) << ',' << quote(cmp) << ',' << fmt(ppm) << '\n';
}

void load_ingredients(const std::filesystem::path& path, CompoundCatalog& catalog, const text::Singularizer& singular,
                      Warnings* warnings) {
  auto file = read_csv(path);
  if (file.header.size() != 5 || file.header[0] != "ingredient_id" || file.header[1] != "name")
    fail(path, 1, "header must be ingredient_id,name,category,cuisines,seasons");
  auto split_set = [](const std::string& s) {
    std::set<std::string> out;
    if (s.empty()) return out;
    for (auto& part : text::split(s, '|'))
      if (auto t = text::trim(part); !t.empty()) out.insert(t);
    return out;
  };
  std::set<std::string> seen_ids;
  for (const auto& [line, f] : file.rows) {
    if (f.size() != 5) fail(path, line, "expected 5 fields, got " + std::to_string(f.size()));
    if (f[0].empty()) fail(path, line, "empty ingredient id");
    if (!seen_ids.insert(f[0]).second) fail(path, line, "duplicate ingredient id '" + f[0] + "'");
    auto name = text::canonical_name(f[1], singular);
    if (name.empty()) fail(path, line, "empty ingredient name");
    Category category = Category::other;
    try {
      category = parse_category(f[2]);
    } catch (const DataError& e) {
      fail(path, line, e.what());
    }
    auto& ing = catalog.ingredients[f[0]];
    if (ing.id.empty()) {
      ing.id = f[0];
      warn(warnings, "ingredient '" + f[0] + "' has no compound profile");
    }
    ing.name = name;
    ing.category = category;
    ing.cuisines = split_set(f[3]);
    ing.seasons = split_set(f[4]);
  }
  std::map<std::string, std::string> names;
  for (const auto& [id, ing] : catalog.ingredients) {
    auto [it, inserted] = names.emplace(ing.name, id);
    if (!inserted) throw DataError("ingredient name '" + ing.name + "' used by both '" + it->second + "' and '" + id + "'");
  }
}

CuisineTable CuisineTable::load(const std::filesystem::path& path, const CompoundCatalog& catalog) {
  auto file = read_csv(path);
  if (file.header != std::vector<std::string>{"cuisine_id", "name", "ingredient_id", "typicality"})
    fail(path, 1, "header must be cuisine_id,name,ingredient_id,typicality");
  CuisineTable table;
  for (const auto& [line, f] : file.rows) {
    if (f.size() != 4) fail(path, line, "expected 4 fields, got " + std::to_string(f.size()));
    if (f[0].empty()) fail(path, line, "empty cuisine id");
    if (!catalog.find_ingredient(f[2])) fail(path, line, "unknown ingredient '" + f[2] + "'");
    double w = parse_number(f[3], path, line);
    if (w < 0.0 || w > 1.0) fail(path, line, "typicality outside [0,1]");
    auto& c = table.cuisines_[f[0]];
    c.id = f[0];
    c.name = f[1];
    c.typicality[f[2]] = w;
  }
  return table;
}

double CuisineTable::typicality(const std::string& cuisine_id, const std::string& ingredient_id) const {
  auto c = cuisines_.find(cuisine_id);
  if (c == cuisines_.end()) return 0.0;
  auto it = c->second.typicality.find(ingredient_id);
  return it == c->second.typicality.end() ? 0.0 : it->second;
}

}  // namespace muse
