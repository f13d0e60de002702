#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/catalog.hpp"
#include "muse/corpus.hpp"
#include "muse/design.hpp"
#include "muse/lexicon.hpp"
#include "muse/planner.hpp"
#include "muse/pleasantness.hpp"
#include "muse/ranking.hpp"
#include "muse/session.hpp"
#include "muse/surprise.hpp"
#include "muse/topics.hpp"

namespace muse {

inline constexpr const char* kEngineVersion = MUSE_VERSION;

struct DataPaths {
  std::filesystem::path compounds;
  std::filesystem::path ingredient_compounds;
  std::filesystem::path ingredients;
  std::filesystem::path cuisines;
  std::filesystem::path recipes;
  std::filesystem::path lexicon_dir;
  std::filesystem::path action_durations;
};

struct ModelPaths {
  std::filesystem::path surprise;
  std::filesystem::path pleasantness;
  std::filesystem::path topics;
};

struct EngineConfig {
  DataPaths data;
  ModelPaths models;  // loaded when the file exists, fitted otherwise
  GenerationConfig generation;
  RankWeights weights;
  LdaOptions lda;
  CvMode cv_mode = CvMode::ten_fold;
  double smoothing = 0.5;
  std::size_t novelty_threshold = 0;  // 0 disables the prefilter
  std::size_t default_min_ingredients = 4;
  std::size_t default_max_ingredients = 9;
  std::filesystem::path session_dir;
  std::filesystem::path output_dir;
  int port = 8080;

  /// JSON config. Relative paths resolve against the config file's directory.
  /// MUSE_PORT overrides `service.port`.
  static EngineConfig load(const std::filesystem::path& path);
  static EngineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  /// Throws DataError naming the first data path that does not exist.
  void validate() const;
};

/// Resolves the config path: explicit value, else MUSE_CONFIG, else empty.
std::optional<std::filesystem::path> resolve_config_path(const std::string& explicit_path);

struct PlanResult {
  Recipe proportions;
  Plan plan;
};

/// Loaded corpus and fitted models. Immutable after construction; every method
/// is const and safe to call concurrently.
class Engine {
 public:
  explicit Engine(EngineConfig config, Warnings* warnings = nullptr);

  const EngineConfig& config() const { return config_; }
  const CompoundCatalog& catalog() const { return catalog_; }
  const CuisineTable& cuisines() const { return cuisines_; }
  const std::vector<Recipe>& recipes() const { return recipes_; }
  const FrequencyTable& frequencies() const { return freq_; }
  const Lexicons& lexicons() const { return lex_; }
  const ActionDurations& durations() const { return durations_; }
  const SurpriseModel& surprise_model() const { return surprise_; }
  const PleasantnessModel& pleasantness_model() const { return pleasantness_; }
  const TopicModel& topic_model() const { return topics_; }

  CandidateSet generate(const DesignProblem& problem, const GenerationConfig& config,
                        Warnings* warnings = nullptr) const;
  std::vector<RankedCandidate> assess(const std::vector<Candidate>& candidates, const RankWeights& weights,
                                      const std::string& dish_type = {}, Warnings* warnings = nullptr) const;
  PlanResult plan(const std::vector<std::string>& ingredients, const std::string& dish_type, std::size_t cooks,
                  Warnings* warnings = nullptr) const;
  MenuSuggestion menu(std::size_t k, double variety_target, std::uint64_t seed, Warnings* warnings = nullptr) const;

  struct IngredientChoice {
    std::string id;
    std::string name;
    Category category = Category::other;
    std::size_t count = 0;  // recipes of the dish type containing it
    int quartile = 4;       // 1 = most common quarter
    std::string commonness; // "common" (quartiles 1-2) or "uncommon"
  };
  std::vector<IngredientChoice> ingredient_choices(const std::string& dish_type) const;
  std::vector<std::string> dish_types() const;

 private:
  EngineConfig config_;
  Lexicons lex_;
  ActionDurations durations_;
  CompoundCatalog catalog_;
  CuisineTable cuisines_;
  std::vector<Recipe> recipes_;
  FrequencyTable freq_;
  SurpriseModel surprise_;
  PleasantnessModel pleasantness_;
  TopicModel topics_;
};

}  // namespace muse
