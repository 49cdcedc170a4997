#ifndef DROIDTTP_CONFIG_HPP
#define DROIDTTP_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "augment.hpp"
#include "common.hpp"
#include "dataset.hpp"
#include "learners.hpp"
#include "pta.hpp"
#include "selection.hpp"

namespace droidttp {

// Flat key = value pipeline configuration. The file format is a strict subset
// of TOML: one `key = value` pair per line, `#` comments, optional double
// quotes around string values, no sections. CLI flags override file values.
struct PipelineConfig {
  PipelineConfig() { selection.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}; }

  // paths
  fs::path cache_dir = "cache";
  fs::path fixture_dir;
  fs::path dataset_dir = "dataset";
  fs::path reports_dir = "reports";
  fs::path model_path = "model.json";
  fs::path hashes_file;
  fs::path labels_file;

  // ingest
  bool offline = false;
  std::string api_key;  // normally from DROIDTTP_VT_API_KEY
  int rate_limit_seconds = 15;

  // task + split
  LabelKind task = LabelKind::tactic;
  bool strict_labels = true;
  SplitSpec split;  // seed + test_fraction

  // selection
  SelectionConfig selection;

  // augmentation
  bool augment_enabled = true;
  AugmentConfig augment;

  // training
  Strategy strategy = Strategy::lp;
  std::string preset;  // when set, seeds learner params before overrides
  LearnerParams learner;

  // attribution
  std::size_t explain_top_n = 10;
  std::size_t explain_permutations = 2000;
  std::size_t explain_max_instances = 50;
  std::size_t explain_max_background = 100;
  std::uint64_t explain_seed = 0;

  void validate() const {
    split.validate();
    selection.validate();
    if (augment_enabled) augment.validate();
    learner.validate();
    if (rate_limit_seconds < 0) throw ConfigError("rate limit must be >= 0");
    if (explain_top_n < 1) throw ConfigError("explain_top_n must be >= 1");
    if (explain_permutations < 1) throw ConfigError("explain_permutations must be >= 1");
  }
};

namespace detail {

inline std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace detail

// key -> raw value, preserving nothing but the pairs; unknown keys are
// rejected by apply_config_pairs so typos fail loudly.
inline std::map<std::string, std::string> read_config_pairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::map<std::string, std::string> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = detail::strip(line.substr(0, eq));
    std::string value = detail::unquote(detail::strip(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                                       ": empty key");
    if (!pairs.emplace(key, value).second)
      throw ConfigError("duplicate config key: " + key);
  }
  return pairs;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got \"" + v + "\"");
}

template <typename T>
inline T parse_number(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  T out;
  ss >> out;
  if (ss.fail() || !ss.eof())
    throw ConfigError(key + ": expected a number, got \"" + v + "\"");
  return out;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& key,
                                                  const std::string& v) {
  std::vector<std::uint64_t> out;
  std::istringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ','))
    out.push_back(parse_number<std::uint64_t>(key, detail::strip(tok)));
  if (out.empty()) throw ConfigError(key + ": expected at least one seed");
  return out;
}

inline void apply_config_pairs(PipelineConfig& c,
                               const std::map<std::string, std::string>& pairs) {
  for (const auto& [k, v] : pairs) {
    if (k == "cache_dir") c.cache_dir = v;
    else if (k == "fixture_dir") c.fixture_dir = v;
    else if (k == "dataset_dir") c.dataset_dir = v;
    else if (k == "reports_dir") c.reports_dir = v;
    else if (k == "model_path") c.model_path = v;
    else if (k == "hashes_file") c.hashes_file = v;
    else if (k == "labels_file") c.labels_file = v;
    else if (k == "offline") c.offline = parse_bool(k, v);
    else if (k == "rate_limit_seconds") c.rate_limit_seconds = parse_number<int>(k, v);
    else if (k == "task") c.task = label_kind_from_string(v);
    else if (k == "strict_labels") c.strict_labels = parse_bool(k, v);
    else if (k == "split_seed") c.split.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "test_fraction") c.split.test_fraction = parse_number<double>(k, v);
    else if (k == "select_m") c.selection.top_m = parse_number<std::size_t>(k, v);
    else if (k == "select_seeds") c.selection.seeds = parse_seed_list(k, v);
    else if (k == "select_variant") c.selection.variant = chi_square_variant_from_string(v);
    else if (k == "select_test_fraction")
      c.selection.train_fraction_complement = parse_number<double>(k, v);
    else if (k == "augment") c.augment_enabled = parse_bool(k, v);
    else if (k == "augment_k") c.augment.k = parse_number<std::size_t>(k, v);
    else if (k == "augment_percent") c.augment.percent = parse_number<int>(k, v);
    else if (k == "augment_seed") c.augment.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "augment_rule") c.augment.rule = minority_rule_from_string(v);
    else if (k == "augment_interpolate") c.augment.interpolate = parse_bool(k, v);
    else if (k == "strategy") c.strategy = strategy_from_string(v);
    else if (k == "preset") c.preset = v;
    else if (k == "learner") c.learner.kind = learner_kind_from_string(v);
    else if (k == "criterion") c.learner.criterion = criterion_from_string(v);
    else if (k == "max_depth") c.learner.max_depth = parse_number<int>(k, v);
    else if (k == "min_samples_split") c.learner.min_samples_split = parse_number<int>(k, v);
    else if (k == "min_samples_leaf") c.learner.min_samples_leaf = parse_number<int>(k, v);
    else if (k == "max_leaf_nodes") c.learner.max_leaf_nodes = parse_number<int>(k, v);
    else if (k == "n_estimators") c.learner.n_estimators = parse_number<int>(k, v);
    else if (k == "max_features") c.learner.max_features = max_features_from_string(v);
    else if (k == "learning_rate") c.learner.learning_rate = parse_number<double>(k, v);
    else if (k == "gamma") c.learner.gamma = parse_number<double>(k, v);
    else if (k == "bootstrap") c.learner.bootstrap = parse_bool(k, v);
    else if (k == "learner_seed") c.learner.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "explain_top_n") c.explain_top_n = parse_number<std::size_t>(k, v);
    else if (k == "explain_permutations")
      c.explain_permutations = parse_number<std::size_t>(k, v);
    else if (k == "explain_max_instances")
      c.explain_max_instances = parse_number<std::size_t>(k, v);
    else if (k == "explain_max_background")
      c.explain_max_background = parse_number<std::size_t>(k, v);
    else if (k == "explain_seed") c.explain_seed = parse_number<std::uint64_t>(k, v);
    else throw ConfigError("unknown config key: " + k);
  }
}

inline PipelineConfig load_config(const fs::path& path) {
  PipelineConfig c;
  apply_config_pairs(c, read_config_pairs(path));
  return c;
}

}  // namespace droidttp

#endif  // DROIDTTP_CONFIG_HPP
