#ifndef DROIDTTP_PRESETS_HPP
#define DROIDTTP_PRESETS_HPP

#include <string>

#include "learners.hpp"
#include "pta.hpp"

namespace droidttp {

// Published hyperparameter table, keyed by preset name (strategy + task) and
// learner kind. "auto" max_features maps to sqrt.
inline LearnerParams preset_params(const std::string& preset, LearnerKind learner) {
  auto parse = [&](const std::string& name) -> std::pair<Strategy, bool /*tactic*/> {
    if (name == "paper-br-tactic") return {Strategy::br, true};
    if (name == "paper-br-technique") return {Strategy::br, false};
    if (name == "paper-cc-tactic") return {Strategy::cc, true};
    if (name == "paper-cc-technique") return {Strategy::cc, false};
    if (name == "paper-lp-tactic") return {Strategy::lp, true};
    if (name == "paper-lp-technique") return {Strategy::lp, false};
    throw ConfigError("unknown preset: " + name);
  };
  auto [strategy, tactic] = parse(preset);

  LearnerParams p;
  p.kind = learner;
  switch (strategy) {
    case Strategy::br:
      if (learner == LearnerKind::tree) {
        if (tactic) {
          p.criterion = Criterion::entropy;
          p.max_depth = 41;
          p.min_samples_leaf = 3;
          p.min_samples_split = 17;
        } else {
          p.criterion = Criterion::gini;
          p.max_depth = 63;
          p.max_leaf_nodes = 50;
          p.min_samples_leaf = 3;
          p.min_samples_split = 12;
        }
      } else if (learner == LearnerKind::forest) {
        if (tactic) {
          p.min_samples_leaf = 1;
          p.min_samples_split = 3;
          p.n_estimators = 78;
        } else {
          p.max_depth = 20;
          p.min_samples_leaf = 2;
          p.min_samples_split = 3;
          p.n_estimators = 64;
        }
      } else {
        if (tactic) {
          p.gamma = 0.632;
          p.learning_rate = 0.242;
          p.max_depth = 9;
          p.n_estimators = 82;
        } else {
          p.gamma = 1.679;
          p.learning_rate = 0.124;
          p.max_depth = 14;
          p.n_estimators = 156;
        }
      }
      break;
    case Strategy::cc:
      if (learner == LearnerKind::tree) {
        if (tactic) {
          p.criterion = Criterion::entropy;
          p.max_depth = 91;
          p.max_leaf_nodes = 100;
          p.min_samples_leaf = 2;
          p.min_samples_split = 14;
        } else {
          p.criterion = Criterion::gini;
          p.max_depth = 65;
          p.max_leaf_nodes = 20;
          p.min_samples_leaf = 2;
          p.min_samples_split = 5;
        }
      } else if (learner == LearnerKind::forest) {
        p.max_features = MaxFeatures::sqrt_features;  // table's "auto"
        p.min_samples_leaf = 1;
        p.min_samples_split = 5;
        p.n_estimators = tactic ? 96 : 178;
      } else {
        if (tactic) {
          p.gamma = 0.644;
          p.learning_rate = 0.243;
          p.max_depth = 5;
          p.n_estimators = 191;
        } else {
          p.gamma = 1.896;
          p.learning_rate = 0.253;
          p.max_depth = 12;
          p.n_estimators = 54;
        }
      }
      break;
    case Strategy::lp:
      if (learner == LearnerKind::tree) {
        if (tactic) {
          p.criterion = Criterion::gini;
          p.max_depth = 31;
          p.max_leaf_nodes = 50;
          p.min_samples_leaf = 4;
          p.min_samples_split = 19;
        } else {
          p.criterion = Criterion::entropy;
          p.max_depth = 46;
          p.min_samples_leaf = 3;
          p.min_samples_split = 4;
        }
      } else if (learner == LearnerKind::forest) {
        if (tactic) {
          p.max_features = MaxFeatures::log2_features;
          p.min_samples_leaf = 1;
          p.min_samples_split = 6;
          p.n_estimators = 199;
        } else {
          p.max_features = MaxFeatures::sqrt_features;
          p.min_samples_leaf = 1;
          p.min_samples_split = 5;
          p.n_estimators = 153;
        }
      } else {
        p.gamma = 0.0;
        p.learning_rate = 0.3;
        p.max_depth = 6;
        p.n_estimators = 100;
      }
      break;
  }
  return p;
}

inline Strategy preset_strategy(const std::string& preset) {
  if (preset.rfind("paper-br-", 0) == 0) return Strategy::br;
  if (preset.rfind("paper-cc-", 0) == 0) return Strategy::cc;
  if (preset.rfind("paper-lp-", 0) == 0) return Strategy::lp;
  throw ConfigError("unknown preset: " + preset);
}

}  // namespace droidttp

#endif  // DROIDTTP_PRESETS_HPP
