#ifndef DROIDTTP_LEARNERS_HPP
#define DROIDTTP_LEARNERS_HPP

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace droidttp {

enum class LearnerKind { tree, forest, gbt };
enum class Criterion { gini, entropy };
enum class MaxFeatures { all, sqrt_features, log2_features };

inline std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::tree: return "tree";
    case LearnerKind::forest: return "forest";
    default: return "gbt";
  }
}
inline LearnerKind learner_kind_from_string(const std::string& s) {
  if (s == "tree") return LearnerKind::tree;
  if (s == "forest") return LearnerKind::forest;
  if (s == "gbt") return LearnerKind::gbt;
  throw ConfigError("unknown learner kind: " + s);
}
inline std::string to_string(Criterion c) { return c == Criterion::gini ? "gini" : "entropy"; }
inline Criterion criterion_from_string(const std::string& s) {
  if (s == "gini") return Criterion::gini;
  if (s == "entropy") return Criterion::entropy;
  throw ConfigError("unknown criterion: " + s);
}
inline std::string to_string(MaxFeatures m) {
  switch (m) {
    case MaxFeatures::all: return "all";
    case MaxFeatures::sqrt_features: return "sqrt";
    default: return "log2";
  }
}
inline MaxFeatures max_features_from_string(const std::string& s) {
  if (s == "all") return MaxFeatures::all;
  // "auto" is the sklearn-era alias used by the hyperparameter tables
  if (s == "sqrt" || s == "auto") return MaxFeatures::sqrt_features;
  if (s == "log2") return MaxFeatures::log2_features;
  throw ConfigError("unknown max_features: " + s);
}

struct LearnerParams {
  LearnerKind kind = LearnerKind::tree;
  Criterion criterion = Criterion::gini;
  std::optional<int> max_depth;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  std::optional<int> max_leaf_nodes;
  int n_estimators = 100;
  MaxFeatures max_features = MaxFeatures::all;
  double learning_rate = 0.3;
  double gamma = 0.0;      // minimum loss reduction to keep a split (GBT)
  bool bootstrap = true;   // forest resampling; disable for degenerate-equality tests
  std::uint64_t seed = 0;

  void validate() const {
    if (max_depth && *max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    if (max_leaf_nodes && *max_leaf_nodes < 2) throw ConfigError("max_leaf_nodes must be >= 2");
    if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
      throw ConfigError("learning_rate must be in (0,1]");
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  }
};

// Array-encoded tree node. Features are binary so the implicit threshold is
// 0.5: x[feature]==0 goes left, ==1 goes right. Leaves carry either a class
// probability vector (classification) or a single additive score (GBT).
struct TreeNode {
  int feature = -1;  // -1 for leaves
  int left = -1;
  int right = -1;
  std::vector<double> value;
};

struct FittedTree {
  std::vector<TreeNode> nodes;
  std::size_t n_features = 0;
  int n_classes = 0;  // 0 for regression trees

  bool is_leaf_only() const { return nodes.size() == 1; }
  int root_split_feature() const { return nodes.empty() ? -1 : nodes[0].feature; }

  const std::vector<double>& predict_leaf(const std::uint8_t* x) const {
    int i = 0;
    while (nodes[i].feature >= 0) i = x[nodes[i].feature] ? nodes[i].right : nodes[i].left;
    return nodes[i].value;
  }

  std::size_t leaf_count() const {
    std::size_t c = 0;
    for (const auto& n : nodes) c += (n.feature < 0);
    return c;
  }
};

// Forest of probability-averaging trees or additive GBT scorer.
struct FittedModel {
  LearnerKind kind = LearnerKind::tree;
  LearnerParams params;
  std::vector<FittedTree> trees;    // gbt layout: round-major, trees[r*K + k]
  std::vector<double> base_scores;  // gbt per-class prior log-odds
  int n_classes = 0;
  std::size_t n_features = 0;
};

namespace tree_detail {

inline double impurity(const std::vector<double>& counts, double total, Criterion crit) {
  if (total <= 0) return 0.0;
  double imp = crit == Criterion::gini ? 1.0 : 0.0;
  for (double c : counts) {
    if (c <= 0) continue;
    double p = c / total;
    if (crit == Criterion::gini)
      imp -= p * p;
    else
      imp -= p * std::log2(p);
  }
  return imp;
}

struct SplitResult {
  int feature = -1;
  double gain = 0.0;
  std::vector<std::size_t> left, right;
};

// Exhaustive search over candidate features; gain is the parent-size-weighted
// impurity decrease (classification) or the Newton gain (regression).
class ClassificationGrower {
 public:
  ClassificationGrower(const BinMatrix& X, const std::vector<int>& y, int n_classes,
                       const LearnerParams& p, Rng* feature_rng, std::size_t mtry)
      : X_(X), y_(y), n_classes_(n_classes), p_(p), feature_rng_(feature_rng), mtry_(mtry) {}

  FittedTree grow(const std::vector<std::size_t>& root_samples) {
    FittedTree tree;
    tree.n_features = X_.cols();
    tree.n_classes = n_classes_;

    struct Pending {
      int node_id;
      std::vector<std::size_t> samples;
      int depth;
      SplitResult split;
    };
    auto cmp = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second > b.second;  // earlier nodes first on ties
    };
    // best-first frontier keyed by gain; subsumes depth-first growth when no
    // leaf budget is set, and enforces max_leaf_nodes when it is
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                        decltype(cmp)>
        frontier(cmp);
    std::vector<Pending> pending;

    tree.nodes.push_back(make_leaf(root_samples));
    auto root_split = find_split(root_samples, 0);
    if (root_split.feature >= 0) {
      pending.push_back({0, root_samples, 0, std::move(root_split)});
      frontier.push({pending.back().split.gain, 0});
    }

    std::size_t leaves = 1;
    std::size_t max_leaves =
        p_.max_leaf_nodes ? static_cast<std::size_t>(*p_.max_leaf_nodes)
                          : std::numeric_limits<std::size_t>::max();
    while (!frontier.empty() && leaves < max_leaves) {
      auto [gain, pi] = frontier.top();
      frontier.pop();
      Pending item = std::move(pending[pi]);
      const auto& split = item.split;

      int left_id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(make_leaf(split.left));
      int right_id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(make_leaf(split.right));
      tree.nodes[item.node_id].feature = split.feature;
      tree.nodes[item.node_id].left = left_id;
      tree.nodes[item.node_id].right = right_id;
      tree.nodes[item.node_id].value.clear();
      ++leaves;  // one leaf replaced by two

      for (auto [child_id, child_samples] :
           {std::pair{left_id, &split.left}, std::pair{right_id, &split.right}}) {
        auto child_split = find_split(*child_samples, item.depth + 1);
        if (child_split.feature >= 0) {
          pending.push_back({child_id, *child_samples, item.depth + 1, std::move(child_split)});
          frontier.push({pending.back().split.gain, static_cast<int>(pending.size() - 1)});
        }
      }
    }
    return tree;
  }

 private:
  TreeNode make_leaf(const std::vector<std::size_t>& samples) const {
    TreeNode leaf;
    std::vector<double> counts(n_classes_, 0.0);
    for (auto i : samples) counts[static_cast<std::size_t>(y_[i])] += 1.0;
    double total = static_cast<double>(samples.size());
    leaf.value.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
      leaf.value[k] = total > 0 ? counts[k] / total : 1.0 / n_classes_;
    return leaf;
  }

  std::vector<std::size_t> candidate_features() const {
    std::size_t s = X_.cols();
    if (mtry_ >= s || !feature_rng_) {
      std::vector<std::size_t> all(s);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    // draw mtry distinct indices, then sort so tie-breaks stay index-ordered
    std::vector<std::size_t> pool(s);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < mtry_; ++i)
      std::swap(pool[i], pool[i + feature_rng_->below(s - i)]);
    pool.resize(mtry_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  SplitResult find_split(const std::vector<std::size_t>& samples, int depth) const {
    SplitResult best;
    if (p_.max_depth && depth >= *p_.max_depth) return best;
    if (samples.size() < static_cast<std::size_t>(p_.min_samples_split)) return best;

    std::vector<double> counts(n_classes_, 0.0);
    for (auto i : samples) counts[static_cast<std::size_t>(y_[i])] += 1.0;
    double total = static_cast<double>(samples.size());
    double parent_imp = impurity(counts, total, p_.criterion);
    if (parent_imp <= 0.0) return best;  // pure node

    for (auto f : candidate_features()) {
      std::vector<double> left_counts(n_classes_, 0.0);
      double nl = 0;
      for (auto i : samples) {
        if (!X_(i, f)) {
          left_counts[static_cast<std::size_t>(y_[i])] += 1.0;
          ++nl;
        }
      }
      double nr = total - nl;
      if (nl < p_.min_samples_leaf || nr < p_.min_samples_leaf) continue;
      std::vector<double> right_counts(n_classes_);
      for (std::size_t k = 0; k < right_counts.size(); ++k)
        right_counts[k] = counts[k] - left_counts[k];
      double gain = parent_imp - (nl / total) * impurity(left_counts, nl, p_.criterion) -
                    (nr / total) * impurity(right_counts, nr, p_.criterion);
      if (gain > best.gain + 1e-12) {
        best.feature = static_cast<int>(f);
        best.gain = gain;
      }
    }
    if (best.feature < 0 || best.gain <= 1e-12) {
      best.feature = -1;
      return best;
    }
    for (auto i : samples)
      (X_(i, static_cast<std::size_t>(best.feature)) ? best.right : best.left).push_back(i);
    return best;
  }

  const BinMatrix& X_;
  const std::vector<int>& y_;
  int n_classes_;
  const LearnerParams& p_;
  Rng* feature_rng_;
  std::size_t mtry_;
};

// Regression tree on gradient/hessian pairs, Newton leaf values, second-order
// split gain; splits below gamma are rejected.
class GradientGrower {
 public:
  GradientGrower(const BinMatrix& X, const std::vector<double>& grad,
                 const std::vector<double>& hess, const LearnerParams& p)
      : X_(X), grad_(grad), hess_(hess), p_(p) {}

  static constexpr double kLambda = 1.0;  // L2 regularization on leaf weights

  FittedTree grow() {
    FittedTree tree;
    tree.n_features = X_.cols();
    std::vector<std::size_t> all(X_.rows());
    std::iota(all.begin(), all.end(), 0);
    tree.nodes.push_back(make_leaf(all));
    build(tree, 0, all, 0);
    return tree;
  }

 private:
  TreeNode make_leaf(const std::vector<std::size_t>& samples) const {
    double g = 0, h = 0;
    for (auto i : samples) {
      g += grad_[i];
      h += hess_[i];
    }
    TreeNode leaf;
    leaf.value = {-g / (h + kLambda)};
    return leaf;
  }

  static double score(double g, double h) { return g * g / (h + kLambda); }

  void build(FittedTree& tree, int node_id, const std::vector<std::size_t>& samples,
             int depth) {
    int max_depth = p_.max_depth.value_or(6);
    if (depth >= max_depth) return;
    if (samples.size() < static_cast<std::size_t>(p_.min_samples_split)) return;

    double g_total = 0, h_total = 0;
    for (auto i : samples) {
      g_total += grad_[i];
      h_total += hess_[i];
    }
    int best_feature = -1;
    double best_gain = 0;
    for (std::size_t f = 0; f < X_.cols(); ++f) {
      double gl = 0, hl = 0;
      std::size_t nl = 0;
      for (auto i : samples) {
        if (!X_(i, f)) {
          gl += grad_[i];
          hl += hess_[i];
          ++nl;
        }
      }
      std::size_t nr = samples.size() - nl;
      if (nl < static_cast<std::size_t>(p_.min_samples_leaf) ||
          nr < static_cast<std::size_t>(p_.min_samples_leaf))
        continue;
      double gain =
          0.5 * (score(gl, hl) + score(g_total - gl, h_total - hl) - score(g_total, h_total));
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_feature = static_cast<int>(f);
      }
    }
    if (best_feature < 0 || best_gain < p_.gamma || best_gain <= 1e-12) return;

    std::vector<std::size_t> left, right;
    for (auto i : samples)
      (X_(i, static_cast<std::size_t>(best_feature)) ? right : left).push_back(i);
    int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(make_leaf(left));
    int right_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(make_leaf(right));
    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].left = left_id;
    tree.nodes[node_id].right = right_id;
    tree.nodes[node_id].value.clear();
    build(tree, left_id, left, depth + 1);
    build(tree, right_id, right, depth + 1);
  }

  const BinMatrix& X_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  const LearnerParams& p_;
};

inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  Rng r(base ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  return r.next();
}

}  // namespace tree_detail

inline void check_fit_inputs(const BinMatrix& X, const std::vector<int>& y, int n_classes) {
  if (X.rows() != y.size()) throw DimensionMismatch("X rows != y length");
  if (X.rows() == 0) throw EmptyDataset("cannot fit on zero samples");
  for (int c : y)
    if (c < 0 || c >= n_classes) throw DimensionMismatch("class index out of range");
}

inline FittedTree fit_tree_impl(const BinMatrix& X, const std::vector<int>& y, int n_classes,
                                const LearnerParams& params, Rng* feature_rng,
                                std::size_t mtry) {
  std::vector<std::size_t> all(X.rows());
  std::iota(all.begin(), all.end(), 0);
  tree_detail::ClassificationGrower grower(X, y, n_classes, params, feature_rng, mtry);
  return grower.grow(all);
}

inline FittedModel fit_tree(const BinMatrix& X, const std::vector<int>& y,
                            const LearnerParams& params, int n_classes) {
  params.validate();
  check_fit_inputs(X, y, n_classes);
  FittedModel m;
  m.kind = LearnerKind::tree;
  m.params = params;
  m.n_classes = n_classes;
  m.n_features = X.cols();
  m.trees.push_back(fit_tree_impl(X, y, n_classes, params, nullptr, X.cols()));
  return m;
}

inline std::size_t mtry_for(MaxFeatures mf, std::size_t s) {
  switch (mf) {
    case MaxFeatures::all: return s;
    case MaxFeatures::sqrt_features:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(s))));
    default:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::log2(double(std::max<std::size_t>(2, s)))));
  }
}

inline FittedModel fit_forest(const BinMatrix& X, const std::vector<int>& y,
                              const LearnerParams& params, int n_classes) {
  params.validate();
  check_fit_inputs(X, y, n_classes);
  FittedModel m;
  m.kind = LearnerKind::forest;
  m.params = params;
  m.n_classes = n_classes;
  m.n_features = X.cols();
  std::size_t mtry = mtry_for(params.max_features, X.cols());
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(tree_detail::stream_seed(params.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> sample(X.rows());
    if (params.bootstrap) {
      for (auto& i : sample) i = rng.below(X.rows());
      std::sort(sample.begin(), sample.end());
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    tree_detail::ClassificationGrower grower(X, y, n_classes, params, &rng, mtry);
    m.trees.push_back(grower.grow(sample));
  }
  return m;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Raw one-vs-rest margin scores: base + learning_rate * sum of tree outputs.
inline std::vector<double> gbt_scores_row(const FittedModel& m, const std::uint8_t* x) {
  std::vector<double> scores = m.base_scores;
  int K = m.n_classes;
  for (std::size_t i = 0; i < m.trees.size(); ++i)
    scores[i % K] += m.params.learning_rate * m.trees[i].predict_leaf(x)[0];
  return scores;
}

inline FittedModel fit_gbt(const BinMatrix& X, const std::vector<int>& y,
                           const LearnerParams& params, int n_classes,
                           std::vector<double>* loss_per_round = nullptr) {
  params.validate();
  check_fit_inputs(X, y, n_classes);
  FittedModel m;
  m.kind = LearnerKind::gbt;
  m.params = params;
  m.n_classes = n_classes;
  m.n_features = X.cols();

  const std::size_t n = X.rows();
  const int K = n_classes;
  m.base_scores.resize(K);
  for (int k = 0; k < K; ++k) {
    double pos = 0;
    for (auto c : y) pos += (c == k);
    double p = std::clamp(pos / double(n), 1e-6, 1.0 - 1e-6);
    m.base_scores[k] = std::log(p / (1.0 - p));
  }
  std::vector<std::vector<double>> scores(K, std::vector<double>(n));
  for (int k = 0; k < K; ++k) std::fill(scores[k].begin(), scores[k].end(), m.base_scores[k]);

  auto total_loss = [&]() {
    double loss = 0;
    for (int k = 0; k < K; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        double p = std::clamp(sigmoid(scores[k][i]), 1e-12, 1.0 - 1e-12);
        loss += (y[i] == k) ? -std::log(p) : -std::log(1.0 - p);
      }
    return loss / double(n * K);
  };

  std::vector<double> grad(n), hess(n);
  for (int round = 0; round < params.n_estimators; ++round) {
    for (int k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        double p = sigmoid(scores[k][i]);
        grad[i] = p - (y[i] == k ? 1.0 : 0.0);
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      }
      tree_detail::GradientGrower grower(X, grad, hess, params);
      FittedTree tree = grower.grow();
      for (std::size_t i = 0; i < n; ++i)
        scores[k][i] += params.learning_rate * tree.predict_leaf(X.row_ptr(i))[0];
      m.trees.push_back(std::move(tree));
    }
    if (loss_per_round) loss_per_round->push_back(total_loss());
  }
  return m;
}

inline FittedModel fit(const BinMatrix& X, const std::vector<int>& y,
                       const LearnerParams& params, int n_classes) {
  switch (params.kind) {
    case LearnerKind::tree: return fit_tree(X, y, params, n_classes);
    case LearnerKind::forest: return fit_forest(X, y, params, n_classes);
    default: return fit_gbt(X, y, params, n_classes);
  }
}

inline std::vector<double> predict_row_proba(const FittedModel& m, const std::uint8_t* x) {
  std::vector<double> p(m.n_classes, 0.0);
  if (m.kind == LearnerKind::gbt) {
    auto scores = gbt_scores_row(m, x);
    double sum = 0;
    for (int k = 0; k < m.n_classes; ++k) {
      p[k] = sigmoid(scores[k]);
      sum += p[k];
    }
    if (sum <= 0) sum = 1;
    for (auto& v : p) v /= sum;
  } else {
    for (const auto& tree : m.trees) {
      const auto& leaf = tree.predict_leaf(x);
      for (int k = 0; k < m.n_classes; ++k) p[k] += leaf[k];
    }
    for (auto& v : p) v /= double(m.trees.size());
  }
  return p;
}

inline std::vector<std::vector<double>> predict_proba(const FittedModel& m, const BinMatrix& X) {
  if (X.cols() != m.n_features) throw DimensionMismatch("feature dimensionality mismatch");
  std::vector<std::vector<double>> out;
  out.reserve(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out.push_back(predict_row_proba(m, X.row_ptr(i)));
  return out;
}

// argmax with lowest-index tie-break
inline int argmax_class(const std::vector<double>& p) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(p.size()); ++k)
    if (p[k] > p[best]) best = k;
  return best;
}

inline std::vector<int> predict(const FittedModel& m, const BinMatrix& X) {
  std::vector<int> out;
  for (const auto& p : predict_proba(m, X)) out.push_back(argmax_class(p));
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization (self-describing, flat node arrays).
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const LearnerParams& p) {
  nlohmann::json j{{"kind", to_string(p.kind)},
                   {"criterion", to_string(p.criterion)},
                   {"min_samples_split", p.min_samples_split},
                   {"min_samples_leaf", p.min_samples_leaf},
                   {"n_estimators", p.n_estimators},
                   {"max_features", to_string(p.max_features)},
                   {"learning_rate", p.learning_rate},
                   {"gamma", p.gamma},
                   {"bootstrap", p.bootstrap},
                   {"seed", p.seed}};
  if (p.max_depth) j["max_depth"] = *p.max_depth;
  if (p.max_leaf_nodes) j["max_leaf_nodes"] = *p.max_leaf_nodes;
  return j;
}

inline LearnerParams learner_params_from_json(const nlohmann::json& j) {
  LearnerParams p;
  p.kind = learner_kind_from_string(j.at("kind").get<std::string>());
  p.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  if (j.contains("max_depth")) p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_split = j.at("min_samples_split").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  if (j.contains("max_leaf_nodes")) p.max_leaf_nodes = j.at("max_leaf_nodes").get<int>();
  p.n_estimators = j.at("n_estimators").get<int>();
  p.max_features = max_features_from_string(j.at("max_features").get<std::string>());
  p.learning_rate = j.at("learning_rate").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

inline nlohmann::json to_json(const FittedTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"feature", n.feature}, {"left", n.left}, {"right", n.right},
                     {"value", n.value}});
  return {{"n_features", t.n_features}, {"n_classes", t.n_classes}, {"nodes", nodes}};
}

inline FittedTree fitted_tree_from_json(const nlohmann::json& j) {
  FittedTree t;
  t.n_features = j.at("n_features").get<std::size_t>();
  t.n_classes = j.at("n_classes").get<int>();
  for (const auto& nj : j.at("nodes")) {
    TreeNode n;
    n.feature = nj.at("feature").get<int>();
    n.left = nj.at("left").get<int>();
    n.right = nj.at("right").get<int>();
    n.value = nj.at("value").get<std::vector<double>>();
    t.nodes.push_back(std::move(n));
  }
  return t;
}

inline nlohmann::json to_json(const FittedModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) trees.push_back(to_json(t));
  return {{"schema_version", 1},
          {"kind", to_string(m.kind)},
          {"params", to_json(m.params)},
          {"n_classes", m.n_classes},
          {"n_features", m.n_features},
          {"base_scores", m.base_scores},
          {"trees", trees}};
}

inline FittedModel fitted_model_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", -1) != 1)
    throw SchemaVersionMismatch("learner model schema");
  FittedModel m;
  m.kind = learner_kind_from_string(j.at("kind").get<std::string>());
  m.params = learner_params_from_json(j.at("params"));
  m.n_classes = j.at("n_classes").get<int>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.base_scores = j.at("base_scores").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) m.trees.push_back(fitted_tree_from_json(tj));
  if (m.trees.empty()) throw InvalidInput("model has no trees");
  return m;
}

}  // namespace droidttp

#endif  // DROIDTTP_LEARNERS_HPP
