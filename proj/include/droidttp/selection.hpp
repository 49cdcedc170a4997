#ifndef DROIDTTP_SELECTION_HPP
#define DROIDTTP_SELECTION_HPP

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "dataset.hpp"

namespace droidttp {

enum class ChiSquareVariant {
  presence2,     // SelectKBest-style: feature-presence counts within y=1 / y=0
  contingency4,  // full 2x2 Pearson statistic
};

inline std::string to_string(ChiSquareVariant v) {
  return v == ChiSquareVariant::presence2 ? "presence2" : "contingency4";
}
inline ChiSquareVariant chi_square_variant_from_string(const std::string& s) {
  if (s == "presence2") return ChiSquareVariant::presence2;
  if (s == "contingency4") return ChiSquareVariant::contingency4;
  throw ConfigError("unknown chi-square variant: " + s);
}

// Chi-square score for one binary feature column against one binary label
// column. Cells with zero expected count contribute 0 (limit convention).
inline double chi_square(const std::vector<std::uint8_t>& feature,
                         const std::vector<std::uint8_t>& label, ChiSquareVariant variant) {
  if (feature.size() != label.size()) throw LengthMismatch("feature/label length");
  if (feature.empty()) throw LengthMismatch("empty columns");
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (std::size_t i = 0; i < feature.size(); ++i) {
    if (feature[i] > 1 || label[i] > 1) throw NonBinaryInput("entries must be 0/1");
    if (feature[i]) {
      label[i] ? ++n11 : ++n10;
    } else {
      label[i] ? ++n01 : ++n00;
    }
  }
  const double n = static_cast<double>(feature.size());
  const double tf = n11 + n10;   // total feature occurrences
  const double ty = n11 + n01;   // total label occurrences
  auto cell = [](double o, double e) { return e > 0 ? (o - e) * (o - e) / e : 0.0; };

  if (variant == ChiSquareVariant::presence2) {
    // Observed: feature occurrences within y=1 and within y=0.
    // Expected: E = T_f * T_y / N for the positive cell, T_f * (N-T_y)/N otherwise.
    return cell(n11, tf * ty / n) + cell(n10, tf * (n - ty) / n);
  }
  return cell(n11, tf * ty / n) + cell(n10, tf * (n - ty) / n) +
         cell(n01, (n - tf) * ty / n) + cell(n00, (n - tf) * (n - ty) / n);
}

struct SelectionConfig {
  std::size_t top_m = 300;
  std::vector<std::uint64_t> seeds;
  ChiSquareVariant variant = ChiSquareVariant::presence2;
  double train_fraction_complement = 0.2;  // test fraction of the per-seed split

  void validate() const {
    if (top_m < 1) throw ConfigError("m must be >= 1");
    if (seeds.empty()) throw ConfigError("need at least one seed");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) throw ConfigError("seeds must be distinct");
  }
};

struct ChiSquareScores {
  std::size_t label_index = 0;
  std::vector<double> scores;
  ChiSquareVariant variant = ChiSquareVariant::presence2;
};

inline std::vector<std::uint8_t> column(const BinMatrix& m, std::size_t c) {
  std::vector<std::uint8_t> v(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return v;
}

inline ChiSquareScores score_label(const MultiLabelDataset& ds, std::size_t label_index,
                                   ChiSquareVariant variant) {
  if (ds.n() == 0) throw EmptyDataset("cannot score an empty dataset");
  ChiSquareScores out;
  out.label_index = label_index;
  out.variant = variant;
  out.scores.resize(ds.vocab.size());
  auto y = column(ds.Y, label_index);
  for (std::size_t j = 0; j < ds.vocab.size(); ++j)
    out.scores[j] = chi_square(column(ds.X, j), y, variant);
  return out;
}

// Per-label top-m feature indices, ranked by descending score with ascending
// feature index breaking ties.
inline std::vector<std::vector<std::size_t>> top_m_per_label(const MultiLabelDataset& ds,
                                                             std::size_t m,
                                                             ChiSquareVariant variant) {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (ds.n() == 0) throw EmptyDataset("cannot select from an empty dataset");
  std::vector<std::vector<std::size_t>> out(ds.labels.size());
  for (std::size_t l = 0; l < ds.labels.size(); ++l) {
    auto scores = score_label(ds, l, variant).scores;
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });
    order.resize(std::min(m, order.size()));
    out[l] = std::move(order);
  }
  return out;
}

struct SelectionReport {
  SelectionConfig config;
  // per seed: per label, the selected feature names in rank order
  std::vector<std::vector<std::vector<std::string>>> per_seed;
  std::vector<std::string> final_features;  // F_G, sorted names
  std::vector<std::uint64_t> seed_fingerprints;  // vocabulary fingerprint of each per-seed train set
};

// Algorithm: per seed, re-split the data, rank features per label on the
// training portion, take the per-seed union of top-m lists, then the union
// across seeds. Seed-order invariant because the result is a set.
inline SelectionReport generalizable_subset(const MultiLabelDataset& full,
                                            const SelectionConfig& cfg) {
  cfg.validate();
  SelectionReport report;
  report.config = cfg;
  std::set<std::string> global;
  for (auto seed : cfg.seeds) {
    SplitSpec spec{seed, cfg.train_fraction_complement};
    auto [train, test] = split(full, spec);
    (void)test;
    auto per_label = top_m_per_label(train, cfg.top_m, cfg.variant);
    std::vector<std::vector<std::string>> named(per_label.size());
    for (std::size_t l = 0; l < per_label.size(); ++l)
      for (auto j : per_label[l]) named[l].push_back(train.vocab.name(j));
    for (const auto& lst : named) global.insert(lst.begin(), lst.end());
    report.per_seed.push_back(std::move(named));
    report.seed_fingerprints.push_back(train.vocab.fingerprint());
  }
  report.final_features.assign(global.begin(), global.end());
  return report;
}

// Restrict X to the given features, sorted-name order; Y unchanged.
inline MultiLabelDataset project(const MultiLabelDataset& ds,
                                 std::vector<std::string> features) {
  features = sorted_unique(std::move(features));
  std::vector<std::size_t> cols;
  for (const auto& f : features) {
    auto j = ds.vocab.index_of(f);
    if (!j) throw UnknownFeature(f + " not in vocabulary");
    cols.push_back(*j);
  }
  MultiLabelDataset out;
  out.ids = ds.ids;
  out.labels = ds.labels;
  out.Y = ds.Y;
  out.vocab = FeatureVocabulary(features);
  out.X = ds.X.select_cols(cols);
  out.check();
  return out;
}

inline json to_json(const SelectionReport& r) {
  json seeds_json = json::array();
  for (std::size_t i = 0; i < r.per_seed.size(); ++i) {
    json labels_json = json::array();
    for (const auto& lst : r.per_seed[i]) labels_json.push_back(lst);
    seeds_json.push_back(json{{"seed", r.config.seeds[i]},
                              {"train_vocab_fingerprint", r.seed_fingerprints[i]},
                              {"top_features_per_label", labels_json}});
  }
  return json{{"schema_version", 1},
              {"config",
               {{"m", r.config.top_m},
                {"seeds", r.config.seeds},
                {"variant", to_string(r.config.variant)},
                {"test_fraction", r.config.train_fraction_complement}}},
              {"per_seed", seeds_json},
              {"final_features", r.final_features}};
}

}  // namespace droidttp

#endif  // DROIDTTP_SELECTION_HPP
