#ifndef DROIDTTP_ATTRIBUTION_HPP
#define DROIDTTP_ATTRIBUTION_HPP

#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "dataset.hpp"
#include "pta.hpp"

namespace droidttp {

struct AttributionResult {
  std::size_t label = 0;
  std::string instance_id;
  std::vector<double> phi;       // per-feature attribution
  double baseline = 0;           // E[f] over the sampled background rows
  double model_output = 0;       // f(x)
  std::size_t permutations = 0;
};

// Monte Carlo permutation Shapley for the model's per-label probability.
// Each permutation draws one background row; coordinates are switched from
// background to x in permutation order and marginal contributions accumulate.
// By construction sum(phi) == f(x) - mean_over_permutations f(background).
inline AttributionResult shapley_attribution(const PtaModel& model,
                                             const std::vector<std::uint8_t>& x,
                                             std::size_t label, const BinMatrix& background,
                                             std::size_t permutations, std::uint64_t seed,
                                             const std::string& instance_id = "") {
  if (x.size() != model.n_features) throw DimensionMismatch("instance dimensionality");
  if (background.cols() != model.n_features)
    throw DimensionMismatch("background dimensionality");
  if (background.rows() == 0) throw EmptyInput("empty background set");
  if (permutations < 1) throw ConfigError("permutations must be >= 1");
  if (label >= model.labels.size()) throw InvalidInput("label index out of range");

  const std::size_t s = model.n_features;
  AttributionResult res;
  res.label = label;
  res.instance_id = instance_id;
  res.phi.assign(s, 0.0);
  res.permutations = permutations;
  res.model_output = predict_label_proba(model, x.data(), label);

  Rng rng(seed);
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  double baseline_sum = 0;
  std::vector<std::uint8_t> cur(s);
  for (std::size_t p = 0; p < permutations; ++p) {
    std::size_t bg = rng.below(background.rows());
    std::copy(background.row_ptr(bg), background.row_ptr(bg) + s, cur.begin());
    rng.shuffle(order);
    double prev = predict_label_proba(model, cur.data(), label);
    baseline_sum += prev;
    for (auto j : order) {
      if (cur[j] == x[j]) {
        // no coordinate change, marginal contribution is exactly 0
        continue;
      }
      cur[j] = x[j];
      double next = predict_label_proba(model, cur.data(), label);
      res.phi[j] += next - prev;
      prev = next;
    }
  }
  for (auto& v : res.phi) v /= double(permutations);
  res.baseline = baseline_sum / double(permutations);
  return res;
}

struct TopFeaturesConfig {
  std::size_t top_n = 10;
  std::size_t permutations = 200;   // per (instance, label)
  std::size_t max_instances = 50;   // evaluation subsample cap
  std::size_t max_background = 100;
  std::uint64_t seed = 0;
};

struct TopFeaturesReport {
  // per label: (feature index, mean |phi|) in rank order
  std::vector<std::vector<std::pair<std::size_t, double>>> per_label;
  // grid(l, f) true iff feature f is in label l's top-n
  std::vector<std::vector<bool>> grid;
};

// Mean-|phi| feature ranking per label over a seeded subsample, plus the
// feature-by-label co-occurrence grid behind the heatmap export.
inline TopFeaturesReport top_features_per_label(const PtaModel& model,
                                                const MultiLabelDataset& ds,
                                                const TopFeaturesConfig& cfg) {
  if (cfg.top_n < 1) throw ConfigError("top_n must be >= 1");
  ds.check();
  if (ds.vocab.fingerprint() != model.vocab_fingerprint)
    throw VocabularyMismatch("dataset vocabulary differs from the model's");

  Rng rng(cfg.seed);
  auto pick_rows = [&](std::size_t cap) {
    std::vector<std::size_t> idx(ds.n());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(std::min(cap, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  auto background = ds.X.select_rows(pick_rows(cfg.max_background));
  auto eval_rows = pick_rows(cfg.max_instances);

  const std::size_t s = ds.vocab.size(), t = model.labels.size();
  TopFeaturesReport rep;
  rep.per_label.resize(t);
  rep.grid.assign(t, std::vector<bool>(s, false));
  for (std::size_t l = 0; l < t; ++l) {
    std::vector<double> mean_abs(s, 0.0);
    for (auto r : eval_rows) {
      std::vector<std::uint8_t> x(ds.X.row_ptr(r), ds.X.row_ptr(r) + s);
      auto a = shapley_attribution(model, x, l, background, cfg.permutations, rng.next(),
                                   ds.ids[r]);
      for (std::size_t f = 0; f < s; ++f) mean_abs[f] += std::abs(a.phi[f]);
    }
    for (auto& v : mean_abs) v /= double(eval_rows.size());
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (mean_abs[a] != mean_abs[b]) return mean_abs[a] > mean_abs[b];
      return a < b;
    });
    order.resize(std::min(cfg.top_n, order.size()));
    for (auto f : order) {
      rep.per_label[l].emplace_back(f, mean_abs[f]);
      rep.grid[l][f] = true;
    }
  }
  return rep;
}

inline json to_json(const AttributionResult& r, const FeatureVocabulary& vocab,
                    const std::string& label_name) {
  json feats = json::array();
  for (std::size_t f = 0; f < r.phi.size(); ++f)
    feats.push_back({{"feature", vocab.name(f)}, {"phi", r.phi[f]}});
  double phi_sum = std::accumulate(r.phi.begin(), r.phi.end(), 0.0);
  return json{{"schema_version", 1},
              {"label", label_name},
              {"instance", r.instance_id},
              {"baseline", r.baseline},
              {"model_output", r.model_output},
              {"phi_sum", phi_sum},
              {"permutations", r.permutations},
              {"attributions", feats}};
}

// Heatmap grid CSV: rows = labels, columns = the union of per-label top
// features, cells 0/1.
inline std::string grid_csv(const TopFeaturesReport& rep, const FeatureVocabulary& vocab,
                            const LabelSpace& labels) {
  std::vector<std::size_t> cols;
  for (const auto& lst : rep.per_label)
    for (const auto& [f, score] : lst) cols.push_back(f);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  std::string out = "label";
  for (auto f : cols) out += "," + csv_escape(vocab.name(f));
  out += "\r\n";
  for (std::size_t l = 0; l < labels.size(); ++l) {
    out += csv_escape(labels.name(l));
    for (auto f : cols) out += rep.grid[l][f] ? ",1" : ",0";
    out += "\r\n";
  }
  return out;
}

}  // namespace droidttp

#endif  // DROIDTTP_ATTRIBUTION_HPP
