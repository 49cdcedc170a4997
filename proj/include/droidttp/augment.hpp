#ifndef DROIDTTP_AUGMENT_HPP
#define DROIDTTP_AUGMENT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "dataset.hpp"

namespace droidttp {

enum class MinorityRule { irlbl_meanir, below_mean_frequency };

inline std::string to_string(MinorityRule r) {
  return r == MinorityRule::irlbl_meanir ? "irlbl_meanir" : "below_mean_frequency";
}
inline MinorityRule minority_rule_from_string(const std::string& s) {
  if (s == "irlbl_meanir") return MinorityRule::irlbl_meanir;
  if (s == "below_mean_frequency") return MinorityRule::below_mean_frequency;
  throw ConfigError("unknown minority rule: " + s);
}

struct AugmentConfig {
  std::size_t k = 5;       // nearest neighbors
  int percent = 100;       // target = percent/100 * majority-label count
  std::uint64_t seed = 0;
  MinorityRule rule = MinorityRule::irlbl_meanir;
  bool interpolate = false;  // thresholded-interpolation variant of feature synthesis

  void validate() const {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (percent < 1 || percent > 100) throw ConfigError("percent must be in [1,100]");
  }
};

inline std::vector<std::size_t> label_counts(const MultiLabelDataset& ds) {
  std::vector<std::size_t> counts(ds.labels.size());
  for (std::size_t l = 0; l < counts.size(); ++l) counts[l] = ds.Y.column_sum(l);
  return counts;
}

// irlbl_meanir: IRLbl(l) = max count / count(l); minority iff IRLbl > MeanIR.
// below_mean_frequency: minority iff count(l) < mean count.
inline std::set<std::size_t> minority_labels(const MultiLabelDataset& ds, MinorityRule rule) {
  if (ds.labels.size() < 1 || ds.n() == 0) throw EmptyDataset("no labels or samples");
  auto counts = label_counts(ds);
  std::set<std::size_t> out;
  if (rule == MinorityRule::below_mean_frequency) {
    double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / double(counts.size());
    for (std::size_t l = 0; l < counts.size(); ++l)
      if (double(counts[l]) < mean) out.insert(l);
    return out;
  }
  std::size_t max_count = *std::max_element(counts.begin(), counts.end());
  if (max_count == 0) return out;
  std::vector<double> ir(counts.size(), 0.0);
  std::size_t present = 0;
  double ir_sum = 0;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0) continue;  // absent labels carry no imbalance ratio
    ir[l] = double(max_count) / double(counts[l]);
    ir_sum += ir[l];
    ++present;
  }
  double mean_ir = present ? ir_sum / double(present) : 0.0;
  for (std::size_t l = 0; l < counts.size(); ++l)
    if (counts[l] > 0 && ir[l] > mean_ir) out.insert(l);
  return out;
}

inline std::size_t hamming_distance(const std::uint8_t* a, const std::uint8_t* b,
                                    std::size_t n) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) d += (a[i] != b[i]);
  return d;
}

struct AugmentReport {
  std::vector<std::size_t> minority;                  // targeted label indices
  std::vector<std::size_t> before_counts, after_counts;  // per label
  std::size_t synthetic_total = 0;
  std::vector<std::string> skipped_labels;  // minority labels with < 2 samples
};

// MLSMOTE over binary features. Per minority label: synthesize up to
// round(percent/100 * majority count) - current count samples (capped at the
// original n). Each synthetic row is a majority vote over a seed minority
// instance and its k nearest minority neighbors (Hamming distance); labels are
// copied verbatim from the seed. Originals are untouched, synthetics appended.
inline MultiLabelDataset mlsmote(const MultiLabelDataset& ds, const AugmentConfig& cfg,
                                 AugmentReport* report = nullptr) {
  cfg.validate();
  ds.check();
  auto counts = label_counts(ds);
  std::size_t majority = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  auto minority = minority_labels(ds, cfg.rule);

  MultiLabelDataset out = ds;  // append-only
  Rng rng(cfg.seed);
  AugmentReport local;
  local.before_counts = counts;
  local.minority.assign(minority.begin(), minority.end());

  std::size_t synth_serial = 0;
  for (auto l : minority) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.n(); ++i)
      if (ds.Y(i, l)) members.push_back(i);
    if (members.size() < 2) {
      local.skipped_labels.push_back(ds.labels.name(l));
      continue;
    }
    auto target = static_cast<std::size_t>(
        std::llround(double(cfg.percent) / 100.0 * double(majority)));
    std::size_t want = target > members.size() ? target - members.size() : 0;
    want = std::min(want, ds.n());  // synthetic count never exceeds original n

    for (std::size_t m = 0; m < want; ++m) {
      std::size_t seed_row = members[rng.below(members.size())];

      // k nearest minority neighbors of the seed (excluding itself),
      // distance ties broken by row index
      std::vector<std::pair<std::size_t, std::size_t>> dist;
      for (auto j : members) {
        if (j == seed_row) continue;
        dist.emplace_back(
            hamming_distance(ds.X.row_ptr(seed_row), ds.X.row_ptr(j), ds.X.cols()), j);
      }
      std::sort(dist.begin(), dist.end());
      std::size_t k = std::min(cfg.k, dist.size());

      std::vector<std::size_t> pool{seed_row};
      for (std::size_t j = 0; j < k; ++j) pool.push_back(dist[j].second);

      std::vector<std::uint8_t> row(ds.X.cols(), 0);
      if (cfg.interpolate) {
        // interpolate toward one random neighbor, threshold at 0.5
        std::size_t nb = k ? dist[rng.below(k)].second : seed_row;
        double alpha = rng.uniform01();
        for (std::size_t f = 0; f < ds.X.cols(); ++f) {
          double v = double(ds.X(seed_row, f)) +
                     alpha * (double(ds.X(nb, f)) - double(ds.X(seed_row, f)));
          row[f] = v > 0.5 ? 1 : (v < 0.5 ? 0 : std::uint8_t(rng.below(2)));
        }
      } else {
        for (std::size_t f = 0; f < ds.X.cols(); ++f) {
          std::size_t ones = 0;
          for (auto p : pool) ones += ds.X(p, f);
          std::size_t zeros = pool.size() - ones;
          row[f] = ones > zeros ? 1 : (ones < zeros ? 0 : std::uint8_t(rng.below(2)));
        }
      }
      out.X.append_row(row);
      std::vector<std::uint8_t> labels_row(ds.Y.row_ptr(seed_row),
                                           ds.Y.row_ptr(seed_row) + ds.Y.cols());
      out.Y.append_row(labels_row);
      out.ids.push_back("synthetic:" + ds.ids[seed_row] + ":" +
                        std::to_string(synth_serial++));
      ++local.synthetic_total;
    }
  }
  out.check();
  local.after_counts = label_counts(out);
  if (report) *report = local;
  return out;
}

inline json to_json(const AugmentReport& r, const LabelSpace& labels) {
  json per = json::array();
  for (std::size_t l = 0; l < labels.size(); ++l)
    per.push_back({{"label", labels.name(l)},
                   {"before", r.before_counts[l]},
                   {"after", r.after_counts[l]},
                   {"minority", std::find(r.minority.begin(), r.minority.end(), l) !=
                                    r.minority.end()}});
  return json{{"schema_version", 1},
              {"synthetic_total", r.synthetic_total},
              {"skipped_labels", r.skipped_labels},
              {"per_label", per}};
}

}  // namespace droidttp

#endif  // DROIDTTP_AUGMENT_HPP
