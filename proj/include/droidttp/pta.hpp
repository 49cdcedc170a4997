#ifndef DROIDTTP_PTA_HPP
#define DROIDTTP_PTA_HPP

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "dataset.hpp"
#include "learners.hpp"

namespace droidttp {

enum class Strategy { br, cc, lp };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::br: return "br";
    case Strategy::cc: return "cc";
    default: return "lp";
  }
}
inline Strategy strategy_from_string(const std::string& s) {
  if (s == "br") return Strategy::br;
  if (s == "cc") return Strategy::cc;
  if (s == "lp") return Strategy::lp;
  throw ConfigError("unknown strategy: " + s);
}

struct PtaModel {
  Strategy strategy = Strategy::br;
  LabelSpace labels;
  FeatureVocabulary vocab;  // training vocabulary; makes the model self-contained
  std::uint64_t vocab_fingerprint = 0;
  std::size_t n_features = 0;

  // br/cc: one binary learner per label; cc learners consume earlier chain
  // labels as extra trailing feature columns.
  std::vector<FittedModel> per_label;
  std::vector<std::size_t> chain_order;  // cc only, permutation of 0..t-1

  // lp: one multiclass learner plus the observed-combination decode table.
  FittedModel lp_learner;
  std::vector<std::vector<std::uint8_t>> lp_combinations;  // class -> label row

  void check() const {
    std::size_t t = labels.size();
    if (strategy == Strategy::lp) {
      if (lp_combinations.empty()) throw InvalidInput("LP model has no combinations");
      if (lp_combinations.size() > static_cast<std::size_t>(lp_learner.n_classes))
        throw InvalidInput("LP decode table larger than class count");
    } else {
      if (per_label.size() != t) throw InvalidInput("payload length != label count");
      if (strategy == Strategy::cc && chain_order.size() != t)
        throw InvalidInput("chain order length != label count");
    }
  }
};

inline std::vector<int> label_column_as_classes(const BinMatrix& Y, std::size_t l) {
  std::vector<int> y(Y.rows());
  for (std::size_t i = 0; i < Y.rows(); ++i) y[i] = Y(i, l);
  return y;
}

inline PtaModel fit_br(const MultiLabelDataset& ds, const LearnerParams& params) {
  ds.check();
  if (ds.labels.size() < 1) throw EmptyDataset("no labels");
  PtaModel m;
  m.strategy = Strategy::br;
  m.labels = ds.labels;
  m.vocab = ds.vocab;
  m.vocab_fingerprint = ds.vocab.fingerprint();
  m.n_features = ds.vocab.size();
  for (std::size_t l = 0; l < ds.labels.size(); ++l)
    m.per_label.push_back(fit(ds.X, label_column_as_classes(ds.Y, l), params, 2));
  m.check();
  return m;
}

inline PtaModel fit_cc(const MultiLabelDataset& ds, const LearnerParams& params,
                       std::vector<std::size_t> order = {}) {
  ds.check();
  std::size_t t = ds.labels.size();
  if (order.empty()) {
    order.resize(t);
    std::iota(order.begin(), order.end(), 0);
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < t; ++i)
      if (i >= sorted.size() || sorted[i] != i)
        throw ConfigError("chain order is not a permutation of 0..t-1");
  }
  PtaModel m;
  m.strategy = Strategy::cc;
  m.labels = ds.labels;
  m.vocab = ds.vocab;
  m.vocab_fingerprint = ds.vocab.fingerprint();
  m.n_features = ds.vocab.size();
  m.chain_order = order;

  // Teacher forcing: learner i sees X plus the ground-truth columns of all
  // earlier chain labels; inference substitutes predictions.
  BinMatrix augmented = ds.X;
  for (std::size_t pos = 0; pos < t; ++pos) {
    std::size_t label = order[pos];
    m.per_label.push_back(fit(augmented, label_column_as_classes(ds.Y, label), params, 2));
    if (pos + 1 < t) {
      BinMatrix next(augmented.rows(), augmented.cols() + 1);
      for (std::size_t i = 0; i < augmented.rows(); ++i) {
        std::copy(augmented.row_ptr(i), augmented.row_ptr(i) + augmented.cols(),
                  &next(i, 0));
        next(i, augmented.cols()) = ds.Y(i, label);
      }
      augmented = std::move(next);
    }
  }
  m.check();
  return m;
}

inline PtaModel fit_lp(const MultiLabelDataset& ds, const LearnerParams& params) {
  ds.check();
  if (ds.n() == 0) throw EmptyDataset("no samples");
  PtaModel m;
  m.strategy = Strategy::lp;
  m.labels = ds.labels;
  m.vocab = ds.vocab;
  m.vocab_fingerprint = ds.vocab.fingerprint();
  m.n_features = ds.vocab.size();

  // Each distinct observed Y row becomes a class, numbered by first occurrence.
  std::map<std::vector<std::uint8_t>, int> class_of;
  std::vector<int> y(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    std::vector<std::uint8_t> row(ds.Y.row_ptr(i), ds.Y.row_ptr(i) + ds.Y.cols());
    auto [it, inserted] = class_of.emplace(row, static_cast<int>(m.lp_combinations.size()));
    if (inserted) m.lp_combinations.push_back(row);
    y[i] = it->second;
  }
  int K = static_cast<int>(m.lp_combinations.size());
  m.lp_learner = fit(ds.X, y, params, std::max(K, 2));
  if (K == 1) {
    // single observed labelset; learner payload keeps K=2 internals but the
    // decode table pins every prediction to that labelset
    m.lp_combinations.resize(1);
  }
  m.check();
  return m;
}

inline BinMatrix predict(const PtaModel& m, const BinMatrix& X,
                         std::optional<std::uint64_t> vocab_fingerprint = std::nullopt) {
  m.check();
  if (vocab_fingerprint && *vocab_fingerprint != m.vocab_fingerprint)
    throw VocabularyMismatch("dataset vocabulary differs from the model's");
  if (X.cols() != m.n_features) throw VocabularyMismatch("feature dimensionality mismatch");
  std::size_t t = m.labels.size();
  BinMatrix out(X.rows(), t);

  switch (m.strategy) {
    case Strategy::br: {
      for (std::size_t l = 0; l < t; ++l) {
        auto yhat = predict(m.per_label[l], X);
        for (std::size_t i = 0; i < X.rows(); ++i) out(i, l) = yhat[i] == 1;
      }
      break;
    }
    case Strategy::cc: {
      for (std::size_t i = 0; i < X.rows(); ++i) {
        std::vector<std::uint8_t> row(X.row_ptr(i), X.row_ptr(i) + X.cols());
        for (std::size_t pos = 0; pos < t; ++pos) {
          auto p = predict_row_proba(m.per_label[pos], row.data());
          std::uint8_t bit = argmax_class(p) == 1;
          out(i, m.chain_order[pos]) = bit;
          if (pos + 1 < t) row.push_back(bit);
        }
      }
      break;
    }
    case Strategy::lp: {
      auto classes = predict(m.lp_learner, X);
      for (std::size_t i = 0; i < X.rows(); ++i) {
        int c = classes[i];
        if (c >= static_cast<int>(m.lp_combinations.size())) c = 0;
        const auto& combo = m.lp_combinations[static_cast<std::size_t>(c)];
        for (std::size_t l = 0; l < t; ++l) out(i, l) = combo[l];
      }
      break;
    }
  }
  return out;
}

inline BinMatrix predict(const PtaModel& m, const MultiLabelDataset& ds) {
  return predict(m, ds.X, ds.vocab.fingerprint());
}

// Per-label positive probability for one instance; the attribution module's
// model output f. LP sums the probabilities of all combinations containing
// the label.
inline double predict_label_proba(const PtaModel& m, const std::uint8_t* x,
                                  std::size_t label) {
  switch (m.strategy) {
    case Strategy::br:
      return predict_row_proba(m.per_label[label], x)[1];
    case Strategy::cc: {
      std::vector<std::uint8_t> row(x, x + m.n_features);
      double wanted = 0;
      for (std::size_t pos = 0; pos < m.labels.size(); ++pos) {
        auto p = predict_row_proba(m.per_label[pos], row.data());
        std::uint8_t bit = argmax_class(p) == 1;
        if (m.chain_order[pos] == label) {
          wanted = p[1];
          break;
        }
        if (pos + 1 < m.labels.size()) row.push_back(bit);
      }
      return wanted;
    }
    default: {
      auto p = predict_row_proba(m.lp_learner, x);
      double sum = 0;
      for (std::size_t c = 0; c < m.lp_combinations.size(); ++c)
        if (m.lp_combinations[c][label]) sum += p[c];
      return sum;
    }
  }
}

// ---------------------------------------------------------------------------
// JSON envelope
// ---------------------------------------------------------------------------

inline json to_json(const PtaModel& m) {
  json j{{"schema_version", 1},
         {"strategy", to_string(m.strategy)},
         {"label_space", {{"kind", to_string(m.labels.kind())}, {"names", m.labels.names()}}},
         {"vocabulary", m.vocab.names()},
         {"vocab_fingerprint", m.vocab_fingerprint},
         {"n_features", m.n_features}};
  if (m.strategy == Strategy::lp) {
    j["learner"] = to_json(m.lp_learner);
    json combos = json::array();
    for (const auto& c : m.lp_combinations) combos.push_back(c);
    j["combinations"] = combos;
  } else {
    json learners = json::array();
    for (const auto& l : m.per_label) learners.push_back(to_json(l));
    j["learners"] = learners;
    if (m.strategy == Strategy::cc) j["chain_order"] = m.chain_order;
  }
  return j;
}

inline PtaModel pta_model_from_json(const json& j) {
  if (j.value("schema_version", -1) != 1) throw SchemaVersionMismatch("pta model schema");
  PtaModel m;
  m.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  m.labels = LabelSpace(
      j.at("label_space").at("names").get<std::vector<std::string>>(),
      label_kind_from_string(j.at("label_space").at("kind").get<std::string>()));
  m.vocab = FeatureVocabulary(j.at("vocabulary").get<std::vector<std::string>>());
  m.vocab_fingerprint = j.at("vocab_fingerprint").get<std::uint64_t>();
  if (m.vocab.fingerprint() != m.vocab_fingerprint)
    throw ParseError("model vocabulary does not match its fingerprint");
  m.n_features = j.at("n_features").get<std::size_t>();
  if (m.strategy == Strategy::lp) {
    m.lp_learner = fitted_model_from_json(j.at("learner"));
    for (const auto& c : j.at("combinations"))
      m.lp_combinations.push_back(c.get<std::vector<std::uint8_t>>());
  } else {
    for (const auto& l : j.at("learners")) m.per_label.push_back(fitted_model_from_json(l));
    if (m.strategy == Strategy::cc)
      m.chain_order = j.at("chain_order").get<std::vector<std::size_t>>();
    else {
      m.chain_order.resize(m.labels.size());
      std::iota(m.chain_order.begin(), m.chain_order.end(), 0);
    }
  }
  m.check();
  return m;
}

inline void save_model(const PtaModel& m, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(m).dump(2) << "\n";
}

inline PtaModel load_model(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model JSON: ") + e.what());
  }
  return pta_model_from_json(j);
}

}  // namespace droidttp

#endif  // DROIDTTP_PTA_HPP
