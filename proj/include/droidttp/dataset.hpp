#ifndef DROIDTTP_DATASET_HPP
#define DROIDTTP_DATASET_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "raw_sample.hpp"
#include "taxonomy.hpp"

namespace droidttp {

namespace fs = std::filesystem;

constexpr int kDatasetSchemaVersion = 1;

// Ordered set of namespaced static-feature names; index = vector coordinate.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;
  explicit FeatureVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw InvalidInput("duplicate feature name: " + names_[i]);
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const FeatureVocabulary& o) const { return names_ == o.names_; }

  // FNV-1a over the ordered names; used to pair models with datasets.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& n : names_) {
      for (char c : n) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
      }
      h ^= 0xff;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class LabelKind { tactic, technique };

inline std::string to_string(LabelKind k) {
  return k == LabelKind::tactic ? "tactic" : "technique";
}
inline LabelKind label_kind_from_string(const std::string& s) {
  if (s == "tactic") return LabelKind::tactic;
  if (s == "technique") return LabelKind::technique;
  throw InvalidInput("bad label kind: " + s);
}

class LabelSpace {
 public:
  LabelSpace() = default;
  LabelSpace(std::vector<std::string> names, LabelKind kind)
      : names_(std::move(names)), kind_(kind) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (!index_.emplace(names_[i], i).second)
        throw InvalidInput("duplicate label: " + names_[i]);
  }

  static LabelSpace tactics() { return LabelSpace(tactic_names(), LabelKind::tactic); }
  static LabelSpace techniques() { return LabelSpace(technique_ids(), LabelKind::technique); }

  std::size_t size() const { return names_.size(); }
  LabelKind kind() const { return kind_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const LabelSpace& o) const {
    return names_ == o.names_ && kind_ == o.kind_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  LabelKind kind_ = LabelKind::tactic;
};

struct MultiLabelDataset {
  std::vector<std::string> ids;  // sha256 per row
  BinMatrix X;                   // n x s
  BinMatrix Y;                   // n x t
  FeatureVocabulary vocab;
  LabelSpace labels;

  std::size_t n() const { return ids.size(); }

  void check() const {
    if (X.rows() != ids.size() || Y.rows() != ids.size())
      throw ShapeMismatch("row count mismatch between ids, X, Y");
    if (X.cols() != vocab.size()) throw ShapeMismatch("X cols != vocabulary size");
    if (Y.cols() != labels.size()) throw ShapeMismatch("Y cols != label space size");
  }

  bool operator==(const MultiLabelDataset& o) const {
    return ids == o.ids && X == o.X && Y == o.Y && vocab == o.vocab && labels == o.labels;
  }
};

struct SplitSpec {
  std::uint64_t seed = 0;
  double test_fraction = 0.2;

  void validate() const {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
      throw ConfigError("test fraction must be in (0,1)");
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline FeatureVocabulary build_vocabulary(const std::vector<RawSample>& samples) {
  if (samples.empty()) throw EmptyInput("no samples");
  std::vector<std::string> all;
  for (const auto& s : samples) {
    auto f = s.namespaced_features();
    all.insert(all.end(), f.begin(), f.end());
  }
  return FeatureVocabulary(sorted_unique(std::move(all)));
}

struct VectorizeResult {
  MultiLabelDataset ds;
  std::size_t dropped_labels = 0;  // unknown labels skipped when strict=false
};

inline VectorizeResult vectorize(const std::vector<RawSample>& samples,
                                 const FeatureVocabulary& vocab, const LabelSpace& labels,
                                 bool strict = true) {
  VectorizeResult res;
  MultiLabelDataset& ds = res.ds;
  ds.vocab = vocab;
  ds.labels = labels;
  ds.X = BinMatrix(samples.size(), vocab.size());
  ds.Y = BinMatrix(samples.size(), labels.size());
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!seen.emplace(s.sha256, i).second)
      throw InvalidInput("duplicate sample id: " + s.sha256);
    ds.ids.push_back(s.sha256);
    for (const auto& f : s.namespaced_features())
      if (auto j = vocab.index_of(f)) ds.X(i, *j) = 1;  // unknown features dropped
    const auto& names =
        labels.kind() == LabelKind::tactic ? s.tactics : s.techniques;
    for (const auto& l : names) {
      if (auto j = labels.index_of(l)) {
        ds.Y(i, *j) = 1;
      } else if (strict) {
        throw UnknownLabel(l + " not in label space");
      } else {
        ++res.dropped_labels;
      }
    }
  }
  ds.check();
  return res;
}

inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n < 2) throw TooFewSamples("need at least 2 samples to split");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(perm);
  auto test_size = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * spec.test_fraction));
  test_size = std::clamp<std::size_t>(test_size, 1, n - 1);
  std::vector<std::size_t> test(perm.begin(), perm.begin() + test_size);
  std::vector<std::size_t> train(perm.begin() + test_size, perm.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

inline MultiLabelDataset take_rows(const MultiLabelDataset& ds,
                                   const std::vector<std::size_t>& idx) {
  MultiLabelDataset out;
  out.vocab = ds.vocab;
  out.labels = ds.labels;
  out.X = ds.X.select_rows(idx);
  out.Y = ds.Y.select_rows(idx);
  for (auto i : idx) out.ids.push_back(ds.ids[i]);
  return out;
}

inline std::pair<MultiLabelDataset, MultiLabelDataset> split(const MultiLabelDataset& ds,
                                                             const SplitSpec& spec) {
  auto [train_idx, test_idx] = split_indices(ds.n(), spec);
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

// ---------------------------------------------------------------------------
// Knowledge-base CSV export (Description,Tactic,Technique), RFC 4180.
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

inline std::string knowledge_base_description(const RawSample& s) {
  return "Activities related to app " + s.sha256 + " are: " + join(s.activities, ", ") +
         ". Permissions required: " + join(s.permissions, ", ") +
         ". Services used: " + join(s.services, ", ") +
         ". Receivers included: " + join(s.receivers, ", ") +
         ". Intent Actions: " + join(s.intent_actions, ", ") +
         " and Intent Categories: " + join(s.intent_categories, ", ");
}

inline std::string export_knowledge_base(const std::vector<RawSample>& samples) {
  std::string out = "Description,Tactic,Technique\r\n";
  for (const auto& s : samples) {
    out += csv_escape(knowledge_base_description(s));
    out += ",";
    out += csv_escape(join(s.tactics, ","));
    out += ",";
    out += csv_escape(join(s.techniques, ","));
    out += "\r\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// On-disk dataset directory:
//   manifest.json   schema_version + counts + label kind
//   vocabulary.txt  one feature name per line, index = line number
//   labels.txt      one label name per line
//   ids.txt         one sha256 per line
//   X.coo / Y.coo   "row col" pairs of the 1-entries
// ---------------------------------------------------------------------------

namespace detail {

inline void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  for (const auto& l : lines) out << l << "\n";
}

inline std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  return lines;
}

inline void write_coo(const fs::path& p, const BinMatrix& m) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c)) out << r << " " << c << "\n";
}

inline BinMatrix read_coo(const fs::path& p, std::size_t rows, std::size_t cols) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  BinMatrix m(rows, cols);
  std::size_t r, c;
  while (in >> r >> c) {
    if (r >= rows || c >= cols) throw IoError("coordinate out of range in " + p.string());
    m(r, c) = 1;
  }
  return m;
}

}  // namespace detail

inline void save_dataset(const MultiLabelDataset& ds, const fs::path& dir) {
  ds.check();
  fs::create_directories(dir);
  json manifest{{"schema_version", kDatasetSchemaVersion},
                {"n", ds.n()},
                {"s", ds.vocab.size()},
                {"t", ds.labels.size()},
                {"label_kind", to_string(ds.labels.kind())}};
  std::ofstream mf(dir / "manifest.json", std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest");
  mf << manifest.dump(2) << "\n";
  detail::write_lines(dir / "vocabulary.txt", ds.vocab.names());
  detail::write_lines(dir / "labels.txt", ds.labels.names());
  detail::write_lines(dir / "ids.txt", ds.ids);
  detail::write_coo(dir / "X.coo", ds.X);
  detail::write_coo(dir / "Y.coo", ds.Y);
}

inline MultiLabelDataset load_dataset(const fs::path& dir) {
  std::ifstream mf(dir / "manifest.json");
  if (!mf) throw IoError("cannot open " + (dir / "manifest.json").string());
  json manifest;
  try {
    mf >> manifest;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad manifest: ") + e.what());
  }
  if (manifest.value("schema_version", -1) != kDatasetSchemaVersion)
    throw SchemaVersionMismatch("dataset schema_version " +
                                manifest.value("schema_version", json(-1)).dump());
  auto n = manifest.at("n").get<std::size_t>();
  auto s = manifest.at("s").get<std::size_t>();
  auto t = manifest.at("t").get<std::size_t>();

  MultiLabelDataset ds;
  ds.vocab = FeatureVocabulary(detail::read_lines(dir / "vocabulary.txt"));
  ds.labels = LabelSpace(detail::read_lines(dir / "labels.txt"),
                         label_kind_from_string(manifest.at("label_kind").get<std::string>()));
  ds.ids = detail::read_lines(dir / "ids.txt");
  if (ds.vocab.size() != s || ds.labels.size() != t || ds.ids.size() != n)
    throw IoError("dataset directory inconsistent with manifest counts");
  ds.X = detail::read_coo(dir / "X.coo", n, s);
  ds.Y = detail::read_coo(dir / "Y.coo", n, t);
  ds.check();
  return ds;
}

// Dense 0/1 CSV (features then labels) for tabular interchange.
inline void export_dense_csv(const MultiLabelDataset& ds, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "sha256";
  for (const auto& f : ds.vocab.names()) out << "," << csv_escape(f);
  for (const auto& l : ds.labels.names()) out << "," << csv_escape(l);
  out << "\r\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    out << ds.ids[i];
    for (std::size_t j = 0; j < ds.X.cols(); ++j) out << "," << int(ds.X(i, j));
    for (std::size_t j = 0; j < ds.Y.cols(); ++j) out << "," << int(ds.Y(i, j));
    out << "\r\n";
  }
}

}  // namespace droidttp

#endif  // DROIDTTP_DATASET_HPP
